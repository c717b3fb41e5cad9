#pragma once

#include <stdexcept>
#include <string>

namespace vhsim {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Weight validation (sum-to-one rule and per-entry range).
class EmptyWeights : public Error {
 public:
  EmptyWeights() : Error("weight vector is empty") {}
};

class WeightSumViolation : public Error {
 public:
  using Error::Error;
};

class WeightRangeViolation : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class EmptyCandidateSet : public Error {
 public:
  EmptyCandidateSet() : Error("candidate set is empty") {}
};

class ZeroCandidates : public Error {
 public:
  ZeroCandidates() : Error("candidate count must be at least 1") {}
};

class InsufficientPackets : public Error {
 public:
  using Error::Error;
};

class NoPackets : public Error {
 public:
  NoPackets() : Error("no delivered packets in log") {}
};

class InvalidScenario : public Error {
 public:
  using Error::Error;
};

class TooFewStations : public Error {
 public:
  using Error::Error;
};

/// Scenario/matrix file syntax error; carries the offending line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& file, int line, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// A parsed value violates a domain invariant; names the key that carries it.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace vhsim
