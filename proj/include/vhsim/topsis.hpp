#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vhsim/errors.hpp"

namespace vhsim {

/// Absolute tolerance on the sum-to-one weight constraint.
inline constexpr double kWeightSumTolerance = 1e-9;

/// Whether larger values of a criterion are better (benefit) or worse (cost).
enum class Direction { benefit, cost };

/**
 * @brief One column of a decision problem: label, direction, importance.
 *
 * Weights are expected to lie in [0,1] and to sum to one across the
 * criteria of a matrix; DecisionMatrix enforces both.
 */
struct CriterionSpec {
  std::string name;
  Direction direction = Direction::benefit;
  double weight = 0.0;

  friend bool operator==(const CriterionSpec&, const CriterionSpec&) = default;
};

/**
 * @brief Validates a weight vector against the sum-to-one rule.
 *
 * Accepts iff every entry lies in [0,1] and the entries sum to 1 within
 * kWeightSumTolerance. Returns the accepted weights unchanged.
 *
 * Throws EmptyWeights, WeightRangeViolation, or WeightSumViolation.
 */
inline std::vector<double> validate_weights(std::span<const double> weights) {
  if (weights.empty()) throw EmptyWeights();
  double sum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    if (!std::isfinite(w) || w < 0.0 || w > 1.0) {
      throw WeightRangeViolation("weight " + std::to_string(i) + " is " +
                                 std::to_string(w) +
                                 ", outside [0,1]");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > kWeightSumTolerance) {
    throw WeightSumViolation("criterion weights must sum to 1, got " +
                             std::to_string(sum));
  }
  return std::vector<double>(weights.begin(), weights.end());
}

/**
 * @brief An m-alternatives by n-criteria table of non-negative values.
 *
 * Construction validates every invariant: non-empty shape, finite
 * non-negative entries, unique alternative ids, per-criterion weights in
 * range and summing to one.
 */
class DecisionMatrix {
 public:
  DecisionMatrix(std::vector<std::string> alternative_ids,
                 std::vector<CriterionSpec> criteria,
                 std::vector<std::vector<double>> values)
      : alternative_ids_(std::move(alternative_ids)),
        criteria_(std::move(criteria)),
        values_(std::move(values)) {
    if (alternative_ids_.empty()) {
      throw ValidationError("decision matrix needs at least one alternative");
    }
    if (criteria_.empty()) {
      throw ValidationError("decision matrix needs at least one criterion");
    }
    if (values_.size() != alternative_ids_.size()) {
      throw ShapeMismatch("row count " + std::to_string(values_.size()) +
                          " does not match " +
                          std::to_string(alternative_ids_.size()) +
                          " alternative ids");
    }
    for (const auto& row : values_) {
      if (row.size() != criteria_.size()) {
        throw ShapeMismatch("row width " + std::to_string(row.size()) +
                            " does not match " +
                            std::to_string(criteria_.size()) + " criteria");
      }
      for (double v : row) {
        if (!std::isfinite(v) || v < 0.0) {
          throw ValidationError("matrix entries must be finite and >= 0, got " +
                                std::to_string(v));
        }
      }
    }
    auto ids = alternative_ids_;
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
      throw ValidationError("alternative ids must be unique");
    }
    std::vector<double> w;
    w.reserve(criteria_.size());
    for (const auto& c : criteria_) w.push_back(c.weight);
    validate_weights(w);
  }

  std::size_t rows() const { return values_.size(); }
  std::size_t cols() const { return criteria_.size(); }
  double at(std::size_t i, std::size_t j) const { return values_[i][j]; }
  const std::vector<std::string>& alternative_ids() const {
    return alternative_ids_;
  }
  const std::vector<CriterionSpec>& criteria() const { return criteria_; }
  const std::vector<std::vector<double>>& values() const { return values_; }

 private:
  std::vector<std::string> alternative_ids_;
  std::vector<CriterionSpec> criteria_;
  std::vector<std::vector<double>> values_;
};

/// Pipeline stage marker for a transformed matrix.
enum class Stage { normalized, weighted };

/// A matrix after column normalization (and, later, weighting).
struct WeightedNormalizedMatrix {
  Stage stage = Stage::normalized;
  std::vector<std::vector<double>> values;

  std::size_t rows() const { return values.size(); }
  std::size_t cols() const { return values.empty() ? 0 : values[0].size(); }
};

/// Per-criterion positive (best) and negative (worst) reference points.
struct IdealSolutions {
  std::vector<double> positive;
  std::vector<double> negative;
};

/// Euclidean distances of each alternative to the two ideals.
struct SeparationMeasures {
  std::vector<double> s_star;   // distance to the positive ideal
  std::vector<double> s_minus;  // distance to the negative ideal
};

/// One alternative with its relative-closeness score.
struct RankedScore {
  std::string alternative_id;
  double closeness = 0.0;

  friend bool operator==(const RankedScore&, const RankedScore&) = default;
};

/// Scores sorted by descending closeness, ties broken by ascending id.
struct ClosenessScores {
  std::vector<RankedScore> ranked;

  const RankedScore& best() const { return ranked.front(); }
  double score_of(const std::string& id) const {
    for (const auto& r : ranked) {
      if (r.alternative_id == id) return r.closeness;
    }
    throw ValidationError("unknown alternative id: " + id);
  }
};

/**
 * @brief Column-wise vector normalization: r_ij = x_ij / sqrt(sum_i x_ij^2).
 *
 * An all-zero column (a criterion on which every alternative offers
 * nothing) normalizes to an all-zero column rather than raising an error.
 */
inline WeightedNormalizedMatrix normalize(const DecisionMatrix& matrix) {
  const std::size_t m = matrix.rows();
  const std::size_t n = matrix.cols();
  WeightedNormalizedMatrix out;
  out.stage = Stage::normalized;
  out.values.assign(m, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    double sq = 0.0;
    for (std::size_t i = 0; i < m; ++i) sq += matrix.at(i, j) * matrix.at(i, j);
    const double norm = std::sqrt(sq);
    if (norm > 0.0) {
      for (std::size_t i = 0; i < m; ++i) {
        out.values[i][j] = matrix.at(i, j) / norm;
      }
    }
  }
  return out;
}

/// Scales each normalized column by its criterion weight: v_ij = w_j * r_ij.
inline WeightedNormalizedMatrix apply_weights(
    const WeightedNormalizedMatrix& normalized,
    std::span<const CriterionSpec> criteria) {
  if (normalized.stage != Stage::normalized) {
    throw ShapeMismatch("apply_weights expects a stage=normalized matrix");
  }
  if (normalized.cols() != criteria.size()) {
    throw ShapeMismatch("matrix has " + std::to_string(normalized.cols()) +
                        " columns but " + std::to_string(criteria.size()) +
                        " criteria were given");
  }
  WeightedNormalizedMatrix out = normalized;
  out.stage = Stage::weighted;
  for (auto& row : out.values) {
    for (std::size_t j = 0; j < row.size(); ++j) row[j] *= criteria[j].weight;
  }
  return out;
}

/**
 * @brief Positive and negative ideal solutions of a weighted matrix.
 *
 * The positive ideal takes the column maximum for benefit criteria and the
 * column minimum for cost criteria; the negative ideal is the reverse.
 */
inline IdealSolutions ideal_solutions(const WeightedNormalizedMatrix& weighted,
                                      std::span<const CriterionSpec> criteria) {
  if (weighted.stage != Stage::weighted) {
    throw ShapeMismatch("ideal_solutions expects a stage=weighted matrix");
  }
  if (weighted.cols() != criteria.size()) {
    throw ShapeMismatch("matrix/criteria column mismatch");
  }
  const std::size_t m = weighted.rows();
  const std::size_t n = weighted.cols();
  IdealSolutions ideals;
  ideals.positive.resize(n);
  ideals.negative.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      lo = std::min(lo, weighted.values[i][j]);
      hi = std::max(hi, weighted.values[i][j]);
    }
    const bool benefit = criteria[j].direction == Direction::benefit;
    ideals.positive[j] = benefit ? hi : lo;
    ideals.negative[j] = benefit ? lo : hi;
  }
  return ideals;
}

/// Euclidean distance of every row to each ideal vector.
inline SeparationMeasures separations(const WeightedNormalizedMatrix& weighted,
                                      const IdealSolutions& ideals) {
  if (weighted.cols() != ideals.positive.size() ||
      ideals.positive.size() != ideals.negative.size()) {
    throw ShapeMismatch("matrix/ideal column mismatch");
  }
  SeparationMeasures seps;
  seps.s_star.reserve(weighted.rows());
  seps.s_minus.reserve(weighted.rows());
  for (const auto& row : weighted.values) {
    double dp = 0.0;
    double dn = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      const double ep = ideals.positive[j] - row[j];
      const double en = ideals.negative[j] - row[j];
      dp += ep * ep;
      dn += en * en;
    }
    seps.s_star.push_back(std::sqrt(dp));
    seps.s_minus.push_back(std::sqrt(dn));
  }
  return seps;
}

/**
 * @brief Relative closeness c_i = s_minus_i / (s_star_i + s_minus_i).
 *
 * When both separations are zero the alternative coincides with both
 * ideals (all alternatives identical in that geometry) and the closeness
 * is defined as 1.
 */
inline std::vector<double> closeness(const SeparationMeasures& seps) {
  if (seps.s_star.size() != seps.s_minus.size()) {
    throw ShapeMismatch("separation vectors differ in length");
  }
  std::vector<double> scores;
  scores.reserve(seps.s_star.size());
  for (std::size_t i = 0; i < seps.s_star.size(); ++i) {
    const double denom = seps.s_star[i] + seps.s_minus[i];
    scores.push_back(denom == 0.0 ? 1.0 : seps.s_minus[i] / denom);
  }
  return scores;
}

/**
 * @brief Full pipeline: normalize, weight, ideals, separations, closeness.
 *
 * Returns scores sorted by descending closeness; exact ties are broken by
 * ascending alternative id so replayed runs rank identically.
 */
inline ClosenessScores topsis_rank(const DecisionMatrix& matrix) {
  const auto weighted = apply_weights(normalize(matrix), matrix.criteria());
  const auto ideals = ideal_solutions(weighted, matrix.criteria());
  const auto scores = closeness(separations(weighted, ideals));
  ClosenessScores out;
  out.ranked.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out.ranked.push_back({matrix.alternative_ids()[i], scores[i]});
  }
  std::sort(out.ranked.begin(), out.ranked.end(),
            [](const RankedScore& a, const RankedScore& b) {
              if (a.closeness != b.closeness) return a.closeness > b.closeness;
              return a.alternative_id < b.alternative_id;
            });
  return out;
}

}  // namespace vhsim
