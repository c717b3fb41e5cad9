#pragma once

// Shared numeric fixtures. The closeness constants were worked out by
// hand with an independent calculation before being frozen here; the
// ranking tests cross-check them against tests/oracle.hpp as well.

#include <array>

#include "vhsim/vhsim.hpp"

namespace fixtures {

// Three candidate networks, bandwidth-first criterion order.
inline vhsim::DecisionMatrix three_networks() {
  return vhsim::DecisionMatrix(
      {"N1", "N2", "N3"},
      {{"bandwidth", vhsim::Direction::benefit, 0.4},
       {"delay", vhsim::Direction::cost, 0.3},
       {"jitter", vhsim::Direction::cost, 0.2},
       {"cost", vhsim::Direction::cost, 0.1}},
      {{2000.0, 50.0, 10.0, 5.0},
       {1000.0, 20.0, 4.0, 2.0},
       {5000.0, 80.0, 20.0, 8.0}});
}

// The same offers as QoS vectors (jitter, delay, cost, bandwidth).
inline vhsim::QosVector n1() { return {10.0, 50.0, 5.0, 2000.0}; }
inline vhsim::QosVector n2() { return {4.0, 20.0, 2.0, 1000.0}; }
inline vhsim::QosVector n3() { return {20.0, 80.0, 8.0, 5000.0}; }

// Requirement that n3 fully meets while n1 and n2 fall short on
// bandwidth only.
inline vhsim::QosVector requirement() { return {25.0, 100.0, 10.0, 4000.0}; }

// Criterion weights aligned to (jitter, delay, cost, bandwidth).
inline std::array<double, 4> qos_weights() { return {0.2, 0.3, 0.1, 0.4}; }

// Expected closeness of the three_networks ranking.
inline constexpr double kCloseN1 = 0.380247769;
inline constexpr double kCloseN2 = 0.453063003;
inline constexpr double kCloseN3 = 0.546936997;

// Expected local scores of each offer against requirement().
inline constexpr double kNqvN1 = 0.501606012;
inline constexpr double kNqvN2 = 0.506262469;
inline constexpr double kNqvN3 = 1.0;

inline vhsim::VisitorNetwork station(std::string id, vhsim::QosVector offer,
                                     double x = 250.0, double y = 250.0,
                                     double radius = 400.0) {
  vhsim::VisitorNetwork net;
  net.id = std::move(id);
  net.advertised = offer;
  net.actual = offer;
  net.coverage = {x, y, radius};
  return net;
}

}  // namespace fixtures
