#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "vhsim/errors.hpp"
#include "vhsim/topsis.hpp"

namespace vhsim {

/// Number of QoS criteria scored during network selection.
inline constexpr std::size_t kQosCriteria = 4;

/**
 * @brief One network's quality offer (or one application's requirement).
 *
 * Canonical criterion order everywhere in this library is
 * (jitter, delay, cost, bandwidth); the first three are cost criteria,
 * bandwidth is a benefit criterion.
 */
struct QosVector {
  double jitter_ms = 0.0;
  double delay_ms = 0.0;
  double cost = 0.0;  // abstract monetary units
  double bandwidth_kbps = 0.0;

  friend bool operator==(const QosVector&, const QosVector&) = default;
};

/// Throws ValidationError unless all components are finite and >= 0.
inline void validate_qos(const QosVector& q, const std::string& what) {
  const std::array<std::pair<const char*, double>, kQosCriteria> parts{{
      {"jitter", q.jitter_ms},
      {"delay", q.delay_ms},
      {"cost", q.cost},
      {"bandwidth", q.bandwidth_kbps},
  }};
  for (const auto& [name, v] : parts) {
    if (!std::isfinite(v) || v < 0.0) {
      throw ValidationError(what + ": " + name +
                            " must be finite and >= 0, got " +
                            std::to_string(v));
    }
  }
}

/// QoS components in the canonical (jitter, delay, cost, bandwidth) order.
inline std::vector<double> as_row(const QosVector& q) {
  return {q.jitter_ms, q.delay_ms, q.cost, q.bandwidth_kbps};
}

/**
 * @brief Criterion specs for the four QoS metrics, in canonical order.
 *
 * Directions are fixed: jitter, delay, and cost are cost criteria,
 * bandwidth is a benefit criterion. Weights align with the same order.
 */
inline std::vector<CriterionSpec> qos_criteria(
    const std::array<double, kQosCriteria>& weights) {
  return {
      {"jitter", Direction::cost, weights[0]},
      {"delay", Direction::cost, weights[1]},
      {"cost", Direction::cost, weights[2]},
      {"bandwidth", Direction::benefit, weights[3]},
  };
}

/// True iff the offer meets the requirement on every criterion
/// (jitter, delay, cost at or below; bandwidth at or above).
inline bool satisfies(const QosVector& offered, const QosVector& required) {
  return offered.jitter_ms <= required.jitter_ms &&
         offered.delay_ms <= required.delay_ms &&
         offered.cost <= required.cost &&
         offered.bandwidth_kbps >= required.bandwidth_kbps;
}

/**
 * @brief Application demand: a label, a required QoS vector, and the
 *        criterion weights that shape selection for this traffic class.
 */
struct ServiceProfile {
  std::string application;  // e.g. "VoIP"
  QosVector required;
  std::array<double, kQosCriteria> weights{};

  void validate() const {
    validate_qos(required, "profile requirement");
    validate_weights(weights);
  }

  friend bool operator==(const ServiceProfile&, const ServiceProfile&) =
      default;
};

/// Radio access technology of a visitor network.
enum class Technology { wifi, wimax };

/// Circular coverage area: center in meters, radius in meters.
struct Coverage {
  double x = 0.0;
  double y = 0.0;
  double radius = 0.0;

  friend bool operator==(const Coverage&, const Coverage&) = default;
};

/**
 * @brief A candidate network: what it claims to deliver versus what it
 *        actually delivers, plus its coverage disc.
 *
 * Selection always scores the advertised vector; delivered traffic and
 * trust evaluation use the actual vector. A network whose two vectors
 * differ is a liar and will be caught only by the trust mechanism.
 */
struct VisitorNetwork {
  std::string id;
  Technology technology = Technology::wifi;
  QosVector advertised;
  QosVector actual;
  Coverage coverage;

  bool honest() const { return advertised == actual; }

  friend bool operator==(const VisitorNetwork&, const VisitorNetwork&) =
      default;
};

/// One network's selection score.
struct NqvReport {
  std::string network_id;
  double nqv = 0.0;

  friend bool operator==(const NqvReport&, const NqvReport&) = default;
};

/**
 * @brief Distributed network quality value, computed by one network in
 *        isolation.
 *
 * Scores a two-alternative decision between the requirement and the
 * offer and returns the offer's closeness. An offer that meets or beats
 * the requirement on every criterion scores 1; one that fails on every
 * criterion scores 0; mixed offers land in between.
 */
inline double nqv_local(const QosVector& required, const QosVector& offered,
                        const std::array<double, kQosCriteria>& weights) {
  DecisionMatrix matrix({"required", "offered"}, qos_criteria(weights),
                        {as_row(required), as_row(offered)});
  return topsis_rank(matrix).score_of("offered");
}

/**
 * @brief Centralized network selection: scores every offer in one matrix.
 *
 * The requirement is not a matrix row; it is available to the caller for
 * an admission check on the winner. Returns reports ranked best first
 * (ties by ascending network id).
 */
inline std::vector<NqvReport> nsf_centralized(
    [[maybe_unused]] const QosVector& required,
    const std::vector<std::pair<std::string, QosVector>>& offers,
    const std::array<double, kQosCriteria>& weights) {
  if (offers.empty()) throw EmptyCandidateSet();
  std::vector<std::string> ids;
  std::vector<std::vector<double>> rows;
  ids.reserve(offers.size());
  rows.reserve(offers.size());
  for (const auto& [id, qos] : offers) {
    ids.push_back(id);
    rows.push_back(as_row(qos));
  }
  DecisionMatrix matrix(std::move(ids), qos_criteria(weights),
                        std::move(rows));
  const ClosenessScores scores = topsis_rank(matrix);
  std::vector<NqvReport> ranked;
  ranked.reserve(scores.ranked.size());
  for (const auto& r : scores.ranked) {
    ranked.push_back({r.alternative_id, r.closeness});
  }
  return ranked;
}

}  // namespace vhsim
