#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vhsim/errors.hpp"
#include "vhsim/network.hpp"

namespace vhsim {

/// Handover decision scheme.
enum class Scheme { cvhd, dvhd, tdvhd };

inline const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::cvhd: return "CVHD";
    case Scheme::dvhd: return "DVHD";
    case Scheme::tdvhd: return "TDVHD";
  }
  return "?";
}

/// A terminal's plea for a new attachment point.
struct HandoverRequest {
  std::string terminal_id;
  QosVector required;
  std::array<double, kQosCriteria> weights{};
  double timestamp_s = 0.0;
};

/// One network's reply: its score and the offer it was computed from.
struct NqvResponse {
  std::string network_id;
  double nqv = 0.0;
  QosVector computed_from;
};

/**
 * @brief Per-network level-of-trust bookkeeping, owned by one terminal.
 *
 * Every stored LOT lies in [0,1]; updates clamp at both ends.
 */
struct TrustTable {
  std::map<std::string, double> lot;

  /// LOT of a network, inserting newcomers at lot_init.
  double& ensure(const std::string& network_id, double lot_init) {
    auto [it, inserted] = lot.try_emplace(network_id, lot_init);
    return it->second;
  }

  bool contains(const std::string& network_id) const {
    return lot.count(network_id) != 0;
  }
};

/// Trust-gate parameters. Deception is penalized faster than honesty is
/// rewarded so exclusion of a liar is observable within a few evaluations.
struct TrustConfig {
  double lot_init = 1.0;
  double threshold = 0.5;
  double delta_plus = 0.05;
  double delta_minus = 0.2;

  void validate() const {
    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in_unit(lot_init) || !in_unit(threshold)) {
      throw ValidationError("lot_init and threshold must lie in [0,1]");
    }
    if (threshold > lot_init) {
      throw ValidationError(
          "trust threshold must not exceed lot_init, or fresh networks "
          "could never be selected");
    }
    if (delta_plus <= 0.0 || delta_minus <= 0.0) {
      throw ValidationError("trust deltas must be > 0");
    }
  }

  friend bool operator==(const TrustConfig&, const TrustConfig&) = default;
};

/**
 * @brief Cost accounting for the decision phase, in milliseconds.
 *
 * L = one-way message latency, T = one NQV computation on a base
 * station, k = slowdown factor for computing on the terminal instead,
 * select = comparing the collected scores, gate_test = one trust-table
 * lookup under the trusted scheme.
 */
struct DelayModel {
  double msg_latency_ms = 5.0;   // L
  double calc_time_ms = 2.0;     // T
  double mt_slowdown = 4.0;      // k
  double select_time_ms = 1.0;
  double gate_test_ms = 0.0;

  void validate() const {
    if (msg_latency_ms < 0.0 || calc_time_ms < 0.0 || select_time_ms < 0.0 ||
        gate_test_ms < 0.0) {
      throw ValidationError("delay model times must be >= 0");
    }
    if (mt_slowdown < 1.0) {
      throw ValidationError("mt_slowdown must be >= 1");
    }
  }

  friend bool operator==(const DelayModel&, const DelayModel&) = default;
};

/// The chosen network and the score that won it the handover.
struct Selection {
  std::string network_id;
  double nqv = 0.0;
};

/// Result of one decision round. An empty result means the handover was
/// blocked, which only the trusted scheme can produce.
struct DecisionOutcome {
  Scheme scheme = Scheme::dvhd;
  std::optional<Selection> result;
  double processing_delay_ms = 0.0;
  std::size_t candidates_evaluated = 0;

  bool blocked() const { return !result.has_value(); }
};

/**
 * @brief Decision-phase delay for a scheme at a given candidate count.
 *
 * Centralized: the terminal serially scores all n candidates itself,
 * slowed by factor k, so delay = 2L + k*n*T + select. Distributed (plain
 * or trusted): candidates compute in parallel, delay = 2L + T + select,
 * independent of n. Gate-test time is charged separately per tested
 * candidate by tdvhd_select.
 */
inline double processing_delay(Scheme scheme, std::size_t n_candidates,
                               const DelayModel& model) {
  if (n_candidates < 1) throw ZeroCandidates();
  const double round_trip = 2.0 * model.msg_latency_ms;
  if (scheme == Scheme::cvhd) {
    return round_trip +
           model.mt_slowdown * static_cast<double>(n_candidates) *
               model.calc_time_ms +
           model.select_time_ms;
  }
  return round_trip + model.calc_time_ms + model.select_time_ms;
}

namespace detail {

/// Per-candidate local NQVs, best first, ties by ascending network id.
inline std::vector<NqvResponse> ranked_responses(
    const HandoverRequest& request,
    std::span<const VisitorNetwork> candidates) {
  std::vector<NqvResponse> responses;
  responses.reserve(candidates.size());
  for (const auto& net : candidates) {
    responses.push_back(
        {net.id, nqv_local(request.required, net.advertised, request.weights),
         net.advertised});
  }
  std::sort(responses.begin(), responses.end(),
            [](const NqvResponse& a, const NqvResponse& b) {
              if (a.nqv != b.nqv) return a.nqv > b.nqv;
              return a.network_id < b.network_id;
            });
  return responses;
}

}  // namespace detail

/**
 * @brief Distributed scheme: each candidate scores its own advertised
 *        offer against the requirement; the terminal takes the maximum.
 *
 * Liars are scored on what they advertise, so a falsified offer inflates
 * its NQV unchecked here.
 */
inline DecisionOutcome dvhd_select(const HandoverRequest& request,
                                   std::span<const VisitorNetwork> candidates,
                                   const DelayModel& model) {
  if (candidates.empty()) throw EmptyCandidateSet();
  const auto ranked = detail::ranked_responses(request, candidates);
  DecisionOutcome out;
  out.scheme = Scheme::dvhd;
  out.result = Selection{ranked.front().network_id, ranked.front().nqv};
  out.processing_delay_ms =
      processing_delay(Scheme::dvhd, candidates.size(), model);
  out.candidates_evaluated = candidates.size();
  return out;
}

/**
 * @brief Centralized baseline: the terminal gathers every advertised
 *        offer and ranks them in a single decision matrix.
 */
inline DecisionOutcome cvhd_select(const HandoverRequest& request,
                                   std::span<const VisitorNetwork> candidates,
                                   const DelayModel& model) {
  if (candidates.empty()) throw EmptyCandidateSet();
  std::vector<std::pair<std::string, QosVector>> offers;
  offers.reserve(candidates.size());
  for (const auto& net : candidates) offers.emplace_back(net.id, net.advertised);
  const auto ranked = nsf_centralized(request.required, offers, request.weights);
  DecisionOutcome out;
  out.scheme = Scheme::cvhd;
  out.result = Selection{ranked.front().network_id, ranked.front().nqv};
  out.processing_delay_ms =
      processing_delay(Scheme::cvhd, candidates.size(), model);
  out.candidates_evaluated = candidates.size();
  return out;
}

/**
 * @brief Trusted distributed scheme: D-VHD ranking filtered by the
 *        level-of-trust gate.
 *
 * Walks the ranking best first and selects the first candidate whose LOT
 * meets the threshold; candidates failing the gate are skipped. If every
 * candidate fails, the handover is blocked. Networks the terminal has
 * never dealt with enter the table at lot_init. Each gate test charges
 * model.gate_test_ms on top of the distributed decision delay.
 */
inline DecisionOutcome tdvhd_select(const HandoverRequest& request,
                                    std::span<const VisitorNetwork> candidates,
                                    TrustTable& trust,
                                    const TrustConfig& config,
                                    const DelayModel& model) {
  if (candidates.empty()) throw EmptyCandidateSet();
  const auto ranked = detail::ranked_responses(request, candidates);
  DecisionOutcome out;
  out.scheme = Scheme::tdvhd;
  out.candidates_evaluated = candidates.size();
  out.processing_delay_ms =
      processing_delay(Scheme::tdvhd, candidates.size(), model);
  for (const auto& response : ranked) {
    out.processing_delay_ms += model.gate_test_ms;
    const double lot = trust.ensure(response.network_id, config.lot_init);
    if (lot >= config.threshold) {
      out.result = Selection{response.network_id, response.nqv};
      return out;
    }
  }
  return out;  // every gate failed: blocked
}

/**
 * @brief Post-attach trust test against the quality actually delivered.
 *
 * If the delivered vector fails the requirement on any criterion the
 * network's LOT drops by delta_minus, otherwise it rises by delta_plus;
 * the result is clamped to [0,1]. Returns the new LOT.
 */
inline double trust_update(TrustTable& trust, const std::string& network_id,
                           const QosVector& delivered,
                           const QosVector& required,
                           const TrustConfig& config) {
  double& lot = trust.ensure(network_id, config.lot_init);
  lot += satisfies(delivered, required) ? config.delta_plus
                                        : -config.delta_minus;
  lot = std::clamp(lot, 0.0, 1.0);
  return lot;
}

}  // namespace vhsim
