#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vhsim/errors.hpp"
#include "vhsim/handover.hpp"
#include "vhsim/network.hpp"

namespace vhsim {

/// Movement tick of the random-waypoint model, seconds.
inline constexpr double kMoveTickS = 1.0;

/// Initial placement and speed range of one terminal.
struct TerminalSpec {
  std::string id;
  double x = 0.0;
  double y = 0.0;
  double speed_min_mps = 1.0;
  double speed_max_mps = 15.0;

  friend bool operator==(const TerminalSpec&, const TerminalSpec&) = default;
};

/**
 * @brief A complete, reproducible experiment description.
 *
 * Defaults are the reference setup: 500 x 500 m topography, 200 s of
 * simulated time, one 1240-byte packet per 0.1 s per terminal.
 */
struct Scenario {
  double width_m = 500.0;
  double height_m = 500.0;
  double sim_time_s = 200.0;
  double eval_interval_s = 5.0;
  double propagation_ms = 0.1;
  std::uint64_t seed = 1;
  Scheme scheme = Scheme::dvhd;
  double cbr_interval_s = 0.1;
  std::uint64_t packet_size_bytes = 1240;
  ServiceProfile profile{"VoIP", {30.0, 150.0, 5.0, 64.0},
                         {0.2, 0.3, 0.1, 0.4}};
  TrustConfig trust;
  DelayModel delay;
  std::vector<VisitorNetwork> stations;
  std::vector<TerminalSpec> terminals;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Throws ValidationError naming the first violated scenario invariant.
inline void validate_scenario(const Scenario& s) {
  if (!(s.width_m > 0.0) || !(s.height_m > 0.0)) {
    throw ValidationError("topography dimensions must be > 0");
  }
  if (!(s.sim_time_s > 0.0)) throw ValidationError("sim_time must be > 0");
  if (!(s.cbr_interval_s > 0.0)) {
    throw ValidationError("cbr_interval must be > 0");
  }
  if (!(s.eval_interval_s > 0.0)) {
    throw ValidationError("eval_interval must be > 0");
  }
  if (!(s.propagation_ms >= 0.0)) {
    throw ValidationError("propagation delay must be >= 0");
  }
  if (s.packet_size_bytes == 0) {
    throw ValidationError("packet_size must be > 0");
  }
  s.profile.validate();
  s.trust.validate();
  s.delay.validate();
  if (s.stations.empty()) {
    throw ValidationError("scenario defines no stations");
  }
  std::vector<std::string> ids;
  for (const auto& st : s.stations) {
    validate_qos(st.advertised, "station " + st.id + " advertised");
    validate_qos(st.actual, "station " + st.id + " actual");
    if (!(st.coverage.radius > 0.0)) {
      throw ValidationError("station " + st.id + " needs radius > 0");
    }
    ids.push_back(st.id);
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw ValidationError("station ids must be unique");
  }
  if (s.terminals.empty()) {
    throw ValidationError("scenario defines no terminals");
  }
  ids.clear();
  for (const auto& t : s.terminals) {
    if (t.x < 0.0 || t.x > s.width_m || t.y < 0.0 || t.y > s.height_m) {
      throw ValidationError("terminal " + t.id +
                            " starts outside the topography");
    }
    if (t.speed_min_mps < 0.0 || t.speed_max_mps < t.speed_min_mps) {
      throw ValidationError("terminal " + t.id +
                            " has an invalid speed range");
    }
    ids.push_back(t.id);
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw ValidationError("terminal ids must be unique");
  }
}

/// Closed-disc membership test against a station's coverage.
inline bool in_coverage(double x, double y, const VisitorNetwork& station) {
  const double dx = x - station.coverage.x;
  const double dy = y - station.coverage.y;
  return dx * dx + dy * dy <= station.coverage.radius * station.coverage.radius;
}

/// Live state of one terminal during a run.
struct MobileTerminal {
  std::string id;
  double x = 0.0;
  double y = 0.0;
  double speed_min_mps = 0.0;
  double speed_max_mps = 0.0;
  double waypoint_x = 0.0;
  double waypoint_y = 0.0;
  double speed_mps = 0.0;
  std::optional<std::string> attached;
  TrustTable trust;
  // traffic state
  std::uint64_t packets_generated = 0;
  std::uint64_t packets_delivered = 0;
  std::uint64_t packets_dropped = 0;
  std::uint64_t bytes_delivered = 0;
  double first_send_s = 0.0;
  double last_send_s = 0.0;
};

/**
 * @brief Candidate set for a handover, or nothing if no trigger applies.
 *
 * Triggers: (a) the terminal is attached but outside its network's
 * coverage, (b) the terminal is unattached, (c) quality_check_due is set
 * and the attached network's actually delivered quality fails the
 * requirement. The candidate set is every station covering the current
 * position; under (c) that includes the attached network itself, so a
 * still-best liar can win again until trust excludes it.
 *
 * An engaged but empty result means a trigger fired inside a coverage
 * gap; the terminal keeps dropping traffic until coverage resumes.
 */
inline std::optional<std::vector<VisitorNetwork>> handover_trigger(
    const MobileTerminal& terminal, std::span<const VisitorNetwork> stations,
    const QosVector& required, bool quality_check_due) {
  std::vector<VisitorNetwork> covering;
  const VisitorNetwork* attached = nullptr;
  for (const auto& st : stations) {
    if (in_coverage(terminal.x, terminal.y, st)) covering.push_back(st);
    if (terminal.attached && st.id == *terminal.attached) attached = &st;
  }
  if (!terminal.attached) return covering;  // (b)
  const bool attached_covers =
      attached != nullptr && in_coverage(terminal.x, terminal.y, *attached);
  if (!attached_covers) return covering;  // (a)
  if (quality_check_due && !satisfies(attached->actual, required)) {
    return covering;  // (c)
  }
  return std::nullopt;
}

/// Record kinds in a metrics log.
enum class LogKind { handover, blocked, packet, drop, trust };

inline const char* log_kind_name(LogKind k) {
  switch (k) {
    case LogKind::handover: return "handover";
    case LogKind::blocked: return "blocked";
    case LogKind::packet: return "packet";
    case LogKind::drop: return "drop";
    case LogKind::trust: return "trust";
  }
  return "?";
}

/// One observed event. Which fields are meaningful depends on kind.
struct LogRecord {
  double time_s = 0.0;
  LogKind kind = LogKind::packet;
  std::string terminal;
  std::string from_net;               // handover
  std::string to_net;                 // network involved
  double processing_delay_ms = 0.0;   // handover, blocked
  double nqv = 0.0;                   // handover
  std::uint64_t size_bytes = 0;       // packet, drop
  double transmission_ms = 0.0;       // packet
  double propagation_ms = 0.0;        // packet
  double processing_ms = 0.0;         // packet
  double lot = 0.0;                   // trust
  bool trust_passed = false;          // trust

  friend bool operator==(const LogRecord&, const LogRecord&) = default;
};

/// Per-terminal traffic totals for conservation checks.
struct TrafficTotals {
  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
  std::uint64_t bytes_delivered = 0;

  friend bool operator==(const TrafficTotals&, const TrafficTotals&) = default;
};

/// Append-only output of a run; records are in event-processing order,
/// so timestamps never decrease.
struct MetricsLog {
  std::vector<LogRecord> records;
  std::map<std::string, TrafficTotals> traffic;
};

/**
 * @brief Throughput of one terminal in bits per second.
 *
 * Total delivered bytes times eight, divided by the span between the
 * first and last delivered packet's send times, in seconds. Needs at
 * least two delivered packets or the span is degenerate.
 */
inline double throughput(const MetricsLog& log,
                         const std::string& terminal_id) {
  std::uint64_t bytes = 0;
  std::uint64_t count = 0;
  double first = 0.0;
  double last = 0.0;
  for (const auto& r : log.records) {
    if (r.kind != LogKind::packet || r.terminal != terminal_id) continue;
    if (count == 0) first = r.time_s;
    last = r.time_s;
    bytes += r.size_bytes;
    ++count;
  }
  if (count < 2) {
    throw InsufficientPackets("terminal " + terminal_id + " delivered " +
                              std::to_string(count) +
                              " packets; need at least 2");
  }
  return static_cast<double>(bytes) * 8.0 / (last - first);
}

/// Mean end-to-end delay in ms over every delivered packet:
/// transmission + propagation + processing per packet.
inline double end_to_end_delay(const MetricsLog& log) {
  double sum = 0.0;
  std::uint64_t count = 0;
  for (const auto& r : log.records) {
    if (r.kind != LogKind::packet) continue;
    sum += r.transmission_ms + r.propagation_ms + r.processing_ms;
    ++count;
  }
  if (count == 0) throw NoPackets();
  return sum / static_cast<double>(count);
}

/// Completed handovers, optionally restricted to one terminal.
inline std::size_t handover_event_count(
    const MetricsLog& log,
    const std::optional<std::string>& terminal_id = std::nullopt) {
  std::size_t n = 0;
  for (const auto& r : log.records) {
    if (r.kind == LogKind::handover &&
        (!terminal_id || r.terminal == *terminal_id)) {
      ++n;
    }
  }
  return n;
}

/// Blocked handovers, optionally restricted to one terminal.
inline std::size_t blocked_event_count(
    const MetricsLog& log,
    const std::optional<std::string>& terminal_id = std::nullopt) {
  std::size_t n = 0;
  for (const auto& r : log.records) {
    if (r.kind == LogKind::blocked &&
        (!terminal_id || r.terminal == *terminal_id)) {
      ++n;
    }
  }
  return n;
}

/// Mean decision-phase delay over all handover and blocked records;
/// zero when the log holds no decisions.
inline double mean_processing_delay(const MetricsLog& log) {
  double sum = 0.0;
  std::uint64_t count = 0;
  for (const auto& r : log.records) {
    if (r.kind == LogKind::handover || r.kind == LogKind::blocked) {
      sum += r.processing_delay_ms;
      ++count;
    }
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

namespace detail {

enum class EvKind : int {
  move = 0,
  packet_send = 1,
  handover_trigger = 2,
  handover_complete = 3,
  trust_evaluate = 4,
};

struct Event {
  double time_s = 0.0;
  EvKind kind = EvKind::move;
  std::size_t term = 0;
  std::uint64_t seq = 0;
  std::int64_t tick = 0;        // move / packet / periodic chains
  bool periodic = false;        // handover_trigger: quality check due
  Selection selection;          // handover_complete
  std::string from_net;         // handover_complete
  double delay_ms = 0.0;        // handover_complete
  std::string te_net;           // trust_evaluate
  std::uint64_t attach_seq = 0; // trust_evaluate staleness check
};

/// 53-bit uniform draw in [0,1); identical on every conforming platform.
inline double uniform01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

class Simulator {
 public:
  explicit Simulator(const Scenario& scenario)
      : sc_(scenario), horizon_(scenario.sim_time_s + 1e-9) {
    try {
      validate_scenario(sc_);
    } catch (const Error& e) {
      throw InvalidScenario(e.what());
    }
    for (std::size_t i = 0; i < sc_.stations.size(); ++i) {
      station_index_[sc_.stations[i].id] = i;
    }
  }

  MetricsLog run() {
    init_terminals();
    while (!queue_.empty()) {
      const Event ev = queue_.top();
      queue_.pop();
      dispatch(ev);
    }
    for (const auto& ts : terms_) {
      log_.traffic[ts.mt.id] = {ts.mt.packets_generated,
                                ts.mt.packets_delivered,
                                ts.mt.packets_dropped,
                                ts.mt.bytes_delivered};
    }
    return std::move(log_);
  }

 private:
  struct TerminalState {
    MobileTerminal mt;
    std::mt19937_64 rng;
    bool pending = false;        // a handover completion is in flight
    std::uint64_t attach_seq = 0;
  };

  struct EventAfter {
    const Simulator* sim;
    // priority_queue keeps the "largest" element on top, so this must
    // order the earliest event last.
    bool operator()(const Event& a, const Event& b) const {
      if (a.time_s != b.time_s) return a.time_s > b.time_s;
      if (a.kind != b.kind) return static_cast<int>(a.kind) > static_cast<int>(b.kind);
      const std::string& ida = sim->terms_[a.term].mt.id;
      const std::string& idb = sim->terms_[b.term].mt.id;
      if (ida != idb) return ida > idb;
      return a.seq > b.seq;
    }
  };

  void init_terminals() {
    terms_.reserve(sc_.terminals.size());
    for (std::size_t i = 0; i < sc_.terminals.size(); ++i) {
      const TerminalSpec& spec = sc_.terminals[i];
      TerminalState ts;
      ts.mt.id = spec.id;
      ts.mt.x = spec.x;
      ts.mt.y = spec.y;
      ts.mt.speed_min_mps = spec.speed_min_mps;
      ts.mt.speed_max_mps = spec.speed_max_mps;
      ts.rng.seed(sc_.seed + 0x9E3779B97F4A7C15ULL * (i + 1));
      if (spec.speed_max_mps > 0.0) pick_waypoint(ts);
      terms_.push_back(std::move(ts));
    }
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      push({0.0, EvKind::handover_trigger, i, 0, 0, false});
      push_tick(EvKind::move, i, 1, kMoveTickS);
      push_tick(EvKind::packet_send, i, 1, sc_.cbr_interval_s);
      push_tick(EvKind::handover_trigger, i, 1, sc_.eval_interval_s);
    }
  }

  void pick_waypoint(TerminalState& ts) {
    ts.mt.waypoint_x = uniform01(ts.rng) * sc_.width_m;
    ts.mt.waypoint_y = uniform01(ts.rng) * sc_.height_m;
    ts.mt.speed_mps = ts.mt.speed_min_mps +
                      uniform01(ts.rng) *
                          (ts.mt.speed_max_mps - ts.mt.speed_min_mps);
  }

  void push(Event ev) {
    if (ev.time_s > horizon_) return;
    ev.seq = next_seq_++;
    queue_.push(std::move(ev));
  }

  // Chained tick events carry their index so time is always the exact
  // product tick * interval, never an accumulated sum.
  void push_tick(EvKind kind, std::size_t term, std::int64_t tick,
                 double interval_s) {
    Event ev;
    ev.time_s = static_cast<double>(tick) * interval_s;
    ev.kind = kind;
    ev.term = term;
    ev.tick = tick;
    ev.periodic = kind == EvKind::handover_trigger;
    push(std::move(ev));
  }

  const VisitorNetwork& station(const std::string& id) const {
    return sc_.stations[station_index_.at(id)];
  }

  void dispatch(const Event& ev) {
    switch (ev.kind) {
      case EvKind::move: on_move(ev); break;
      case EvKind::packet_send: on_packet(ev); break;
      case EvKind::handover_trigger: on_trigger(ev); break;
      case EvKind::handover_complete: on_complete(ev); break;
      case EvKind::trust_evaluate: on_trust_evaluate(ev); break;
    }
  }

  void on_move(const Event& ev) {
    TerminalState& ts = terms_[ev.term];
    MobileTerminal& mt = ts.mt;
    if (mt.speed_max_mps > 0.0) {
      const double dx = mt.waypoint_x - mt.x;
      const double dy = mt.waypoint_y - mt.y;
      const double remaining = std::hypot(dx, dy);
      const double step = mt.speed_mps * kMoveTickS;
      if (step >= remaining) {
        mt.x = mt.waypoint_x;
        mt.y = mt.waypoint_y;
        pick_waypoint(ts);
      } else {
        mt.x += dx * step / remaining;
        mt.y += dy * step / remaining;
      }
    }
    const bool needs_handover =
        !mt.attached ||
        !in_coverage(mt.x, mt.y, station(*mt.attached));
    if (needs_handover && !ts.pending) {
      push({ev.time_s, EvKind::handover_trigger, ev.term, 0, 0, false});
    }
    push_tick(EvKind::move, ev.term, ev.tick + 1, kMoveTickS);
  }

  void on_packet(const Event& ev) {
    TerminalState& ts = terms_[ev.term];
    MobileTerminal& mt = ts.mt;
    mt.packets_generated += 1;
    LogRecord rec;
    rec.time_s = ev.time_s;
    rec.terminal = mt.id;
    rec.size_bytes = sc_.packet_size_bytes;
    const bool linked =
        mt.attached && in_coverage(mt.x, mt.y, station(*mt.attached));
    if (linked) {
      const VisitorNetwork& net = station(*mt.attached);
      rec.kind = LogKind::packet;
      rec.to_net = net.id;
      // bits / (kbit/s) = bits / (bits/ms) = ms
      rec.transmission_ms = net.actual.bandwidth_kbps > 0.0
                                ? static_cast<double>(sc_.packet_size_bytes) *
                                      8.0 / net.actual.bandwidth_kbps
                                : 0.0;
      rec.propagation_ms = sc_.propagation_ms;
      rec.processing_ms = net.actual.delay_ms;
      if (mt.packets_delivered == 0) mt.first_send_s = ev.time_s;
      mt.last_send_s = ev.time_s;
      mt.packets_delivered += 1;
      mt.bytes_delivered += sc_.packet_size_bytes;
    } else {
      rec.kind = LogKind::drop;
      if (mt.attached) rec.to_net = *mt.attached;
      mt.packets_dropped += 1;
    }
    log_.records.push_back(std::move(rec));
    push_tick(EvKind::packet_send, ev.term, ev.tick + 1, sc_.cbr_interval_s);
  }

  void on_trigger(const Event& ev) {
    TerminalState& ts = terms_[ev.term];
    if (ev.periodic) {
      push_tick(EvKind::handover_trigger, ev.term, ev.tick + 1,
                sc_.eval_interval_s);
    }
    if (!ts.pending) {
      auto candidates = handover_trigger(ts.mt, sc_.stations,
                                         sc_.profile.required, ev.periodic);
      if (candidates && !candidates->empty()) {
        decide(ts, ev.term, ev.time_s, *candidates);
      }
    }
  }

  void decide(TerminalState& ts, std::size_t term, double now,
              std::span<const VisitorNetwork> candidates) {
    const HandoverRequest request{ts.mt.id, sc_.profile.required,
                                  sc_.profile.weights, now};
    DecisionOutcome outcome;
    switch (sc_.scheme) {
      case Scheme::cvhd:
        outcome = cvhd_select(request, candidates, sc_.delay);
        break;
      case Scheme::dvhd:
        outcome = dvhd_select(request, candidates, sc_.delay);
        break;
      case Scheme::tdvhd:
        outcome = tdvhd_select(request, candidates, ts.mt.trust, sc_.trust,
                               sc_.delay);
        break;
    }
    if (outcome.blocked()) {
      LogRecord rec;
      rec.time_s = now;
      rec.kind = LogKind::blocked;
      rec.terminal = ts.mt.id;
      if (ts.mt.attached) rec.from_net = *ts.mt.attached;
      rec.processing_delay_ms = outcome.processing_delay_ms;
      log_.records.push_back(std::move(rec));
      return;
    }
    const double complete_at = now + outcome.processing_delay_ms / 1000.0;
    if (complete_at > horizon_) return;
    Event ev;
    ev.time_s = complete_at;
    ev.kind = EvKind::handover_complete;
    ev.term = term;
    ev.selection = *outcome.result;
    ev.from_net = ts.mt.attached.value_or("");
    ev.delay_ms = outcome.processing_delay_ms;
    push(std::move(ev));
    ts.pending = true;
  }

  void on_complete(const Event& ev) {
    TerminalState& ts = terms_[ev.term];
    LogRecord rec;
    rec.time_s = ev.time_s;
    rec.kind = LogKind::handover;
    rec.terminal = ts.mt.id;
    rec.from_net = ev.from_net;
    rec.to_net = ev.selection.network_id;
    rec.processing_delay_ms = ev.delay_ms;
    rec.nqv = ev.selection.nqv;
    log_.records.push_back(std::move(rec));
    ts.mt.attached = ev.selection.network_id;
    ts.pending = false;
    ts.attach_seq += 1;
    if (sc_.scheme == Scheme::tdvhd) {
      const double te_at =
          (std::floor(ev.time_s / sc_.eval_interval_s) + 1.0) *
          sc_.eval_interval_s;
      Event te;
      te.time_s = te_at;
      te.kind = EvKind::trust_evaluate;
      te.term = ev.term;
      te.te_net = ev.selection.network_id;
      te.attach_seq = ts.attach_seq;
      push(std::move(te));
    }
  }

  void on_trust_evaluate(const Event& ev) {
    TerminalState& ts = terms_[ev.term];
    // Stale if the terminal re-attached after this evaluation was armed.
    if (ts.attach_seq != ev.attach_seq || !ts.mt.attached ||
        *ts.mt.attached != ev.te_net) {
      return;
    }
    const VisitorNetwork& net = station(ev.te_net);
    const bool passed = satisfies(net.actual, sc_.profile.required);
    const double new_lot = trust_update(ts.mt.trust, net.id, net.actual,
                                        sc_.profile.required, sc_.trust);
    LogRecord rec;
    rec.time_s = ev.time_s;
    rec.kind = LogKind::trust;
    rec.terminal = ts.mt.id;
    rec.to_net = net.id;
    rec.lot = new_lot;
    rec.trust_passed = passed;
    log_.records.push_back(std::move(rec));
  }

  Scenario sc_;
  double horizon_;
  std::map<std::string, std::size_t> station_index_;
  std::vector<TerminalState> terms_;
  std::priority_queue<Event, std::vector<Event>, EventAfter> queue_{
      EventAfter{this}};
  std::uint64_t next_seq_ = 0;
  MetricsLog log_;
};

}  // namespace detail

/**
 * @brief Executes the scenario's event loop and returns the metrics log.
 *
 * The run is fully deterministic: identical scenarios (seed included)
 * produce identical logs. Throws InvalidScenario if any invariant fails.
 */
inline MetricsLog run(const Scenario& scenario) {
  return detail::Simulator(scenario).run();
}

}  // namespace vhsim
