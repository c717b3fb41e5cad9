#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "vhsim/errors.hpp"
#include "vhsim/scenario_io.hpp"
#include "vhsim/sim.hpp"
#include "vhsim/topsis.hpp"

namespace vhsim {

/// Fixed six-decimal rendering used by every CSV number, so outputs are
/// byte-stable golden files.
inline std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

/// events.csv content for a run. One line per log record, LF endings.
inline std::string events_csv(const MetricsLog& log) {
  std::ostringstream out;
  out << "time_s,terminal,kind,from_net,to_net,processing_delay_ms,detail\n";
  for (const auto& r : log.records) {
    out << fmt6(r.time_s) << ',' << r.terminal << ',' << log_kind_name(r.kind)
        << ',' << (r.from_net.empty() ? "-" : r.from_net) << ','
        << (r.to_net.empty() ? "-" : r.to_net) << ','
        << fmt6(r.processing_delay_ms) << ',';
    switch (r.kind) {
      case LogKind::handover:
        out << "nqv=" << fmt6(r.nqv);
        break;
      case LogKind::blocked:
        out << "no candidate passed trust gate";
        break;
      case LogKind::packet:
        out << "bytes=" << r.size_bytes << ";e2e_ms="
            << fmt6(r.transmission_ms + r.propagation_ms + r.processing_ms);
        break;
      case LogKind::drop:
        out << "bytes=" << r.size_bytes << ";no link";
        break;
      case LogKind::trust:
        out << "lot=" << fmt6(r.lot) << (r.trust_passed ? ";pass" : ";fail");
        break;
    }
    out << '\n';
  }
  return out.str();
}

/// One completed run reduced to its headline metrics.
struct SummaryRow {
  std::string scheme;
  std::size_t n_vns = 0;
  std::uint64_t seed = 0;
  double processing_delay_ms = 0.0;
  double e2e_delay_ms = 0.0;
  double throughput_bps = 0.0;
  std::size_t handover_events = 0;
  std::size_t blocked_handovers = 0;
};

/**
 * @brief Reduces a run's log to a SummaryRow.
 *
 * Delay figures are means; throughput is the mean over terminals that
 * delivered enough packets for the formula to apply. Metrics without a
 * single supporting packet report 0.
 */
inline SummaryRow summarize(const Scenario& sc, const MetricsLog& log) {
  SummaryRow row;
  row.scheme = scheme_name(sc.scheme);
  row.n_vns = sc.stations.size();
  row.seed = sc.seed;
  row.processing_delay_ms = mean_processing_delay(log);
  try {
    row.e2e_delay_ms = end_to_end_delay(log);
  } catch (const NoPackets&) {
    row.e2e_delay_ms = 0.0;
  }
  double tp_sum = 0.0;
  std::size_t tp_count = 0;
  for (const auto& [terminal, totals] : log.traffic) {
    if (totals.delivered < 2) continue;
    tp_sum += throughput(log, terminal);
    ++tp_count;
  }
  row.throughput_bps = tp_count == 0 ? 0.0 : tp_sum / static_cast<double>(tp_count);
  row.handover_events = handover_event_count(log);
  row.blocked_handovers = blocked_event_count(log);
  return row;
}

/// CSV with the standard summary header and one line per row.
inline std::string summary_csv(std::span<const SummaryRow> rows) {
  std::ostringstream out;
  out << "scheme,n_vns,seed,processing_delay_ms,e2e_delay_ms,throughput_bps,"
         "handover_events,blocked_handovers\n";
  for (const auto& r : rows) {
    out << r.scheme << ',' << r.n_vns << ',' << r.seed << ','
        << fmt6(r.processing_delay_ms) << ',' << fmt6(r.e2e_delay_ms) << ','
        << fmt6(r.throughput_bps) << ',' << r.handover_events << ','
        << r.blocked_handovers << '\n';
  }
  return out.str();
}

/// Runs one scenario and writes events.csv + summary.csv into out_dir.
inline SummaryRow simulate_to_dir(const Scenario& sc,
                                  const std::string& out_dir) {
  const MetricsLog log = run(sc);
  const SummaryRow row = summarize(sc, log);
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  detail::write_file_atomic((dir / "events.csv").string(), events_csv(log));
  detail::write_file_atomic((dir / "summary.csv").string(),
                            summary_csv(std::span(&row, 1)));
  return row;
}

/**
 * @brief The processing-delay sweep: every scheme at 2, 3, and 4
 *        candidate networks, same seed throughout.
 *
 * Restriction keeps the first n stations in scenario order. Needs at
 * least 4 stations.
 */
inline std::vector<SummaryRow> compare_rows(const Scenario& sc) {
  if (sc.stations.size() < 4) {
    throw TooFewStations("compare needs at least 4 stations, scenario has " +
                         std::to_string(sc.stations.size()));
  }
  std::vector<SummaryRow> rows;
  for (const Scheme scheme : {Scheme::cvhd, Scheme::dvhd, Scheme::tdvhd}) {
    for (std::size_t n = 2; n <= 4; ++n) {
      Scenario restricted = sc;
      restricted.scheme = scheme;
      restricted.stations.assign(sc.stations.begin(),
                                 sc.stations.begin() +
                                     static_cast<std::ptrdiff_t>(n));
      rows.push_back(summarize(restricted, run(restricted)));
    }
  }
  return rows;
}

/// Runs the sweep and writes compare.csv into out_dir.
inline std::vector<SummaryRow> compare_to_dir(const Scenario& sc,
                                              const std::string& out_dir) {
  const std::vector<SummaryRow> rows = compare_rows(sc);
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  detail::write_file_atomic((dir / "compare.csv").string(),
                            summary_csv(rows));
  return rows;
}

/// Parses a direction list like "b,c,c,c" (benefit/cost, initial letter
/// or full word, case-insensitive).
inline std::vector<Direction> parse_directions(const std::string& spec) {
  std::vector<Direction> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = spec.find(',', start);
    const std::string item = detail::lower(detail::trim(
        spec.substr(start, comma == std::string::npos ? std::string::npos
                                                      : comma - start)));
    if (item == "b" || item == "benefit") {
      out.push_back(Direction::benefit);
    } else if (item == "c" || item == "cost") {
      out.push_back(Direction::cost);
    } else {
      throw ValidationError("direction must be b[enefit] or c[ost], got '" +
                            item + "'");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

/// Parses a comma-separated weight list like "0.4,0.3,0.2,0.1".
inline std::vector<double> parse_weight_list(const std::string& spec) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = spec.find(',', start);
    const std::string item = detail::trim(
        spec.substr(start, comma == std::string::npos ? std::string::npos
                                                      : comma - start));
    out.push_back(detail::parse_double("<weights>", 1, "weights", item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

/**
 * @brief Reads a decision matrix from CSV text.
 *
 * The header names the id column and then one column per criterion; each
 * following line is a network id and its criterion values. Weights and
 * directions align with the criterion columns, left to right.
 */
inline DecisionMatrix parse_matrix_csv(std::string_view text,
                                       const std::string& name,
                                       std::span<const double> weights,
                                       std::span<const Direction> directions) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  std::vector<std::string> header;
  std::vector<std::string> ids;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(detail::trim(
          line.substr(start, comma == std::string::npos ? std::string::npos
                                                        : comma - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (header.empty()) {
      if (fields.size() < 2) {
        throw ParseError(name, line_no,
                         "header needs an id column and at least one criterion");
      }
      header = fields;
      continue;
    }
    if (fields.size() != header.size()) {
      throw ParseError(name, line_no,
                       "expected " + std::to_string(header.size()) +
                           " fields, got " + std::to_string(fields.size()));
    }
    ids.push_back(fields[0]);
    std::vector<double> row;
    for (std::size_t j = 1; j < fields.size(); ++j) {
      row.push_back(detail::parse_double(name, line_no, header[j], fields[j]));
    }
    rows.push_back(std::move(row));
  }
  if (header.empty()) throw ParseError(name, 1, "matrix file is empty");
  const std::size_t n = header.size() - 1;
  if (weights.size() != n) {
    throw ShapeMismatch("matrix has " + std::to_string(n) +
                        " criteria but " + std::to_string(weights.size()) +
                        " weights were given");
  }
  if (directions.size() != n) {
    throw ShapeMismatch("matrix has " + std::to_string(n) +
                        " criteria but " + std::to_string(directions.size()) +
                        " directions were given");
  }
  std::vector<CriterionSpec> criteria;
  criteria.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    criteria.push_back({header[j + 1], directions[j], weights[j]});
  }
  return DecisionMatrix(std::move(ids), std::move(criteria), std::move(rows));
}

/// Ranked `id,closeness` lines, best first, six decimals.
inline std::string decide_lines(const ClosenessScores& scores) {
  std::ostringstream out;
  for (const auto& r : scores.ranked) {
    out << r.alternative_id << ',' << fmt6(r.closeness) << '\n';
  }
  return out.str();
}

}  // namespace vhsim
