#pragma once

#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "vhsim/errors.hpp"
#include "vhsim/sim.hpp"

namespace vhsim {

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline double parse_double(const std::string& file, int line,
                           const std::string& key, const std::string& value) {
  double v = 0.0;
  const char* first = value.data();
  const char* last = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw ParseError(file, line, key + " expects a number, got '" + value + "'");
  }
  return v;
}

inline std::uint64_t parse_u64(const std::string& file, int line,
                               const std::string& key,
                               const std::string& value) {
  std::uint64_t v = 0;
  const char* first = value.data();
  const char* last = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw ParseError(file, line,
                     key + " expects a non-negative integer, got '" + value + "'");
  }
  return v;
}

inline std::vector<double> parse_list(const std::string& file, int line,
                                      const std::string& key,
                                      const std::string& value,
                                      std::size_t expected) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = value.find(',', start);
    const std::string item =
        trim(value.substr(start, comma == std::string::npos
                                     ? std::string::npos
                                     : comma - start));
    out.push_back(parse_double(file, line, key, item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.size() != expected) {
    throw ParseError(file, line,
                     key + " expects " + std::to_string(expected) +
                         " comma-separated values, got " +
                         std::to_string(out.size()));
  }
  return out;
}

inline QosVector parse_qos(const std::string& file, int line,
                           const std::string& key, const std::string& value) {
  // order: jitter, delay, cost, bandwidth
  const auto v = parse_list(file, line, key, value, kQosCriteria);
  return {v[0], v[1], v[2], v[3]};
}

/// Shortest decimal form that parses back to exactly the same double.
inline std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

/// Writes via a temporary in the same directory, then renames into place,
/// so readers never observe a half-written file.
inline void write_file_atomic(const std::string& path,
                              const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.parent_path() /
                       (target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write file: " + tmp.string());
    out << content;
    if (!out.flush()) throw Error("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error("cannot replace file: " + path);
  }
}

}  // namespace detail

inline Scheme parse_scheme(const std::string& file, int line,
                           const std::string& value) {
  const std::string v = detail::lower(value);
  if (v == "cvhd") return Scheme::cvhd;
  if (v == "dvhd") return Scheme::dvhd;
  if (v == "tdvhd") return Scheme::tdvhd;
  throw ParseError(file, line,
                   "scheme must be CVHD, DVHD, or TDVHD, got '" + value + "'");
}

inline Technology parse_technology(const std::string& file, int line,
                                   const std::string& value) {
  const std::string v = detail::lower(value);
  if (v == "wifi") return Technology::wifi;
  if (v == "wimax") return Technology::wimax;
  throw ParseError(file, line,
                   "technology must be WiFi or WiMax, got '" + value + "'");
}

/**
 * @brief Parses scenario text in the sectioned key = value format.
 *
 * Sections: [general], [profile], [trust], [delay_model], [traffic], one
 * [station] per base station, one [terminal] per mobile terminal. A `#`
 * starts a comment. Unknown sections or keys are errors: a typo must
 * never silently fall back to a default. Omitted optional keys take the
 * reference defaults; the [profile] section and each station's offer
 * must be given explicitly.
 */
inline Scenario parse_scenario_text(std::string_view text,
                                    const std::string& filename) {
  Scenario sc;
  sc.stations.clear();
  sc.terminals.clear();

  enum class Sec { none, general, profile, trust, delay_model, traffic,
                   station, terminal };
  Sec sec = Sec::none;
  std::set<std::string> seen_sections;
  std::set<std::string> seen_keys;  // per current section instance
  bool have_profile = false;
  std::array<bool, 5> profile_keys{};  // jitter, delay, cost, bw, weights

  struct StationDraft {
    VisitorNetwork net;
    int line = 0;
    bool has_id = false, has_x = false, has_y = false, has_radius = false,
         has_advertised = false, has_actual = false;
  };
  struct TerminalDraft {
    TerminalSpec spec;
    int line = 0;
    bool has_id = false, has_x = false, has_y = false;
  };
  std::vector<StationDraft> stations;
  std::vector<TerminalDraft> terminals;

  auto finish_station = [&](const StationDraft& d) {
    if (!d.has_id) throw ParseError(filename, d.line, "[station] needs id");
    if (!d.has_x || !d.has_y) {
      throw ParseError(filename, d.line, "[station] " + d.net.id + " needs x and y");
    }
    if (!d.has_radius) {
      throw ParseError(filename, d.line, "[station] " + d.net.id + " needs radius");
    }
    if (!d.has_advertised) {
      throw ParseError(filename, d.line,
                       "[station] " + d.net.id + " needs advertised");
    }
    VisitorNetwork net = d.net;
    if (!d.has_actual) net.actual = net.advertised;  // honest by default
    sc.stations.push_back(std::move(net));
  };
  auto finish_terminal = [&](const TerminalDraft& d) {
    if (!d.has_id) throw ParseError(filename, d.line, "[terminal] needs id");
    if (!d.has_x || !d.has_y) {
      throw ParseError(filename, d.line,
                       "[terminal] " + d.spec.id + " needs x and y");
    }
    sc.terminals.push_back(d.spec);
  };
  auto close_section = [&]() {
    if (sec == Sec::station) finish_station(stations.back());
    if (sec == Sec::terminal) finish_terminal(terminals.back());
  };

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) {
      raw.erase(hash);
    }
    const std::string line = detail::trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ParseError(filename, line_no, "unterminated section header");
      }
      close_section();
      seen_keys.clear();
      const std::string name = detail::trim(
          std::string_view(line).substr(1, line.size() - 2));
      if (name == "station") {
        sec = Sec::station;
        stations.push_back({});
        stations.back().line = line_no;
      } else if (name == "terminal") {
        sec = Sec::terminal;
        terminals.push_back({});
        terminals.back().line = line_no;
      } else if (name == "general" || name == "profile" || name == "trust" ||
                 name == "delay_model" || name == "traffic") {
        if (!seen_sections.insert(name).second) {
          throw ParseError(filename, line_no, "duplicate section [" + name + "]");
        }
        sec = name == "general" ? Sec::general
              : name == "profile" ? Sec::profile
              : name == "trust" ? Sec::trust
              : name == "delay_model" ? Sec::delay_model
                                      : Sec::traffic;
        if (sec == Sec::profile) have_profile = true;
      } else {
        throw ParseError(filename, line_no, "unknown section [" + name + "]");
      }
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(filename, line_no, "expected key = value, got '" + line + "'");
    }
    const std::string key = detail::trim(std::string_view(line).substr(0, eq));
    const std::string value = detail::trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ParseError(filename, line_no, "empty key");
    if (sec == Sec::none) {
      throw ParseError(filename, line_no,
                       "key '" + key + "' appears before any section");
    }
    if (!seen_keys.insert(key).second) {
      throw ParseError(filename, line_no, "duplicate key '" + key + "'");
    }
    auto num = [&] { return detail::parse_double(filename, line_no, key, value); };

    switch (sec) {
      case Sec::general:
        if (key == "width") sc.width_m = num();
        else if (key == "height") sc.height_m = num();
        else if (key == "sim_time") sc.sim_time_s = num();
        else if (key == "seed") sc.seed = detail::parse_u64(filename, line_no, key, value);
        else if (key == "scheme") sc.scheme = parse_scheme(filename, line_no, value);
        else if (key == "eval_interval") sc.eval_interval_s = num();
        else if (key == "propagation_ms") sc.propagation_ms = num();
        else throw ParseError(filename, line_no, "unknown key '" + key + "' in [general]");
        break;
      case Sec::profile:
        if (key == "application") sc.profile.application = value;
        else if (key == "jitter") { sc.profile.required.jitter_ms = num(); profile_keys[0] = true; }
        else if (key == "delay") { sc.profile.required.delay_ms = num(); profile_keys[1] = true; }
        else if (key == "cost") { sc.profile.required.cost = num(); profile_keys[2] = true; }
        else if (key == "bandwidth") { sc.profile.required.bandwidth_kbps = num(); profile_keys[3] = true; }
        else if (key == "weights") {
          const auto w = detail::parse_list(filename, line_no, key, value, kQosCriteria);
          try {
            validate_weights(w);
          } catch (const WeightSumViolation& e) {
            throw WeightSumViolation(filename + ":" + std::to_string(line_no) +
                                     ": " + e.what());
          } catch (const WeightRangeViolation& e) {
            throw WeightRangeViolation(filename + ":" + std::to_string(line_no) +
                                       ": " + e.what());
          }
          std::copy(w.begin(), w.end(), sc.profile.weights.begin());
          profile_keys[4] = true;
        }
        else throw ParseError(filename, line_no, "unknown key '" + key + "' in [profile]");
        break;
      case Sec::trust:
        if (key == "lot_init") sc.trust.lot_init = num();
        else if (key == "threshold") sc.trust.threshold = num();
        else if (key == "delta_plus") sc.trust.delta_plus = num();
        else if (key == "delta_minus") sc.trust.delta_minus = num();
        else throw ParseError(filename, line_no, "unknown key '" + key + "' in [trust]");
        break;
      case Sec::delay_model:
        if (key == "msg_latency") sc.delay.msg_latency_ms = num();
        else if (key == "calc_time") sc.delay.calc_time_ms = num();
        else if (key == "mt_slowdown") sc.delay.mt_slowdown = num();
        else if (key == "select_time") sc.delay.select_time_ms = num();
        else if (key == "gate_test") sc.delay.gate_test_ms = num();
        else throw ParseError(filename, line_no, "unknown key '" + key + "' in [delay_model]");
        break;
      case Sec::traffic:
        if (key == "cbr_interval") sc.cbr_interval_s = num();
        else if (key == "packet_size") sc.packet_size_bytes = detail::parse_u64(filename, line_no, key, value);
        else throw ParseError(filename, line_no, "unknown key '" + key + "' in [traffic]");
        break;
      case Sec::station: {
        StationDraft& d = stations.back();
        if (key == "id") { d.net.id = value; d.has_id = true; }
        else if (key == "technology") d.net.technology = parse_technology(filename, line_no, value);
        else if (key == "x") { d.net.coverage.x = num(); d.has_x = true; }
        else if (key == "y") { d.net.coverage.y = num(); d.has_y = true; }
        else if (key == "radius") { d.net.coverage.radius = num(); d.has_radius = true; }
        else if (key == "advertised") { d.net.advertised = detail::parse_qos(filename, line_no, key, value); d.has_advertised = true; }
        else if (key == "actual") { d.net.actual = detail::parse_qos(filename, line_no, key, value); d.has_actual = true; }
        else throw ParseError(filename, line_no, "unknown key '" + key + "' in [station]");
        break;
      }
      case Sec::terminal: {
        TerminalDraft& d = terminals.back();
        if (key == "id") { d.spec.id = value; d.has_id = true; }
        else if (key == "x") { d.spec.x = num(); d.has_x = true; }
        else if (key == "y") { d.spec.y = num(); d.has_y = true; }
        else if (key == "speed_min") d.spec.speed_min_mps = num();
        else if (key == "speed_max") d.spec.speed_max_mps = num();
        else throw ParseError(filename, line_no, "unknown key '" + key + "' in [terminal]");
        break;
      }
      case Sec::none: break;  // unreachable
    }
  }
  close_section();

  if (!have_profile) {
    throw ValidationError(filename + ": missing [profile] section");
  }
  static constexpr const char* kProfileKeys[5] = {"jitter", "delay", "cost",
                                                  "bandwidth", "weights"};
  for (std::size_t i = 0; i < profile_keys.size(); ++i) {
    if (!profile_keys[i]) {
      throw ValidationError(filename + ": [profile] is missing key '" +
                            std::string(kProfileKeys[i]) + "'");
    }
  }
  try {
    validate_scenario(sc);
  } catch (const ValidationError& e) {
    throw ValidationError(filename + ": " + e.what());
  }
  return sc;
}

/// Parses a scenario file from disk. See parse_scenario_text.
inline Scenario parse_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str(), path);
}

/**
 * @brief Renders a Scenario back to its file format.
 *
 * Every field is written explicitly with shortest-round-trip number
 * formatting, so parse_scenario_text(scenario_text(s)) == s exactly.
 */
inline std::string scenario_text(const Scenario& sc) {
  using detail::format_double;
  std::ostringstream out;
  auto qos = [](const QosVector& q) {
    return format_double(q.jitter_ms) + ", " + format_double(q.delay_ms) +
           ", " + format_double(q.cost) + ", " +
           format_double(q.bandwidth_kbps);
  };
  out << "[general]\n";
  out << "width = " << format_double(sc.width_m) << "\n";
  out << "height = " << format_double(sc.height_m) << "\n";
  out << "sim_time = " << format_double(sc.sim_time_s) << "\n";
  out << "seed = " << sc.seed << "\n";
  out << "scheme = " << scheme_name(sc.scheme) << "\n";
  out << "eval_interval = " << format_double(sc.eval_interval_s) << "\n";
  out << "propagation_ms = " << format_double(sc.propagation_ms) << "\n";
  out << "\n[profile]\n";
  out << "application = " << sc.profile.application << "\n";
  out << "jitter = " << format_double(sc.profile.required.jitter_ms) << "\n";
  out << "delay = " << format_double(sc.profile.required.delay_ms) << "\n";
  out << "cost = " << format_double(sc.profile.required.cost) << "\n";
  out << "bandwidth = " << format_double(sc.profile.required.bandwidth_kbps)
      << "\n";
  out << "weights = " << format_double(sc.profile.weights[0]) << ", "
      << format_double(sc.profile.weights[1]) << ", "
      << format_double(sc.profile.weights[2]) << ", "
      << format_double(sc.profile.weights[3]) << "\n";
  out << "\n[trust]\n";
  out << "lot_init = " << format_double(sc.trust.lot_init) << "\n";
  out << "threshold = " << format_double(sc.trust.threshold) << "\n";
  out << "delta_plus = " << format_double(sc.trust.delta_plus) << "\n";
  out << "delta_minus = " << format_double(sc.trust.delta_minus) << "\n";
  out << "\n[delay_model]\n";
  out << "msg_latency = " << format_double(sc.delay.msg_latency_ms) << "\n";
  out << "calc_time = " << format_double(sc.delay.calc_time_ms) << "\n";
  out << "mt_slowdown = " << format_double(sc.delay.mt_slowdown) << "\n";
  out << "select_time = " << format_double(sc.delay.select_time_ms) << "\n";
  out << "gate_test = " << format_double(sc.delay.gate_test_ms) << "\n";
  out << "\n[traffic]\n";
  out << "cbr_interval = " << format_double(sc.cbr_interval_s) << "\n";
  out << "packet_size = " << sc.packet_size_bytes << "\n";
  for (const auto& st : sc.stations) {
    out << "\n[station]\n";
    out << "id = " << st.id << "\n";
    out << "technology = "
        << (st.technology == Technology::wifi ? "WiFi" : "WiMax") << "\n";
    out << "x = " << format_double(st.coverage.x) << "\n";
    out << "y = " << format_double(st.coverage.y) << "\n";
    out << "radius = " << format_double(st.coverage.radius) << "\n";
    out << "advertised = " << qos(st.advertised) << "\n";
    out << "actual = " << qos(st.actual) << "\n";
  }
  for (const auto& t : sc.terminals) {
    out << "\n[terminal]\n";
    out << "id = " << t.id << "\n";
    out << "x = " << format_double(t.x) << "\n";
    out << "y = " << format_double(t.y) << "\n";
    out << "speed_min = " << format_double(t.speed_min_mps) << "\n";
    out << "speed_max = " << format_double(t.speed_max_mps) << "\n";
  }
  return out.str();
}

/// Writes scenario_text(sc) to path atomically.
inline void write_scenario(const std::string& path, const Scenario& sc) {
  detail::write_file_atomic(path, scenario_text(sc));
}

}  // namespace vhsim
