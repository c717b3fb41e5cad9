// Acceptance gate for the library: ten end-to-end checks, one PASS/FAIL
// line each, exit status = number of failed checks. Run with the
// scenario directory as the only argument.

#include <sys/resource.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "vhsim/vhsim.hpp"

namespace {

int failures = 0;

void report(int idx, bool ok, const std::string& text) {
  std::printf("%s %d %s\n", ok ? "PASS" : "FAIL", idx, text.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

void check(bool cond, const std::string& msg) {
  if (!cond) throw std::runtime_error(msg);
}

std::string num(double v, const char* fmt = "%.3g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  check(in.good(), "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Instance {
  std::vector<std::string> ids;
  std::vector<vhsim::CriterionSpec> criteria;
  std::vector<std::vector<double>> values;
  std::vector<double> weights;
  std::vector<bool> benefit;
};

Instance random_instance(std::mt19937_64& eng) {
  std::uniform_int_distribution<std::size_t> rows(2, 6);
  std::uniform_int_distribution<std::size_t> cols(1, 5);
  std::uniform_real_distribution<double> value(0.0, 100.0);
  std::uniform_real_distribution<double> raw(0.05, 1.0);
  Instance inst;
  const std::size_t m = rows(eng);
  const std::size_t n = cols(eng);
  std::vector<double> w(n);
  double sum = 0.0;
  for (auto& v : w) {
    v = raw(eng);
    sum += v;
  }
  for (std::size_t j = 0; j < n; ++j) {
    const bool b = (eng() & 1) != 0;
    inst.benefit.push_back(b);
    inst.weights.push_back(w[j] / sum);
    inst.criteria.push_back(
        {"c" + std::to_string(j),
         b ? vhsim::Direction::benefit : vhsim::Direction::cost, w[j] / sum});
  }
  for (std::size_t i = 0; i < m; ++i) {
    inst.ids.push_back("alt" + std::to_string(i));
    std::vector<double> row(n);
    for (auto& v : row) v = 100.0 - value(eng);  // strictly positive
    inst.values.push_back(std::move(row));
  }
  return inst;
}

void run_criterion(int idx, const std::string& what,
                   const std::function<std::string()>& body) {
  try {
    const std::string note = body();
    report(idx, true, what + (note.empty() ? "" : " (" + note + ")"));
  } catch (const std::exception& e) {
    report(idx, false, what + ": " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <scenario-dir>\n", argv[0]);
    return 64;
  }
  const std::string scenario_dir = argv[1];
  const std::string default_scn = scenario_dir + "/default.scn";
  const std::string liar_scn = scenario_dir + "/liar.scn";

  run_criterion(1, "closeness agrees with an independent reference", [] {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 eng(2024);
    double worst = 0.0;
    for (int round = 0; round < 1000; ++round) {
      const Instance inst = random_instance(eng);
      const vhsim::DecisionMatrix m(inst.ids, inst.criteria, inst.values);
      const auto scores = vhsim::topsis_rank(m);
      const auto ref = oracle::closeness(inst.values, inst.weights,
                                         inst.benefit);
      for (std::size_t i = 0; i < inst.ids.size(); ++i) {
        worst = std::max(worst,
                         std::fabs(scores.score_of(inst.ids[i]) - ref[i]));
      }
    }
    const double secs = seconds_since(t0);
    check(worst <= 1e-9, "max divergence " + num(worst, "%.3e"));
    check(secs < 5.0, "took " + num(secs) + " s");
    return "1000 instances, max divergence " + num(worst, "%.1e") + ", " +
           num(secs) + " s";
  });

  run_criterion(2, "closeness spans [0,1] and pins dominance to the ends", [] {
    std::mt19937_64 eng(4096);
    for (int round = 0; round < 1000; ++round) {
      Instance inst = random_instance(eng);
      const std::size_t n = inst.benefit.size();
      std::vector<double> top(n);
      std::vector<double> bottom(n);
      for (std::size_t j = 0; j < n; ++j) {
        double lo = inst.values[0][j];
        double hi = lo;
        for (const auto& row : inst.values) {
          lo = std::min(lo, row[j]);
          hi = std::max(hi, row[j]);
        }
        top[j] = inst.benefit[j] ? hi * 2.0 + 1.0 : lo / 2.0;
        bottom[j] = inst.benefit[j] ? lo / 2.0 : hi * 2.0 + 1.0;
      }
      inst.ids.push_back("zz_top");
      inst.values.push_back(top);
      inst.ids.push_back("zz_bottom");
      inst.values.push_back(bottom);
      const vhsim::DecisionMatrix m(inst.ids, inst.criteria, inst.values);
      const auto scores = vhsim::topsis_rank(m);
      for (const auto& r : scores.ranked) {
        check(r.closeness >= 0.0 && r.closeness <= 1.0,
              "closeness " + num(r.closeness) + " out of range");
      }
      check(std::fabs(scores.score_of("zz_top") - 1.0) <= 1e-12,
            "dominant row scored " + num(scores.score_of("zz_top"), "%.17g"));
      check(std::fabs(scores.score_of("zz_bottom")) <= 1e-12,
            "dominated row scored " +
                num(scores.score_of("zz_bottom"), "%.17g"));
    }
    return "1000 instances with injected extremes";
  });

  run_criterion(3, "ranking is invariant under positive column scaling", [] {
    std::mt19937_64 eng(512);
    std::uniform_real_distribution<double> expo(-3.0, 3.0);
    double worst = 0.0;
    for (int round = 0; round < 1000; ++round) {
      Instance inst = random_instance(eng);
      const vhsim::DecisionMatrix base(inst.ids, inst.criteria, inst.values);
      const auto before = vhsim::topsis_rank(base);
      const std::size_t j = eng() % inst.benefit.size();
      const double factor = std::pow(10.0, expo(eng));
      for (auto& row : inst.values) row[j] *= factor;
      const vhsim::DecisionMatrix scaled(inst.ids, inst.criteria, inst.values);
      const auto after = vhsim::topsis_rank(scaled);
      for (std::size_t i = 0; i < before.ranked.size(); ++i) {
        check(before.ranked[i].alternative_id ==
                  after.ranked[i].alternative_id,
              "order changed at rank " + std::to_string(i));
        worst = std::max(worst, std::fabs(before.ranked[i].closeness -
                                          after.ranked[i].closeness));
      }
    }
    check(worst <= 1e-12, "max closeness shift " + num(worst, "%.3e"));
    return "1000 scalings, max shift " + num(worst, "%.1e");
  });

  run_criterion(4, "the three-network example ranks as published", [] {
    const auto scores = vhsim::topsis_rank(fixtures::three_networks());
    check(scores.ranked.size() == 3, "unexpected ranking size");
    check(scores.ranked[0].alternative_id == "N3" &&
              scores.ranked[1].alternative_id == "N2" &&
              scores.ranked[2].alternative_id == "N1",
          "ranking order is not N3 > N2 > N1");
    const double n1 = scores.score_of("N1");
    const double n2 = scores.score_of("N2");
    const double n3 = scores.score_of("N3");
    check(std::fabs(n3 - 0.55) <= 0.01 && std::fabs(n2 - 0.45) <= 0.01 &&
              std::fabs(n1 - 0.38) <= 0.01,
          "scores " + num(n3) + "/" + num(n2) + "/" + num(n1) +
              " stray from 0.55/0.45/0.38");
    check(std::fabs(n1 - fixtures::kCloseN1) <= 1e-6 &&
              std::fabs(n2 - fixtures::kCloseN2) <= 1e-6 &&
              std::fabs(n3 - fixtures::kCloseN3) <= 1e-6,
          "scores drifted from the frozen constants");
    const auto ref = oracle::closeness(
        {{2000.0, 50.0, 10.0, 5.0},
         {1000.0, 20.0, 4.0, 2.0},
         {5000.0, 80.0, 20.0, 8.0}},
        {0.4, 0.3, 0.2, 0.1}, {true, false, false, false});
    check(std::fabs(n1 - ref[0]) <= 1e-9 && std::fabs(n2 - ref[1]) <= 1e-9 &&
              std::fabs(n3 - ref[2]) <= 1e-9,
          "independent recomputation disagrees");
    return "closeness " + num(n3, "%.6f") + " / " + num(n2, "%.6f") + " / " +
           num(n1, "%.6f");
  });

  run_criterion(5, "malformed weight vectors are always rejected", [] {
    bool canary = false;
    try {
      vhsim::validate_weights(std::vector<double>{1.5, -0.5, 0.0, 0.0});
    } catch (const vhsim::WeightRangeViolation&) {
      canary = true;
    }
    check(canary, "unit-sum vector with out-of-range entries slipped through");
    std::mt19937_64 eng(77);
    std::uniform_real_distribution<double> raw(0.05, 1.0);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    int rejected = 0;
    for (int round = 0; round < 1000; ++round) {
      std::vector<double> w(4);
      double sum = 0.0;
      for (auto& v : w) {
        v = raw(eng);
        sum += v;
      }
      for (auto& v : w) v /= sum;
      switch (round % 3) {
        case 0: {  // break the sum, keep every entry in range
          const auto jmin = static_cast<std::size_t>(
              std::min_element(w.begin(), w.end()) - w.begin());
          w[jmin] += 1e-6 + 0.3 * u01(eng);
          break;
        }
        case 1:  // push one entry above 1
          w[eng() % 4] = 1.0 + 1e-6 + u01(eng);
          break;
        default:  // push one entry below 0
          w[eng() % 4] = -(1e-6 + u01(eng));
          break;
      }
      try {
        vhsim::validate_weights(w);
      } catch (const vhsim::WeightSumViolation&) {
        ++rejected;
        continue;
      } catch (const vhsim::WeightRangeViolation&) {
        ++rejected;
        continue;
      }
    }
    check(rejected == 1000,
          std::to_string(1000 - rejected) + " vectors slipped through");
    return "1000 fuzzed vectors rejected";
  });

  run_criterion(6, "the scheme sweep orders decision delays as expected",
                [&] {
    const auto t0 = std::chrono::steady_clock::now();
    const vhsim::Scenario def = vhsim::parse_scenario(default_scn);
    const auto rows = vhsim::compare_rows(def);
    check(rows.size() == 9, "expected 9 rows, got " +
                                std::to_string(rows.size()));
    check(rows[0].processing_delay_ms < rows[1].processing_delay_ms &&
              rows[1].processing_delay_ms < rows[2].processing_delay_ms,
          "centralized delay is not strictly increasing in n");
    for (std::size_t i = 3; i < 9; ++i) {
      check(rows[i].processing_delay_ms == rows[3].processing_delay_ms,
            "distributed delay varies with n");
    }
    for (std::size_t i = 0; i < 3; ++i) {
      check(rows[i].processing_delay_ms > rows[i + 3].processing_delay_ms,
            "centralized is not slower than distributed at n=" +
                std::to_string(i + 2));
    }
    const double secs = seconds_since(t0);
    check(secs < 10.0, "sweep took " + num(secs) + " s");
    return "delays " + num(rows[0].processing_delay_ms) + "/" +
           num(rows[1].processing_delay_ms) + "/" +
           num(rows[2].processing_delay_ms) + " vs " +
           num(rows[3].processing_delay_ms) + " ms, " + num(secs) + " s";
  });

  run_criterion(7, "the trust gate expels a liar the plain scheme keeps",
                [&] {
    const vhsim::Scenario plain = vhsim::parse_scenario(liar_scn);
    vhsim::Scenario trusted = plain;
    trusted.scheme = vhsim::Scheme::tdvhd;
    const auto plain_log = vhsim::run(plain);
    const auto trusted_log = vhsim::run(trusted);
    std::vector<double> liar_lots;
    for (const auto& r : trusted_log.records) {
      if (r.kind == vhsim::LogKind::trust && r.to_net == "N1" &&
          !r.trust_passed) {
        liar_lots.push_back(r.lot);
      }
    }
    check(liar_lots.size() >= 3, "fewer than 3 failed checks recorded");
    check(std::fabs(liar_lots[0] - 0.8) <= 1e-9 &&
              std::fabs(liar_lots[1] - 0.6) <= 1e-9 &&
              std::fabs(liar_lots[2] - 0.4) <= 1e-9,
          "trust decay is not 0.8/0.6/0.4");
    check(liar_lots[0] >= trusted.trust.threshold &&
              liar_lots[1] >= trusted.trust.threshold &&
              liar_lots[2] < trusted.trust.threshold,
          "the third failure is not the first below the gate");
    for (const auto& r : trusted_log.records) {
      if (r.kind == vhsim::LogKind::handover && r.time_s > 16.0) {
        check(r.to_net == "N2", "post-exclusion handover went to " + r.to_net);
      }
    }
    const std::size_t plain_count = vhsim::handover_event_count(plain_log);
    const std::size_t trusted_count = vhsim::handover_event_count(trusted_log);
    check(trusted_count < plain_count,
          "trusted " + std::to_string(trusted_count) + " not below plain " +
              std::to_string(plain_count));
    return "handovers " + std::to_string(trusted_count) + " vs " +
           std::to_string(plain_count);
  });

  run_criterion(8, "throughput matches the bytes-over-span formula", [] {
    vhsim::MetricsLog two;
    vhsim::LogRecord rec;
    rec.kind = vhsim::LogKind::packet;
    rec.terminal = "t1";
    rec.time_s = 0.1;
    rec.size_bytes = 62000;
    two.records.push_back(rec);
    rec.time_s = 100.0;
    two.records.push_back(rec);
    const double tp = vhsim::throughput(two, "t1");
    check(tp == 124000.0 * 8.0 / (100.0 - 0.1), "formula mismatch");
    check(std::fabs(tp - 9929.93) <= 0.01,
          "two-packet throughput " + num(tp, "%.6f"));
    vhsim::MetricsLog stream;
    for (int k = 1; k <= 2000; ++k) {
      rec.time_s = static_cast<double>(k) * 0.1;
      rec.size_bytes = 1240;
      stream.records.push_back(rec);
    }
    const double tp2 = vhsim::throughput(stream, "t1");
    check(tp2 == 2000.0 * 1240.0 * 8.0 / (2000.0 * 0.1 - 1.0 * 0.1),
          "stream formula mismatch");
    check(std::fabs(tp2 - 99249.62) <= 0.01,
          "stream throughput " + num(tp2, "%.6f"));
    return num(tp, "%.2f") + " and " + num(tp2, "%.2f") + " bps";
  });

  run_criterion(9, "repeated runs produce byte-identical artifacts", [&] {
    namespace fs = std::filesystem;
    const vhsim::Scenario def = vhsim::parse_scenario(default_scn);
    const fs::path base = fs::temp_directory_path() / "vhsim_acceptance_rerun";
    fs::remove_all(base);
    vhsim::simulate_to_dir(def, (base / "a").string());
    vhsim::simulate_to_dir(def, (base / "b").string());
    const std::string events = slurp(base / "a" / "events.csv");
    check(!events.empty(), "events.csv is empty");
    check(events == slurp(base / "b" / "events.csv"), "events.csv differs");
    check(slurp(base / "a" / "summary.csv") ==
              slurp(base / "b" / "summary.csv"),
          "summary.csv differs");
    fs::remove_all(base);
    return std::to_string(std::count(events.begin(), events.end(), '\n')) +
           " identical event lines";
  });

  run_criterion(10, "the default scenario runs within time and memory bounds",
                [&] {
    const vhsim::Scenario def = vhsim::parse_scenario(default_scn);
    const auto t0 = std::chrono::steady_clock::now();
    const auto log = vhsim::run(def);
    const double secs = seconds_since(t0);
    check(!log.records.empty(), "run produced no records");
    check(secs < 5.0, "run took " + num(secs) + " s");
    rusage ru{};
    getrusage(RUSAGE_SELF, &ru);
    const double peak_mb = static_cast<double>(ru.ru_maxrss) / 1024.0;
    check(peak_mb < 256.0, "peak rss " + num(peak_mb) + " MB");
    return num(secs) + " s, peak rss " + num(peak_mb) + " MB";
  });

  std::printf("result: %d/10 criteria passed\n", 10 - failures);
  return failures;
}
