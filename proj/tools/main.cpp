// vhsim command-line front end: decide / simulate / compare.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "vhsim/vhsim.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw vhsim::Error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int run_decide(const std::string& matrix_file, const std::string& weights_arg,
               const std::string& directions_arg) {
  const auto weights = vhsim::parse_weight_list(weights_arg);
  const auto directions = vhsim::parse_directions(directions_arg);
  const auto matrix = vhsim::parse_matrix_csv(read_file(matrix_file),
                                              matrix_file, weights, directions);
  std::cout << vhsim::decide_lines(vhsim::topsis_rank(matrix));
  return 0;
}

int run_simulate(const std::string& scenario_path, const std::string& out_dir,
                 const std::optional<std::uint64_t>& seed) {
  vhsim::Scenario sc = vhsim::parse_scenario(scenario_path);
  if (seed) sc.seed = *seed;
  const vhsim::SummaryRow row = vhsim::simulate_to_dir(sc, out_dir);
  std::cout << vhsim::summary_csv(std::span(&row, 1));
  std::cerr << "wrote " << out_dir << "/events.csv and " << out_dir
            << "/summary.csv\n";
  return 0;
}

int run_compare(const std::string& scenario_path, const std::string& out_dir,
                const std::optional<std::uint64_t>& seed) {
  vhsim::Scenario sc = vhsim::parse_scenario(scenario_path);
  if (seed) sc.seed = *seed;
  const auto rows = vhsim::compare_to_dir(sc, out_dir);
  std::cout << vhsim::summary_csv(rows);
  std::cerr << "wrote " << out_dir << "/compare.csv\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vertical handover decision library and simulator"};
  app.require_subcommand(1);

  std::string matrix_file;
  std::string weights_arg;
  std::string directions_arg;
  CLI::App* decide =
      app.add_subcommand("decide", "rank networks from a decision matrix CSV");
  decide->add_option("--matrix", matrix_file,
                     "CSV file: header row, one line per network")
      ->required();
  decide->add_option("--weights", weights_arg,
                     "comma-separated criterion weights summing to 1")
      ->required();
  decide->add_option("--directions", directions_arg,
                     "comma-separated directions, b(enefit) or c(ost)")
      ->required();

  std::string sim_scenario;
  std::string sim_out;
  std::optional<std::uint64_t> sim_seed;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "run one scenario; write events.csv and summary.csv");
  simulate->add_option("scenario", sim_scenario, "scenario file")->required();
  simulate->add_option("--out", sim_out, "output directory")->required();
  simulate->add_option("--seed", sim_seed, "override the scenario seed");

  std::string cmp_scenario;
  std::string cmp_out;
  std::optional<std::uint64_t> cmp_seed;
  CLI::App* compare = app.add_subcommand(
      "compare", "sweep schemes over 2, 3, 4 stations; write compare.csv");
  compare->add_option("scenario", cmp_scenario, "scenario file")->required();
  compare->add_option("--out", cmp_out, "output directory")->required();
  compare->add_option("--seed", cmp_seed, "override the scenario seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (decide->parsed()) {
      return run_decide(matrix_file, weights_arg, directions_arg);
    }
    if (simulate->parsed()) {
      return run_simulate(sim_scenario, sim_out, sim_seed);
    }
    return run_compare(cmp_scenario, cmp_out, cmp_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
