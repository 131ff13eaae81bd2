// Copyright 2026 The catsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// catsim: simulate, analyze, topology and rate subcommands.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "catsim/commands.hpp"

namespace cli = catsim::cli;

int main(int argc, char** argv) {
  CLI::App app{"Eight-photon cat-state simulator and analysis toolkit"};
  app.require_subcommand(1);

  cli::SimulateOptions sim;
  std::uint64_t seed = 0;
  std::string sim_out;
  auto* simulate = app.add_subcommand("simulate", "Write one histogram per measurement setting");
  simulate->add_option("--config", sim.config_path, "Experiment config (JSON)")->required();
  auto* seed_opt = simulate->add_option("--seed", seed, "Override the run seed");
  simulate->add_flag("--exact", sim.exact, "Write exact conditional probabilities");
  auto* sim_out_opt = simulate->add_option("--out", sim_out, "Output directory");

  cli::AnalyzeOptions an;
  std::string an_out;
  auto* analyze = app.add_subcommand("analyze", "Fidelity witness and plot data from histograms");
  analyze->add_option("dir", an.histogram_dir, "Histogram directory")->required();
  auto* an_out_opt = analyze->add_option("--out", an_out, "Output directory");

  cli::TopologyOptions topo;
  int order = 0;
  std::string topo_out;
  auto* topology = app.add_subcommand("topology", "Enumerate multi-pair error terms");
  topology->add_option("--shape", topo.shape, "star, chain or custom")->capture_default_str();
  topology->add_option("--sources", topo.sources, "Number of sources")->capture_default_str();
  auto* order_opt = topology->add_option("--order", order, "Total pair order (default sources+1)");
  topology->add_option("--edges", topo.edges, "Custom fusion edges, e.g. 1-4,5-8,4-8");
  auto* topo_out_opt = topology->add_option("--out", topo_out, "Write the CSV here");

  cli::RateOptions rate;
  double observed = 0.0;
  auto* rate_cmd = app.add_subcommand("rate", "n-fold coincidence rate estimate");
  rate_cmd->add_option("--p", rate.p, "Pair probability per pulse")->capture_default_str();
  rate_cmd->add_option("--xi", rate.xi, "Collection and detection efficiency")
      ->capture_default_str();
  rate_cmd->add_option("--rep-rate", rate.repetition_rate_hz, "Repetition rate (Hz)")
      ->capture_default_str();
  rate_cmd->add_option("--n-pairs", rate.n_pairs, "Number of pairs")->capture_default_str();
  rate_cmd->add_option("--success-factor", rate.success_factor, "Residual success factor")
      ->capture_default_str();
  auto* observed_opt =
      rate_cmd->add_option("--observed-rate", observed, "Solve the success factor for this rate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kExitOk : cli::kExitConfigError;
  }

  try {
    if (*simulate) {
      if (*seed_opt) sim.seed = seed;
      if (*sim_out_opt) sim.out_dir = sim_out;
      cli::cmd_simulate(sim, std::cerr);
    } else if (*analyze) {
      if (*an_out_opt) an.out_dir = an_out;
      cli::cmd_analyze(an, std::cout);
    } else if (*topology) {
      if (*order_opt) topo.order = order;
      if (*topo_out_opt) {
        std::ostringstream csv;
        cli::cmd_topology(topo, csv);
        cli::write_file_atomic(topo_out, csv.str());
      } else {
        cli::cmd_topology(topo, std::cout);
      }
    } else if (*rate_cmd) {
      if (*observed_opt) rate.observed_rate_hz = observed;
      cli::cmd_rate(rate, std::cout);
    }
  } catch (const cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return cli::kExitConfigError;
  } catch (const cli::MissingInputError& e) {
    std::cerr << "missing input: " << e.what() << '\n';
    return cli::kExitMissingInput;
  } catch (const cli::InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return cli::kExitInvariantViolation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return cli::kExitConfigError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return cli::kExitMissingInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitInvariantViolation;
  }
  return cli::kExitOk;
}
