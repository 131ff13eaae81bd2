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

#include "catsim/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "catsim/experiment.hpp"

namespace catsim::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kSumTolerance = 1e-10;

std::string format(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

experiment::HistogramFile load_histogram(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingInputError("cannot read " + path.string(), {path.string()});
  try {
    return experiment::read_histogram(in);
  } catch (const std::runtime_error& e) {
    throw MissingInputError(path.string() + ": " + e.what(), {path.string()});
  }
}

}  // namespace

void write_file_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::vector<fs::path> cmd_simulate(const SimulateOptions& options, std::ostream& log) {
  if (!fs::exists(options.config_path)) {
    throw MissingInputError("config file not found: " + options.config_path.string(),
                            {options.config_path.string()});
  }
  auto config = load_config(options.config_path);
  if (options.seed) config.run.seed = *options.seed;
  if (options.exact) config.run.exact = true;
  if (options.out_dir) config.output.directory = options.out_dir->string();
  return simulate(std::move(config), log);
}

std::vector<fs::path> simulate(ExperimentConfig config, std::ostream& log) {
  config.validate();
  const auto apparatus = experiment::build_apparatus(config);
  const experiment::ExactSimulator sim(apparatus);
  const fs::path dir = config.output.directory;
  const int n = apparatus.n_arms();
  const auto& formats = config.output.formats;

  std::vector<fs::path> written;
  std::ostringstream summary;
  summary << "path_overlap: " << format(apparatus.sources.front().path_overlap) << '\n';
  summary << "fusion_visibility: " << format(apparatus.sources.front().fusion_visibility) << '\n';
  summary << "ensemble_members: " << sim.members().size() << '\n';
  summary << "mode: " << (config.run.exact ? "exact" : "monte_carlo") << '\n';

  for (std::size_t i = 0; i < config.run.settings.size(); ++i) {
    const auto& label = config.run.settings[i];
    const auto setting = experiment::MeasurementSetting::parse(label, n);
    const auto dist = sim.distribution(setting);
    double sum = 0.0;
    for (double p : dist.conditional) sum += p;
    if (dist.accepted_probability > 0.0 && std::abs(sum - 1.0) > kSumTolerance) {
      throw InvariantViolation("conditional distribution for " + label + " sums to " +
                               format(sum));
    }
    const double duration_s = config.run.hours_for(label) * 3600.0;
    experiment::HistogramFile file;
    if (config.run.exact) {
      file = experiment::to_file(dist, duration_s, config.run.seed);
    } else {
      const auto seed = config.run.seed + i;
      file = experiment::to_file(experiment::monte_carlo_counts(
          dist, apparatus.repetition_rate_hz, duration_s, seed));
    }
    std::ostringstream body;
    experiment::write_histogram(body, file);
    const auto path = dir / (label + ".hist");
    write_file_atomic(path, body.str());
    written.push_back(path);
    if (std::find(formats.begin(), formats.end(), "csv") != formats.end()) {
      std::ostringstream csv;
      analysis::write_population_csv(csv, analysis::from_file(file));
      const auto csv_path = dir / (label + ".csv");
      write_file_atomic(csv_path, csv.str());
      written.push_back(csv_path);
    }

    const double rate_per_hour = dist.accepted_probability * apparatus.repetition_rate_hz * 3600.0;
    summary << label << "_accepted_probability: " << format(dist.accepted_probability) << '\n';
    summary << label << "_events_per_hour: " << format(rate_per_hour) << '\n';
    log << label << ": " << format(rate_per_hour) << " events/h -> " << path.string() << '\n';
  }
  write_file_atomic(dir / "config.json", serialize_config(config));
  write_file_atomic(dir / "summary.txt", summary.str());
  written.push_back(dir / "config.json");
  written.push_back(dir / "summary.txt");
  return written;
}

analysis::WitnessReport cmd_analyze(const AnalyzeOptions& options, std::ostream& log) {
  const fs::path dir = options.histogram_dir;
  const fs::path hv_path = dir / "HV.hist";
  if (!fs::exists(hv_path)) {
    throw MissingInputError("missing histogram files: " + hv_path.string(), {hv_path.string()});
  }
  const auto hv = analysis::from_file(load_histogram(hv_path));
  const int n = hv.n_arms();

  std::vector<std::string> missing;
  for (int k = 0; k < n; ++k) {
    const auto p = dir / ("k" + std::to_string(k) + ".hist");
    if (!fs::exists(p)) missing.push_back(p.string());
  }
  if (!missing.empty()) {
    std::string what = "missing histogram files:";
    for (const auto& m : missing) what += " " + m;
    throw MissingInputError(what, missing);
  }

  const auto pops = analysis::populations(hv);
  std::vector<analysis::Correlation> correlations;
  for (int k = 0; k < n; ++k) {
    const auto p = dir / ("k" + std::to_string(k) + ".hist");
    const auto table = analysis::from_file(load_histogram(p));
    if (table.n_arms() != n) {
      throw MissingInputError(p.string() + ": arm count differs from HV.hist", {p.string()});
    }
    correlations.push_back({k, analysis::m_k_expectation(table, k)});
  }
  const auto report = analysis::fidelity_witness(pops, correlations, n);
  if (!std::isfinite(report.fidelity.value) || std::abs(report.fidelity.value) > 1.0 + 1e-9) {
    throw InvariantViolation("assembled fidelity outside [-1, 1]");
  }

  const fs::path out = options.out_dir.value_or(dir);
  std::ostringstream rep, a, b;
  analysis::write_report(rep, report);
  analysis::write_population_csv(a, hv);
  analysis::write_correlation_csv(b, report);
  write_file_atomic(out / "witness_report.txt", rep.str());
  write_file_atomic(out / "fig3a.csv", a.str());
  write_file_atomic(out / "fig3b.csv", b.str());
  log << "fidelity " << format(report.fidelity.value) << " +- " << format(report.fidelity.sigma)
      << ", significance " << analysis::to_string(report.significance) << " sigma\n";
  return report;
}

topology::FusionTopology topology_from_options(const TopologyOptions& options) {
  const auto shape = topology::parse_shape(options.shape);
  if (shape == topology::Shape::star) return topology::FusionTopology::star(options.sources);
  if (shape == topology::Shape::chain) return topology::FusionTopology::chain(options.sources);
  std::vector<topology::FusionEdge> edges;
  std::istringstream in(options.edges);
  for (std::string item; std::getline(in, item, ',');) {
    const auto dash = item.find('-');
    if (dash == std::string::npos || dash == 0 || dash + 1 == item.size()) {
      throw std::invalid_argument("bad edge '" + item + "', expected a-b");
    }
    edges.push_back({item.substr(0, dash), item.substr(dash + 1)});
  }
  return topology::FusionTopology::custom(options.sources, std::move(edges));
}

void cmd_topology(const TopologyOptions& options, std::ostream& out) {
  const auto topo = topology_from_options(options);
  const int order = options.order.value_or(options.sources + 1);
  topology::write_error_terms_csv(out, topology::enumerate_error_terms(topo, order), order);
}

topology::RateEstimate cmd_rate(const RateOptions& options, std::ostream& out) {
  double factor = options.success_factor;
  if (options.observed_rate_hz) {
    factor = topology::solve_success_factor(*options.observed_rate_hz, options.p, options.xi,
                                            options.repetition_rate_hz, options.n_pairs);
  }
  const auto r = topology::n_fold_rate(options.p, options.xi, options.repetition_rate_hz,
                                       options.n_pairs, factor);
  out << "n_fold_rate_hz: " << format(r.n_fold_rate_hz) << '\n';
  const double hours = r.hours_per_event();
  out << "hours_per_event: " << (std::isfinite(hours) ? format(hours) : "unbounded") << '\n';
  out << "events_per_hour: " << format(r.n_fold_rate_hz * 3600.0) << '\n';
  out << "p: " << format(r.p) << '\n';
  out << "xi: " << format(r.xi) << '\n';
  out << "repetition_rate_hz: " << format(r.repetition_rate_hz) << '\n';
  out << "n_pairs: " << r.n_pairs << '\n';
  out << "success_factor: " << format(r.success_factor) << '\n';
  return r;
}

}  // namespace catsim::cli
