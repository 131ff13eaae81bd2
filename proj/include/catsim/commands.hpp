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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "catsim/analysis.hpp"
#include "catsim/config.hpp"
#include "catsim/topology.hpp"

namespace catsim::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 2,
  kExitMissingInput = 3,
  kExitInvariantViolation = 4,
};

/// Required input files that are absent or unreadable.
class MissingInputError : public std::runtime_error {
 public:
  MissingInputError(const std::string& what, std::vector<std::string> missing)
      : std::runtime_error(what), missing_(std::move(missing)) {}
  const std::vector<std::string>& missing() const { return missing_; }

 private:
  std::vector<std::string> missing_;
};

/// A computed result broke an internal consistency check.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Writes to a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

struct SimulateOptions {
  std::filesystem::path config_path;
  std::optional<std::uint64_t> seed;
  bool exact = false;
  std::optional<std::filesystem::path> out_dir;
};

/// One histogram file per configured setting, "<label>.hist" (and
/// "<label>.csv" when output.formats lists csv), plus the effective config
/// and a run summary. Monte Carlo settings use seed + i for
/// the i-th setting. Returns the written paths.
std::vector<std::filesystem::path> cmd_simulate(const SimulateOptions& options, std::ostream& log);

/// The same run from an already parsed config.
std::vector<std::filesystem::path> simulate(ExperimentConfig config, std::ostream& log);

struct AnalyzeOptions {
  std::filesystem::path histogram_dir;
  /// Defaults to the histogram directory.
  std::optional<std::filesystem::path> out_dir;
};

/// Reads HV.hist and k0.hist .. k<n-1>.hist, writes witness_report.txt,
/// fig3a.csv and fig3b.csv. Missing files raise MissingInputError listing
/// all of them.
analysis::WitnessReport cmd_analyze(const AnalyzeOptions& options, std::ostream& log);

struct TopologyOptions {
  std::string shape = "star";
  int sources = 4;
  /// Defaults to sources + 1.
  std::optional<int> order;
  /// Custom edges as "a-b,c-d".
  std::string edges;
};

topology::FusionTopology topology_from_options(const TopologyOptions& options);
/// Enumeration CSV with its summary line.
void cmd_topology(const TopologyOptions& options, std::ostream& out);

struct RateOptions {
  double p = 0.058;
  double xi = 0.265;
  double repetition_rate_hz = 76e6;
  int n_pairs = 4;
  double success_factor = 1.0;
  /// When set, the success factor is solved for this rate instead.
  std::optional<double> observed_rate_hz;
};

/// "key: value" lines for the estimate and hours per event.
topology::RateEstimate cmd_rate(const RateOptions& options, std::ostream& out);

}  // namespace catsim::cli
