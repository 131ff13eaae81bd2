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
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace catsim::cli {

/// Malformed or out-of-range configuration. `keys` lists the offending
/// dotted key paths.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::vector<std::string> keys)
      : std::runtime_error(what), keys_(std::move(keys)) {}
  const std::vector<std::string>& keys() const { return keys_; }

 private:
  std::vector<std::string> keys_;
};

struct SourcesConfig {
  int count = 4;
  double pair_probability = 0.058;
  /// Either set directly or calibrated from `synthesizer_visibility`.
  std::optional<double> path_overlap;
  std::optional<double> synthesizer_visibility;
  /// Either set directly or calibrated from `hom_visibility`; 1 when neither.
  std::optional<double> fusion_visibility;
  std::optional<double> hom_visibility;
  double eo_overlap = 1.0;
  /// Total pairs across all sources.
  int truncation_pairs = 4;

  bool operator==(const SourcesConfig&) const = default;
};

struct TopologyConfig {
  std::string shape = "star";
  std::vector<std::pair<std::string, std::string>> edges;

  bool operator==(const TopologyConfig&) const = default;
};

struct DetectionConfig {
  double efficiency = 0.265;
  double repetition_rate_hz = 76e6;
  std::string analyzer = "abstract";

  bool operator==(const DetectionConfig&) const = default;
};

struct RunConfig {
  std::vector<std::string> settings;
  std::map<std::string, double> duration_hours;
  double default_duration_hours = 15.0;
  std::uint64_t seed = 1;
  bool exact = false;

  double hours_for(const std::string& setting) const;
  bool operator==(const RunConfig&) const = default;
};

struct OutputConfig {
  std::string directory = "out";
  std::vector<std::string> formats{"hist"};

  bool operator==(const OutputConfig&) const = default;
};

struct ExperimentConfig {
  SourcesConfig sources;
  TopologyConfig topology;
  DetectionConfig detection;
  RunConfig run;
  OutputConfig output;

  /// Checks ranges; throws ConfigError listing every offending key.
  void validate() const;
  bool operator==(const ExperimentConfig&) const = default;
};

/// The eight-photon setup with the reported source and detector parameters
/// and the HV plus k = 0..7 measurement schedule (40 h, 25 h, 15 h).
ExperimentConfig default_config();

/// Parses JSON text; unknown keys and bad types are ConfigErrors.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const ExperimentConfig& config);

}  // namespace catsim::cli
