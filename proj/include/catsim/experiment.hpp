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
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "catsim/config.hpp"
#include "catsim/fock.hpp"
#include "catsim/optics.hpp"
#include "catsim/sources.hpp"
#include "catsim/topology.hpp"

namespace catsim::experiment {

enum class Outcome { plus = 0, minus = 1 };

/// Per-arm analyzer angles, or the computational H/V basis.
class MeasurementSetting {
 public:
  enum class Kind { hv, k, custom };

  static MeasurementSetting hv(int n_arms);
  /// theta = k pi / n_arms on every arm; 0 <= k < 2 n_arms.
  static MeasurementSetting kth(int k, int n_arms);
  /// Explicit angles in [0, 2 pi), one per arm.
  static MeasurementSetting custom(std::vector<double> thetas);
  /// "HV" or "k<int>".
  static MeasurementSetting parse(const std::string& label, int n_arms);

  Kind kind() const { return kind_; }
  int k() const { return k_; }
  int n_arms() const { return n_arms_; }
  /// Empty for the H/V setting.
  const std::vector<double>& thetas() const { return thetas_; }
  /// "HV", "k3" or "custom".
  std::string label() const;

  bool operator==(const MeasurementSetting&) const = default;

 private:
  Kind kind_ = Kind::hv;
  int k_ = 0;
  int n_arms_ = 0;
  std::vector<double> thetas_;
};

/// Pattern indices run over 2^n_arms; arm 0 is the most significant bit and
/// a set bit means the minus (V) detector fired.
std::string pattern_string(std::size_t index, int n_arms, bool hv);
/// Accepts H/V or +/- characters.
std::size_t parse_pattern(const std::string& text);
/// Number of minus outcomes.
int minus_count(std::size_t index);

enum class AnalyzerMode { abstract, waveplates };
AnalyzerMode parse_analyzer_mode(const std::string& name);

struct Apparatus {
  std::vector<sources::PdcSource> sources;
  topology::FusionTopology topology;
  /// Detected arms in pattern order.
  std::vector<std::string> output_arms;
  /// Fusion PBSs in order, each followed by its compensating phase.
  std::vector<optics::LinearElement> fusion_elements;
  /// Base registry: arms in source order x {H, V} x {e, o}.
  fock::RegistryPtr registry;
  double efficiency = 1.0;
  double repetition_rate_hz = 76e6;
  /// Total photon pairs kept across all sources.
  int truncation_pairs = 4;
  AnalyzerMode analyzer = AnalyzerMode::abstract;

  int n_arms() const { return static_cast<int>(output_arms.size()); }
};

/// Validates the config (ConfigError on failure). Calibrates the synthesizer
/// path overlap and the fusion visibility when targets are configured; the
/// calibration setups keep as many extra pairs as the full apparatus.
Apparatus build_apparatus(const cli::ExperimentConfig& config);

/// Apparatus from explicit parts, for tests and scaled-down setups.
Apparatus make_apparatus(std::vector<sources::PdcSource> sources, topology::FusionTopology topology,
                         double efficiency, int truncation_pairs,
                         AnalyzerMode analyzer = AnalyzerMode::abstract,
                         double repetition_rate_hz = 76e6);

/// PBS followed by a pi phase on the V port of arm2, so fusing two
/// (|HH> + |VV>) pairs keeps the + sign.
std::vector<optics::LinearElement> fusion_elements(const topology::FusionTopology& topology);

/// Registry of one ensemble member: every arm with every tag the member uses.
fock::RegistryPtr member_registry(const Apparatus& apparatus,
                                  const sources::EnsembleMember& member);

/// Product of the sources' emissions, capped at 2 * truncation_pairs photons.
fock::AmplitudeState emit(const Apparatus& apparatus, const sources::EnsembleMember& member);

/// Synthesizers then the fusion network.
fock::AmplitudeState propagate(const Apparatus& apparatus, const fock::AmplitudeState& state);

/// Drops terms that leave any listed arm empty; they can never give a full
/// coincidence.
fock::AmplitudeState prune_empty_arms(const fock::AmplitudeState& state,
                                      const std::vector<std::string>& arms);

/// Terms with exactly one photon per arm (unnormalized; the squared norm is
/// the post-selection probability).
fock::AmplitudeState ghz_projector_sector(const fock::AmplitudeState& state,
                                          const std::vector<std::string>& arms);

/// Analyzer elements for each arm, in application order.
std::vector<optics::LinearElement> analyzer_elements(const MeasurementSetting& setting,
                                                     const std::vector<std::string>& arms,
                                                     AnalyzerMode mode);

/// Absolute probabilities of each accepted pattern for a state: analyzers,
/// then bucket detectors with per-photon efficiency, keeping events where
/// every arm has exactly one clicking detector.
std::vector<double> detection_probabilities(const fock::AmplitudeState& state,
                                            const std::vector<std::string>& arms,
                                            const MeasurementSetting& setting,
                                            AnalyzerMode mode, double efficiency);

/// Accepted pattern of a raw event given as fired logical detectors
/// 2 * arm + outcome, or nullopt when some arm has zero or two clicks.
std::optional<std::size_t> coincidence_unit_filter(const std::set<int>& fired, int n_arms);

struct OutcomeDistribution {
  MeasurementSetting setting;
  /// Conditioned on an accepted coincidence; all zero if none is possible.
  std::vector<double> conditional;
  /// Per pulse.
  std::vector<double> absolute;
  double accepted_probability = 0.0;
};

struct PropagatedMember {
  double weight = 0.0;
  fock::AmplitudeState state;
};

/// Propagates the distinguishability ensemble once and evaluates settings.
class ExactSimulator {
 public:
  explicit ExactSimulator(Apparatus apparatus);

  const Apparatus& apparatus() const { return apparatus_; }
  const std::vector<PropagatedMember>& members() const { return members_; }

  OutcomeDistribution distribution(const MeasurementSetting& setting) const;

  /// Ensemble fidelity of the one-photon-per-arm sector with the n-arm GHZ
  /// state (spectral tags traced out).
  double ghz_fidelity() const;

 private:
  Apparatus apparatus_;
  std::vector<PropagatedMember> members_;
};

OutcomeDistribution outcome_distribution(const Apparatus& apparatus,
                                         const MeasurementSetting& setting);

struct CoincidenceHistogram {
  MeasurementSetting setting;
  std::vector<std::uint64_t> counts;
  double duration_s = 0.0;
  std::uint64_t seed = 0;

  std::uint64_t total() const;
};

/// Poisson counts with mean repetition_rate * absolute * duration per
/// pattern, drawn in pattern order from a mt19937_64 seeded with `seed`.
CoincidenceHistogram monte_carlo_counts(const OutcomeDistribution& distribution,
                                        double repetition_rate_hz, double duration_s,
                                        std::uint64_t seed);

CoincidenceHistogram monte_carlo_counts(const Apparatus& apparatus,
                                        const MeasurementSetting& setting, double duration_s,
                                        std::uint64_t seed);

/// Two-photon correlation <sx sx> of a lone synthesizer under the detection
/// model, conditioned on a twofold coincidence.
double synthesizer_visibility(const sources::PdcSource& source, double efficiency,
                              int truncation_pairs);

/// Path overlap giving the target visibility, clamped to [0, 1].
double calibrate_path_overlap(const sources::PdcSource& source, double efficiency,
                              int truncation_pairs, double target_visibility);

/// Parity-dip visibility of two synthesized sources fused on one PBS:
/// 1 - P_odd / P_odd(distinguishable), where P_odd is the absolute
/// probability of an odd number of minus outcomes with all four arms
/// measured at theta = 0. Includes multi-pair emission and loss.
double fusion_hom_visibility(const sources::PdcSource& source, double efficiency,
                             int truncation_pairs);

/// Spectral fusion visibility giving the target dip visibility, clamped to
/// [0, 1].
double calibrate_fusion_visibility(const sources::PdcSource& source, double efficiency,
                                   int truncation_pairs, double target_visibility);

enum class HistogramKind { counts, probability };

/// On-disk form of a histogram or an exact distribution: one header line
///   # setting=<label> arms=<n> duration_s=<d> seed=<s> kind=<counts|probability>
/// (plus thetas=<a:b:...> for custom settings), then 2^n lines "pattern,value".
struct HistogramFile {
  MeasurementSetting setting;
  HistogramKind kind = HistogramKind::counts;
  std::vector<double> values;
  double duration_s = 0.0;
  std::uint64_t seed = 0;

  bool operator==(const HistogramFile&) const = default;
};

HistogramFile to_file(const CoincidenceHistogram& histogram);
HistogramFile to_file(const OutcomeDistribution& distribution, double duration_s,
                      std::uint64_t seed);

void write_histogram(std::ostream& out, const HistogramFile& file);
/// Throws std::runtime_error with the offending line number.
HistogramFile read_histogram(std::istream& in);

}  // namespace catsim::experiment
