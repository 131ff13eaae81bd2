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

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace catsim::topology {

enum class Shape { chain, star, custom };

std::string to_string(Shape shape);
/// Throws std::invalid_argument for unknown names.
Shape parse_shape(const std::string& name);

/// Output arms of source `index` (0-based) after its Bell-state synthesizer.
/// Numbering follows the eight-photon setup: sources emit into (1, 2),
/// (4, 3), (5, 6), (8, 7), ..., the first arm of each carrying the e-ray photon.
struct SourceArms {
  std::string e_arm;
  std::string o_arm;
};
SourceArms source_arms(int index);

/// An in-place polarizing beam splitter between two arms.
struct FusionEdge {
  std::string arm1;
  std::string arm2;

  bool operator==(const FusionEdge&) const = default;
};

/// Sources joined by PBS fusions, applied in order.
struct FusionTopology {
  int n_sources = 0;
  Shape shape = Shape::custom;
  std::vector<FusionEdge> edges;

  /// e-ray photons fused pairwise, then the second outputs of each fusion
  /// fused again: for four sources (1,4), (5,8), (4,8).
  static FusionTopology star(int n_sources = 4);
  /// o-ray arm of source k fused with the e-ray arm of source k+1:
  /// for four sources (2,4), (3,5), (6,8).
  static FusionTopology chain(int n_sources = 4);
  static FusionTopology custom(int n_sources, std::vector<FusionEdge> edges);

  /// All source arms in numeric order; these are also the detected arms.
  std::vector<std::string> output_arms() const;
  /// Throws std::invalid_argument if an edge names an unknown arm or joins
  /// two arms that are already connected.
  void validate() const;
  /// Whether some fusion joins an o-ray arm.
  bool has_eo_fusion() const;
  /// All sources joined into a single component.
  bool connected() const;
};

struct EmissionPattern {
  std::vector<int> pairs_per_source;

  int total() const;
  std::string to_string() const;
  bool operator==(const EmissionPattern&) const = default;
};

struct ErrorTerm {
  EmissionPattern pattern;
  int multiplicity = 1;
  bool erroneous = true;
};

/// Whether some assignment of pair polarizations lets every output arm
/// receive at least one photon. Losses may delete any photons, so this is
/// exactly the condition for a bucket-detector eight-fold coincidence.
bool can_fill_all_arms(const FusionTopology& topology, const EmissionPattern& pattern);

/// Emission patterns of the given total pair number that can still produce
/// an accepted coincidence. Each pattern counts once (occurrence counting);
/// only the one-pair-per-source pattern is flagged non-erroneous. Orders
/// below the source count yield an empty list.
std::vector<ErrorTerm> enumerate_error_terms(const FusionTopology& topology, int order);

/// Sum of multiplicities of the erroneous terms.
int erroneous_multiplicity(const std::vector<ErrorTerm>& terms);

/// CSV rows "pattern,multiplicity,erroneous" followed by a summary line.
void write_error_terms_csv(std::ostream& out, const std::vector<ErrorTerm>& terms, int order);

struct RateEstimate {
  double n_fold_rate_hz = 0.0;
  double p = 0.0;
  double xi = 0.0;
  double repetition_rate_hz = 0.0;
  int n_pairs = 0;
  double success_factor = 1.0;

  /// Infinite when the rate is zero.
  double hours_per_event() const;
};

/// repetition_rate * (p * xi)^n_pairs * success_factor.
RateEstimate n_fold_rate(double p, double xi, double repetition_rate_hz, int n_pairs,
                         double success_factor);

/// success_factor reproducing an observed rate.
double solve_success_factor(double rate_hz, double p, double xi, double repetition_rate_hz,
                            int n_pairs);

/// (p * xi) implied by a rate for a given success factor.
double implied_p_xi(double rate_hz, double repetition_rate_hz, int n_pairs, double success_factor);

struct Graph {
  std::vector<std::string> vertices;
  std::vector<std::pair<std::string, std::string>> edges;
};

/// Graph state equivalent (up to local unitaries) to the post-selected
/// output. Fusing Bell pairs on PBSs always yields a GHZ state, whose graph
/// is a star centred on the first fused arm; a lone source is a single edge.
/// Throws std::invalid_argument for disconnected topologies.
Graph graph_state_edges(const FusionTopology& topology);

/// Photon-level wiring: one edge per emitted pair and one per fusion.
Graph fusion_wiring(const FusionTopology& topology);

}  // namespace catsim::topology
