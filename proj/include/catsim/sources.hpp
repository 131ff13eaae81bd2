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

#include <string>
#include <vector>

#include "catsim/fock.hpp"
#include "catsim/optics.hpp"

namespace catsim::sources {

inline constexpr const char* kExtraordinaryTag = "e";
inline constexpr const char* kOrdinaryTag = "o";

/// Type-II down-conversion source feeding a Bell-state synthesizer.
///
/// The pair creation operator is a_{H,e}^dag b_{V,o}^dag + a_{V,o}^dag b_{H,e}^dag.
/// After the synthesizer the e-ray photon always leaves through `arm_a` and
/// the o-ray photon through `arm_b`.
struct PdcSource {
  std::string arm_a;
  std::string arm_b;
  /// Down-conversion probability per pulse; the pair amplitude is sqrt(p).
  double pair_probability = 0.0;
  /// Spectral overlap of e and o envelopes. Matters only where an o-ray
  /// photon meets an e-ray photon on a beam splitter.
  double eo_overlap = 1.0;
  /// Overlap between the transmitted-transmitted and reflected-reflected
  /// synthesizer paths.
  double path_overlap = 1.0;
  /// Two-photon interference visibility between this source's photons and
  /// those of another source with the same setting.
  double fusion_visibility = 1.0;
  int truncation_pairs = 4;

  double pair_amplitude() const;
  /// Throws std::invalid_argument naming the first out-of-range field.
  void validate() const;
};

/// Which spectral alternative each photon of a source takes in one member of
/// the distinguishability ensemble. The default is the fully coherent case.
struct SpectralVariant {
  /// Photons carry a source-private spectral tag instead of the shared one.
  bool private_spectrum = false;
  /// Photons of the reflected-reflected amplitude carry a delayed tag.
  bool late_reflection = false;
  /// The o-ray photon shares the e-ray spectral tag.
  bool eo_matched = false;

  bool operator==(const SpectralVariant&) const = default;
};

enum class PhotonRole { extraordinary, ordinary };

/// Spectral tag of one photon of `source`; `reflected_term` selects the
/// a_{V,o} b_{H,e} amplitude.
std::string photon_tag(const PdcSource& source, PhotonRole role, bool reflected_term,
                       const SpectralVariant& variant);

/// Tags used by the source in this variant: e before o, prompt before late.
std::vector<std::string> source_tags(const PdcSource& source, const SpectralVariant& variant);

/// Sum over n <= truncation_pairs of (sqrt p)^n / n! ((A + B) / sqrt 2)^n |0>, normalized
/// within the truncated space. `truncation` is the photon-number budget of the
/// returned state. Throws if 2 * truncation_pairs exceeds it.
fock::AmplitudeState pdc_emit(const PdcSource& source, int truncation,
                              const SpectralVariant& variant = {});

/// The n-pair term (sqrt p)^n / n! ((A + B) / sqrt 2)^n |0>, unnormalized. The
/// single-pair term has squared norm p.
fock::AmplitudeState pdc_sector(const PdcSource& source, int n_pairs,
                                const SpectralVariant& variant = {});

/// HWP at pi/4 on arm b, in-place PBS on (a, b), and a pi phase on the V port
/// of arm b that restores the + sign of (|HH> + |VV>)/sqrt(2).
std::vector<optics::LinearElement> synthesizer_elements(const PdcSource& source);

struct SynthesizerOutput {
  /// Fully coherent member.
  fock::AmplitudeState state;
  /// Path-distinguishability ensemble: (weight, state) pairs.
  std::vector<std::pair<double, fock::AmplitudeState>> ensemble;
  /// Fidelity of the one-photon-per-output polarization state with phi+.
  double heralded_fidelity = 0.0;
};

SynthesizerOutput bell_synthesizer(const PdcSource& source);

enum class Interference { synthesizer, fusion };

/// Returns a copy with the overlap of the given interference set.
PdcSource set_pair_distinguishability(const PdcSource& source, double overlap,
                                      Interference which = Interference::synthesizer);

/// Probability that the source's photons use the shared spectral tag in the
/// ensemble; two sources then interfere with visibility equal to the product.
double shared_spectrum_probability(const PdcSource& source);

/// One member of the product ensemble over sources.
struct EnsembleMember {
  double weight = 1.0;
  std::vector<SpectralVariant> variants;
};

/// Enumerates the distinguishability ensemble for a set of sources.
/// Members with zero weight are omitted; weights sum to 1. The e/o
/// alternative is expanded only when `eo_interference` is set.
std::vector<EnsembleMember> spectral_ensemble(const std::vector<PdcSource>& sources,
                                              bool eo_interference);

/// Hong-Ou-Mandel dip visibility of e-ray photons from two sources meeting on
/// a balanced beam splitter: 1 - P_coincidence / P_coincidence(distinguishable).
double hom_visibility(const PdcSource& a, const PdcSource& b);

}  // namespace catsim::sources
