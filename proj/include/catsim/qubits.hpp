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

// Polarization-qubit view of Fock states with one photon per arm.
namespace catsim::fock {

/// Terms with exactly one photon in each listed arm (any photons elsewhere
/// are not allowed either). Unnormalized.
AmplitudeState one_photon_per_arm(const AmplitudeState& state,
                                  const std::vector<std::string>& arms);

/// Qubit index of a one-photon-per-arm term: bit (n-1-i) is set when the
/// photon in arms[i] is V, so arms[0] is the most significant bit.
std::size_t qubit_index(const ModeRegistry& registry, const OccupationVector& occ,
                        const std::vector<std::string>& arms);

/// Builds the one-photon-per-arm state with the given qubit amplitudes, all
/// photons carrying `tag`.
AmplitudeState qubit_state(RegistryPtr registry, const std::vector<std::string>& arms,
                           const std::vector<Complex>& amplitudes, const std::string& tag);

/// Unnormalized overlap of the post-selected polarization state with a
/// target qubit vector. Spectral tags are traced out, so terms that differ
/// only in tags add incoherently: overlap = sum_T |<target|v_T>|^2 and
/// weight = sum_T |v_T|^2. The fidelity is overlap / weight.
struct QubitOverlap {
  double overlap = 0.0;
  double weight = 0.0;
  double fidelity() const { return weight > 0.0 ? overlap / weight : 0.0; }
};

QubitOverlap qubit_overlap(const AmplitudeState& state, const std::vector<std::string>& arms,
                           const std::vector<Complex>& target);

/// (|H...H> + |V...V>)/sqrt(2) over n qubits.
std::vector<Complex> ghz_amplitudes(int n_qubits);

}  // namespace catsim::fock
