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

#include "catsim/qubits.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace catsim::fock {

namespace {

// Position of each registry mode's arm within `arms`, or -1.
std::vector<int> arm_slots(const ModeRegistry& reg, const std::vector<std::string>& arms) {
  std::vector<int> slot(reg.size(), -1);
  for (std::size_t m = 0; m < reg.size(); ++m) {
    for (std::size_t a = 0; a < arms.size(); ++a) {
      if (reg.label(m).arm == arms[a]) slot[m] = static_cast<int>(a);
    }
  }
  return slot;
}

}  // namespace

AmplitudeState one_photon_per_arm(const AmplitudeState& state,
                                  const std::vector<std::string>& arms) {
  const auto slot = arm_slots(state.registry(), arms);
  TermMap out;
  std::vector<int> seen(arms.size());
  for (const auto& [occ, amp] : state.terms()) {
    if (occ.total() != static_cast<int>(arms.size())) continue;
    std::fill(seen.begin(), seen.end(), 0);
    bool ok = true;
    for (auto m : occ.photons()) {
      if (slot[m] < 0 || seen[static_cast<std::size_t>(slot[m])]++) {
        ok = false;
        break;
      }
    }
    if (ok) out.emplace(occ, amp);
  }
  return AmplitudeState::from_terms(state.registry_ptr(), state.truncation(), std::move(out),
                                    state.prune_epsilon());
}

std::size_t qubit_index(const ModeRegistry& registry, const OccupationVector& occ,
                        const std::vector<std::string>& arms) {
  const std::size_t n = arms.size();
  std::size_t index = 0;
  for (auto m : occ.photons()) {
    const auto& label = registry.label(m);
    for (std::size_t a = 0; a < n; ++a) {
      if (label.arm == arms[a] && label.pol == Polarization::V) index |= std::size_t{1} << (n - 1 - a);
    }
  }
  return index;
}

AmplitudeState qubit_state(RegistryPtr registry, const std::vector<std::string>& arms,
                           const std::vector<Complex>& amplitudes, const std::string& tag) {
  const std::size_t n = arms.size();
  if (amplitudes.size() != (std::size_t{1} << n)) {
    throw std::invalid_argument("qubit_state: amplitude count must be 2^arms");
  }
  TermMap terms;
  for (std::size_t idx = 0; idx < amplitudes.size(); ++idx) {
    std::vector<std::uint16_t> photons;
    for (std::size_t a = 0; a < n; ++a) {
      const bool v = (idx >> (n - 1 - a)) & 1U;
      photons.push_back(static_cast<std::uint16_t>(
          registry->index_of({arms[a], v ? Polarization::V : Polarization::H, tag})));
    }
    terms.emplace(OccupationVector::from_photons(std::move(photons)), amplitudes[idx]);
  }
  return AmplitudeState::from_terms(std::move(registry), static_cast<int>(n), std::move(terms));
}

QubitOverlap qubit_overlap(const AmplitudeState& state, const std::vector<std::string>& arms,
                           const std::vector<Complex>& target) {
  const std::size_t n = arms.size();
  if (target.size() != (std::size_t{1} << n)) {
    throw std::invalid_argument("qubit_overlap: target size must be 2^arms");
  }
  const auto& reg = state.registry();
  const auto sector = one_photon_per_arm(state, arms);
  const auto slot = arm_slots(reg, arms);

  // Group by the tag carried in each arm; each group is one pure qubit vector.
  std::map<std::vector<std::string>, std::vector<Complex>> groups;
  for (const auto& [occ, amp] : sector.terms()) {
    std::vector<std::string> tags(n);
    for (auto m : occ.photons()) tags[static_cast<std::size_t>(slot[m])] = reg.label(m).tag;
    auto& v = groups[tags];
    if (v.empty()) v.assign(target.size(), Complex{});
    v[qubit_index(reg, occ, arms)] += amp;
  }
  QubitOverlap result;
  for (const auto& [tags, v] : groups) {
    Complex dot{};
    for (std::size_t i = 0; i < v.size(); ++i) {
      dot += std::conj(target[i]) * v[i];
      result.weight += std::norm(v[i]);
    }
    result.overlap += std::norm(dot);
  }
  return result;
}

std::vector<Complex> ghz_amplitudes(int n_qubits) {
  if (n_qubits < 1) throw std::invalid_argument("ghz_amplitudes: need at least one qubit");
  std::vector<Complex> v(std::size_t{1} << n_qubits, Complex{});
  v.front() = std::numbers::sqrt2 / 2.0;
  v.back() = std::numbers::sqrt2 / 2.0;
  return v;
}

}  // namespace catsim::fock
