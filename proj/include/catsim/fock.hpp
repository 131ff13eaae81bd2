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

#include <complex>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace catsim::fock {

using Complex = std::complex<double>;

inline constexpr double kDefaultPruneEpsilon = 1e-15;

enum class Polarization : std::uint8_t { H = 0, V = 1 };

char to_char(Polarization pol);

/// One distinguishable single-photon mode: spatial arm, polarization and
/// spectral tag. Photons that share all three are indistinguishable.
struct ModeLabel {
  std::string arm;
  Polarization pol = Polarization::H;
  std::string tag;

  auto operator<=>(const ModeLabel&) const = default;
  bool operator==(const ModeLabel&) const = default;
};

std::string to_string(const ModeLabel& label);

/// Ordered, immutable catalog of modes. Mode indices are positions in the
/// catalog; lookups by label are bijective.
class ModeRegistry {
 public:
  ModeRegistry() = default;
  explicit ModeRegistry(std::vector<ModeLabel> modes);

  /// Full product arms x {H, V} x tags, arm-major, then polarization, then tag.
  static ModeRegistry product(const std::vector<std::string>& arms,
                              const std::vector<std::string>& tags);

  std::size_t size() const { return modes_.size(); }
  const ModeLabel& label(std::size_t index) const { return modes_.at(index); }
  std::span<const ModeLabel> modes() const { return modes_; }

  std::optional<std::size_t> find(const ModeLabel& label) const;
  /// Throws std::invalid_argument for unregistered labels.
  std::size_t index_of(const ModeLabel& label) const;

  /// Distinct arms and tags in order of first appearance.
  std::vector<std::string> arms() const;
  std::vector<std::string> tags() const;

  bool operator==(const ModeRegistry& other) const { return modes_ == other.modes_; }

 private:
  std::vector<ModeLabel> modes_;
  std::map<ModeLabel, std::size_t> index_;
};

using RegistryPtr = std::shared_ptr<const ModeRegistry>;

RegistryPtr make_registry(std::vector<ModeLabel> modes);

/// Occupation numbers of one Fock basis term. Stored as the sorted multiset
/// of occupied mode indices, which keeps terms small when the registry is
/// large and the photon number is not.
class OccupationVector {
 public:
  OccupationVector() = default;
  /// From dense per-mode counts.
  static OccupationVector from_counts(std::span<const int> counts);
  /// From an unsorted list of mode indices, one entry per photon.
  static OccupationVector from_photons(std::vector<std::uint16_t> photons);

  int total() const { return static_cast<int>(photons_.size()); }
  int count(std::size_t mode) const;
  std::vector<int> counts(std::size_t n_modes) const;
  std::span<const std::uint16_t> photons() const { return photons_; }

  OccupationVector with_added(std::size_t mode) const;

  auto operator<=>(const OccupationVector&) const = default;
  bool operator==(const OccupationVector&) const = default;

 private:
  std::vector<std::uint16_t> photons_;
};

struct OccupationHash {
  std::size_t operator()(const OccupationVector& occ) const noexcept;
};

using TermMap = std::unordered_map<OccupationVector, Complex, OccupationHash>;

/// Sparse superposition of Fock terms over a fixed registry, truncated at a
/// maximum total photon number.
class AmplitudeState {
 public:
  AmplitudeState(RegistryPtr registry, int truncation,
                 double prune_epsilon = kDefaultPruneEpsilon);

  /// Drops terms above the truncation and below the prune epsilon.
  static AmplitudeState from_terms(RegistryPtr registry, int truncation, TermMap terms,
                                   double prune_epsilon = kDefaultPruneEpsilon);

  const ModeRegistry& registry() const { return *registry_; }
  const RegistryPtr& registry_ptr() const { return registry_; }
  int truncation() const { return truncation_; }
  double prune_epsilon() const { return prune_epsilon_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  Complex amplitude(const OccupationVector& occ) const;
  double norm_squared() const;
  AmplitudeState normalized() const;
  AmplitudeState scaled(Complex factor) const;

  /// Terms ordered by occupation, for reproducible output.
  std::vector<std::pair<OccupationVector, Complex>> sorted_terms() const;

 private:
  RegistryPtr registry_;
  int truncation_ = 0;
  double prune_epsilon_ = kDefaultPruneEpsilon;
  TermMap terms_;
};

AmplitudeState vacuum(RegistryPtr registry, int truncation);

/// Applies coeff * a^dagger on `mode`. Terms that would exceed the
/// truncation are dropped, so the result may be unnormalized.
AmplitudeState apply_creation(const AmplitudeState& state, const ModeLabel& mode,
                              Complex coeff = 1.0);

/// <a|b>, conjugate-linear in `a`.
Complex inner_product(const AmplitudeState& a, const AmplitudeState& b);

/// Combined registry lists a's modes then b's. Truncation is the sum of both
/// budgets, capped by `cap` when given.
AmplitudeState tensor_product(const AmplitudeState& a, const AmplitudeState& b,
                              std::optional<int> cap = std::nullopt);

/// Re-expresses `state` over a registry that contains every one of its modes.
AmplitudeState embed(const AmplitudeState& state, RegistryPtr target);

AmplitudeState add(const AmplitudeState& a, const AmplitudeState& b);

// Line-oriented text form: '#'-prefixed header lines carrying the registry
// and truncation, then one line per term "n0,n1,...,nK re im".
void write_state(std::ostream& out, const AmplitudeState& state);
AmplitudeState read_state(std::istream& in);

}  // namespace catsim::fock
