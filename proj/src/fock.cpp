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

#include "catsim/fock.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace catsim::fock {

char to_char(Polarization pol) { return pol == Polarization::H ? 'H' : 'V'; }

std::string to_string(const ModeLabel& label) {
  return label.arm + "/" + to_char(label.pol) + "/" + label.tag;
}

ModeRegistry::ModeRegistry(std::vector<ModeLabel> modes) : modes_(std::move(modes)) {
  if (modes_.size() > std::numeric_limits<std::uint16_t>::max()) {
    throw std::invalid_argument("mode registry too large");
  }
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    if (!index_.emplace(modes_[i], i).second) {
      throw std::invalid_argument("duplicate mode label " + to_string(modes_[i]));
    }
  }
}

ModeRegistry ModeRegistry::product(const std::vector<std::string>& arms,
                                   const std::vector<std::string>& tags) {
  std::vector<ModeLabel> modes;
  modes.reserve(arms.size() * tags.size() * 2);
  for (const auto& arm : arms) {
    for (auto pol : {Polarization::H, Polarization::V}) {
      for (const auto& tag : tags) modes.push_back({arm, pol, tag});
    }
  }
  return ModeRegistry(std::move(modes));
}

std::optional<std::size_t> ModeRegistry::find(const ModeLabel& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t ModeRegistry::index_of(const ModeLabel& label) const {
  auto idx = find(label);
  if (!idx) throw std::invalid_argument("unregistered mode " + to_string(label));
  return *idx;
}

namespace {

template <class Get>
std::vector<std::string> distinct_in_order(std::span<const ModeLabel> modes, Get get) {
  std::vector<std::string> out;
  for (const auto& m : modes) {
    const std::string& v = get(m);
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  return out;
}

}  // namespace

std::vector<std::string> ModeRegistry::arms() const {
  return distinct_in_order(modes_, [](const ModeLabel& m) -> const std::string& { return m.arm; });
}

std::vector<std::string> ModeRegistry::tags() const {
  return distinct_in_order(modes_, [](const ModeLabel& m) -> const std::string& { return m.tag; });
}

RegistryPtr make_registry(std::vector<ModeLabel> modes) {
  return std::make_shared<const ModeRegistry>(std::move(modes));
}

// ---------------------------------------------------------------------------

OccupationVector OccupationVector::from_counts(std::span<const int> counts) {
  OccupationVector occ;
  for (std::size_t m = 0; m < counts.size(); ++m) {
    if (counts[m] < 0) throw std::invalid_argument("negative occupation");
    occ.photons_.insert(occ.photons_.end(), static_cast<std::size_t>(counts[m]),
                        static_cast<std::uint16_t>(m));
  }
  return occ;
}

OccupationVector OccupationVector::from_photons(std::vector<std::uint16_t> photons) {
  std::sort(photons.begin(), photons.end());
  OccupationVector occ;
  occ.photons_ = std::move(photons);
  return occ;
}

int OccupationVector::count(std::size_t mode) const {
  auto [lo, hi] = std::equal_range(photons_.begin(), photons_.end(),
                                   static_cast<std::uint16_t>(mode));
  return static_cast<int>(hi - lo);
}

std::vector<int> OccupationVector::counts(std::size_t n_modes) const {
  std::vector<int> out(n_modes, 0);
  for (auto m : photons_) {
    if (m >= n_modes) throw std::out_of_range("occupation refers to mode outside registry");
    ++out[m];
  }
  return out;
}

OccupationVector OccupationVector::with_added(std::size_t mode) const {
  OccupationVector occ = *this;
  auto m = static_cast<std::uint16_t>(mode);
  occ.photons_.insert(std::upper_bound(occ.photons_.begin(), occ.photons_.end(), m), m);
  return occ;
}

std::size_t OccupationHash::operator()(const OccupationVector& occ) const noexcept {
  // FNV-1a over the photon list.
  std::uint64_t h = 1469598103934665603ULL;
  for (auto m : occ.photons()) {
    h ^= m;
    h *= 1099511628211ULL;
  }
  h ^= static_cast<std::uint64_t>(occ.total()) << 32;
  return static_cast<std::size_t>(h);
}

// ---------------------------------------------------------------------------

AmplitudeState::AmplitudeState(RegistryPtr registry, int truncation, double prune_epsilon)
    : registry_(std::move(registry)), truncation_(truncation), prune_epsilon_(prune_epsilon) {
  if (!registry_) throw std::invalid_argument("state requires a registry");
  if (truncation_ < 0) throw std::invalid_argument("truncation must be non-negative");
}

AmplitudeState AmplitudeState::from_terms(RegistryPtr registry, int truncation, TermMap terms,
                                          double prune_epsilon) {
  AmplitudeState s(std::move(registry), truncation, prune_epsilon);
  const auto n_modes = s.registry_->size();
  for (auto it = terms.begin(); it != terms.end();) {
    const auto& occ = it->first;
    if (occ.total() > truncation || std::abs(it->second) < prune_epsilon) {
      it = terms.erase(it);
      continue;
    }
    if (!occ.photons().empty() && occ.photons().back() >= n_modes) {
      throw std::out_of_range("term refers to mode outside registry");
    }
    ++it;
  }
  s.terms_ = std::move(terms);
  return s;
}

Complex AmplitudeState::amplitude(const OccupationVector& occ) const {
  auto it = terms_.find(occ);
  return it == terms_.end() ? Complex{} : it->second;
}

double AmplitudeState::norm_squared() const {
  double total = 0.0;
  for (const auto& [occ, amp] : terms_) total += std::norm(amp);
  return total;
}

AmplitudeState AmplitudeState::normalized() const {
  const double n2 = norm_squared();
  if (n2 <= 0.0) throw std::domain_error("cannot normalize a zero state");
  return scaled(1.0 / std::sqrt(n2));
}

AmplitudeState AmplitudeState::scaled(Complex factor) const {
  TermMap out;
  out.reserve(terms_.size());
  for (const auto& [occ, amp] : terms_) out.emplace(occ, amp * factor);
  return from_terms(registry_, truncation_, std::move(out), prune_epsilon_);
}

std::vector<std::pair<OccupationVector, Complex>> AmplitudeState::sorted_terms() const {
  std::vector<std::pair<OccupationVector, Complex>> out(terms_.begin(), terms_.end());
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

AmplitudeState vacuum(RegistryPtr registry, int truncation) {
  TermMap terms;
  terms.emplace(OccupationVector{}, Complex{1.0, 0.0});
  return AmplitudeState::from_terms(std::move(registry), truncation, std::move(terms));
}

AmplitudeState apply_creation(const AmplitudeState& state, const ModeLabel& mode,
                              Complex coeff) {
  const std::size_t idx = state.registry().index_of(mode);
  TermMap out;
  out.reserve(state.size());
  for (const auto& [occ, amp] : state.terms()) {
    if (occ.total() + 1 > state.truncation()) continue;
    const double bosonic = std::sqrt(static_cast<double>(occ.count(idx) + 1));
    out[occ.with_added(idx)] += amp * coeff * bosonic;
  }
  return AmplitudeState::from_terms(state.registry_ptr(), state.truncation(), std::move(out),
                                    state.prune_epsilon());
}

Complex inner_product(const AmplitudeState& a, const AmplitudeState& b) {
  if (!(a.registry() == b.registry())) {
    throw std::invalid_argument("inner product of states over different registries");
  }
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  Complex total{};
  for (const auto& [occ, amp] : small.terms()) {
    auto it = large.terms().find(occ);
    if (it == large.terms().end()) continue;
    total += (&small == &a) ? std::conj(amp) * it->second : std::conj(it->second) * amp;
  }
  return total;
}

AmplitudeState tensor_product(const AmplitudeState& a, const AmplitudeState& b,
                              std::optional<int> cap) {
  std::vector<ModeLabel> modes(a.registry().modes().begin(), a.registry().modes().end());
  for (const auto& m : b.registry().modes()) {
    if (a.registry().find(m)) {
      throw std::invalid_argument("tensor product of overlapping registries: " + to_string(m));
    }
    modes.push_back(m);
  }
  auto reg = make_registry(std::move(modes));
  int truncation = a.truncation() + b.truncation();
  if (cap) truncation = std::min(truncation, *cap);

  const auto offset = static_cast<std::uint16_t>(a.registry().size());
  TermMap out;
  out.reserve(a.size() * b.size());
  for (const auto& [oa, ampa] : a.terms()) {
    for (const auto& [ob, ampb] : b.terms()) {
      if (oa.total() + ob.total() > truncation) continue;
      std::vector<std::uint16_t> photons(oa.photons().begin(), oa.photons().end());
      for (auto m : ob.photons()) photons.push_back(static_cast<std::uint16_t>(m + offset));
      out[OccupationVector::from_photons(std::move(photons))] += ampa * ampb;
    }
  }
  return AmplitudeState::from_terms(std::move(reg), truncation, std::move(out),
                                    std::min(a.prune_epsilon(), b.prune_epsilon()));
}

AmplitudeState embed(const AmplitudeState& state, RegistryPtr target) {
  const auto& src = state.registry();
  std::vector<std::uint16_t> remap(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    remap[i] = static_cast<std::uint16_t>(target->index_of(src.label(i)));
  }
  TermMap out;
  out.reserve(state.size());
  for (const auto& [occ, amp] : state.terms()) {
    std::vector<std::uint16_t> photons;
    photons.reserve(occ.photons().size());
    for (auto m : occ.photons()) photons.push_back(remap[m]);
    out.emplace(OccupationVector::from_photons(std::move(photons)), amp);
  }
  return AmplitudeState::from_terms(std::move(target), state.truncation(), std::move(out),
                                    state.prune_epsilon());
}

AmplitudeState add(const AmplitudeState& a, const AmplitudeState& b) {
  if (!(a.registry() == b.registry())) {
    throw std::invalid_argument("sum of states over different registries");
  }
  TermMap out = a.terms();
  for (const auto& [occ, amp] : b.terms()) out[occ] += amp;
  return AmplitudeState::from_terms(a.registry_ptr(), std::max(a.truncation(), b.truncation()),
                                    std::move(out), a.prune_epsilon());
}

// ---------------------------------------------------------------------------

namespace {

bool has_space(const std::string& s) {
  return s.empty() || s.find_first_of(" \t\r\n,") != std::string::npos;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_state(std::ostream& out, const AmplitudeState& state) {
  const auto& reg = state.registry();
  out << "# truncation " << state.truncation() << '\n';
  for (const auto& m : reg.modes()) {
    if (has_space(m.arm) || has_space(m.tag)) {
      throw std::invalid_argument("mode label not serializable: " + to_string(m));
    }
    out << "# mode " << m.arm << ' ' << to_char(m.pol) << ' ' << m.tag << '\n';
  }
  for (const auto& [occ, amp] : state.sorted_terms()) {
    const auto counts = occ.counts(reg.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
      if (i) out << ',';
      out << counts[i];
    }
    out << ' ' << format_double(amp.real()) << ' ' << format_double(amp.imag()) << '\n';
  }
}

AmplitudeState read_state(std::istream& in) {
  std::string line;
  int truncation = -1;
  std::vector<ModeLabel> modes;
  TermMap terms;
  RegistryPtr reg;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw std::runtime_error("state line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line[0] == '#') {
      std::string hash, key;
      ls >> hash >> key;
      if (key == "truncation") {
        if (!(ls >> truncation)) fail("bad truncation");
      } else if (key == "mode") {
        std::string arm, pol, tag;
        if (!(ls >> arm >> pol >> tag) || (pol != "H" && pol != "V")) fail("bad mode");
        modes.push_back({arm, pol == "H" ? Polarization::H : Polarization::V, tag});
      } else {
        fail("unknown header " + key);
      }
      continue;
    }
    if (!reg) reg = make_registry(modes);
    std::vector<std::string> fields;
    for (std::string f; ls >> f;) fields.push_back(f);
    // An empty registry serializes with no occupation field at all.
    if (fields.size() == 2) fields.insert(fields.begin(), std::string{});
    if (fields.size() != 3) fail("expected 'counts re im'");
    double re = 0.0, im = 0.0;
    try {
      re = std::stod(fields[1]);
      im = std::stod(fields[2]);
    } catch (const std::exception&) {
      fail("bad amplitude");
    }
    std::vector<int> counts;
    std::istringstream cs(fields[0]);
    std::string item;
    while (std::getline(cs, item, ',')) counts.push_back(std::stoi(item));
    if (counts.size() != reg->size()) fail("occupation length does not match registry");
    terms[OccupationVector::from_counts(counts)] += Complex{re, im};
  }
  if (truncation < 0) fail("missing truncation header");
  if (!reg) reg = make_registry(modes);
  return AmplitudeState::from_terms(std::move(reg), truncation, std::move(terms));
}

}  // namespace catsim::fock
