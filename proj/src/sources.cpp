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

#include "catsim/sources.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "catsim/qubits.hpp"

namespace catsim::sources {

using fock::AmplitudeState;
using fock::ModeLabel;
using fock::Polarization;

double PdcSource::pair_amplitude() const { return std::sqrt(pair_probability); }

void PdcSource::validate() const {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (arm_a.empty() || arm_b.empty() || arm_a == arm_b) {
    throw std::invalid_argument("source arms must be two distinct non-empty names");
  }
  if (!in_unit(pair_probability)) throw std::invalid_argument("pair_probability outside [0, 1]");
  if (!in_unit(eo_overlap)) throw std::invalid_argument("eo_overlap outside [0, 1]");
  if (!in_unit(path_overlap)) throw std::invalid_argument("path_overlap outside [0, 1]");
  if (!in_unit(fusion_visibility)) throw std::invalid_argument("fusion_visibility outside [0, 1]");
  if (truncation_pairs < 1) throw std::invalid_argument("truncation_pairs must be >= 1");
}

std::string photon_tag(const PdcSource& source, PhotonRole role, bool reflected_term,
                       const SpectralVariant& variant) {
  std::string tag = (role == PhotonRole::extraordinary || variant.eo_matched) ? kExtraordinaryTag
                                                                              : kOrdinaryTag;
  if (variant.private_spectrum) tag += "#" + source.arm_a;
  if (reflected_term && variant.late_reflection) tag += "@late";
  return tag;
}

std::vector<std::string> source_tags(const PdcSource& source, const SpectralVariant& variant) {
  std::vector<std::string> tags;
  for (bool reflected : {false, true}) {
    for (auto role : {PhotonRole::extraordinary, PhotonRole::ordinary}) {
      auto t = photon_tag(source, role, reflected, variant);
      if (std::find(tags.begin(), tags.end(), t) == tags.end()) tags.push_back(std::move(t));
    }
  }
  return tags;
}

namespace {

fock::RegistryPtr source_registry(const PdcSource& source, const SpectralVariant& variant) {
  return std::make_shared<const fock::ModeRegistry>(
      fock::ModeRegistry::product({source.arm_a, source.arm_b}, source_tags(source, variant)));
}

// Applies sqrt(p) / n * (A + B) / sqrt(2) to the (n-1)-pair sector.
AmplitudeState next_sector(const AmplitudeState& prev, const PdcSource& source, int n,
                           const SpectralVariant& variant) {
  const ModeLabel a_he{source.arm_a, Polarization::H,
                       photon_tag(source, PhotonRole::extraordinary, false, variant)};
  const ModeLabel b_vo{source.arm_b, Polarization::V,
                       photon_tag(source, PhotonRole::ordinary, false, variant)};
  const ModeLabel a_vo{source.arm_a, Polarization::V,
                       photon_tag(source, PhotonRole::ordinary, true, variant)};
  const ModeLabel b_he{source.arm_b, Polarization::H,
                       photon_tag(source, PhotonRole::extraordinary, true, variant)};
  const double scale = source.pair_amplitude() / (n * std::numbers::sqrt2);
  auto transmitted = fock::apply_creation(fock::apply_creation(prev, a_he, scale), b_vo);
  auto reflected = fock::apply_creation(fock::apply_creation(prev, a_vo, scale), b_he);
  return fock::add(transmitted, reflected);
}

}  // namespace

AmplitudeState pdc_sector(const PdcSource& source, int n_pairs, const SpectralVariant& variant) {
  source.validate();
  if (n_pairs < 0) throw std::invalid_argument("pdc_sector: negative pair count");
  auto state = fock::vacuum(source_registry(source, variant), 2 * n_pairs);
  for (int n = 1; n <= n_pairs; ++n) state = next_sector(state, source, n, variant);
  return state;
}

AmplitudeState pdc_emit(const PdcSource& source, int truncation, const SpectralVariant& variant) {
  source.validate();
  if (2 * source.truncation_pairs > truncation) {
    throw std::invalid_argument("pdc_emit: truncation_pairs exceeds the state's photon budget");
  }
  auto sector = fock::vacuum(source_registry(source, variant), truncation);
  auto total = sector;
  for (int n = 1; n <= source.truncation_pairs; ++n) {
    sector = next_sector(sector, source, n, variant);
    total = fock::add(total, sector);
  }
  return total.normalized();
}

std::vector<optics::LinearElement> synthesizer_elements(const PdcSource& source) {
  return {optics::hwp(std::numbers::pi / 4.0, source.arm_b),
          optics::pbs(source.arm_a, source.arm_b, source.arm_a, source.arm_b),
          optics::phase_shift(source.arm_b, Polarization::V, std::numbers::pi)};
}

SynthesizerOutput bell_synthesizer(const PdcSource& source) {
  source.validate();
  const auto elements = synthesizer_elements(source);
  auto run = [&](const SpectralVariant& variant) {
    auto s = pdc_emit(source, 2 * source.truncation_pairs, variant);
    for (const auto& e : elements) s = optics::apply_element(s, e);
    return s;
  };

  const std::vector<std::string> arms{source.arm_a, source.arm_b};
  const auto phi_plus = fock::ghz_amplitudes(2);
  SynthesizerOutput out{run({}), {}, 0.0};
  double overlap = 0.0, weight = 0.0;
  auto accumulate = [&](double w, AmplitudeState s) {
    if (w <= 0.0) return;
    const auto q = fock::qubit_overlap(s, arms, phi_plus);
    overlap += w * q.overlap;
    weight += w * q.weight;
    out.ensemble.emplace_back(w, std::move(s));
  };
  accumulate(source.path_overlap, out.state);
  SpectralVariant late;
  late.late_reflection = true;
  if (source.path_overlap < 1.0) accumulate(1.0 - source.path_overlap, run(late));
  out.heralded_fidelity = weight > 0.0 ? overlap / weight : 0.0;
  return out;
}

PdcSource set_pair_distinguishability(const PdcSource& source, double overlap,
                                      Interference which) {
  if (!(overlap >= 0.0 && overlap <= 1.0)) {
    throw std::invalid_argument("overlap must lie in [0, 1]");
  }
  PdcSource s = source;
  if (which == Interference::synthesizer) {
    s.path_overlap = overlap;
  } else {
    s.fusion_visibility = overlap;
  }
  return s;
}

double shared_spectrum_probability(const PdcSource& source) {
  return std::sqrt(source.fusion_visibility);
}

std::vector<EnsembleMember> spectral_ensemble(const std::vector<PdcSource>& sources,
                                              bool eo_interference) {
  // Per-source alternatives with their probabilities.
  std::vector<std::vector<std::pair<double, SpectralVariant>>> options;
  for (const auto& s : sources) {
    s.validate();
    std::vector<std::pair<double, SpectralVariant>> opts;
    const double shared = shared_spectrum_probability(s);
    for (bool priv : {false, true}) {
      for (bool late : {false, true}) {
        for (bool matched : {false, true}) {
          if (matched && !eo_interference) continue;
          double w = (priv ? 1.0 - shared : shared) * (late ? 1.0 - s.path_overlap : s.path_overlap);
          if (eo_interference) w *= matched ? s.eo_overlap : 1.0 - s.eo_overlap;
          if (w > 0.0) opts.emplace_back(w, SpectralVariant{priv, late, matched});
        }
      }
    }
    options.push_back(std::move(opts));
  }

  std::vector<EnsembleMember> members{{1.0, {}}};
  for (const auto& opts : options) {
    std::vector<EnsembleMember> next;
    next.reserve(members.size() * opts.size());
    for (const auto& m : members) {
      for (const auto& [w, v] : opts) {
        EnsembleMember e = m;
        e.weight *= w;
        e.variants.push_back(v);
        next.push_back(std::move(e));
      }
    }
    members = std::move(next);
  }
  return members;
}

double hom_visibility(const PdcSource& a, const PdcSource& b) {
  a.validate();
  b.validate();
  const std::string x = "hom_x", y = "hom_y";
  double coincidence = 0.0;
  for (bool priv_a : {false, true}) {
    for (bool priv_b : {false, true}) {
      const double pa = shared_spectrum_probability(a), pb = shared_spectrum_probability(b);
      const double w = (priv_a ? 1.0 - pa : pa) * (priv_b ? 1.0 - pb : pb);
      if (w <= 0.0) continue;
      SpectralVariant va, vb;
      va.private_spectrum = priv_a;
      vb.private_spectrum = priv_b;
      const auto ta = photon_tag(a, PhotonRole::extraordinary, false, va);
      auto tb = photon_tag(b, PhotonRole::extraordinary, false, vb);
      // Sources with identical arm names would collide on private tags.
      if (priv_b && tb == ta) tb += "'";
      std::vector<std::string> tags{ta};
      if (tb != ta) tags.push_back(tb);
      auto reg = std::make_shared<const fock::ModeRegistry>(fock::ModeRegistry::product({x, y}, tags));
      auto s = fock::vacuum(reg, 2);
      s = fock::apply_creation(s, {x, Polarization::H, ta});
      s = fock::apply_creation(s, {y, Polarization::H, tb});
      s = optics::apply_element(s, optics::beam_splitter(x, y, std::numbers::pi / 4.0));
      double pc = 0.0;
      for (const auto& [occ, amp] : s.terms()) {
        int nx = 0, ny = 0;
        for (auto m : occ.photons()) (reg->label(m).arm == x ? nx : ny)++;
        if (nx == 1 && ny == 1) pc += std::norm(amp);
      }
      coincidence += w * pc;
    }
  }
  return 1.0 - coincidence / 0.5;
}

}  // namespace catsim::sources
