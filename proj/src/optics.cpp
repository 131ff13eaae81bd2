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

#include "catsim/optics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace catsim::optics {

using fock::AmplitudeState;
using fock::OccupationVector;
using fock::TermMap;

namespace {

constexpr Complex kI{0.0, 1.0};

std::vector<Port> hv_ports(const std::string& arm) {
  return {{arm, Polarization::H}, {arm, Polarization::V}};
}

}  // namespace

double unitarity_residual(const Eigen::MatrixXcd& u) {
  const Eigen::MatrixXcd d =
      u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols());
  return d.cwiseAbs().maxCoeff();
}

LinearElement::LinearElement(std::string name, std::vector<Port> ports, Eigen::MatrixXcd matrix)
    : name_(std::move(name)), ports_(std::move(ports)), matrix_(std::move(matrix)) {
  const auto n = static_cast<Eigen::Index>(ports_.size());
  if (matrix_.rows() != n || matrix_.cols() != n) {
    throw std::invalid_argument(name_ + ": matrix dimension does not match port count");
  }
  for (std::size_t i = 0; i < ports_.size(); ++i) {
    for (std::size_t j = i + 1; j < ports_.size(); ++j) {
      if (ports_[i] == ports_[j]) throw std::invalid_argument(name_ + ": repeated port");
    }
  }
  if (n > 0 && optics::unitarity_residual(matrix_) >= kUnitarityTolerance) {
    throw std::invalid_argument(name_ + ": matrix is not unitary");
  }
}

double LinearElement::unitarity_residual() const {
  return matrix_.size() == 0 ? 0.0 : optics::unitarity_residual(matrix_);
}

Eigen::Matrix2cd hwp_matrix(double theta) {
  const double c = std::cos(2 * theta), s = std::sin(2 * theta);
  Eigen::Matrix2cd m;
  m << c, s, s, -c;
  return m;
}

Eigen::Matrix2cd qwp_matrix(double theta) {
  // R(theta) diag(1, -i) R(-theta).
  const double c = std::cos(theta), s = std::sin(theta);
  Eigen::Matrix2cd m;
  m << c * c - kI * s * s, (1.0 + kI) * s * c, (1.0 + kI) * s * c, s * s - kI * c * c;
  return m;
}

Eigen::Matrix2cd analyzer_matrix(double theta) {
  const Complex e = std::exp(-kI * theta);
  const double r = std::numbers::sqrt2 / 2.0;
  Eigen::Matrix2cd m;
  m << r, r * e, r, -r * e;
  return m;
}

LinearElement hwp(double theta, const std::string& arm) {
  return LinearElement("hwp", hv_ports(arm), hwp_matrix(theta));
}

LinearElement qwp(double theta, const std::string& arm) {
  return LinearElement("qwp", hv_ports(arm), qwp_matrix(theta));
}

LinearElement analyzer_basis(double theta, const std::string& arm) {
  return LinearElement("analyzer", hv_ports(arm), analyzer_matrix(theta));
}

WaveplateAngles analyzer_waveplates(double theta) {
  // A QWP at 45 degrees turns (H + e^{it} V)/sqrt(2) into linear
  // polarization at pi/4 + t/2; the HWP then rotates that onto H.
  return {std::numbers::pi / 4.0, std::numbers::pi / 8.0 + theta / 4.0};
}

LinearElement pbs(const std::string& in1, const std::string& in2, const std::string& out1,
                  const std::string& out2) {
  if (in1 == in2 || out1 == out2) throw std::invalid_argument("pbs: arms must differ");
  const bool in_place = (in1 == out1 && in2 == out2);
  if (in_place) {
    // Ports: in1.H, in1.V, in2.H, in2.V.
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
    m(0, 0) = 1.0;  // H in1 -> H out1
    m(2, 2) = 1.0;  // H in2 -> H out2
    m(3, 1) = kI;   // V in1 -> V out2
    m(1, 3) = kI;   // V in2 -> V out1
    return LinearElement("pbs", {{in1, Polarization::H}, {in1, Polarization::V},
                                 {in2, Polarization::H}, {in2, Polarization::V}},
                         std::move(m));
  }
  for (const auto& a : {in1, in2}) {
    if (a == out1 || a == out2) {
      throw std::invalid_argument("pbs: outputs must be either the inputs or disjoint from them");
    }
  }
  // Ports 0..3 inputs, 4..7 outputs; the output ports feed back into the
  // inputs so that the full matrix stays a permutation with phases.
  std::vector<Port> ports = {{in1, Polarization::H},  {in1, Polarization::V},
                             {in2, Polarization::H},  {in2, Polarization::V},
                             {out1, Polarization::H}, {out1, Polarization::V},
                             {out2, Polarization::H}, {out2, Polarization::V}};
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(8, 8);
  m(4, 0) = 1.0;
  m(6, 2) = 1.0;
  m(7, 1) = kI;
  m(5, 3) = kI;
  m(0, 4) = 1.0;
  m(2, 6) = 1.0;
  m(1, 7) = -kI;
  m(3, 5) = -kI;
  return LinearElement("pbs", std::move(ports), std::move(m));
}

LinearElement phase_shift(const std::string& arm, Polarization pol, double phi) {
  Eigen::MatrixXcd m(1, 1);
  m(0, 0) = std::exp(kI * phi);
  return LinearElement("phase", {{arm, pol}}, std::move(m));
}

LinearElement beam_splitter(const std::string& arm1, const std::string& arm2, double angle) {
  if (arm1 == arm2) throw std::invalid_argument("beam_splitter: arms must differ");
  const double t = std::cos(angle), r = std::sin(angle);
  // Ports: arm1.H, arm1.V, arm2.H, arm2.V.
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
  for (int p = 0; p < 2; ++p) {
    m(p, p) = t;
    m(2 + p, 2 + p) = t;
    m(2 + p, p) = kI * r;
    m(p, 2 + p) = kI * r;
  }
  return LinearElement("beam_splitter", {{arm1, Polarization::H}, {arm1, Polarization::V},
                                         {arm2, Polarization::H}, {arm2, Polarization::V}},
                       std::move(m));
}

// ---------------------------------------------------------------------------

namespace {

struct ColumnEntry {
  std::uint16_t mode;
  Complex coeff;
};

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// sqrt(prod n_k!) for a sorted photon list.
double sqrt_factorial_product(std::span<const std::uint16_t> photons) {
  double prod = 1.0;
  std::size_t i = 0;
  while (i < photons.size()) {
    std::size_t j = i;
    while (j < photons.size() && photons[j] == photons[i]) ++j;
    prod *= factorial(static_cast<int>(j - i));
    i = j;
  }
  return std::sqrt(prod);
}

using Expansion = std::vector<std::pair<std::vector<std::uint16_t>, Complex>>;

// Expands prod_j (sum_k U_kj b_k^dagger) over the affected photons and
// converts monomial coefficients into normalized Fock amplitudes.
Expansion expand(std::span<const std::uint16_t> affected,
                 const std::vector<std::vector<ColumnEntry>>& columns) {
  TermMap partial;
  partial.emplace(OccupationVector{}, Complex{1.0, 0.0});
  for (auto j : affected) {
    TermMap next;
    next.reserve(partial.size() * columns[j].size());
    for (const auto& [occ, c] : partial) {
      for (const auto& entry : columns[j]) next[occ.with_added(entry.mode)] += c * entry.coeff;
    }
    partial = std::move(next);
  }
  const double in_norm = sqrt_factorial_product(affected);
  Expansion out;
  out.reserve(partial.size());
  for (const auto& [occ, c] : partial) {
    if (c == Complex{}) continue;
    const double out_norm = sqrt_factorial_product(occ.photons());
    out.emplace_back(std::vector<std::uint16_t>(occ.photons().begin(), occ.photons().end()),
                     c * out_norm / in_norm);
  }
  return out;
}

}  // namespace

AmplitudeState apply_element(const AmplitudeState& state, const LinearElement& element) {
  const auto& reg = state.registry();
  const auto& ports = element.ports();
  const auto& u = element.matrix();
  std::vector<std::vector<ColumnEntry>> columns(reg.size());
  std::vector<char> affected_mode(reg.size(), 0);

  bool any_tag = false;
  for (const auto& tag : reg.tags()) {
    std::vector<std::optional<std::size_t>> idx;
    std::size_t present = 0;
    for (const auto& p : ports) {
      idx.push_back(reg.find({p.arm, p.pol, tag}));
      if (idx.back()) ++present;
    }
    if (present == 0) continue;
    if (present != ports.size()) {
      throw std::invalid_argument(element.name() + ": spectral tag '" + tag +
                                  "' is registered on only some of the element's ports");
    }
    any_tag = true;
    for (std::size_t j = 0; j < ports.size(); ++j) {
      const auto mj = *idx[j];
      affected_mode[mj] = 1;
      for (std::size_t k = 0; k < ports.size(); ++k) {
        const Complex c = u(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j));
        if (c != Complex{}) columns[mj].push_back({static_cast<std::uint16_t>(*idx[k]), c});
      }
    }
  }
  if (!any_tag && !ports.empty()) {
    throw std::invalid_argument(element.name() + ": element ports are not registered (arm '" +
                                ports.front().arm + "')");
  }

  std::unordered_map<OccupationVector, Expansion, fock::OccupationHash> cache;
  TermMap out;
  out.reserve(state.size() * 2);
  std::vector<std::uint16_t> kept, hit, merged;
  for (const auto& [occ, amp] : state.terms()) {
    kept.clear();
    hit.clear();
    for (auto m : occ.photons()) (affected_mode[m] ? hit : kept).push_back(m);
    if (hit.empty()) {
      out[occ] += amp;
      continue;
    }
    auto key = OccupationVector::from_photons(hit);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, expand(hit, columns)).first;
    for (const auto& [photons, coeff] : it->second) {
      merged.clear();
      std::merge(kept.begin(), kept.end(), photons.begin(), photons.end(),
                 std::back_inserter(merged));
      out[OccupationVector::from_photons(merged)] += amp * coeff;
    }
  }
  return AmplitudeState::from_terms(state.registry_ptr(), state.truncation(), std::move(out),
                                    state.prune_epsilon());
}

}  // namespace catsim::optics
