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

#include <Eigen/Dense>

#include "catsim/fock.hpp"

namespace catsim::optics {

using fock::Complex;
using fock::Polarization;

inline constexpr double kUnitarityTolerance = 1e-12;

/// A polarization port of a spatial arm. Elements act identically on every
/// spectral tag present at the port.
struct Port {
  std::string arm;
  Polarization pol = Polarization::H;

  bool operator==(const Port&) const = default;
};

/// Unitary acting on the creation operators of a set of ports:
/// a_j^dagger -> sum_k U(k, j) b_k^dagger.
class LinearElement {
 public:
  /// Throws std::invalid_argument if the matrix is not square over the ports
  /// or fails the unitarity check.
  LinearElement(std::string name, std::vector<Port> ports, Eigen::MatrixXcd matrix);

  const std::string& name() const { return name_; }
  const std::vector<Port>& ports() const { return ports_; }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  double unitarity_residual() const;

 private:
  std::string name_;
  std::vector<Port> ports_;
  Eigen::MatrixXcd matrix_;
};

double unitarity_residual(const Eigen::MatrixXcd& u);

/// Half-wave plate, fast axis at theta: [[cos 2t, sin 2t], [sin 2t, -cos 2t]]
/// on (H, V). theta = pi/4 swaps H and V.
LinearElement hwp(double theta, const std::string& arm);

/// Quarter-wave plate, fast axis at theta, global phase dropped.
/// qwp(pi/4) sends H to (H + iV)/sqrt(2).
LinearElement qwp(double theta, const std::string& arm);

/// Polarizing beam splitter. H is transmitted (in1 -> out1, in2 -> out2),
/// V is reflected with phase i (in1 -> out2, in2 -> out1). When the output
/// arms equal the input arms the element acts in place on four ports.
LinearElement pbs(const std::string& in1, const std::string& in2, const std::string& out1,
                  const std::string& out2);

/// Phase e^{i phi} on one port.
LinearElement phase_shift(const std::string& arm, Polarization pol, double phi);

/// Polarization-independent beam splitter between two arms (in place),
/// transmissivity cos^2(angle). Reflection carries phase i.
LinearElement beam_splitter(const std::string& arm1, const std::string& arm2, double angle);

/// Maps the +1 eigenstate of cos(t) sx + sin(t) sy, (H + e^{it} V)/sqrt(2),
/// onto the H port (detector D+) and the -1 eigenstate onto the V port (D-).
LinearElement analyzer_basis(double theta, const std::string& arm);

/// The analyzer matrix as a plain 2x2 (H, V) Jones matrix.
Eigen::Matrix2cd analyzer_matrix(double theta);
Eigen::Matrix2cd hwp_matrix(double theta);
Eigen::Matrix2cd qwp_matrix(double theta);

/// Wave-plate angles (QWP first, then HWP, then the PBS) realizing
/// analyzer_basis(theta) up to per-outcome phases.
struct WaveplateAngles {
  double qwp = 0.0;
  double hwp = 0.0;
};
WaveplateAngles analyzer_waveplates(double theta);

/// Rewrites every creation operator of the element's modes through the
/// element matrix. Photon number is preserved. Throws std::invalid_argument
/// if the element's ports are missing from the registry, or present for a
/// spectral tag only partially.
fock::AmplitudeState apply_element(const fock::AmplitudeState& state,
                                   const LinearElement& element);

}  // namespace catsim::optics
