// SPDX-License-Identifier: Apache-2.0
//
// sdsim: one-bit spatial Sigma-Delta massive MIMO simulator
// Copyright (C) 2026 The sdsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "sdsim/types.hpp"

namespace sdsim {

/// LNA and thermal-noise constants.
///
/// sigma_i2 and sigma_u2 are the LNA noise current and voltage variances;
/// the noise resistance R_N = sqrt(sigma_u2 / sigma_i2) is derived from them
/// rather than stored, so the two can never disagree.
struct CircuitParams {
  double R = 50.0;             // LNA input impedance [ohm]
  cdouble rho{0.0, 0.0};       // current/voltage noise correlation
  double temperature = 290.0;  // [K]
  double bandwidth = 20e6;     // [Hz]
  double sigma_i2 = 0.0;       // [A^2]
  double sigma_u2 = 0.0;       // [V^2]
  double boltzmann = 1.380649e-23;

  /// R = 50 ohm, T = 290 K, B = 20 MHz, rho = 0, with the noise variances
  /// sigma_i2 = 2kTB/R and sigma_u2 = 2kTBR (hence R_N = R).
  static CircuitParams reference_default();

  /// Recomputes sigma_i2 and sigma_u2 from R, temperature and bandwidth.
  CircuitParams& derive_noise_variances();

  double kTB() const { return boltzmann * temperature * bandwidth; }
  double noise_resistance() const;

  /// Per-antenna noise power without coupling (Z = R I):
  /// (1/4)[sigma_i2 (R^2 + R_N^2 - 2 R_N R Re(rho)) + 4kTBR].
  double uncoupled_noise_power() const;

  void validate() const;
};

/// Antenna positions along a line, in wavelengths.
class ArrayGeometry {
 public:
  static ArrayGeometry uniform(std::size_t M, double spacing);
  static ArrayGeometry from_positions(std::vector<double> positions);

  std::size_t size() const { return positions_.size(); }
  const std::vector<double>& positions() const { return positions_; }
  double position(std::size_t i) const { return positions_[i]; }

  /// d_ij = |pos_i - pos_j|. Exact multiples of the spacing for uniform arrays.
  double distance(std::size_t i, std::size_t j) const;

  /// Offset of element m from the first element (d_{1m}).
  double offset(std::size_t m) const { return distance(0, m); }

  std::optional<double> uniform_spacing() const { return spacing_; }
  double aperture() const { return positions_.back() - positions_.front(); }

 private:
  ArrayGeometry() = default;
  std::vector<double> positions_;
  std::optional<double> spacing_;
};

inline ArrayGeometry make_ula(std::size_t M, double d) { return ArrayGeometry::uniform(M, d); }

/// Mutual impedance between side-by-side thin half-wave dipoles at distance d
/// (in wavelengths).
cdouble dipole_mutual_impedance(double d);

/// Self impedance of a thin half-wave dipole, 30(gamma + log 2pi - Ci(2pi) + j Si(2pi)).
cdouble dipole_self_impedance();

/// Full M x M impedance matrix Z.
CMatrix mutual_impedance(const ArrayGeometry& geom);

/// T = (I + Z/R)^{-1}. Throws SingularMatrixError when I + Z/R is singular.
CMatrix coupling_matrix(const CMatrix& Z, double R);

/// R_n = T (sigma_i2 (Z Z^H + R_N^2 I - 2 R_N Re(conj(rho) Z)) + 4kTB Re(Z)) T^H,
/// symmetrized. Throws std::runtime_error if the result is not numerically PSD.
CMatrix noise_covariance(const CMatrix& Z, const CMatrix& T, const CircuitParams& cp);

/// Z, T and R_n for one array. Immutable once built.
struct CouplingModel {
  CMatrix Z;
  CMatrix T;
  CMatrix R_n;
  bool coupled = true;

  std::size_t size() const { return static_cast<std::size_t>(T.rows()); }
};

CouplingModel make_coupling_model(const ArrayGeometry& geom, const CircuitParams& cp);

/// The Z = R I reference: T = I/2 and R_n = sigma_n^2 I, built directly.
CouplingModel no_coupling_baseline(std::size_t M, const CircuitParams& cp);

}  // namespace sdsim
