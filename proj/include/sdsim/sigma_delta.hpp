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

#include <string>
#include <string_view>

#include "sdsim/types.hpp"

namespace sdsim {

enum class Architecture { sigma_delta_1bit, standard_1bit, infinite_resolution };

std::string_view to_string(Architecture a);
Architecture parse_architecture(std::string_view s);

inline constexpr double kDefaultZeta = 1.13;

/// zeta * pi/2 - 1: error power per unit input power of one one-bit stage.
double stage_error_factor(double zeta);

/// phi = 2 pi d sin(theta0); d in wavelengths, theta0 in degrees.
double steering_phase(double theta0_deg, double d);

struct ShapingMatrices {
  CMatrix U;      // [U]_mn = e^{-j(m-n)phi} for m >= n
  CMatrix U_inv;  // unit diagonal, -e^{-j phi} on the first subdiagonal
};
ShapingMatrices shaping_matrix(double phi, std::size_t M);

struct LevelDesign {
  Eigen::MatrixX2d alpha;  // per antenna: real / imaginary output level
  RVector P_u;             // designed quantizer input power
};

/// Quantizer input powers follow P_u[0] = p_x[0], P_u[m] = p_x[m] + c P_u[m-1]
/// with c = zeta pi/2 - 1. Each level is the one at which a circular Gaussian
/// input of power P_u[m] produces exactly c P_u[m] error power:
///   alpha = sqrt(P_u) (1/sqrt(pi) + sqrt(1/pi - (1 - c)/2)).
/// For zeta = 1 this is the unit-Bussgang-gain level sqrt(pi P_u / 4).
/// If zeta is so small that no such level exists, the minimum-distortion
/// level sqrt(P_u / pi) is used.
LevelDesign design_levels(const RVector& p_x, double zeta);

/// Same recursion with the feedback removed (standard one-bit): P_u = p_x.
LevelDesign design_levels_standard(const RVector& p_x, double zeta);

/// Diagonal of R_q: sigma-delta c Pi p_x, standard one-bit c p_x,
/// infinite resolution 0.
RVector quantization_noise_power(const RVector& p_x, double zeta, Architecture arch);
RMatrix quantization_noise_covariance(const RVector& p_x, double zeta, Architecture arch);

/// Frozen quantizer for one (scenario, geometry, architecture).
struct QuantizerModel {
  Architecture arch = Architecture::sigma_delta_1bit;
  double phi = 0.0;
  double zeta = kDefaultZeta;
  Eigen::MatrixX2d alpha;  // empty for infinite resolution
  RVector p_x;
  RVector p_q;             // diag(R_q)

  std::size_t size() const { return static_cast<std::size_t>(p_x.size()); }

  /// Feedback rotation e^{-j phi}; zero for the memoryless architectures.
  cdouble feedback() const;

  CMatrix U() const;
  CMatrix U_inv() const;
  RMatrix R_q() const { return p_q.asDiagonal(); }

  /// U^{-1} v and U^{-H} v without forming U^{-1}.
  CVector apply_u_inv(const CVector& v) const;
  CVector apply_u_inv_adjoint(const CVector& v) const;

  /// U^{-1} R_q U^{-H}.
  CMatrix shaped_noise_covariance() const;
};

QuantizerModel design_quantizer(Architecture arch, const RVector& p_x, double phi, double zeta = kDefaultZeta);

struct QuantizerOutput {
  CVector y;
  CVector q;
};

/// One-bit output alpha_r sign(Re u) + j alpha_i sign(Im u), sign(0) = +1.
cdouble one_bit(cdouble u, double alpha_r, double alpha_i);

/// First-order spatial recursion: u_1 = x_1, u_m = x_m - e^{-j phi} q_{m-1},
/// y_m = Q_m(u_m), q_m = y_m - u_m. The output satisfies y = x + U^{-1} q.
QuantizerOutput sigma_delta_quantize(const CVector& x, const QuantizerModel& qm);

/// Elementwise one-bit quantization, q = y - x.
QuantizerOutput standard_quantize(const CVector& x, const QuantizerModel& qm);

/// Dispatches on qm.arch; infinite resolution returns y = x, q = 0.
QuantizerOutput quantize(const CVector& x, const QuantizerModel& qm);

/// Model check at design statistics: x_m ~ CN(0, p_x[m]) independently,
/// empirical E|q_m|^2 against diag(R_q).
struct QuantizerValidation {
  RVector model_var;
  RVector empirical_var;
  RVector ratio;  // empirical / model
  std::size_t draws = 0;

  double worst_relative_error() const;
};

QuantizerValidation validate_quantizer_model(const QuantizerModel& qm, std::size_t draws, std::uint64_t seed);

}  // namespace sdsim
