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

#include "sdsim/sigma_delta.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sdsim {

namespace {

constexpr double kPi = std::numbers::pi;

void check_powers(const RVector& p_x) {
  if (p_x.size() == 0) throw std::invalid_argument("quantizer: p_x must not be empty");
  for (Eigen::Index m = 0; m < p_x.size(); ++m) {
    if (!(p_x(m) >= 0.0) || !std::isfinite(p_x(m))) {
      throw std::invalid_argument("quantizer: p_x[" + std::to_string(m) + "] must be finite and nonnegative");
    }
  }
}

double level_scale(double zeta) {
  const double c = stage_error_factor(zeta);
  const double disc = 1.0 / kPi - 0.5 * (1.0 - c);
  const double base = 1.0 / std::sqrt(kPi);
  return disc >= 0.0 ? base + std::sqrt(disc) : base;
}

Eigen::MatrixX2d levels_from_power(const RVector& P_u, double zeta) {
  const double s = level_scale(zeta);
  Eigen::MatrixX2d alpha(P_u.size(), 2);
  for (Eigen::Index m = 0; m < P_u.size(); ++m) {
    const double a = s * std::sqrt(P_u(m));
    alpha(m, 0) = a;
    alpha(m, 1) = a;
  }
  return alpha;
}

QuantizerOutput run_recursion(const CVector& x, const Eigen::MatrixX2d& alpha, cdouble feedback) {
  if (alpha.rows() != x.size()) throw std::invalid_argument("quantizer: level count does not match input size");
  const auto M = x.size();
  QuantizerOutput out{CVector(M), CVector(M)};
  cdouble prev_q(0.0, 0.0);
  for (Eigen::Index m = 0; m < M; ++m) {
    const cdouble u = x(m) - feedback * prev_q;
    const cdouble y = one_bit(u, alpha(m, 0), alpha(m, 1));
    out.y(m) = y;
    out.q(m) = y - u;
    prev_q = out.q(m);
  }
  return out;
}

}  // namespace

std::string_view to_string(Architecture a) {
  switch (a) {
    case Architecture::sigma_delta_1bit:
      return "sigma_delta";
    case Architecture::standard_1bit:
      return "standard";
    case Architecture::infinite_resolution:
      return "infinite";
  }
  return "unknown";
}

Architecture parse_architecture(std::string_view s) {
  if (s == "sigma_delta" || s == "sigma_delta_1bit" || s == "sd") return Architecture::sigma_delta_1bit;
  if (s == "standard" || s == "standard_1bit" || s == "onebit") return Architecture::standard_1bit;
  if (s == "infinite" || s == "infinite_resolution" || s == "inf") return Architecture::infinite_resolution;
  throw ConfigError("unknown architecture '" + std::string(s) + "'");
}

double stage_error_factor(double zeta) { return zeta * kPi / 2.0 - 1.0; }

double steering_phase(double theta0_deg, double d) {
  if (!(std::abs(theta0_deg) <= 90.0)) throw ConfigError("steering_phase: |theta0| must not exceed 90 degrees");
  return 2.0 * kPi * d * std::sin(theta0_deg * kPi / 180.0);
}

ShapingMatrices shaping_matrix(double phi, std::size_t M) {
  if (M == 0) throw std::invalid_argument("shaping_matrix: M must be at least 1");
  const auto n = static_cast<Eigen::Index>(M);
  ShapingMatrices s{CMatrix::Zero(n, n), CMatrix::Identity(n, n)};
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index k = 0; k <= m; ++k) s.U(m, k) = std::polar(1.0, -static_cast<double>(m - k) * phi);
  }
  const cdouble rot = std::polar(1.0, -phi);
  for (Eigen::Index m = 1; m < n; ++m) s.U_inv(m, m - 1) = -rot;
  return s;
}

LevelDesign design_levels(const RVector& p_x, double zeta) {
  check_powers(p_x);
  const double c = stage_error_factor(zeta);
  if (!(c > 0.0)) throw std::invalid_argument("design_levels: zeta * pi / 2 must exceed 1");
  LevelDesign out;
  out.P_u.resize(p_x.size());
  double carry = 0.0;
  for (Eigen::Index m = 0; m < p_x.size(); ++m) {
    out.P_u(m) = p_x(m) + carry;
    carry = c * out.P_u(m);
  }
  out.alpha = levels_from_power(out.P_u, zeta);
  return out;
}

LevelDesign design_levels_standard(const RVector& p_x, double zeta) {
  check_powers(p_x);
  if (!(stage_error_factor(zeta) > 0.0)) throw std::invalid_argument("design_levels: zeta * pi / 2 must exceed 1");
  return {levels_from_power(p_x, zeta), p_x};
}

RVector quantization_noise_power(const RVector& p_x, double zeta, Architecture arch) {
  check_powers(p_x);
  switch (arch) {
    case Architecture::infinite_resolution:
      return RVector::Zero(p_x.size());
    case Architecture::standard_1bit:
      return stage_error_factor(zeta) * p_x;
    case Architecture::sigma_delta_1bit:
      // c Pi p_x with [Pi]_mn = c^{m-n}, evaluated as the running recursion.
      return stage_error_factor(zeta) * design_levels(p_x, zeta).P_u;
  }
  throw std::invalid_argument("quantization_noise_power: unknown architecture");
}

RMatrix quantization_noise_covariance(const RVector& p_x, double zeta, Architecture arch) {
  return quantization_noise_power(p_x, zeta, arch).asDiagonal();
}

cdouble QuantizerModel::feedback() const {
  return arch == Architecture::sigma_delta_1bit ? std::polar(1.0, -phi) : cdouble(0.0, 0.0);
}

CMatrix QuantizerModel::U() const {
  if (arch == Architecture::sigma_delta_1bit) return shaping_matrix(phi, size()).U;
  const auto n = static_cast<Eigen::Index>(size());
  return CMatrix::Identity(n, n);
}

CMatrix QuantizerModel::U_inv() const {
  if (arch == Architecture::sigma_delta_1bit) return shaping_matrix(phi, size()).U_inv;
  const auto n = static_cast<Eigen::Index>(size());
  return CMatrix::Identity(n, n);
}

CVector QuantizerModel::apply_u_inv(const CVector& v) const {
  CVector out = v;
  const cdouble f = feedback();
  for (Eigen::Index m = 1; m < v.size(); ++m) out(m) -= f * v(m - 1);
  return out;
}

CVector QuantizerModel::apply_u_inv_adjoint(const CVector& v) const {
  CVector out = v;
  const cdouble f = std::conj(feedback());
  for (Eigen::Index m = 0; m + 1 < v.size(); ++m) out(m) -= f * v(m + 1);
  return out;
}

CMatrix QuantizerModel::shaped_noise_covariance() const {
  const CMatrix Ui = U_inv();
  return Ui * p_q.cast<cdouble>().asDiagonal() * Ui.adjoint();
}

QuantizerModel design_quantizer(Architecture arch, const RVector& p_x, double phi, double zeta) {
  QuantizerModel qm;
  qm.arch = arch;
  qm.phi = phi;
  qm.zeta = zeta;
  qm.p_x = p_x;
  qm.p_q = quantization_noise_power(p_x, zeta, arch);
  switch (arch) {
    case Architecture::sigma_delta_1bit:
      qm.alpha = design_levels(p_x, zeta).alpha;
      break;
    case Architecture::standard_1bit:
      qm.alpha = design_levels_standard(p_x, zeta).alpha;
      break;
    case Architecture::infinite_resolution:
      break;
  }
  return qm;
}

cdouble one_bit(cdouble u, double alpha_r, double alpha_i) {
  return {u.real() >= 0.0 ? alpha_r : -alpha_r, u.imag() >= 0.0 ? alpha_i : -alpha_i};
}

QuantizerOutput sigma_delta_quantize(const CVector& x, const QuantizerModel& qm) {
  if (qm.arch != Architecture::sigma_delta_1bit) {
    throw std::invalid_argument("sigma_delta_quantize: quantizer model is not sigma-delta");
  }
  return run_recursion(x, qm.alpha, qm.feedback());
}

QuantizerOutput standard_quantize(const CVector& x, const QuantizerModel& qm) {
  if (qm.arch != Architecture::standard_1bit) {
    throw std::invalid_argument("standard_quantize: quantizer model is not standard one-bit");
  }
  return run_recursion(x, qm.alpha, cdouble(0.0, 0.0));
}

QuantizerOutput quantize(const CVector& x, const QuantizerModel& qm) {
  switch (qm.arch) {
    case Architecture::sigma_delta_1bit:
      return sigma_delta_quantize(x, qm);
    case Architecture::standard_1bit:
      return standard_quantize(x, qm);
    case Architecture::infinite_resolution:
      return {x, CVector::Zero(x.size())};
  }
  throw std::invalid_argument("quantize: unknown architecture");
}

double QuantizerValidation::worst_relative_error() const { return (ratio.array() - 1.0).abs().maxCoeff(); }

QuantizerValidation validate_quantizer_model(const QuantizerModel& qm, std::size_t draws, std::uint64_t seed) {
  if (qm.arch == Architecture::infinite_resolution) {
    throw std::invalid_argument("validate_quantizer_model: requires a one-bit architecture");
  }
  if (draws < 1) throw std::invalid_argument("validate_quantizer_model: draws must be at least 1");
  const auto M = static_cast<Eigen::Index>(qm.size());
  const RVector amp = qm.p_x.cwiseSqrt();
  Rng rng(seed);
  RVector acc = RVector::Zero(M);
  CVector x(M);
  for (std::size_t n = 0; n < draws; ++n) {
    for (Eigen::Index m = 0; m < M; ++m) x(m) = amp(m) * complex_normal(rng);
    acc += quantize(x, qm).q.cwiseAbs2();
  }
  QuantizerValidation v;
  v.draws = draws;
  v.model_var = qm.p_q;
  v.empirical_var = acc / static_cast<double>(draws);
  v.ratio = v.empirical_var.cwiseQuotient(v.model_var);
  return v;
}

}  // namespace sdsim
