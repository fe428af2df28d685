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

#include "sdsim/array_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "sdsim/specfun.hpp"

namespace sdsim {

using specfun::cosint;
using specfun::sinint;

CircuitParams CircuitParams::reference_default() {
  CircuitParams cp;
  cp.derive_noise_variances();
  return cp;
}

CircuitParams& CircuitParams::derive_noise_variances() {
  sigma_i2 = 2.0 * kTB() / R;
  sigma_u2 = 2.0 * kTB() * R;
  return *this;
}

double CircuitParams::noise_resistance() const { return std::sqrt(sigma_u2 / sigma_i2); }

double CircuitParams::uncoupled_noise_power() const {
  const double rn = noise_resistance();
  return 0.25 * (sigma_i2 * (R * R + rn * rn - 2.0 * rn * R * rho.real()) + 4.0 * kTB() * R);
}

void CircuitParams::validate() const {
  if (!(R > 0.0) || !std::isfinite(R)) throw ConfigError("circuit: R must be positive");
  if (!(temperature > 0.0)) throw ConfigError("circuit: temperature must be positive");
  if (!(bandwidth > 0.0)) throw ConfigError("circuit: bandwidth must be positive");
  if (!(sigma_i2 > 0.0) || !(sigma_u2 > 0.0)) {
    throw ConfigError("circuit: sigma_i2 and sigma_u2 must be positive");
  }
  if (std::abs(rho) > 1.0) throw ConfigError("circuit: |rho| must not exceed 1");
  if (!(boltzmann > 0.0)) throw ConfigError("circuit: boltzmann constant must be positive");
}

ArrayGeometry ArrayGeometry::uniform(std::size_t M, double spacing) {
  if (M == 0) throw ConfigError("array: M must be at least 1");
  if (!(spacing > 0.0) || !std::isfinite(spacing)) throw ConfigError("array: spacing must be positive");
  ArrayGeometry g;
  g.positions_.resize(M);
  for (std::size_t m = 0; m < M; ++m) g.positions_[m] = static_cast<double>(m) * spacing;
  g.spacing_ = spacing;
  return g;
}

ArrayGeometry ArrayGeometry::from_positions(std::vector<double> positions) {
  if (positions.empty()) throw ConfigError("array: at least one position is required");
  for (std::size_t i = 1; i < positions.size(); ++i) {
    if (!(positions[i] > positions[i - 1])) {
      throw ConfigError("array: positions must be strictly increasing");
    }
  }
  ArrayGeometry g;
  g.positions_ = std::move(positions);
  return g;
}

double ArrayGeometry::distance(std::size_t i, std::size_t j) const {
  if (spacing_) {
    const std::size_t lag = i > j ? i - j : j - i;
    return static_cast<double>(lag) * *spacing_;
  }
  return std::abs(positions_[i] - positions_[j]);
}

cdouble dipole_mutual_impedance(double d) {
  constexpr double pi = std::numbers::pi;
  const double kd = 2.0 * pi * d;
  const double xi = pi * std::sqrt(1.0 + 4.0 * d * d);
  const double re = 2.0 * cosint(kd) - cosint(xi + pi) - cosint(xi - pi);
  const double im = -2.0 * sinint(kd) + sinint(xi + pi) + sinint(xi - pi);
  return 30.0 * cdouble(re, im);
}

cdouble dipole_self_impedance() {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  return 30.0 * cdouble(specfun::euler_gamma + std::log(two_pi) - cosint(two_pi), sinint(two_pi));
}

CMatrix mutual_impedance(const ArrayGeometry& geom) {
  const auto M = static_cast<Eigen::Index>(geom.size());
  CMatrix Z(M, M);
  const cdouble self = dipole_self_impedance();

  if (geom.uniform_spacing()) {
    // Toeplitz: one evaluation per lag.
    std::vector<cdouble> lag(static_cast<std::size_t>(M));
    lag[0] = self;
    for (Eigen::Index k = 1; k < M; ++k) {
      lag[static_cast<std::size_t>(k)] = dipole_mutual_impedance(geom.distance(0, static_cast<std::size_t>(k)));
    }
    for (Eigen::Index i = 0; i < M; ++i) {
      for (Eigen::Index j = 0; j < M; ++j) Z(i, j) = lag[static_cast<std::size_t>(std::abs(i - j))];
    }
    return Z;
  }

  for (Eigen::Index i = 0; i < M; ++i) {
    Z(i, i) = self;
    for (Eigen::Index j = i + 1; j < M; ++j) {
      const cdouble z = dipole_mutual_impedance(geom.distance(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
      Z(i, j) = z;
      Z(j, i) = z;
    }
  }
  return Z;
}

CMatrix coupling_matrix(const CMatrix& Z, double R) {
  if (Z.rows() != Z.cols()) throw std::invalid_argument("coupling_matrix: Z must be square");
  if (!(R > 0.0)) throw std::invalid_argument("coupling_matrix: R must be positive");
  const CMatrix A = CMatrix::Identity(Z.rows(), Z.cols()) + Z / R;
  const Eigen::PartialPivLU<CMatrix> lu(A);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14)) {
    throw SingularMatrixError("coupling_matrix: I + Z/R is singular", rcond > 0.0 ? 1.0 / rcond : INFINITY);
  }
  return lu.inverse();
}

CMatrix noise_covariance(const CMatrix& Z, const CMatrix& T, const CircuitParams& cp) {
  if (Z.rows() != Z.cols() || T.rows() != T.cols() || Z.rows() != T.rows()) {
    throw std::invalid_argument("noise_covariance: Z and T must be square and of equal size");
  }
  const auto M = Z.rows();
  const double rn = cp.noise_resistance();
  const CMatrix rho_z_real = (std::conj(cp.rho) * Z).real().cast<cdouble>();
  const CMatrix core = cp.sigma_i2 * (Z * Z.adjoint() + rn * rn * CMatrix::Identity(M, M) - 2.0 * rn * rho_z_real) +
                       4.0 * cp.kTB() * Z.real().cast<cdouble>();
  CMatrix Rn = T * core * T.adjoint();
  Rn = 0.5 * (Rn + Rn.adjoint()).eval();

  const double trace = Rn.real().trace();
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(Rn, Eigen::EigenvaluesOnly);
  const double floor = -1e-9 * trace / static_cast<double>(M);
  if (eig.eigenvalues().minCoeff() < floor) {
    throw std::runtime_error("noise_covariance: result is not positive semidefinite (min eigenvalue " +
                             std::to_string(eig.eigenvalues().minCoeff()) +
                             "); check the circuit parameters");
  }
  return Rn;
}

CouplingModel make_coupling_model(const ArrayGeometry& geom, const CircuitParams& cp) {
  cp.validate();
  CouplingModel cm;
  cm.Z = mutual_impedance(geom);
  cm.T = coupling_matrix(cm.Z, cp.R);
  cm.R_n = noise_covariance(cm.Z, cm.T, cp);
  cm.coupled = true;
  return cm;
}

CouplingModel no_coupling_baseline(std::size_t M, const CircuitParams& cp) {
  if (M == 0) throw ConfigError("array: M must be at least 1");
  cp.validate();
  const auto n = static_cast<Eigen::Index>(M);
  CouplingModel cm;
  cm.Z = cp.R * CMatrix::Identity(n, n);
  cm.T = 0.5 * CMatrix::Identity(n, n);
  cm.R_n = cp.uncoupled_noise_power() * CMatrix::Identity(n, n);
  cm.coupled = false;
  return cm;
}

}  // namespace sdsim
