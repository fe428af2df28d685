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
#include <vector>

#include "sdsim/array_model.hpp"
#include "sdsim/types.hpp"

namespace sdsim {

/// User population and sector for one simulation point.
///
/// Users have DoAs uniform in [theta0 - delta, theta0 + delta] (degrees).
/// With static-aware power control user k transmits p0 / beta_k, so the
/// received power is p0 regardless of beta.
struct Scenario {
  std::size_t K = 10;
  std::size_t L = 15;
  double theta0_deg = -10.0;
  double delta_deg = 20.0;
  std::vector<double> beta;  // size K
  double p0 = 0.0;           // [V^2]
  double snr_db = 10.0;

  /// beta = 1 for every user and p0 = power_from_snr(snr_db, sigma_n2).
  static Scenario make(std::size_t K, std::size_t L, double theta0_deg, double delta_deg, double snr_db,
                       double sigma_n2);

  double user_power(std::size_t k) const { return p0 / beta[k]; }
  RVector user_powers() const;

  void validate() const;
};

/// Transmit reference power for a reference SNR (SNR = p0 / (4 sigma_n2)).
double power_from_snr(double snr_db, double sigma_n2);

/// a(theta)_m = exp(-j 2 pi d_{1m} sin(theta)).
CVector steering(double theta_deg, const ArrayGeometry& geom);

struct ChannelRealization {
  RMatrix doas;            // K x L, degrees
  std::vector<CMatrix> A;  // K steering matrices, M x L
  CMatrix H;               // L x K fast fading
  CMatrix G;               // M x K, g_k = sqrt(beta_k / L) T A_k h_k
};

/// DoAs first (K x L uniforms, row-major by user), then H column by column,
/// so a given rng state always produces the same realization.
ChannelRealization draw_channel(const Scenario& scen, const ArrayGeometry& geom, const CouplingModel& cm, Rng& rng);

/// Monte Carlo estimate of E|x_m|^2: diag(G P G^H) averaged over n_avg
/// channel draws, plus diag(R_n).
RVector expected_antenna_power(const Scenario& scen, const ArrayGeometry& geom, const CouplingModel& cm,
                               std::size_t n_avg, Rng& rng);

}  // namespace sdsim
