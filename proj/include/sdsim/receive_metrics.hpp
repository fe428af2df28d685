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
#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "sdsim/array_model.hpp"
#include "sdsim/channel.hpp"
#include "sdsim/sigma_delta.hpp"
#include "sdsim/types.hpp"

namespace sdsim {

enum class Receiver { mrc, zf };

std::string_view to_string(Receiver r);
Receiver parse_receiver(std::string_view s);

/// Thrown by the ZF receiver when G^H R_eta^{-1} G is too ill-conditioned.
class RankDeficientError : public SingularMatrixError {
 public:
  using SingularMatrixError::SingularMatrixError;
};

inline constexpr double kMaxGramCondition = 1e12;

/// R_eta = R_n + U^{-1} R_q U^{-H} (R_n alone for infinite resolution).
struct EffectiveNoiseModel {
  CMatrix R_eta;
};
EffectiveNoiseModel effective_noise(const CouplingModel& cm, const QuantizerModel& qm);

/// W = G. Deliberately not whitened.
CMatrix mrc_receiver(const CMatrix& G);

/// Pre-whitened zero forcing W = R^{-1} G (G^H R^{-1} G)^{-1}, with the
/// Cholesky factor of R_eta computed once and reused across channel draws.
class ZeroForcingReceiver {
 public:
  explicit ZeroForcingReceiver(const CMatrix& R_eta);
  CMatrix weights(const CMatrix& G) const;

 private:
  Eigen::LLT<CMatrix> chol_;
};

CMatrix zf_receiver(const CMatrix& G, const CMatrix& R_eta);

/// Per-user SINR of the ergodic bound for one channel realization. The noise
/// and quantization terms are the conditional powers w^H R_n w and
/// w^H U^{-1} R_q U^{-H} w. `p` holds the transmit powers p_k.
RVector sinr_per_realization(const CMatrix& G, const RVector& p, const CMatrix& W, const CMatrix& R_n,
                             const QuantizerModel& qm);

struct SEResult {
  RVector per_user_se;  // bits/s/Hz
  double sum_se = 0.0;
  std::size_t trials = 0;
  RVector std_error;  // per user
  double sum_std_error = 0.0;
  std::size_t rejected = 0;          // ZF trials redrawn for ill-conditioning
  std::vector<double> trial_sum_se;  // in trial order, for paired comparisons
};

struct MonteCarloOptions {
  std::size_t workers = 0;              // 0 = default_worker_count()
  std::size_t symbols_per_trial = 200;  // empirical_se only
};

/// Channel stream for trial t (attempt a > 0 after a ZF rejection).
Rng trial_rng(std::uint64_t seed, std::size_t trial, std::size_t attempt = 0);

/// Ergodic SE lower bound: mean of log2(1 + SINR_k) over channel draws.
/// Deterministic for a given seed and independent of the worker count.
SEResult monte_carlo_se(const Scenario& scen, const ArrayGeometry& geom, const CouplingModel& cm,
                        const QuantizerModel& qm, Receiver receiver, std::size_t trials, std::uint64_t seed,
                        const MonteCarloOptions& opts = {});

/// Same bound, but the noise and quantization terms are sample averages of
/// |w_k^H n|^2 and |w_k^H (y - x)|^2 obtained by running the actual quantizer
/// on x = G P^{1/2} s + n. Channel draws match monte_carlo_se for the same seed.
SEResult empirical_se(const Scenario& scen, const ArrayGeometry& geom, const CouplingModel& cm,
                      const QuantizerModel& qm, Receiver receiver, std::size_t trials, std::uint64_t seed,
                      const MonteCarloOptions& opts = {});

struct DensityPoint {
  double theta_deg = 0.0;
  double rho = 0.0;  // linear, V^2
};

/// -90, -89, ..., 90 degrees.
std::vector<double> default_theta_grid(double step_deg = 1.0);

/// rho_q(theta) = a^H T^H U^{-1} R_q U^{-H} T a / ||T a||^2.
std::vector<DensityPoint> noise_density(const std::vector<double>& theta_grid, const ArrayGeometry& geom,
                                        const CouplingModel& cm, const QuantizerModel& qm);

using SignalSource = std::function<CVector(Rng&)>;

/// x_m ~ CN(0, p_x[m]), independent across antennas.
SignalSource design_statistics_source(const RVector& p_x);

/// x = G P^{1/2} s + n with a fresh channel, symbols and noise per call.
SignalSource scenario_source(const Scenario& scen, const ArrayGeometry& geom, const CouplingModel& cm);

/// Averages |a^H T^H (y - x)|^2 / ||T a||^2 over `runs` quantizer runs.
std::vector<DensityPoint> noise_density_empirical(const std::vector<double>& theta_grid, const ArrayGeometry& geom,
                                                  const CouplingModel& cm, const QuantizerModel& qm,
                                                  const SignalSource& source, std::size_t runs,
                                                  std::uint64_t seed);

}  // namespace sdsim
