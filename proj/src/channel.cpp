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

#include "sdsim/channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace sdsim {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

}  // namespace

Scenario Scenario::make(std::size_t K, std::size_t L, double theta0_deg, double delta_deg, double snr_db,
                        double sigma_n2) {
  Scenario s;
  s.K = K;
  s.L = L;
  s.theta0_deg = theta0_deg;
  s.delta_deg = delta_deg;
  s.beta.assign(K, 1.0);
  s.snr_db = snr_db;
  s.p0 = power_from_snr(snr_db, sigma_n2);
  s.validate();
  return s;
}

RVector Scenario::user_powers() const {
  RVector p(static_cast<Eigen::Index>(K));
  for (std::size_t k = 0; k < K; ++k) p(static_cast<Eigen::Index>(k)) = user_power(k);
  return p;
}

void Scenario::validate() const {
  if (K < 1) throw ConfigError("scenario: K must be at least 1");
  if (L < 1) throw ConfigError("scenario: L must be at least 1");
  if (!(delta_deg >= 0.0 && delta_deg <= 90.0)) throw ConfigError("scenario: delta must lie in [0, 90] degrees");
  if (!(std::abs(theta0_deg) + delta_deg <= 90.0)) {
    throw ConfigError("scenario: sector [theta0 - delta, theta0 + delta] must lie within [-90, 90] degrees");
  }
  if (beta.size() != K) throw ConfigError("scenario: beta must have K entries");
  for (double b : beta) {
    if (!(b > 0.0)) throw ConfigError("scenario: beta entries must be positive");
  }
  if (!(p0 >= 0.0) || !std::isfinite(p0)) throw ConfigError("scenario: p0 must be finite and nonnegative");
}

double power_from_snr(double snr_db, double sigma_n2) {
  if (!(sigma_n2 > 0.0)) throw ConfigError("power_from_snr: sigma_n2 must be positive");
  return 4.0 * sigma_n2 * std::pow(10.0, snr_db / 10.0);
}

CVector steering(double theta_deg, const ArrayGeometry& geom) {
  if (!(std::abs(theta_deg) <= 90.0)) {
    throw ConfigError("steering: |theta| must not exceed 90 degrees, got " + std::to_string(theta_deg));
  }
  const double s = std::sin(theta_deg * kDeg);
  const auto M = static_cast<Eigen::Index>(geom.size());
  CVector a(M);
  for (Eigen::Index m = 0; m < M; ++m) {
    a(m) = std::polar(1.0, -2.0 * std::numbers::pi * geom.offset(static_cast<std::size_t>(m)) * s);
  }
  return a;
}

ChannelRealization draw_channel(const Scenario& scen, const ArrayGeometry& geom, const CouplingModel& cm, Rng& rng) {
  const auto K = static_cast<Eigen::Index>(scen.K);
  const auto L = static_cast<Eigen::Index>(scen.L);
  const auto M = static_cast<Eigen::Index>(geom.size());

  ChannelRealization ch;
  ch.doas.resize(K, L);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double lo = scen.theta0_deg - scen.delta_deg;
  const double width = 2.0 * scen.delta_deg;
  for (Eigen::Index k = 0; k < K; ++k) {
    for (Eigen::Index l = 0; l < L; ++l) ch.doas(k, l) = lo + width * unit(rng);
  }

  ch.H.resize(L, K);
  for (Eigen::Index k = 0; k < K; ++k) {
    for (Eigen::Index l = 0; l < L; ++l) ch.H(l, k) = complex_normal(rng);
  }

  ch.A.reserve(scen.K);
  CMatrix uncoupled(M, K);
  for (Eigen::Index k = 0; k < K; ++k) {
    CMatrix A(M, L);
    for (Eigen::Index l = 0; l < L; ++l) A.col(l) = steering(ch.doas(k, l), geom);
    const double scale = std::sqrt(scen.beta[static_cast<std::size_t>(k)] / static_cast<double>(L));
    uncoupled.col(k) = scale * (A * ch.H.col(k));
    ch.A.push_back(std::move(A));
  }
  ch.G = cm.T * uncoupled;
  return ch;
}

RVector expected_antenna_power(const Scenario& scen, const ArrayGeometry& geom, const CouplingModel& cm,
                               std::size_t n_avg, Rng& rng) {
  if (n_avg < 1) throw ConfigError("expected_antenna_power: n_avg must be at least 1");
  const auto M = static_cast<Eigen::Index>(geom.size());
  const RVector p = scen.user_powers();
  RVector acc = RVector::Zero(M);
  for (std::size_t t = 0; t < n_avg; ++t) {
    const ChannelRealization ch = draw_channel(scen, geom, cm, rng);
    acc += ch.G.cwiseAbs2() * p;
  }
  return acc / static_cast<double>(n_avg) + cm.R_n.diagonal().real();
}

}  // namespace sdsim
