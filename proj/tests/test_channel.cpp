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

#include <cmath>
#include <random>

#include "doctest.h"
#include "sdsim/channel.hpp"

using namespace sdsim;

namespace {

const CircuitParams kCircuit = CircuitParams::reference_default();
const double kSigmaN2 = kCircuit.uncoupled_noise_power();

}  // namespace

TEST_SUITE("channel") {
  TEST_CASE("steering vectors") {
    const auto g = make_ula(8, 0.5);
    const CVector a0 = steering(0.0, g);
    CHECK((a0 - CVector::Ones(8)).norm() == 0.0);
    const CVector a90 = steering(90.0, g);
    for (Eigen::Index m = 0; m < 8; ++m) CHECK(std::abs(a90(m) - (m % 2 == 0 ? 1.0 : -1.0)) < 1e-12);
    const CVector a = steering(-37.3, make_ula(50, 0.37));
    CHECK(a(0) == cdouble(1.0, 0.0));
    CHECK((a.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-15);
    CHECK_THROWS_AS(steering(90.5, g), ConfigError);
  }

  TEST_CASE("power from SNR") {
    CHECK(power_from_snr(0.0, kSigmaN2) == doctest::Approx(4 * kSigmaN2).epsilon(1e-15));
    CHECK(power_from_snr(10.0, 8.0078e-12) == doctest::Approx(3.2031e-10).epsilon(1e-4));
    CHECK(power_from_snr(-10.0, kSigmaN2) == doctest::Approx(0.4 * kSigmaN2).epsilon(1e-15));
    CHECK_THROWS_AS(power_from_snr(0.0, 0.0), ConfigError);
  }

  TEST_CASE("scenario validation") {
    CHECK_THROWS_AS(Scenario::make(0, 15, 0, 20, 0, kSigmaN2), ConfigError);
    CHECK_THROWS_AS(Scenario::make(10, 0, 0, 20, 0, kSigmaN2), ConfigError);
    CHECK_THROWS_AS(Scenario::make(10, 15, 80, 20, 0, kSigmaN2), ConfigError);
    CHECK_THROWS_AS(Scenario::make(10, 15, 0, -1, 0, kSigmaN2), ConfigError);
    Scenario s = Scenario::make(2, 3, 0, 10, 0, kSigmaN2);
    s.beta = {1.0};
    CHECK_THROWS_AS(s.validate(), ConfigError);
  }

  TEST_CASE("degenerate sector") {
    const auto g = make_ula(6, 0.5);
    const auto cm = no_coupling_baseline(6, kCircuit);
    const auto s = Scenario::make(3, 4, 12.0, 0.0, 0.0, kSigmaN2);
    Rng rng(3);
    const auto ch = draw_channel(s, g, cm, rng);
    CHECK((ch.doas.array() == 12.0).all());
    for (const auto& A : ch.A) {
      for (Eigen::Index l = 1; l < A.cols(); ++l) CHECK((A.col(l) - A.col(0)).norm() == 0.0);
    }
  }

  TEST_CASE("DoAs stay in the sector and steering columns are unit modulus") {
    const auto g = make_ula(10, 0.3);
    const auto cm = make_coupling_model(g, kCircuit);
    const auto s = Scenario::make(5, 15, -10.0, 20.0, 0.0, kSigmaN2);
    Rng rng(11);
    for (int t = 0; t < 50; ++t) {
      const auto ch = draw_channel(s, g, cm, rng);
      CHECK(ch.doas.minCoeff() >= -30.0);
      CHECK(ch.doas.maxCoeff() <= 10.0);
      for (const auto& A : ch.A) CHECK((A.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-14);
    }
  }

  TEST_CASE("same seed, same realization") {
    const auto g = make_ula(12, 0.25);
    const auto cm = make_coupling_model(g, kCircuit);
    const auto s = Scenario::make(4, 6, 5.0, 15.0, 0.0, kSigmaN2);
    Rng r1(99), r2(99);
    const auto a = draw_channel(s, g, cm, r1);
    const auto b = draw_channel(s, g, cm, r2);
    CHECK(a.doas == b.doas);
    CHECK(a.H == b.H);
    CHECK(a.G == b.G);
  }

  TEST_CASE("coupling enters as T times the uncoupled channel") {
    const auto g = make_ula(7, 0.5);
    const auto half = no_coupling_baseline(7, kCircuit);
    CouplingModel identity{CMatrix::Zero(7, 7), CMatrix::Identity(7, 7), half.R_n, false};
    const auto s = Scenario::make(3, 5, 0.0, 30.0, 0.0, kSigmaN2);
    Rng r1(5), r2(5);
    const auto a = draw_channel(s, g, half, r1);
    const auto b = draw_channel(s, g, identity, r2);
    CHECK((a.G - 0.5 * b.G).cwiseAbs().maxCoeff() < 1e-15);
  }

  TEST_CASE("channel gain without coupling is M/4") {
    const std::size_t M = 8;
    const auto g = make_ula(M, 0.5);
    const auto cm = no_coupling_baseline(M, kCircuit);
    const auto s = Scenario::make(1, 15, -10.0, 20.0, 0.0, kSigmaN2);
    Rng rng(2024);
    double acc = 0.0;
    const int n = 100000;
    for (int t = 0; t < n; ++t) acc += draw_channel(s, g, cm, rng).G.col(0).squaredNorm();
    CHECK(acc / n == doctest::Approx(M / 4.0).epsilon(0.02));
  }

  TEST_CASE("expected antenna power") {
    const std::size_t M = 6;
    const auto g = make_ula(M, 0.5);
    const auto cm = no_coupling_baseline(M, kCircuit);

    auto s = Scenario::make(1, 15, 0.0, 20.0, 0.0, kSigmaN2);
    s.p0 = 0.0;
    Rng r0(1);
    const RVector quiet = expected_antenna_power(s, g, cm, 10, r0);
    CHECK((quiet - cm.R_n.diagonal().real()).norm() == 0.0);

    s = Scenario::make(1, 15, 0.0, 20.0, 10.0, kSigmaN2);
    Rng r1(7);
    const RVector px = expected_antenna_power(s, g, cm, 100000, r1);
    for (Eigen::Index m = 0; m < px.size(); ++m) {
      CHECK(px(m) == doctest::Approx(s.p0 / 4.0 + kSigmaN2).epsilon(0.02));
    }

    auto doubled = s;
    doubled.p0 = 2.0 * s.p0;
    const auto coupled = make_coupling_model(g, kCircuit);
    Rng ra(8), rb(8);
    const RVector pa = expected_antenna_power(s, g, coupled, 50, ra) - coupled.R_n.diagonal().real();
    const RVector pb = expected_antenna_power(doubled, g, coupled, 50, rb) - coupled.R_n.diagonal().real();
    CHECK((pb - 2.0 * pa).cwiseAbs().maxCoeff() < 1e-12 * pb.maxCoeff());
  }

  TEST_CASE("power control removes the large-scale gain") {
    const std::size_t M = 6;
    const auto g = make_ula(M, 0.5);
    const auto cm = make_coupling_model(g, kCircuit);
    auto flat = Scenario::make(3, 15, 0.0, 20.0, 0.0, kSigmaN2);
    auto faded = flat;
    faded.beta = {0.01, 0.3, 5.0};

    // E[|g_mk|^2 p_k] per user and antenna.
    auto second_moment = [&](const Scenario& s, std::uint64_t seed) {
      Rng rng(seed);
      RMatrix acc = RMatrix::Zero(static_cast<Eigen::Index>(M), 3);
      const RVector p = s.user_powers();
      const int n = 20000;
      for (int t = 0; t < n; ++t) acc += draw_channel(s, g, cm, rng).G.cwiseAbs2() * p.asDiagonal();
      return RMatrix(acc / n);
    };
    const RMatrix a = second_moment(flat, 1);
    const RMatrix b = second_moment(faded, 2);
    // |g_mk|^2 is close to exponential: about 0.7% relative error per entry.
    CHECK(((a - b).cwiseAbs().array() / a.array()).maxCoeff() < 0.06);
  }
}
