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
#include <limits>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "sdsim/specfun.hpp"

using namespace sdsim::specfun;

TEST_SUITE("specfun") {
  TEST_CASE("small argument limit of Ci") {
    CHECK(std::abs(cosint(1e-8) - (euler_gamma + std::log(1e-8))) < 1e-12);
    CHECK(sinint(0.0) == 0.0);
  }

  TEST_CASE("reference points") {
    const double pi = std::numbers::pi;
    CHECK(std::abs(cosint(2 * pi) - (-0.0225607)) < 1e-7);
    CHECK(std::abs(cosint(pi) - 0.0736679) < 1e-7);
    CHECK(std::abs(sinint(pi) - 1.8519370) < 1e-7);
    CHECK(std::abs(sinint(2 * pi) - 1.4181516) < 1e-7);
    CHECK(std::abs(cosint(2 * pi) - oracle::Ci(2 * pi)) < 1e-12);
    CHECK(std::abs(sinint(pi) - oracle::Si(pi)) < 1e-12);
  }

  TEST_CASE("agreement with quadrature across the range") {
    double worst = 0.0;
    for (int i = 0; i < 120; ++i) {
      const double x = std::pow(10.0, -3.0 + 6.0 * i / 119.0);
      worst = std::max(worst, std::abs(cosint(x) - oracle::Ci(x)));
      worst = std::max(worst, std::abs(sinint(x) - oracle::Si(x)));
    }
    CHECK(worst < 1e-9);
  }

  TEST_CASE("error estimate stays below 1e-9 on [1e-3, 1e3]") {
    for (int i = 0; i < 500; ++i) {
      const double x = std::pow(10.0, -3.0 + 6.0 * i / 499.0);
      CHECK(cosint_with_error(x).est_abs_error <= 1e-9);
      CHECK(sinint_with_error(x).est_abs_error <= 1e-9);
    }
  }

  TEST_CASE("series and continued fraction meet at the switch point") {
    for (double x : {3.999999, 4.0, 4.000001}) {
      CHECK(std::abs(cosint(x) - oracle::Ci(x)) < 1e-12);
      CHECK(std::abs(sinint(x) - oracle::Si(x)) < 1e-12);
    }
  }

  TEST_CASE("auxiliary functions reassemble Ci and Si") {
    for (double x : {4.5, 10.0, 123.4}) {
      const auto fg = auxiliary_fg(x);
      CHECK(std::abs(fg.f * std::sin(x) - fg.g * std::cos(x) - oracle::Ci(x)) < 1e-11);
      CHECK(std::abs(std::numbers::pi / 2 - fg.f * std::cos(x) - fg.g * std::sin(x) - oracle::Si(x)) < 1e-11);
    }
  }

  TEST_CASE("Si is increasing on [0, pi]") {
    double prev = -1.0;
    for (int i = 0; i <= 1000; ++i) {
      const double v = sinint(std::numbers::pi * i / 1000.0);
      CHECK(v > prev);
      prev = v;
    }
  }

  TEST_CASE("limits at large argument") {
    CHECK(std::abs(sinint(1e4) - std::numbers::pi / 2) < 1e-3);
    CHECK(std::abs(cosint(1e4)) < 1e-3);
  }

  TEST_CASE("domain errors") {
    const double inf = std::numeric_limits<double>::infinity();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(cosint(0.0), std::domain_error);
    CHECK_THROWS_AS(cosint(-1.0), std::domain_error);
    CHECK_THROWS_AS(cosint(inf), std::domain_error);
    CHECK_THROWS_AS(cosint(nan), std::domain_error);
    CHECK_THROWS_AS(sinint(-0.5), std::domain_error);
    CHECK_THROWS_AS(sinint(inf), std::domain_error);
    CHECK_THROWS_AS(sinint(nan), std::domain_error);
  }
}
