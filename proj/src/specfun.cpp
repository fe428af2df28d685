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

#include "sdsim/specfun.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sdsim::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kSeriesLimit = 4.0;
constexpr int kMaxIter = 200;

void require_finite(double x, const char* fn) {
  if (!std::isfinite(x)) {
    throw std::domain_error(std::string(fn) + ": argument must be finite");
  }
}

// Both series alternate; the rounding term scales with the largest summand.
SpecFunResult si_series(double x) {
  const double x2 = x * x;
  double term = x;
  double sum = x;
  double largest = std::abs(x);
  double last = std::abs(x);
  for (int k = 1; k < kMaxIter; ++k) {
    term *= -x2 / ((2.0 * k) * (2.0 * k + 1.0));
    const double add = term / (2.0 * k + 1.0);
    sum += add;
    last = std::abs(add);
    largest = std::max(largest, last);
    if (last <= kEps * std::abs(sum)) break;
  }
  return {sum, last + 4.0 * kEps * largest};
}

SpecFunResult ci_series(double x) {
  const double x2 = x * x;
  double term = 1.0;
  double sum = 0.0;
  double largest = 0.0;
  double last = 0.0;
  for (int k = 1; k < kMaxIter; ++k) {
    term *= -x2 / ((2.0 * k - 1.0) * (2.0 * k));
    const double add = term / (2.0 * k);
    sum += add;
    last = std::abs(add);
    largest = std::max(largest, last);
    if (last <= kEps * std::max(std::abs(sum), 1e-300)) break;
  }
  const double log_x = std::log(x);
  const double value = euler_gamma + log_x + sum;
  const double err = last + 4.0 * kEps * (largest + std::abs(log_x) + euler_gamma);
  return {value, err};
}

}  // namespace

AuxiliaryFG auxiliary_fg(double x) {
  require_finite(x, "auxiliary_fg");
  if (x <= 0.0) throw std::domain_error("auxiliary_fg: argument must be positive");

  // Modified Lentz evaluation of e^{ix} E1(ix) = g(x) - i f(x).
  using cd = std::complex<double>;
  constexpr double tiny = 1e-300;
  cd b(1.0, x);
  cd c(1.0 / tiny, 0.0);
  cd d = 1.0 / b;
  cd h = d;
  double last_delta = 1.0;
  int i = 2;
  for (; i < 10 * kMaxIter; ++i) {
    const double a = -static_cast<double>(i - 1) * static_cast<double>(i - 1);
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const cd del = c * d;
    h *= del;
    last_delta = std::abs(del - 1.0);
    if (last_delta < kEps) break;
  }
  if (i == 10 * kMaxIter) {
    throw std::runtime_error("auxiliary_fg: continued fraction did not converge");
  }
  const double err = (last_delta + 8.0 * kEps) * std::abs(h) + kEps * i * std::abs(h);
  return {-h.imag(), h.real(), err};
}

SpecFunResult cosint_with_error(double x) {
  require_finite(x, "cosint");
  if (x <= 0.0) throw std::domain_error("cosint: argument must be positive");
  if (x <= kSeriesLimit) return ci_series(x);

  const AuxiliaryFG fg = auxiliary_fg(x);
  const double value = fg.f * std::sin(x) - fg.g * std::cos(x);
  return {value, 2.0 * fg.est_abs_error + 2.0 * kEps};
}

SpecFunResult sinint_with_error(double x) {
  require_finite(x, "sinint");
  if (x < 0.0) throw std::domain_error("sinint: negative arguments are not supported");
  if (x == 0.0) return {0.0, 0.0};
  if (x <= kSeriesLimit) return si_series(x);

  const AuxiliaryFG fg = auxiliary_fg(x);
  const double value = std::numbers::pi / 2.0 - fg.f * std::cos(x) - fg.g * std::sin(x);
  return {value, 2.0 * fg.est_abs_error + 4.0 * kEps};
}

}  // namespace sdsim::specfun
