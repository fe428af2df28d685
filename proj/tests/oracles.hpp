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

// Reference values computed independently of the library: adaptive
// Gauss-Kronrod quadrature of the defining integrals.

#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace oracle {

inline constexpr double euler_gamma = 0.57721566490153286061;

// Integrate f over [a, b] piecewise, with pieces no longer than `piece`,
// so oscillatory integrands stay well resolved.
template <class F>
double integrate(F f, double a, double b, double piece = std::numbers::pi / 2) {
  using Q = boost::math::quadrature::gauss_kronrod<double, 31>;
  double sum = 0.0, comp = 0.0;
  for (double lo = a; lo < b;) {
    const double hi = std::min(b, lo + piece);
    const double v = Q::integrate(f, lo, hi, 15, 1e-14);
    const double t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
    lo = hi;
  }
  return sum + comp;
}

inline double sinc(double t) { return t == 0.0 ? 1.0 : std::sin(t) / t; }

// (cos t - 1)/t, with its series near zero.
inline double cosm1_over_t(double t) {
  if (std::abs(t) < 1e-4) return -t / 2.0 + t * t * t / 24.0;
  return -2.0 * std::sin(t / 2.0) * std::sin(t / 2.0) / t;
}

inline double Si(double x) { return integrate(sinc, 0.0, x); }

// Ci(x) = gamma + log x + int_0^x (cos t - 1)/t dt. For x > 1 the log is
// folded into int_1^x cos(t)/t dt to avoid cancellation.
inline double Ci(double x) {
  if (x <= 1.0) return euler_gamma + std::log(x) + integrate(cosm1_over_t, 0.0, x);
  static const double head = integrate(cosm1_over_t, 0.0, 1.0);
  return euler_gamma + head + integrate([](double t) { return std::cos(t) / t; }, 1.0, x);
}

// Thin half-wave dipole impedances built from the quadrature Ci/Si.
inline std::complex<double> dipole_self() {
  const double tp = 2.0 * std::numbers::pi;
  return 30.0 * std::complex<double>(euler_gamma + std::log(tp) - Ci(tp), Si(tp));
}

inline std::complex<double> dipole_mutual(double d) {
  const double pi = std::numbers::pi;
  const double xi = pi * std::sqrt(1.0 + 4.0 * d * d);
  const double u = 2.0 * pi * d;
  return 30.0 * std::complex<double>(2.0 * Ci(u) - Ci(xi + pi) - Ci(xi - pi),
                                     -2.0 * Si(u) + Si(xi + pi) + Si(xi - pi));
}

// E[(a sign(v) - v)^2] for v ~ N(0, s2), by quadrature over the density.
inline double one_bit_error_power(double a, double s2) {
  const double s = std::sqrt(s2);
  auto integrand = [&](double v) {
    const double e = (v >= 0.0 ? a : -a) - v;
    return e * e * std::exp(-v * v / (2.0 * s2)) / (s * std::sqrt(2.0 * std::numbers::pi));
  };
  return integrate(integrand, -12.0 * s, 0.0, 12.0 * s) + integrate(integrand, 0.0, 12.0 * s, 12.0 * s);
}

}  // namespace oracle
