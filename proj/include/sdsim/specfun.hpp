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

namespace sdsim::specfun {

/// Euler-Mascheroni constant.
inline constexpr double euler_gamma = 0.57721566490153286061;

struct SpecFunResult {
  double value = 0.0;
  double est_abs_error = 0.0;
};

/// Cosine integral Ci(x) = gamma + log(x) + int_0^x (cos t - 1)/t dt.
///
/// Power series for x <= 4; above that, Ci is assembled from the auxiliary
/// functions f(x) and g(x), which are evaluated by continued fraction.
/// Throws std::domain_error for x <= 0 or non-finite x.
SpecFunResult cosint_with_error(double x);

/// Sine integral Si(x) = int_0^x sin(t)/t dt, for finite x >= 0.
/// Negative arguments are rejected (std::domain_error).
SpecFunResult sinint_with_error(double x);

inline double cosint(double x) { return cosint_with_error(x).value; }
inline double sinint(double x) { return sinint_with_error(x).value; }

/// Auxiliary functions of the sine/cosine integrals, valid for x > 0:
///   Ci(x) = f(x) sin x - g(x) cos x
///   Si(x) = pi/2 - f(x) cos x - g(x) sin x
struct AuxiliaryFG {
  double f = 0.0;
  double g = 0.0;
  double est_abs_error = 0.0;
};
AuxiliaryFG auxiliary_fg(double x);

}  // namespace sdsim::specfun
