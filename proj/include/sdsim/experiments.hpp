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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sdsim/array_model.hpp"
#include "sdsim/channel.hpp"
#include "sdsim/receive_metrics.hpp"
#include "sdsim/sigma_delta.hpp"

namespace sdsim {

inline constexpr std::string_view kVersion = "0.1.0";

enum class SweepKind { noise_density, spacing_sweep, fixed_aperture_sweep, optimal_spacing };

std::string_view to_string(SweepKind k);

/// Everything one experiment family needs. `grid` holds d values
/// (spacing sweep, noise density), M values (fixed aperture) or SNR values
/// in dB (optimal spacing).
struct SweepSpec {
  SweepKind kind = SweepKind::spacing_sweep;
  std::vector<Architecture> architectures{Architecture::sigma_delta_1bit, Architecture::standard_1bit,
                                          Architecture::infinite_resolution};
  std::vector<Receiver> receivers{Receiver::mrc, Receiver::zf};
  std::vector<double> grid;
  double aperture_d0 = 50.0;
  std::size_t trials = 10000;
  std::uint64_t master_seed = 0;

  std::size_t K = 10;
  std::size_t L = 15;
  std::size_t M = 100;
  double theta0_deg = -10.0;
  double delta_deg = 20.0;  // sector half-width
  double snr_db = 10.0;
  std::vector<double> beta;  // empty: all ones
  CircuitParams circuit = CircuitParams::reference_default();
  double zeta = kDefaultZeta;
  bool coupled = true;
  bool empirical = false;

  std::size_t power_draws = 2000;  // channel draws behind p_x
  std::size_t symbols_per_trial = 200;
  std::vector<double> deltas;  // optimal spacing; empty: {delta_deg}
  std::vector<double> d_candidates{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::vector<double> theta_grid;   // empty: -90..90 in 1 degree steps
  std::size_t density_runs = 1000;  // 0: analytic density only
  std::size_t workers = 0;

  void validate() const;
};

struct SeRow {
  double point = 0.0;  // grid value that produced the row
  std::size_t M = 0;
  double d = 0.0;
  double snr_db = 0.0;
  double delta_deg = 0.0;
  Architecture arch = Architecture::sigma_delta_1bit;
  Receiver receiver = Receiver::mrc;
  bool coupled = true;
  SEResult se;
};

struct DensityRow {
  double theta_deg = 0.0;
  double d = 0.0;
  bool coupled = true;
  std::string mode;  // "analytic" | "empirical"
  Architecture arch = Architecture::sigma_delta_1bit;
  double rho = 0.0;  // linear
};

struct OptimalRow {
  double snr_db = 0.0;
  double delta_deg = 0.0;
  Receiver receiver = Receiver::zf;
  double optimal_d = 0.0;
  double sum_se = 0.0;
  double sum_std_error = 0.0;
};

struct SweepResult {
  SweepKind kind = SweepKind::spacing_sweep;
  std::vector<SeRow> se_rows;
  std::vector<DensityRow> density_rows;
  std::vector<OptimalRow> optimal_rows;
  std::vector<std::pair<std::string, std::string>> metadata;
};

/// Per-point seed from (master seed, kind, grid value). Architectures and
/// receivers at one point share it, so their comparisons are paired.
std::uint64_t point_seed(std::uint64_t master_seed, SweepKind kind, double key);

/// Geometry, coupling, scenario and p_x for one sweep point.
struct PointModel {
  ArrayGeometry geom;
  CouplingModel cm;
  Scenario scen;
  RVector p_x;
  double phi = 0.0;

  QuantizerModel quantizer(Architecture arch, double zeta) const { return design_quantizer(arch, p_x, phi, zeta); }
};

PointModel build_point(const SweepSpec& spec, std::size_t M, double d, double snr_db, double delta_deg, bool coupled,
                       std::uint64_t seed);

/// Runs monte_carlo_se (or empirical_se when spec.empirical) for one point.
SEResult evaluate_point(const SweepSpec& spec, const PointModel& pm, Architecture arch, Receiver receiver,
                        std::uint64_t seed);

SweepResult run_spacing_sweep(const SweepSpec& spec);
SweepResult run_fixed_aperture_sweep(const SweepSpec& spec);
SweepResult run_optimal_spacing(const SweepSpec& spec);
SweepResult run_noise_density(const SweepSpec& spec);

/// Dispatches on spec.kind.
SweepResult run_sweep(const SweepSpec& spec);

}  // namespace sdsim
