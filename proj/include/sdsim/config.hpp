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
#include <set>
#include <string>
#include <string_view>

#include "sdsim/experiments.hpp"

namespace sdsim {

enum class Subcommand { noise_density, sweep_spacing, sweep_aperture, optimal_spacing, validate_quantizer };

std::string_view to_string(Subcommand s);
Subcommand parse_subcommand(std::string_view s);

/// Parsed run configuration. `spec.grid` is left empty by parse_config; the
/// grid for a run comes from d_grid, m_grid or snr_grid depending on the
/// subcommand (see make_sweep_spec).
struct RunConfig {
  SweepSpec spec;
  std::vector<double> d_grid;
  std::vector<double> m_grid;
  std::vector<double> snr_grid;
  double theta_step_deg = 1.0;
  double d = 0.5;  // spacing for validate-quantizer
  std::size_t validate_draws = 100000;
  std::string output_dir = "out";
  std::set<std::string> formats{"csv"};
  bool linear_density = false;

  std::set<std::string> explicit_keys;
  bool is_set(const std::string& key) const { return explicit_keys.count(key) != 0; }
};

/// Flat `key = value` text, '#' starts a comment. Lists are comma separated.
/// Unset keys keep the defaults K=10, L=15, M=100, theta0=-10 deg,
/// delta=20 deg, snr=10 dB, R=50 ohm, T=290 K, B=20 MHz, rho=0, zeta=1.13,
/// trials=10^4. Unknown keys and malformed values throw ConfigError naming
/// the key and line.
RunConfig parse_config(std::string_view text);

/// Fills subcommand-specific defaults for keys the config did not set
/// (e.g. theta0 = 0 deg and SNR = 0 dB for the noise density).
void apply_subcommand_defaults(RunConfig& cfg, Subcommand sub);

/// Validated SweepSpec for a subcommand other than validate-quantizer.
SweepSpec make_sweep_spec(const RunConfig& cfg, Subcommand sub);

}  // namespace sdsim
