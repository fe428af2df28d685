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

#include <filesystem>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "sdsim/experiments.hpp"
#include "sdsim/sigma_delta.hpp"

namespace sdsim {

/// 9 significant digits, the precision of every floating-point CSV field.
std::string format_double(double v);

// CSV schemas. Rows appear in the order the sweep produced them.
//   spacing:  d,architecture,receiver,sum_se,se_user_1..se_user_K,std_err
//   aperture: M,d,architecture,receiver,sum_se,se_user_1..se_user_K,std_err
//   density:  theta_deg,d,coupled_flag,mode,rho_q_db  (rho_q when linear)
//   optimal:  snr_db,delta_deg,receiver,optimal_d,sum_se,std_err
//   curves:   snr_db,delta_deg,d,receiver,sum_se,std_err
//   validate: antenna,model_var,empirical_var,ratio
void write_spacing_csv(std::ostream& os, const std::vector<SeRow>& rows);
void write_aperture_csv(std::ostream& os, const std::vector<SeRow>& rows);
void write_density_csv(std::ostream& os, const std::vector<DensityRow>& rows, Architecture arch, bool linear);
void write_optimal_csv(std::ostream& os, const std::vector<OptimalRow>& rows);
void write_optimal_curves_csv(std::ostream& os, const std::vector<SeRow>& rows);
void write_validation_csv(std::ostream& os, const QuantizerValidation& v);

struct ChartSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Static SVG line chart with linear axes.
void write_line_chart_svg(std::ostream& os, const std::string& title, const std::string& x_label,
                          const std::string& y_label, const std::vector<ChartSeries>& series);

/// Series built from sweep rows: one per (architecture, receiver) for SE
/// sweeps, one per (d, coupled, mode) for a density family.
std::vector<ChartSeries> se_series(const std::vector<SeRow>& rows, bool x_is_M);
std::vector<ChartSeries> density_series(const std::vector<DensityRow>& rows, Architecture arch, bool linear);

struct RunInfo {
  std::string subcommand;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::string> files;
};

void write_metadata_json(std::ostream& os, const RunInfo& info);

/// Writes the CSV (and SVG when requested) files of one sweep into `dir`,
/// returning the file names in write order.
std::vector<std::string> write_sweep_outputs(const std::filesystem::path& dir, const SweepResult& result,
                                             bool csv, bool svg, bool linear_density);

}  // namespace sdsim
