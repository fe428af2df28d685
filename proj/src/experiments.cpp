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

#include "sdsim/experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <string>

namespace sdsim {

namespace {

constexpr std::uint64_t kPowerStream = 0x706f776572ULL;
constexpr std::uint64_t kDensityStream = 0x64656e73ULL;

std::string join(const std::vector<double>& v) {
  std::ostringstream os;
  os.precision(9);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

void require_sorted(const std::vector<double>& v, const char* what) {
  if (v.empty()) throw ConfigError(std::string(what) + " must not be empty");
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) throw ConfigError(std::string(what) + " must be sorted and free of duplicates");
  }
}

bool has_one_bit(const std::vector<Architecture>& archs) {
  return std::any_of(archs.begin(), archs.end(), [](Architecture a) { return a != Architecture::infinite_resolution; });
}

std::vector<std::pair<std::string, std::string>> describe(const SweepSpec& spec) {
  std::vector<std::pair<std::string, std::string>> md;
  auto put = [&](std::string k, std::string v) { md.emplace_back(std::move(k), std::move(v)); };
  auto num = [](double v) {
    std::ostringstream os;
    os.precision(9);
    os << v;
    return os.str();
  };
  put("version", std::string(kVersion));
  put("kind", std::string(to_string(spec.kind)));
  put("master_seed", std::to_string(spec.master_seed));
  put("trials", std::to_string(spec.trials));
  put("grid", join(spec.grid));
  std::string archs;
  for (auto a : spec.architectures) archs += (archs.empty() ? "" : ",") + std::string(to_string(a));
  put("architectures", archs);
  std::string rx;
  for (auto r : spec.receivers) rx += (rx.empty() ? "" : ",") + std::string(to_string(r));
  put("receivers", rx);
  put("K", std::to_string(spec.K));
  put("L", std::to_string(spec.L));
  put("M", std::to_string(spec.M));
  put("theta0_deg", num(spec.theta0_deg));
  put("delta_deg", num(spec.delta_deg));
  put("snr_db", num(spec.snr_db));
  put("aperture_d0", num(spec.aperture_d0));
  put("zeta", num(spec.zeta));
  put("coupled", spec.coupled ? "true" : "false");
  put("empirical", spec.empirical ? "true" : "false");
  put("power_draws", std::to_string(spec.power_draws));
  put("R", num(spec.circuit.R));
  put("temperature", num(spec.circuit.temperature));
  put("bandwidth", num(spec.circuit.bandwidth));
  put("rho", num(spec.circuit.rho.real()) + (spec.circuit.rho.imag() < 0 ? "" : "+") + num(spec.circuit.rho.imag()) + "j");
  put("sigma_i2", num(spec.circuit.sigma_i2));
  put("sigma_u2", num(spec.circuit.sigma_u2));
  return md;
}

CouplingModel coupling_for(const ArrayGeometry& geom, const CircuitParams& cp, bool coupled) {
  return coupled ? make_coupling_model(geom, cp) : no_coupling_baseline(geom.size(), cp);
}

void run_se_point(const SweepSpec& spec, double point, std::size_t M, double d, SweepResult& out) {
  const std::uint64_t seed = point_seed(spec.master_seed, spec.kind, point);
  const PointModel pm = build_point(spec, M, d, spec.snr_db, spec.delta_deg, spec.coupled, seed);
  for (Architecture arch : spec.architectures) {
    for (Receiver rx : spec.receivers) {
      SeRow row;
      row.point = point;
      row.M = M;
      row.d = d;
      row.snr_db = spec.snr_db;
      row.delta_deg = spec.delta_deg;
      row.arch = arch;
      row.receiver = rx;
      row.coupled = spec.coupled;
      row.se = evaluate_point(spec, pm, arch, rx, seed);
      out.se_rows.push_back(std::move(row));
    }
  }
}

}  // namespace

std::string_view to_string(SweepKind k) {
  switch (k) {
    case SweepKind::noise_density:
      return "noise_density";
    case SweepKind::spacing_sweep:
      return "spacing_sweep";
    case SweepKind::fixed_aperture_sweep:
      return "fixed_aperture_sweep";
    case SweepKind::optimal_spacing:
      return "optimal_spacing";
  }
  return "unknown";
}

void SweepSpec::validate() const {
  require_sorted(grid, "grid");
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (architectures.empty()) throw ConfigError("architectures must not be empty");
  if (receivers.empty() && kind != SweepKind::noise_density) throw ConfigError("receivers must not be empty");
  if (K < 1 || L < 1 || M < 1) throw ConfigError("K, L and M must be at least 1");
  if (!beta.empty() && beta.size() != K) throw ConfigError("beta must have K entries");
  if (!(stage_error_factor(zeta) > 0.0)) throw ConfigError("zeta * pi / 2 must exceed 1");
  if (power_draws < 1) throw ConfigError("power_draws must be at least 1");
  circuit.validate();

  switch (kind) {
    case SweepKind::spacing_sweep:
    case SweepKind::noise_density:
      for (double d : grid) {
        if (!(d > 0.0)) throw ConfigError("grid: spacings must be positive");
      }
      if (kind == SweepKind::noise_density && !has_one_bit(architectures)) {
        throw ConfigError("noise density needs at least one one-bit architecture");
      }
      break;
    case SweepKind::fixed_aperture_sweep:
      if (!(aperture_d0 > 0.0)) throw ConfigError("aperture_d0 must be positive");
      for (double m : grid) {
        if (!(m >= 1.0) || m != std::floor(m)) throw ConfigError("grid: antenna counts must be positive integers");
      }
      break;
    case SweepKind::optimal_spacing:
      require_sorted(d_candidates, "d_candidates");
      if (!(d_candidates.front() > 0.0)) throw ConfigError("d_candidates must be positive");
      break;
  }
}

std::uint64_t point_seed(std::uint64_t master_seed, SweepKind kind, double key) {
  return derive_seed(master_seed, static_cast<std::uint64_t>(kind) + 1, std::bit_cast<std::uint64_t>(key + 0.0));
}

PointModel build_point(const SweepSpec& spec, std::size_t M, double d, double snr_db, double delta_deg, bool coupled,
                       std::uint64_t seed) {
  ArrayGeometry geom = make_ula(M, d);
  CouplingModel cm = coupling_for(geom, spec.circuit, coupled);
  Scenario scen =
      Scenario::make(spec.K, spec.L, spec.theta0_deg, delta_deg, snr_db, spec.circuit.uncoupled_noise_power());
  if (!spec.beta.empty()) {
    scen.beta = spec.beta;
    scen.validate();
  }
  Rng rng(derive_seed(seed, kPowerStream));
  RVector p_x = expected_antenna_power(scen, geom, cm, spec.power_draws, rng);
  const double phi = steering_phase(spec.theta0_deg, d);
  return PointModel{std::move(geom), std::move(cm), std::move(scen), std::move(p_x), phi};
}

SEResult evaluate_point(const SweepSpec& spec, const PointModel& pm, Architecture arch, Receiver receiver,
                        std::uint64_t seed) {
  const QuantizerModel qm = pm.quantizer(arch, spec.zeta);
  MonteCarloOptions opts;
  opts.workers = spec.workers;
  opts.symbols_per_trial = spec.symbols_per_trial;
  if (spec.empirical) return empirical_se(pm.scen, pm.geom, pm.cm, qm, receiver, spec.trials, seed, opts);
  return monte_carlo_se(pm.scen, pm.geom, pm.cm, qm, receiver, spec.trials, seed, opts);
}

SweepResult run_spacing_sweep(const SweepSpec& spec) {
  if (spec.kind != SweepKind::spacing_sweep) throw ConfigError("run_spacing_sweep: wrong sweep kind");
  spec.validate();
  SweepResult out;
  out.kind = spec.kind;
  out.metadata = describe(spec);
  for (double d : spec.grid) run_se_point(spec, d, spec.M, d, out);
  return out;
}

SweepResult run_fixed_aperture_sweep(const SweepSpec& spec) {
  if (spec.kind != SweepKind::fixed_aperture_sweep) throw ConfigError("run_fixed_aperture_sweep: wrong sweep kind");
  spec.validate();
  SweepResult out;
  out.kind = spec.kind;
  out.metadata = describe(spec);
  for (double m : spec.grid) {
    const auto M = static_cast<std::size_t>(m);
    run_se_point(spec, m, M, spec.aperture_d0 / m, out);
  }
  return out;
}

SweepResult run_optimal_spacing(const SweepSpec& spec) {
  if (spec.kind != SweepKind::optimal_spacing) throw ConfigError("run_optimal_spacing: wrong sweep kind");
  spec.validate();
  SweepResult out;
  out.kind = spec.kind;
  out.metadata = describe(spec);
  out.metadata.emplace_back("d_candidates", join(spec.d_candidates));
  const std::vector<double> deltas = spec.deltas.empty() ? std::vector<double>{spec.delta_deg} : spec.deltas;
  out.metadata.emplace_back("deltas", join(deltas));

  for (double snr : spec.grid) {
    // Every (delta, d) at one SNR shares the channel streams.
    const std::uint64_t seed = point_seed(spec.master_seed, spec.kind, snr);
    for (double delta : deltas) {
      std::vector<OptimalRow> best(spec.receivers.size());
      for (std::size_t r = 0; r < best.size(); ++r) {
        best[r].snr_db = snr;
        best[r].delta_deg = delta;
        best[r].receiver = spec.receivers[r];
        best[r].sum_se = -1.0;
      }
      for (double d : spec.d_candidates) {
        const PointModel pm = build_point(spec, spec.M, d, snr, delta, spec.coupled, seed);
        for (std::size_t r = 0; r < best.size(); ++r) {
          SeRow row;
          row.point = snr;
          row.M = spec.M;
          row.d = d;
          row.snr_db = snr;
          row.delta_deg = delta;
          row.arch = Architecture::sigma_delta_1bit;
          row.receiver = spec.receivers[r];
          row.coupled = spec.coupled;
          row.se = evaluate_point(spec, pm, row.arch, row.receiver, seed);
          // Strict comparison keeps the smaller d on ties.
          if (row.se.sum_se > best[r].sum_se) {
            best[r].optimal_d = d;
            best[r].sum_se = row.se.sum_se;
            best[r].sum_std_error = row.se.sum_std_error;
          }
          out.se_rows.push_back(std::move(row));
        }
      }
      out.optimal_rows.insert(out.optimal_rows.end(), best.begin(), best.end());
    }
  }
  return out;
}

SweepResult run_noise_density(const SweepSpec& spec) {
  if (spec.kind != SweepKind::noise_density) throw ConfigError("run_noise_density: wrong sweep kind");
  spec.validate();
  SweepResult out;
  out.kind = spec.kind;
  out.metadata = describe(spec);
  out.metadata.emplace_back("density_runs", std::to_string(spec.density_runs));
  const std::vector<double> thetas = spec.theta_grid.empty() ? default_theta_grid() : spec.theta_grid;

  for (double d : spec.grid) {
    const std::uint64_t seed = point_seed(spec.master_seed, spec.kind, d);
    for (bool coupled : {true, false}) {
      const PointModel pm = build_point(spec, spec.M, d, spec.snr_db, spec.delta_deg, coupled, seed);
      for (Architecture arch : spec.architectures) {
        if (arch == Architecture::infinite_resolution) continue;
        const QuantizerModel qm = pm.quantizer(arch, spec.zeta);
        for (const auto& p : noise_density(thetas, pm.geom, pm.cm, qm)) {
          out.density_rows.push_back({p.theta_deg, d, coupled, "analytic", arch, p.rho});
        }
        if (spec.density_runs > 0) {
          const auto source = scenario_source(pm.scen, pm.geom, pm.cm);
          const auto emp =
              noise_density_empirical(thetas, pm.geom, pm.cm, qm, source, spec.density_runs, derive_seed(seed, kDensityStream));
          for (const auto& p : emp) out.density_rows.push_back({p.theta_deg, d, coupled, "empirical", arch, p.rho});
        }
      }
    }
  }
  return out;
}

SweepResult run_sweep(const SweepSpec& spec) {
  switch (spec.kind) {
    case SweepKind::noise_density:
      return run_noise_density(spec);
    case SweepKind::spacing_sweep:
      return run_spacing_sweep(spec);
    case SweepKind::fixed_aperture_sweep:
      return run_fixed_aperture_sweep(spec);
    case SweepKind::optimal_spacing:
      return run_optimal_spacing(spec);
  }
  throw ConfigError("unknown sweep kind");
}

}  // namespace sdsim
