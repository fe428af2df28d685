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

#include "sdsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace sdsim {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto item = trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double to_double(std::string_view v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, out);
  if (res.ec != std::errc() || res.ptr != end || !std::isfinite(out)) {
    throw ConfigError("expected a finite number, got '" + std::string(v) + "'");
  }
  return out;
}

std::uint64_t to_u64(std::string_view v) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, out);
  if (res.ec != std::errc() || res.ptr != end) {
    throw ConfigError("expected a nonnegative integer, got '" + std::string(v) + "'");
  }
  return out;
}

std::size_t to_count(std::string_view v) {
  const auto n = to_u64(v);
  if (n < 1) throw ConfigError("expected a positive integer, got '" + std::string(v) + "'");
  return static_cast<std::size_t>(n);
}

bool to_bool(std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("expected a boolean, got '" + std::string(v) + "'");
}

// Accepts "a", "a+bj", "a-bj", "bj".
cdouble to_complex(std::string_view v) {
  if (v.empty()) throw ConfigError("expected a complex number");
  if (v.back() != 'j' && v.back() != 'i') return {to_double(v), 0.0};
  const auto body = v.substr(0, v.size() - 1);
  const auto split = body.find_last_of("+-");
  if (split == std::string_view::npos || split == 0 || body[split - 1] == 'e' || body[split - 1] == 'E') {
    return {0.0, to_double(body)};
  }
  return {to_double(body.substr(0, split)), to_double(body.substr(split))};
}

std::vector<double> to_sorted_list(std::string_view v) {
  std::vector<double> out;
  for (auto item : split_list(v)) out.push_back(to_double(item));
  if (out.empty()) throw ConfigError("expected a non-empty list");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

using Setter = std::function<void(RunConfig&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& schema() {
  static const std::map<std::string, Setter, std::less<>> keys = {
      {"K", [](RunConfig& c, std::string_view v) { c.spec.K = to_count(v); }},
      {"L", [](RunConfig& c, std::string_view v) { c.spec.L = to_count(v); }},
      {"M", [](RunConfig& c, std::string_view v) { c.spec.M = to_count(v); }},
      {"theta0_deg", [](RunConfig& c, std::string_view v) { c.spec.theta0_deg = to_double(v); }},
      {"delta_deg", [](RunConfig& c, std::string_view v) { c.spec.delta_deg = to_double(v); }},
      {"snr_db", [](RunConfig& c, std::string_view v) { c.spec.snr_db = to_double(v); }},
      {"beta",
       [](RunConfig& c, std::string_view v) {
         c.spec.beta.clear();
         for (auto item : split_list(v)) c.spec.beta.push_back(to_double(item));
       }},
      {"R", [](RunConfig& c, std::string_view v) { c.spec.circuit.R = to_double(v); }},
      {"temperature", [](RunConfig& c, std::string_view v) { c.spec.circuit.temperature = to_double(v); }},
      {"bandwidth", [](RunConfig& c, std::string_view v) { c.spec.circuit.bandwidth = to_double(v); }},
      {"rho", [](RunConfig& c, std::string_view v) { c.spec.circuit.rho = to_complex(v); }},
      {"sigma_i2", [](RunConfig& c, std::string_view v) { c.spec.circuit.sigma_i2 = to_double(v); }},
      {"sigma_u2", [](RunConfig& c, std::string_view v) { c.spec.circuit.sigma_u2 = to_double(v); }},
      {"boltzmann", [](RunConfig& c, std::string_view v) { c.spec.circuit.boltzmann = to_double(v); }},
      {"zeta", [](RunConfig& c, std::string_view v) { c.spec.zeta = to_double(v); }},
      {"trials", [](RunConfig& c, std::string_view v) { c.spec.trials = to_count(v); }},
      {"seed", [](RunConfig& c, std::string_view v) { c.spec.master_seed = to_u64(v); }},
      {"d_grid", [](RunConfig& c, std::string_view v) { c.d_grid = to_sorted_list(v); }},
      {"m_grid", [](RunConfig& c, std::string_view v) { c.m_grid = to_sorted_list(v); }},
      {"snr_grid", [](RunConfig& c, std::string_view v) { c.snr_grid = to_sorted_list(v); }},
      {"aperture_d0", [](RunConfig& c, std::string_view v) { c.spec.aperture_d0 = to_double(v); }},
      {"deltas", [](RunConfig& c, std::string_view v) { c.spec.deltas = to_sorted_list(v); }},
      {"d_candidates", [](RunConfig& c, std::string_view v) { c.spec.d_candidates = to_sorted_list(v); }},
      {"architectures",
       [](RunConfig& c, std::string_view v) {
         c.spec.architectures.clear();
         for (auto item : split_list(v)) c.spec.architectures.push_back(parse_architecture(item));
       }},
      {"receivers",
       [](RunConfig& c, std::string_view v) {
         c.spec.receivers.clear();
         for (auto item : split_list(v)) c.spec.receivers.push_back(parse_receiver(item));
       }},
      {"coupled", [](RunConfig& c, std::string_view v) { c.spec.coupled = to_bool(v); }},
      {"empirical", [](RunConfig& c, std::string_view v) { c.spec.empirical = to_bool(v); }},
      {"power_draws", [](RunConfig& c, std::string_view v) { c.spec.power_draws = to_count(v); }},
      {"symbols_per_trial", [](RunConfig& c, std::string_view v) { c.spec.symbols_per_trial = to_count(v); }},
      {"density_runs",
       [](RunConfig& c, std::string_view v) { c.spec.density_runs = static_cast<std::size_t>(to_u64(v)); }},
      {"theta_step_deg", [](RunConfig& c, std::string_view v) { c.theta_step_deg = to_double(v); }},
      {"d", [](RunConfig& c, std::string_view v) { c.d = to_double(v); }},
      {"validate_draws", [](RunConfig& c, std::string_view v) { c.validate_draws = to_count(v); }},
      {"output_dir", [](RunConfig& c, std::string_view v) { c.output_dir = std::string(v); }},
      {"formats",
       [](RunConfig& c, std::string_view v) {
         c.formats.clear();
         for (auto item : split_list(v)) {
           if (item != "csv" && item != "svg") throw ConfigError("unknown format '" + std::string(item) + "'");
           c.formats.insert(std::string(item));
         }
       }},
      {"linear_density", [](RunConfig& c, std::string_view v) { c.linear_density = to_bool(v); }},
      {"threads", [](RunConfig& c, std::string_view v) { c.spec.workers = to_count(v); }},
  };
  return keys;
}

void check_ranges(const RunConfig& c) {
  const auto& s = c.spec;
  if (!(s.delta_deg >= 0.0 && s.delta_deg <= 90.0)) throw ConfigError("key 'delta_deg': must lie in [0, 90]");
  if (!(std::abs(s.theta0_deg) + s.delta_deg <= 90.0)) {
    throw ConfigError("key 'theta0_deg': |theta0| + delta must not exceed 90");
  }
  if (!(stage_error_factor(s.zeta) > 0.0)) throw ConfigError("key 'zeta': zeta * pi / 2 must exceed 1");
  if (!s.beta.empty() && s.beta.size() != s.K) throw ConfigError("key 'beta': needs exactly K entries");
  if (!(c.d > 0.0)) throw ConfigError("key 'd': must be positive");
  if (!(c.theta_step_deg > 0.0)) throw ConfigError("key 'theta_step_deg': must be positive");
  if (s.architectures.empty()) throw ConfigError("key 'architectures': must not be empty");
  try {
    s.circuit.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("circuit parameters: ") + e.what());
  }
}

}  // namespace

std::string_view to_string(Subcommand s) {
  switch (s) {
    case Subcommand::noise_density:
      return "noise-density";
    case Subcommand::sweep_spacing:
      return "sweep-spacing";
    case Subcommand::sweep_aperture:
      return "sweep-aperture";
    case Subcommand::optimal_spacing:
      return "optimal-spacing";
    case Subcommand::validate_quantizer:
      return "validate-quantizer";
  }
  return "unknown";
}

Subcommand parse_subcommand(std::string_view s) {
  for (auto sub : {Subcommand::noise_density, Subcommand::sweep_spacing, Subcommand::sweep_aperture,
                   Subcommand::optimal_spacing, Subcommand::validate_quantizer}) {
    if (to_string(sub) == s) return sub;
  }
  throw ConfigError("unknown subcommand '" + std::string(s) + "'");
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  const auto& keys = schema();
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const auto it = keys.find(key);
    if (it == keys.end()) {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    }
    if (!cfg.explicit_keys.insert(std::string(key)).second) {
      throw ConfigError("line " + std::to_string(line_no) + ": key '" + std::string(key) + "' given twice");
    }
    try {
      it->second(cfg, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": key '" + std::string(key) + "': " + e.what());
    }
  }

  // Noise variances follow R, T and B unless given explicitly.
  const bool si = cfg.is_set("sigma_i2");
  const bool su = cfg.is_set("sigma_u2");
  const CircuitParams derived = CircuitParams(cfg.spec.circuit).derive_noise_variances();
  if (!si) cfg.spec.circuit.sigma_i2 = derived.sigma_i2;
  if (!su) cfg.spec.circuit.sigma_u2 = derived.sigma_u2;

  check_ranges(cfg);
  return cfg;
}

void apply_subcommand_defaults(RunConfig& cfg, Subcommand sub) {
  auto set_default = [&](const char* key, auto&& apply) {
    if (!cfg.is_set(key)) apply();
  };
  switch (sub) {
    case Subcommand::noise_density:
      set_default("theta0_deg", [&] { cfg.spec.theta0_deg = 0.0; });
      set_default("snr_db", [&] { cfg.spec.snr_db = 0.0; });
      set_default("d_grid", [&] { cfg.d_grid = {0.125, 0.25, 0.5}; });
      set_default("architectures", [&] { cfg.spec.architectures = {Architecture::sigma_delta_1bit}; });
      break;
    case Subcommand::sweep_spacing:
      set_default("d_grid", [&] { cfg.d_grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0}; });
      break;
    case Subcommand::sweep_aperture:
      set_default("m_grid", [&] { cfg.m_grid = {100, 150, 200, 250, 300, 350, 400}; });
      break;
    case Subcommand::optimal_spacing:
      set_default("snr_grid", [&] { cfg.snr_grid = {-10, -5, 0, 5, 10}; });
      set_default("deltas", [&] { cfg.spec.deltas = {10, 20, 30}; });
      set_default("receivers", [&] { cfg.spec.receivers = {Receiver::zf}; });
      break;
    case Subcommand::validate_quantizer:
      set_default("architectures", [&] { cfg.spec.architectures = {Architecture::sigma_delta_1bit}; });
      break;
  }
  check_ranges(cfg);
}

SweepSpec make_sweep_spec(const RunConfig& cfg, Subcommand sub) {
  SweepSpec spec = cfg.spec;
  switch (sub) {
    case Subcommand::noise_density:
      spec.kind = SweepKind::noise_density;
      spec.grid = cfg.d_grid;
      spec.theta_grid = default_theta_grid(cfg.theta_step_deg);
      break;
    case Subcommand::sweep_spacing:
      spec.kind = SweepKind::spacing_sweep;
      spec.grid = cfg.d_grid;
      break;
    case Subcommand::sweep_aperture:
      spec.kind = SweepKind::fixed_aperture_sweep;
      spec.grid = cfg.m_grid;
      break;
    case Subcommand::optimal_spacing:
      spec.kind = SweepKind::optimal_spacing;
      spec.grid = cfg.snr_grid;
      break;
    case Subcommand::validate_quantizer:
      throw ConfigError("validate-quantizer does not run a sweep");
  }
  for (const auto& dt : spec.deltas) {
    if (!(dt >= 0.0 && std::abs(spec.theta0_deg) + dt <= 90.0)) {
      throw ConfigError("key 'deltas': each delta must keep the sector within [-90, 90]");
    }
  }
  spec.validate();
  return spec;
}

}  // namespace sdsim
