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

// Command-line front end: sdsim <subcommand> [flags].

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "sdsim/config.hpp"
#include "sdsim/experiments.hpp"
#include "sdsim/report.hpp"

namespace {

using namespace sdsim;

struct Flags {
  std::string config_path;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::string out_dir;
  std::vector<std::string> formats;
  bool no_coupling = false;
  bool empirical = false;
  bool linear = false;
};

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

RunConfig load_config(const Flags& flags, const CLI::App& sub_app, Subcommand sub) {
  RunConfig cfg = flags.config_path.empty() ? parse_config("") : parse_config(read_file(flags.config_path));
  if (sub_app.count("--seed") > 0) {
    cfg.spec.master_seed = flags.seed;
    cfg.explicit_keys.insert("seed");
  }
  if (sub_app.count("--trials") > 0) {
    if (flags.trials < 1) throw ConfigError("flag --trials: must be at least 1");
    cfg.spec.trials = flags.trials;
    cfg.explicit_keys.insert("trials");
  }
  if (!flags.out_dir.empty()) cfg.output_dir = flags.out_dir;
  if (!flags.formats.empty()) cfg.formats = {flags.formats.begin(), flags.formats.end()};
  if (flags.no_coupling) cfg.spec.coupled = false;
  if (flags.empirical) cfg.spec.empirical = true;
  if (flags.linear) cfg.linear_density = true;
  apply_subcommand_defaults(cfg, sub);
  return cfg;
}

void write_metadata(const RunConfig& cfg, RunInfo info) {
  std::ofstream f(std::filesystem::path(cfg.output_dir) / "metadata.json", std::ios::binary);
  if (!f) throw std::runtime_error("cannot write metadata.json");
  write_metadata_json(f, info);
}

int run_sweep_command(const RunConfig& cfg, Subcommand sub) {
  const auto start = std::chrono::steady_clock::now();
  const SweepSpec spec = make_sweep_spec(cfg, sub);
  const SweepResult result = run_sweep(spec);
  RunInfo info;
  info.files = write_sweep_outputs(cfg.output_dir, result, cfg.formats.count("csv") != 0,
                                   cfg.formats.count("svg") != 0, cfg.linear_density);
  info.subcommand = std::string(to_string(sub));
  info.seed = spec.master_seed;
  info.config = result.metadata;
  info.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_metadata(cfg, info);
  for (const auto& f : info.files) std::cout << (std::filesystem::path(cfg.output_dir) / f).string() << '\n';
  return 0;
}

// Flat design statistics at the scenario's mean antenna power, one
// architecture per table.
int run_validate_quantizer(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const auto& s = cfg.spec;
  const PointModel pm = build_point(s, s.M, cfg.d, s.snr_db, s.delta_deg, s.coupled, s.master_seed);
  const RVector p_x = RVector::Constant(static_cast<Eigen::Index>(s.M), pm.p_x.mean());

  std::filesystem::create_directories(cfg.output_dir);
  RunInfo info;
  info.subcommand = "validate-quantizer";
  info.seed = s.master_seed;
  for (auto arch : s.architectures) {
    if (arch == Architecture::infinite_resolution) continue;
    const auto qm = design_quantizer(arch, p_x, pm.phi, s.zeta);
    const auto v = validate_quantizer_model(qm, cfg.validate_draws, derive_seed(s.master_seed, 0x7661u));
    std::printf("# %s  M=%zu d=%s draws=%zu worst_rel_err=%s\n", std::string(to_string(arch)).c_str(), s.M,
                format_double(cfg.d).c_str(), v.draws, format_double(v.worst_relative_error()).c_str());
    write_validation_csv(std::cout, v);
    if (cfg.formats.count("csv") != 0) {
      const std::string name = "validate_" + std::string(to_string(arch)) + ".csv";
      std::ofstream f(std::filesystem::path(cfg.output_dir) / name, std::ios::binary);
      write_validation_csv(f, v);
      if (!f) throw std::runtime_error("cannot write " + name);
      info.files.push_back(name);
    }
  }
  info.config = {{"M", std::to_string(s.M)},
                 {"d", format_double(cfg.d)},
                 {"theta0_deg", format_double(s.theta0_deg)},
                 {"zeta", format_double(s.zeta)},
                 {"draws", std::to_string(cfg.validate_draws)},
                 {"flat_power", format_double(p_x(0))}};
  info.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_metadata(cfg, info);
  return 0;
}

void report_error(const std::string& kind, const std::string& message) {
  nlohmann::json j{{"error", kind}, {"message", message}};
  std::cerr << j.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"One-bit spatial Sigma-Delta massive MIMO simulator"};
  app.set_version_flag("--version", std::string(sdsim::kVersion));
  app.require_subcommand(1);

  Flags flags;
  const std::vector<std::pair<const char*, const char*>> subs = {
      {"noise-density", "Quantization noise power density versus angle"},
      {"sweep-spacing", "Sum SE versus antenna spacing"},
      {"sweep-aperture", "Sum SE versus M at fixed aperture"},
      {"optimal-spacing", "Optimal spacing versus SNR and sector width"},
      {"validate-quantizer", "Per-antenna model versus empirical quantization noise variance"},
  };
  for (const auto& [name, help] : subs) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", flags.config_path, "key=value configuration file")->check(CLI::ExistingFile);
    sub->add_option("--seed", flags.seed, "master seed");
    sub->add_option("--trials", flags.trials, "Monte Carlo trials per point");
    sub->add_option("--out", flags.out_dir, "output directory");
    sub->add_option("--format", flags.formats, "csv and/or svg")->check(CLI::IsMember({"csv", "svg"}));
    sub->add_flag("--no-coupling", flags.no_coupling, "use the Z = R I baseline");
    sub->add_flag("--empirical", flags.empirical, "run the quantizer instead of the noise model");
    sub->add_flag("--linear", flags.linear, "write rho_q in V^2 instead of dB");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("usage", e.what());
    return 2;
  }

  try {
    const CLI::App* chosen = app.get_subcommands().front();
    const auto sub = sdsim::parse_subcommand(chosen->get_name());
    const auto cfg = load_config(flags, *chosen, sub);
    if (sub == sdsim::Subcommand::validate_quantizer) return run_validate_quantizer(cfg);
    return run_sweep_command(cfg, sub);
  } catch (const sdsim::ConfigError& e) {
    report_error("config", e.what());
    return 3;
  } catch (const sdsim::SingularMatrixError& e) {
    report_error("numerical", e.what());
    return 4;
  } catch (const std::exception& e) {
    report_error("runtime", e.what());
    return 1;
  }
}
