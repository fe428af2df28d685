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

#include "sdsim/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>
#include <tuple>

#include "json.hpp"

namespace sdsim {

namespace {

void write_se_fields(std::ostream& os, const SeRow& r) {
  os << to_string(r.arch) << ',' << to_string(r.receiver) << ',' << format_double(r.se.sum_se);
  for (Eigen::Index k = 0; k < r.se.per_user_se.size(); ++k) os << ',' << format_double(r.se.per_user_se(k));
  os << ',' << format_double(r.se.sum_std_error) << '\n';
}

std::size_t user_count(const std::vector<SeRow>& rows) {
  return rows.empty() ? 0 : static_cast<std::size_t>(rows.front().se.per_user_se.size());
}

void write_se_header(std::ostream& os, std::size_t K) {
  os << "architecture,receiver,sum_se";
  for (std::size_t k = 1; k <= K; ++k) os << ",se_user_" << k;
  os << ",std_err\n";
}

double density_value(double rho, bool linear) { return linear ? rho : 10.0 * std::log10(rho); }

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

// Round axis limits outward to a step of 1, 2 or 5 times a power of ten.
double nice_step(double span) {
  if (!(span > 0.0)) return 1.0;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double f : {1.0, 2.0, 5.0}) {
    if (f * mag >= raw) return f * mag;
  }
  return 10.0 * mag;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_spacing_csv(std::ostream& os, const std::vector<SeRow>& rows) {
  os << "d,";
  write_se_header(os, user_count(rows));
  for (const auto& r : rows) {
    os << format_double(r.d) << ',';
    write_se_fields(os, r);
  }
}

void write_aperture_csv(std::ostream& os, const std::vector<SeRow>& rows) {
  os << "M,d,";
  write_se_header(os, user_count(rows));
  for (const auto& r : rows) {
    os << r.M << ',' << format_double(r.d) << ',';
    write_se_fields(os, r);
  }
}

void write_density_csv(std::ostream& os, const std::vector<DensityRow>& rows, Architecture arch, bool linear) {
  os << "theta_deg,d,coupled_flag,mode," << (linear ? "rho_q" : "rho_q_db") << '\n';
  for (const auto& r : rows) {
    if (r.arch != arch) continue;
    os << format_double(r.theta_deg) << ',' << format_double(r.d) << ',' << (r.coupled ? 1 : 0) << ',' << r.mode
       << ',' << format_double(density_value(r.rho, linear)) << '\n';
  }
}

void write_optimal_csv(std::ostream& os, const std::vector<OptimalRow>& rows) {
  os << "snr_db,delta_deg,receiver,optimal_d,sum_se,std_err\n";
  for (const auto& r : rows) {
    os << format_double(r.snr_db) << ',' << format_double(r.delta_deg) << ',' << to_string(r.receiver) << ','
       << format_double(r.optimal_d) << ',' << format_double(r.sum_se) << ',' << format_double(r.sum_std_error)
       << '\n';
  }
}

void write_optimal_curves_csv(std::ostream& os, const std::vector<SeRow>& rows) {
  os << "snr_db,delta_deg,d,receiver,sum_se,std_err\n";
  for (const auto& r : rows) {
    os << format_double(r.snr_db) << ',' << format_double(r.delta_deg) << ',' << format_double(r.d) << ','
       << to_string(r.receiver) << ',' << format_double(r.se.sum_se) << ',' << format_double(r.se.sum_std_error)
       << '\n';
  }
}

void write_validation_csv(std::ostream& os, const QuantizerValidation& v) {
  os << "antenna,model_var,empirical_var,ratio\n";
  for (Eigen::Index m = 0; m < v.model_var.size(); ++m) {
    os << m + 1 << ',' << format_double(v.model_var(m)) << ',' << format_double(v.empirical_var(m)) << ','
       << format_double(v.ratio(m)) << '\n';
  }
}

std::vector<ChartSeries> se_series(const std::vector<SeRow>& rows, bool x_is_M) {
  std::map<std::tuple<Architecture, Receiver, double, double>, ChartSeries> by_key;
  std::vector<std::tuple<Architecture, Receiver, double, double>> order;
  for (const auto& r : rows) {
    const auto key = std::make_tuple(r.arch, r.receiver, r.snr_db, r.delta_deg);
    auto [it, inserted] = by_key.try_emplace(key);
    if (inserted) {
      order.push_back(key);
      it->second.name = std::string(to_string(r.arch)) + " " + std::string(to_string(r.receiver));
    }
    it->second.x.push_back(x_is_M ? static_cast<double>(r.M) : r.d);
    it->second.y.push_back(r.se.sum_se);
  }
  // Suffix SNR/delta only when they vary.
  const bool multi = std::any_of(order.begin(), order.end(), [&](const auto& k) {
    return std::get<2>(k) != std::get<2>(order.front()) || std::get<3>(k) != std::get<3>(order.front());
  });
  std::vector<ChartSeries> out;
  for (const auto& key : order) {
    auto s = by_key.at(key);
    if (multi) s.name += " snr=" + format_double(std::get<2>(key)) + " delta=" + format_double(std::get<3>(key));
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<ChartSeries> density_series(const std::vector<DensityRow>& rows, Architecture arch, bool linear) {
  std::vector<ChartSeries> out;
  std::map<std::tuple<double, bool, std::string>, std::size_t> index;
  for (const auto& r : rows) {
    if (r.arch != arch) continue;
    const auto key = std::make_tuple(r.d, r.coupled, r.mode);
    auto [it, inserted] = index.try_emplace(key, out.size());
    if (inserted) {
      out.push_back({"d=" + format_double(r.d) + (r.coupled ? " coupled " : " uncoupled ") + r.mode, {}, {}});
    }
    out[it->second].x.push_back(r.theta_deg);
    out[it->second].y.push_back(density_value(r.rho, linear));
  }
  return out;
}

void write_line_chart_svg(std::ostream& os, const std::string& title, const std::string& x_label,
                          const std::string& y_label, const std::vector<ChartSeries>& series) {
  constexpr double width = 720, height = 480;
  constexpr double left = 70, right = 220, top = 40, bottom = 55;
  constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                     "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      x_lo = std::min(x_lo, s.x[i]);
      x_hi = std::max(x_hi, s.x[i]);
      y_lo = std::min(y_lo, s.y[i]);
      y_hi = std::max(y_hi, s.y[i]);
    }
  }
  if (!std::isfinite(x_lo)) x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
  if (x_hi == x_lo) x_lo -= 0.5, x_hi += 0.5;
  if (y_hi == y_lo) y_lo -= 0.5, y_hi += 0.5;
  const double y_step = nice_step(y_hi - y_lo);
  y_lo = std::floor(y_lo / y_step) * y_step;
  y_hi = std::ceil(y_hi / y_step) * y_step;
  const double x_step = nice_step(x_hi - x_lo);

  const double plot_w = width - left - right, plot_h = height - top - bottom;
  auto px = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  auto py = [&](double y) { return top + (y_hi - y) / (y_hi - y_lo) * plot_h; };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << left + plot_w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
     << escape_xml(title) << "</text>\n";

  for (double y = y_lo; y <= y_hi + 1e-9 * y_step; y += y_step) {
    os << "<line x1=\"" << left << "\" x2=\"" << left + plot_w << "\" y1=\"" << py(y) << "\" y2=\"" << py(y)
       << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << left - 6 << "\" y=\"" << py(y) + 4 << "\" text-anchor=\"end\">" << format_double(y)
       << "</text>\n";
  }
  for (double x = std::ceil(x_lo / x_step) * x_step; x <= x_hi + 1e-9 * x_step; x += x_step) {
    os << "<line x1=\"" << px(x) << "\" x2=\"" << px(x) << "\" y1=\"" << top << "\" y2=\"" << top + plot_h
       << "\" stroke=\"#eee\"/>\n";
    os << "<text x=\"" << px(x) << "\" y=\"" << top + plot_h + 16 << "\" text-anchor=\"middle\">"
       << format_double(std::abs(x) < 1e-12 * x_step ? 0.0 : x) << "</text>\n";
  }
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << plot_h
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">"
     << escape_xml(x_label) << "</text>\n";
  os << "<text transform=\"translate(18," << top + plot_h / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
     << escape_xml(y_label) << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = palette[s % std::size(palette)];
    // Colors repeat after the palette runs out; repeats are dashed.
    const char* dash = s < std::size(palette) ? "" : " stroke-dasharray=\"6,3\"";
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"" << dash << " points=\"";
    for (std::size_t i = 0; i < series[s].x.size(); ++i) {
      if (!std::isfinite(series[s].y[i])) continue;
      os << px(series[s].x[i]) << ',' << py(series[s].y[i]) << ' ';
    }
    os << "\"/>\n";
    const double ly = top + 14 + 16.0 * static_cast<double>(s);
    os << "<line x1=\"" << left + plot_w + 10 << "\" x2=\"" << left + plot_w + 30 << "\" y1=\"" << ly - 4
       << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"" << dash << "/>\n";
    os << "<text x=\"" << left + plot_w + 35 << "\" y=\"" << ly << "\">" << escape_xml(series[s].name)
       << "</text>\n";
  }
  os << "</svg>\n";
}

void write_metadata_json(std::ostream& os, const RunInfo& info) {
  nlohmann::ordered_json j;
  j["tool"] = "sdsim";
  j["version"] = std::string(kVersion);
  j["subcommand"] = info.subcommand;
  j["seed"] = info.seed;
  j["wall_seconds"] = info.wall_seconds;
  auto& cfg = j["config"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : info.config) cfg[k] = v;
  j["files"] = info.files;
  os << j.dump(2) << '\n';
}

std::vector<std::string> write_sweep_outputs(const std::filesystem::path& dir, const SweepResult& result,
                                             bool csv, bool svg, bool linear_density) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> files;
  auto emit = [&](const std::string& name, auto&& writer) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + (dir / name).string() + " for writing");
    writer(f);
    if (!f) throw std::runtime_error("write failed for " + (dir / name).string());
    files.push_back(name);
  };

  switch (result.kind) {
    case SweepKind::spacing_sweep:
      if (csv) emit("spacing_sweep.csv", [&](std::ostream& os) { write_spacing_csv(os, result.se_rows); });
      if (svg) {
        emit("spacing_sweep.svg", [&](std::ostream& os) {
          write_line_chart_svg(os, "Sum SE versus antenna spacing", "d / wavelength", "sum SE [bit/s/Hz]",
                               se_series(result.se_rows, false));
        });
      }
      break;
    case SweepKind::fixed_aperture_sweep:
      if (csv) emit("aperture_sweep.csv", [&](std::ostream& os) { write_aperture_csv(os, result.se_rows); });
      if (svg) {
        emit("aperture_sweep.svg", [&](std::ostream& os) {
          write_line_chart_svg(os, "Sum SE at fixed aperture", "M", "sum SE [bit/s/Hz]",
                               se_series(result.se_rows, true));
        });
      }
      break;
    case SweepKind::optimal_spacing:
      if (csv) {
        emit("optimal_spacing.csv", [&](std::ostream& os) { write_optimal_csv(os, result.optimal_rows); });
        emit("optimal_spacing_curves.csv",
             [&](std::ostream& os) { write_optimal_curves_csv(os, result.se_rows); });
      }
      if (svg) {
        emit("optimal_spacing_curves.svg", [&](std::ostream& os) {
          write_line_chart_svg(os, "Sigma-Delta sum SE versus spacing", "d / wavelength", "sum SE [bit/s/Hz]",
                               se_series(result.se_rows, false));
        });
      }
      break;
    case SweepKind::noise_density: {
      std::vector<Architecture> archs;
      for (const auto& r : result.density_rows) {
        if (std::find(archs.begin(), archs.end(), r.arch) == archs.end()) archs.push_back(r.arch);
      }
      for (auto arch : archs) {
        const std::string stem = "noise_density_" + std::string(to_string(arch));
        if (csv) {
          emit(stem + ".csv",
               [&](std::ostream& os) { write_density_csv(os, result.density_rows, arch, linear_density); });
        }
        if (svg) {
          emit(stem + ".svg", [&](std::ostream& os) {
            write_line_chart_svg(os, "Quantization noise power density", "theta [deg]",
                                 linear_density ? "rho_q [V^2]" : "rho_q [dB]",
                                 density_series(result.density_rows, arch, linear_density));
          });
        }
      }
      break;
    }
  }
  return files;
}

}  // namespace sdsim
