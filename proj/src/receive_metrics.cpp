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

#include "sdsim/receive_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "sdsim/parallel.hpp"

namespace sdsim {

namespace {

constexpr std::uint64_t kSymbolStream = 0x73796d626f6c73ULL;

// Neumaier compensated sum.
class Accumulator {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

CMatrix covariance_factor(const CMatrix& R) {
  const Eigen::LLT<CMatrix> llt(R);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(R);
  const RVector root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root.cast<cdouble>().asDiagonal();
}

CVector draw_cn(Eigen::Index n, Rng& rng) {
  CVector z(n);
  for (Eigen::Index i = 0; i < n; ++i) z(i) = complex_normal(rng);
  return z;
}

RVector log2_one_plus(const RVector& sinr) {
  RVector out(sinr.size());
  for (Eigen::Index k = 0; k < sinr.size(); ++k) out(k) = std::log2(1.0 + sinr(k));
  return out;
}

struct Signal {
  double power = 0.0;
  double interference = 0.0;
};

std::vector<Signal> signal_terms(const CMatrix& G, const RVector& p, const CMatrix& W) {
  const CMatrix WG = W.adjoint() * G;
  const auto K = G.cols();
  std::vector<Signal> out(static_cast<std::size_t>(K));
  for (Eigen::Index k = 0; k < K; ++k) {
    double intf = 0.0;
    for (Eigen::Index i = 0; i < K; ++i) {
      if (i != k) intf += p(i) * std::norm(WG(k, i));
    }
    out[static_cast<std::size_t>(k)] = {p(k) * std::norm(WG(k, k)), intf};
  }
  return out;
}

double ratio(double num, double den) { return num > 0.0 ? num / den : 0.0; }

// Rejected ZF draws are redrawn; more than 1% rejections (at least one is
// always tolerated) aborts the run.
std::size_t rejection_cap(std::size_t trials) { return std::max<std::size_t>(1, trials / 100); }
constexpr std::size_t kMaxAttempts = 64;

SEResult aggregate(const std::vector<RVector>& per_trial, std::size_t rejected) {
  const std::size_t n = per_trial.size();
  const auto K = per_trial.front().size();
  SEResult r;
  r.trials = n;
  r.rejected = rejected;
  r.per_user_se = RVector::Zero(K);
  r.std_error = RVector::Zero(K);
  r.trial_sum_se.resize(n);
  for (std::size_t t = 0; t < n; ++t) r.trial_sum_se[t] = per_trial[t].sum();

  for (Eigen::Index k = 0; k < K; ++k) {
    Accumulator acc;
    for (const auto& v : per_trial) acc.add(v(k));
    const double mean = acc.value() / static_cast<double>(n);
    r.per_user_se(k) = mean;
    if (n > 1) {
      Accumulator sq;
      for (const auto& v : per_trial) sq.add((v(k) - mean) * (v(k) - mean));
      r.std_error(k) = std::sqrt(sq.value() / static_cast<double>(n - 1) / static_cast<double>(n));
    }
  }
  Accumulator sum_acc;
  for (double v : r.trial_sum_se) sum_acc.add(v);
  const double mean = sum_acc.value() / static_cast<double>(n);
  r.sum_se = r.per_user_se.sum();
  if (n > 1) {
    Accumulator sq;
    for (double v : r.trial_sum_se) sq.add((v - mean) * (v - mean));
    r.sum_std_error = std::sqrt(sq.value() / static_cast<double>(n - 1) / static_cast<double>(n));
  }
  return r;
}

// Runs `evaluate(trial, channel) -> per-user SE` for every trial, redrawing
// the channel when the ZF receiver rejects it.
template <typename Evaluate>
SEResult run_trials(const Scenario& scen, const ArrayGeometry& geom, const CouplingModel& cm, std::size_t trials,
                    std::uint64_t seed, std::size_t workers, Evaluate evaluate) {
  if (trials < 1) throw ConfigError("monte carlo: trials must be at least 1");
  std::vector<RVector> per_trial(trials);
  std::vector<std::size_t> rejections(trials, 0);
  parallel_for(trials, workers, [&](std::size_t t) {
    for (std::size_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
      Rng rng = trial_rng(seed, t, attempt);
      const ChannelRealization ch = draw_channel(scen, geom, cm, rng);
      try {
        per_trial[t] = evaluate(t, ch);
        return;
      } catch (const RankDeficientError&) {
        ++rejections[t];
      }
    }
    throw std::runtime_error("monte carlo: trial " + std::to_string(t) + " rejected " +
                             std::to_string(kMaxAttempts) + " times by the ZF receiver");
  });
  std::size_t rejected = 0;
  for (auto r : rejections) rejected += r;
  if (rejected > rejection_cap(trials)) {
    throw std::runtime_error("monte carlo: ZF rejected " + std::to_string(rejected) + " of " +
                             std::to_string(trials) + " trials (cap " + std::to_string(rejection_cap(trials)) +
                             "); G^H R_eta^{-1} G is ill-conditioned for this configuration");
  }
  return aggregate(per_trial, rejected);
}

}  // namespace

std::string_view to_string(Receiver r) { return r == Receiver::mrc ? "MRC" : "ZF"; }

Receiver parse_receiver(std::string_view s) {
  if (s == "mrc" || s == "MRC") return Receiver::mrc;
  if (s == "zf" || s == "ZF") return Receiver::zf;
  throw ConfigError("unknown receiver '" + std::string(s) + "'");
}

EffectiveNoiseModel effective_noise(const CouplingModel& cm, const QuantizerModel& qm) {
  if (qm.size() != cm.size()) throw std::invalid_argument("effective_noise: size mismatch");
  switch (qm.arch) {
    case Architecture::infinite_resolution:
      return {cm.R_n};
    case Architecture::standard_1bit: {
      CMatrix R = cm.R_n;
      R.diagonal() += qm.p_q.cast<cdouble>();
      return {R};
    }
    case Architecture::sigma_delta_1bit: {
      CMatrix R = cm.R_n + qm.shaped_noise_covariance();
      return {0.5 * (R + R.adjoint())};
    }
  }
  throw std::invalid_argument("effective_noise: unknown architecture");
}

CMatrix mrc_receiver(const CMatrix& G) { return G; }

ZeroForcingReceiver::ZeroForcingReceiver(const CMatrix& R_eta) : chol_(R_eta) {
  if (chol_.info() != Eigen::Success) {
    throw SingularMatrixError("zf_receiver: R_eta is not positive definite", INFINITY);
  }
}

CMatrix ZeroForcingReceiver::weights(const CMatrix& G) const {
  const CMatrix X = chol_.solve(G);  // R^{-1} G
  CMatrix gram = G.adjoint() * X;
  gram = 0.5 * (gram + gram.adjoint()).eval();
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  const double cond = lo > 0.0 ? hi / lo : INFINITY;
  if (!(cond <= kMaxGramCondition)) {
    throw RankDeficientError("zf_receiver: G^H R_eta^{-1} G is ill-conditioned", cond);
  }
  // W = X gram^{-1} = (gram^{-1} X^H)^H since gram is Hermitian.
  return gram.llt().solve(X.adjoint()).adjoint();
}

CMatrix zf_receiver(const CMatrix& G, const CMatrix& R_eta) { return ZeroForcingReceiver(R_eta).weights(G); }

RVector sinr_per_realization(const CMatrix& G, const RVector& p, const CMatrix& W, const CMatrix& R_n,
                             const QuantizerModel& qm) {
  const auto K = G.cols();
  if (W.rows() != G.rows() || W.cols() != K || p.size() != K || R_n.rows() != G.rows()) {
    throw std::invalid_argument("sinr_per_realization: shape mismatch");
  }
  const auto terms = signal_terms(G, p, W);
  const CMatrix RnW = R_n * W;
  RVector sinr(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    const double noise = W.col(k).dot(RnW.col(k)).real();
    double quant = 0.0;
    if (qm.arch != Architecture::infinite_resolution) {
      const CVector v = qm.apply_u_inv_adjoint(W.col(k));
      quant = qm.p_q.dot(v.cwiseAbs2());
    }
    const auto& s = terms[static_cast<std::size_t>(k)];
    sinr(k) = ratio(s.power, s.interference + noise + quant);
  }
  return sinr;
}

Rng trial_rng(std::uint64_t seed, std::size_t trial, std::size_t attempt) {
  return Rng(derive_seed(seed, static_cast<std::uint64_t>(trial), static_cast<std::uint64_t>(attempt)));
}

SEResult monte_carlo_se(const Scenario& scen, const ArrayGeometry& geom, const CouplingModel& cm,
                        const QuantizerModel& qm, Receiver receiver, std::size_t trials, std::uint64_t seed,
                        const MonteCarloOptions& opts) {
  scen.validate();
  const RVector p = scen.user_powers();
  const CMatrix R_eta = effective_noise(cm, qm).R_eta;
  std::unique_ptr<ZeroForcingReceiver> zf;
  if (receiver == Receiver::zf) zf = std::make_unique<ZeroForcingReceiver>(R_eta);

  return run_trials(scen, geom, cm, trials, seed, opts.workers, [&](std::size_t, const ChannelRealization& ch) {
    const CMatrix W = zf ? zf->weights(ch.G) : mrc_receiver(ch.G);
    return log2_one_plus(sinr_per_realization(ch.G, p, W, cm.R_n, qm));
  });
}

SEResult empirical_se(const Scenario& scen, const ArrayGeometry& geom, const CouplingModel& cm,
                      const QuantizerModel& qm, Receiver receiver, std::size_t trials, std::uint64_t seed,
                      const MonteCarloOptions& opts) {
  scen.validate();
  if (opts.symbols_per_trial < 1) throw ConfigError("empirical_se: symbols_per_trial must be at least 1");
  const RVector p = scen.user_powers();
  const RVector amp = p.cwiseSqrt();
  const CMatrix R_eta = effective_noise(cm, qm).R_eta;
  const CMatrix noise_factor = covariance_factor(cm.R_n);
  std::unique_ptr<ZeroForcingReceiver> zf;
  if (receiver == Receiver::zf) zf = std::make_unique<ZeroForcingReceiver>(R_eta);
  const auto M = static_cast<Eigen::Index>(geom.size());
  const auto K = static_cast<Eigen::Index>(scen.K);
  const std::size_t N = opts.symbols_per_trial;

  return run_trials(scen, geom, cm, trials, seed, opts.workers, [&](std::size_t t, const ChannelRealization& ch) {
    const CMatrix W = zf ? zf->weights(ch.G) : mrc_receiver(ch.G);
    const auto terms = signal_terms(ch.G, p, W);
    Rng rng(derive_seed(seed, kSymbolStream, static_cast<std::uint64_t>(t)));
    RVector noise_acc = RVector::Zero(K);
    RVector quant_acc = RVector::Zero(K);
    for (std::size_t s = 0; s < N; ++s) {
      const CVector sym = draw_cn(K, rng);
      const CVector n = noise_factor * draw_cn(M, rng);
      const CVector x = ch.G * sym.cwiseProduct(amp.cast<cdouble>()) + n;
      const QuantizerOutput out = quantize(x, qm);
      const CVector shaped = out.y - x;  // U^{-1} q
      noise_acc += (W.adjoint() * n).cwiseAbs2();
      quant_acc += (W.adjoint() * shaped).cwiseAbs2();
    }
    RVector sinr(K);
    for (Eigen::Index k = 0; k < K; ++k) {
      const auto& st = terms[static_cast<std::size_t>(k)];
      const double den = st.interference + (noise_acc(k) + quant_acc(k)) / static_cast<double>(N);
      sinr(k) = ratio(st.power, den);
    }
    return log2_one_plus(sinr);
  });
}

std::vector<double> default_theta_grid(double step_deg) {
  if (!(step_deg > 0.0)) throw ConfigError("theta grid: step must be positive");
  std::vector<double> grid;
  const auto n = static_cast<long>(std::floor(180.0 / step_deg + 1e-9));
  for (long i = 0; i <= n; ++i) grid.push_back(-90.0 + static_cast<double>(i) * step_deg);
  return grid;
}

std::vector<DensityPoint> noise_density(const std::vector<double>& theta_grid, const ArrayGeometry& geom,
                                        const CouplingModel& cm, const QuantizerModel& qm) {
  if (qm.arch == Architecture::infinite_resolution) {
    throw ConfigError("noise_density: requires a one-bit architecture");
  }
  std::vector<DensityPoint> out;
  out.reserve(theta_grid.size());
  for (double theta : theta_grid) {
    const CVector b = cm.T * steering(theta, geom);
    const double gain = b.squaredNorm();
    const CVector v = qm.apply_u_inv_adjoint(b);
    out.push_back({theta, qm.p_q.dot(v.cwiseAbs2()) / gain});
  }
  return out;
}

SignalSource design_statistics_source(const RVector& p_x) {
  const RVector amp = p_x.cwiseSqrt();
  return [amp](Rng& rng) {
    CVector x(amp.size());
    for (Eigen::Index m = 0; m < amp.size(); ++m) x(m) = amp(m) * complex_normal(rng);
    return x;
  };
}

SignalSource scenario_source(const Scenario& scen, const ArrayGeometry& geom, const CouplingModel& cm) {
  struct State {
    Scenario scen;
    ArrayGeometry geom;
    CouplingModel cm;
    RVector amp;
    CMatrix noise_factor;
  };
  auto st = std::make_shared<const State>(
      State{scen, geom, cm, scen.user_powers().cwiseSqrt(), covariance_factor(cm.R_n)});
  return [st](Rng& rng) {
    const ChannelRealization ch = draw_channel(st->scen, st->geom, st->cm, rng);
    CVector s = draw_cn(static_cast<Eigen::Index>(st->scen.K), rng);
    s = s.cwiseProduct(st->amp.cast<cdouble>());
    return CVector(ch.G * s + st->noise_factor * draw_cn(ch.G.rows(), rng));
  };
}

std::vector<DensityPoint> noise_density_empirical(const std::vector<double>& theta_grid, const ArrayGeometry& geom,
                                                  const CouplingModel& cm, const QuantizerModel& qm,
                                                  const SignalSource& source, std::size_t runs,
                                                  std::uint64_t seed) {
  if (qm.arch == Architecture::infinite_resolution) {
    throw ConfigError("noise_density: requires a one-bit architecture");
  }
  if (runs < 1) throw ConfigError("noise_density: runs must be at least 1");
  const auto M = static_cast<Eigen::Index>(geom.size());
  const auto n_theta = static_cast<Eigen::Index>(theta_grid.size());
  CMatrix B(M, n_theta);
  RVector gain(n_theta);
  for (Eigen::Index i = 0; i < n_theta; ++i) {
    B.col(i) = cm.T * steering(theta_grid[static_cast<std::size_t>(i)], geom);
    gain(i) = B.col(i).squaredNorm();
  }
  const CMatrix BH = B.adjoint();
  RVector acc = RVector::Zero(n_theta);
  for (std::size_t r = 0; r < runs; ++r) {
    Rng rng = trial_rng(seed, r);
    const CVector x = source(rng);
    const QuantizerOutput out = quantize(x, qm);
    acc += (BH * (out.y - x)).cwiseAbs2();
  }
  std::vector<DensityPoint> res;
  res.reserve(theta_grid.size());
  for (Eigen::Index i = 0; i < n_theta; ++i) {
    res.push_back({theta_grid[static_cast<std::size_t>(i)], acc(i) / static_cast<double>(runs) / gain(i)});
  }
  return res;
}

}  // namespace sdsim
