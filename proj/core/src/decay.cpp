// Copyright 2026 The rcl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rcl/decay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "rcl/parallel.hpp"
#include "rcl/transfer.hpp"

namespace rcl {

RateFit rate_fit(const std::vector<std::pair<double, double>>& series) {
  if (series.size() < 3) throw Error(ErrorCode::insufficient_points, "rate_fit: need at least 3 points");
  double sx = 0.0;
  double sy = 0.0;
  for (const auto& [n, v] : series) {
    if (!(v > 0.0)) throw Error(ErrorCode::non_positive_values, "rate_fit: values must be positive");
    sx += n;
    sy += std::log(v);
  }
  const double count = static_cast<double>(series.size());
  const double mx = sx / count;
  const double my = sy / count;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (const auto& [n, v] : series) {
    const double dx = n - mx;
    const double dy = std::log(v) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw Error(ErrorCode::insufficient_points, "rate_fit: need at least two distinct n");
  const double slope = sxy / sxx;
  RateFit fit;
  fit.rate = std::exp(slope);
  fit.intercept = my - slope * mx;
  const double ss_res = std::max(0.0, syy - slope * sxy);
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

std::pair<Observable, Observable> holder_split(const Observable& phi, double b) {
  if (!phi.holder()) throw Error(ErrorCode::invalid_argument, "holder_split: phi needs a Holder certificate");
  if (!(b > 0.0)) throw Error(ErrorCode::invalid_argument, "holder_split: b must be positive");
  const HolderCertificate h = *phi.holder();
  const double shift = h.constant / b;
  Observable plus("split+ " + phi.name(), [phi, shift](const ComplexMatrix& x) { return std::max(phi(x), 0.0) + shift; },
                  h);
  Observable minus("split- " + phi.name(),
                   [phi, shift](const ComplexMatrix& x) { return std::max(-phi(x), 0.0) + shift; }, h);
  return {plus, minus};
}

namespace {

struct PointSeries {
  double psi = 0.0;
  double phi = 0.0;
  std::vector<double> exact;  // psi(x) (L^d phi(x) - phi(0)), d = 1..n_max
  std::vector<double> mc;
};

void exact_word_sums(const BranchSystem& tc, const Observable& phi, const ComplexMatrix& x, int depth, int n_max,
                     std::vector<double>& sums, std::vector<ComplexMatrix>& buffers, ComplexMatrix& scratch) {
  if (depth == n_max) return;
  const ComplexMatrix& cur = depth == 0 ? x : buffers[static_cast<std::size_t>(depth - 1)];
  ComplexMatrix& next = buffers[static_cast<std::size_t>(depth)];
  for (std::size_t i = 0; i < tc.size(); ++i) {
    tc.map(i, cur, next, scratch);
    sums[static_cast<std::size_t>(depth)] += phi(next);
    exact_word_sums(tc, phi, x, depth + 1, n_max, sums, buffers, scratch);
  }
}

struct Moments {
  double mean = 0.0;
  double stderr_mean = 0.0;
};

Moments moments(const std::vector<PointSeries>& points, bool exact, std::size_t d) {
  double sum = 0.0;
  double sum2 = 0.0;
  for (const auto& p : points) {
    const double v = exact ? p.exact[d] : p.mc[d];
    sum += v;
    sum2 += v * v;
  }
  const double m = static_cast<double>(points.size());
  Moments out;
  out.mean = sum / m;
  if (points.size() > 1) {
    const double var = std::max(0.0, (sum2 - m * out.mean * out.mean) / (m - 1.0));
    out.stderr_mean = std::sqrt(var / m);
  }
  return out;
}

}  // namespace

DecayReport correlation_decay(const MixedUnitaryChannel& channel, const Observable& phi, const Observable& psi,
                              std::size_t m_samples, int n_max, std::uint64_t seed, const DecayOptions& options) {
  if (!phi.holder()) throw Error(ErrorCode::invalid_argument, "correlation_decay: phi needs a Holder certificate");
  if (n_max < 1) throw Error(ErrorCode::invalid_argument, "correlation_decay: n_max must be >= 1");
  if (m_samples < 2) throw Error(ErrorCode::invalid_argument, "correlation_decay: need at least 2 m-samples");
  if (options.words_per_point < 1) throw Error(ErrorCode::invalid_argument, "correlation_decay: words_per_point >= 1");
  for (const auto& b : channel.branches()) {
    if (!(b.p > 0.0 && b.p < 1.0)) {
      throw Error(ErrorCode::probability_on_boundary, "correlation_decay: probabilities must lie in (0, 1)");
    }
  }
  const bool want_exact = options.mode != DecayMode::monte_carlo;
  const bool want_mc = options.mode != DecayMode::exact;
  const auto k = static_cast<double>(channel.size());
  if (want_exact && std::pow(k, n_max) > kExactWordBudget) {
    throw Error(ErrorCode::exact_budget_exceeded, "correlation_decay: k^n_max exceeds the exact word budget");
  }

  DecayReport report;
  report.nu = phi.holder()->exponent;
  ConeSpec spec = options.spec;
  spec.nu = std::clamp(report.nu, 1e-6, 1.0);
  const DiameterEstimate d1 =
      estimate_D1(channel, spec, options.d1_function_samples, options.d1_point_samples, derive_seed(seed, 7));
  report.lambda1 = d1.lambda1;
  report.Lambda1 = d1.Lambda1;
  report.D1_lower = d1.lower;
  report.D1_upper = d1.upper;
  report.kappa_mod = std::abs(spectrum(Channel(channel)).kappa);

  const BranchSystem tc = BranchSystem::contractive(channel);
  const Eigen::Index n = channel.dim();
  const double phi0 = phi(ComplexMatrix::Zero(n, n));
  const auto depth = static_cast<std::size_t>(n_max);

  std::vector<PointSeries> points(m_samples);
  const std::size_t chunks = (m_samples + kChunkSize - 1) / kChunkSize;
  parallel_for(chunks, [&](std::size_t c) {
    Rng rng(derive_seed(seed, 1000 + c));
    std::vector<double> probs;
    std::vector<double> reweight;  // 1 / (k p_i)
    for (const auto& b : channel.branches()) {
      probs.push_back(b.p);
      reweight.push_back(1.0 / (k * b.p));
    }
    std::discrete_distribution<std::size_t> letter(probs.begin(), probs.end());
    std::vector<double> sums(depth);
    std::vector<ComplexMatrix> buffers(depth, ComplexMatrix(n, n));
    ComplexMatrix scratch(n, n);
    ComplexMatrix cur(n, n);
    ComplexMatrix next(n, n);
    const std::size_t end = std::min(m_samples, (c + 1) * kChunkSize);
    for (std::size_t s = c * kChunkSize; s < end; ++s) {
      const ComplexMatrix x = random_cone_point(n, rng).matrix();
      PointSeries& p = points[s];
      p.psi = psi(x);
      p.phi = phi(x);
      if (want_exact) {
        std::fill(sums.begin(), sums.end(), 0.0);
        exact_word_sums(tc, phi, x, 0, n_max, sums, buffers, scratch);
        p.exact.resize(depth);
        double words = 1.0;
        for (std::size_t d = 0; d < depth; ++d) {
          words *= k;
          p.exact[d] = p.psi * (sums[d] / words - phi0);
        }
      }
      if (want_mc) {
        p.mc.assign(depth, 0.0);
        for (std::size_t w = 0; w < options.words_per_point; ++w) {
          // Words drawn with probability p_J and weighted by k^-n / p_J: the
          // image p_J U_J x U_J* shrinks like p_J, so each term stays bounded.
          cur = x;
          double weight = 1.0;
          for (std::size_t d = 0; d < depth; ++d) {
            const std::size_t i = letter(rng);
            tc.map(i, cur, next, scratch);
            std::swap(cur, next);
            weight *= reweight[i];
            p.mc[d] += weight * (phi(cur) - phi0);
          }
        }
        const auto wpp = static_cast<double>(options.words_per_point);
        for (std::size_t d = 0; d < depth; ++d) p.mc[d] = p.psi * p.mc[d] / wpp;
      }
    }
  });

  double mean_psi = 0.0;
  double mean_phi = 0.0;
  for (const auto& p : points) {
    mean_psi += p.psi;
    mean_phi += p.phi;
  }
  mean_psi /= static_cast<double>(m_samples);
  mean_phi /= static_cast<double>(m_samples);
  report.limit_phi_at_zero = phi0;
  report.limit_phi_integral = mean_phi;
  report.exact = want_exact;

  for (std::size_t d = 0; d < depth; ++d) {
    const Moments primary = moments(points, want_exact, d);
    report.n_values.push_back(static_cast<int>(d + 1));
    report.signed_mean.push_back(primary.mean);
    report.C_n.push_back(std::abs(primary.mean));
    report.stderr_n.push_back(primary.stderr_mean);
    report.C_n_integral.push_back(std::abs(primary.mean + phi0 * mean_psi - mean_phi * mean_psi));
    if (want_exact && want_mc) {
      const Moments mc = moments(points, false, d);
      report.mc_signed_mean.push_back(mc.mean);
      report.mc_stderr.push_back(mc.stderr_mean);
      if (mc.stderr_mean > 0.0) {
        report.max_exact_mc_z = std::max(report.max_exact_mc_z, std::abs(mc.mean - primary.mean) / mc.stderr_mean);
      } else if (std::abs(mc.mean - primary.mean) > 1e-12) {
        report.max_exact_mc_z = std::numeric_limits<double>::infinity();
      }
    }
  }
  report.final_gap_phi_at_zero = report.C_n.back();
  report.final_gap_phi_integral = report.C_n_integral.back();
  const double separation = std::abs(report.final_gap_phi_at_zero - report.final_gap_phi_integral);
  if (separation <= 4.0 * report.stderr_n.back()) {
    report.preferred_limit = "indistinguishable";
  } else {
    report.preferred_limit =
        report.final_gap_phi_at_zero < report.final_gap_phi_integral ? "phi(0)" : "integral";
  }

  // Fit range: n = 1 .. (first n with C_n <= 10 stderr) - 1.
  report.fit_end = n_max;
  for (std::size_t d = 0; d < depth; ++d) {
    if (report.C_n[d] <= 10.0 * report.stderr_n[d]) {
      report.signal_below_noise = true;
      report.noise_floor_n = static_cast<int>(d + 1);
      report.fit_end = static_cast<int>(d);
      break;
    }
  }
  std::vector<std::pair<double, double>> series;
  for (int i = 0; i < report.fit_end; ++i) {
    const auto d = static_cast<std::size_t>(i);
    if (report.C_n[d] > 0.0) series.emplace_back(static_cast<double>(i + 1), report.C_n[d]);
  }
  if (series.size() >= 3) {
    const RateFit fit = rate_fit(series);
    report.fitted_rate = fit.rate;
    report.K_fit = std::exp(fit.intercept);
    report.r_squared = fit.r_squared;
    report.fit_valid = true;
  }

  // Envelopes K r^n with the smallest K covering the fitted series at its own rate.
  double k_env = 0.0;
  const double base_rate = report.fit_valid ? report.fitted_rate : 1.0;
  for (const auto& [nn, v] : series) k_env = std::max(k_env, v / std::pow(base_rate, nn));
  const double pmax_rate = report.lambda1;
  for (std::size_t d = 0; d < depth; ++d) {
    const double nn = static_cast<double>(d + 1);
    report.bound_lambda1.push_back(k_env * std::pow(report.Lambda1, nn));
    report.bound_pmax.push_back(k_env * std::pow(pmax_rate, nn));
  }
  for (int i = 0; i < report.fit_end; ++i) {
    const auto d = static_cast<std::size_t>(i);
    const double slack = 1e-9 * report.C_n[d] + 4.0 * report.stderr_n[d];
    if (report.C_n[d] > report.bound_lambda1[d] + slack) report.envelope_lambda1_holds = false;
    if (report.C_n[d] > report.bound_pmax[d] + slack) report.envelope_pmax_holds = false;
  }
  return report;
}

CptConvergenceReport cpt_convergence(const Channel& channel, std::size_t rho_samples, int n_max, std::uint64_t seed) {
  if (n_max < 1) throw Error(ErrorCode::invalid_argument, "cpt_convergence: n_max must be >= 1");
  if (rho_samples < 1) throw Error(ErrorCode::invalid_argument, "cpt_convergence: need at least one sample");
  const ComplexMatrix m = superoperator_matrix(channel);
  const SuperoperatorSpectrum spec = spectrum(channel);
  const Eigen::Index n = channel_dim(channel);
  CptConvergenceReport report;
  report.kappa_mod = std::abs(spec.kappa);

  bool other_peripheral = false;
  for (const auto& lambda : spec.eigenvalues) {
    if (std::abs(lambda) >= 1.0 - tol::kFixedEigenvalue && std::abs(lambda - 1.0) > tol::kFixedEigenvalue) {
      other_peripheral = true;
    }
  }
  report.degraded = spec.fixed_space_dim > 1 || other_peripheral;
  if (report.degraded) report.fallback_reason = "NonUniqueFixedPoint";

  ComplexMatrix unique_limit;
  if (!report.degraded) unique_limit = fixed_points(channel).front().matrix();
  const int limit_steps = std::max(20 * n_max, 2000);

  std::vector<double> worst(static_cast<std::size_t>(n_max), 0.0);
  Rng rng(seed);
  for (std::size_t s = 0; s < rho_samples; ++s) {
    const ComplexMatrix rho = random_density_hs(n, rng).matrix();
    ComplexMatrix limit;
    if (!report.degraded) {
      limit = unique_limit;
    } else if (other_peripheral) {
      limit = cesaro_average(channel, rho, limit_steps);
    } else {
      ComplexVector v = vec(rho);
      for (int t = 0; t < limit_steps; ++t) v = m * v;
      limit = unvec(v, n);
    }
    ComplexVector v = vec(rho);
    for (int t = 0; t < n_max; ++t) {
      v = m * v;
      const double d = trace_norm(unvec(v, n) - limit);
      worst[static_cast<std::size_t>(t)] = std::max(worst[static_cast<std::size_t>(t)], d);
    }
  }
  for (int t = 0; t < n_max; ++t) report.n_values.push_back(t + 1);
  report.trace_distances = worst;

  std::vector<std::pair<double, double>> window;
  for (int t = 0; t < n_max; ++t) {
    if (worst[static_cast<std::size_t>(t)] < 1e-11) break;
    window.emplace_back(static_cast<double>(t + 1), worst[static_cast<std::size_t>(t)]);
  }
  if (report.kappa_mod > 0.0) {
    for (const auto& [t, d] : window) report.C_fit = std::max(report.C_fit, d / std::pow(report.kappa_mod, t));
  }
  const auto skip = static_cast<std::size_t>(0.2 * static_cast<double>(window.size()));
  window.erase(window.begin(), window.begin() + static_cast<std::ptrdiff_t>(skip));
  report.fit_points = static_cast<int>(window.size());
  if (window.size() >= 3) {
    const RateFit fit = rate_fit(window);
    report.fitted_rate = fit.rate;
    report.log_slope = std::log(fit.rate);
    report.fit_valid = true;
    if (report.kappa_mod > 0.0) report.slope_ok = report.log_slope <= std::log(report.kappa_mod) + 0.05;
  } else {
    // Distances vanish within a few steps: consistent only with a tiny kappa.
    report.slope_ok = report.kappa_mod < 1e-6 || window.empty();
  }
  return report;
}

}  // namespace rcl
