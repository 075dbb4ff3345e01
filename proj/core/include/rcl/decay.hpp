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

// Decay of correlations for the normalised transfer operator L = k^-1 T_c
// and spectral convergence of iterated channels.

#ifndef RCL_DECAY_HPP
#define RCL_DECAY_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rcl/channels.hpp"
#include "rcl/observable.hpp"
#include "rcl/projective.hpp"

namespace rcl {

struct RateFit {
  double rate = 0.0;       // r in v_n ~ K r^n
  double intercept = 0.0;  // log K
  double r_squared = 0.0;
};

/// Least squares of log v_n against n. Throws insufficient_points (< 3
/// points) or non_positive_values.
RateFit rate_fit(const std::vector<std::pair<double, double>>& series);

enum class DecayMode { exact, monte_carlo, both };

struct DecayOptions {
  DecayMode mode = DecayMode::monte_carlo;
  std::size_t words_per_point = 1;  // Monte Carlo words drawn for each m-sample
  ConeSpec spec;                    // nu is taken from phi's Holder certificate
  std::size_t d1_function_samples = 8;
  std::size_t d1_point_samples = 40;
};

struct DecayReport {
  std::vector<int> n_values;
  /// Signed estimate of int psi (L^n phi - phi(0)) dm and its MC stderr.
  std::vector<double> signed_mean;
  std::vector<double> C_n;
  std::vector<double> stderr_n;
  /// Same with the limit constant int phi dm instead of phi(0).
  std::vector<double> C_n_integral;
  double limit_phi_at_zero = 0.0;
  double limit_phi_integral = 0.0;
  /// |int psi L^{n_max} phi dm - c int psi dm| for each candidate c.
  double final_gap_phi_at_zero = 0.0;
  double final_gap_phi_integral = 0.0;
  std::string preferred_limit;  // "phi(0)", "integral" or "indistinguishable"

  bool exact = false;
  /// Present in DecayMode::both: Monte Carlo series on the same m-samples.
  std::vector<double> mc_signed_mean;
  std::vector<double> mc_stderr;
  double max_exact_mc_z = 0.0;

  int fit_end = 0;  // fit uses n = 1 .. fit_end
  bool signal_below_noise = false;
  int noise_floor_n = 0;  // first n with C_n < 10 stderr (0 if none)
  double fitted_rate = 0.0;
  double K_fit = 0.0;
  double r_squared = 0.0;
  bool fit_valid = false;

  double lambda1 = 0.0;   // (max p_i)^nu
  double Lambda1 = 0.0;   // 1 - exp(-D1 upper bound)
  double D1_lower = 0.0;
  double D1_upper = 0.0;
  double kappa_mod = 0.0;
  double nu = 1.0;
  /// Envelopes anchored at n = 1: C_1 r^(n-1) for r = Lambda1 and (max p)^nu.
  std::vector<double> bound_lambda1;
  std::vector<double> bound_pmax;
  bool envelope_lambda1_holds = true;
  bool envelope_pmax_holds = true;
};

/// C_n = |int psi (L^n phi) dm - phi(0) int psi dm| for n = 1 .. n_max, with
/// m the cone measure t * rho (t uniform, rho Hilbert-Schmidt). Throws
/// probability_on_boundary unless all p_i lie in (0, 1) and invalid_argument
/// when phi has no Holder certificate. Monte Carlo mode draws words with
/// probability p_J and weights them by k^-n / p_J.
DecayReport correlation_decay(const MixedUnitaryChannel& channel, const Observable& phi, const Observable& psi,
                              std::size_t m_samples, int n_max, std::uint64_t seed, const DecayOptions& options = {});

/// phi = phi_plus - phi_minus with phi_plus = max(phi, 0) + B and
/// phi_minus = max(-phi, 0) + B, B = H / b; both lie in C(b, nu).
std::pair<Observable, Observable> holder_split(const Observable& phi, double b);

struct CptConvergenceReport {
  std::vector<int> n_values;
  std::vector<double> trace_distances;  // max over samples of ||Phi^n(rho) - rho_0||_tr
  double kappa_mod = 0.0;
  double fitted_rate = 0.0;
  double log_slope = 0.0;
  double C_fit = 0.0;  // max_n distance / |kappa|^n over all nonzero distances
  bool fit_valid = false;
  int fit_points = 0;
  bool slope_ok = false;  // log rate <= log |kappa| + 0.05
  bool degraded = false;
  std::string fallback_reason;
};

/// Distances of Phi^n(rho) to the fixed point for random HS states. With a
/// fixed space of dimension > 1 the limit is taken per start (Phi^N(rho), or
/// its Cesaro average when other peripheral eigenvalues exist) and the report
/// is flagged with NonUniqueFixedPoint.
CptConvergenceReport cpt_convergence(const Channel& channel, std::size_t rho_samples, int n_max, std::uint64_t seed);

}  // namespace rcl

#endif  // RCL_DECAY_HPP
