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

// Hilbert projective metric on the positive definite cone, on positive
// function cones and on the local Holder cones C(a, nu); cone diameters and
// Birkhoff contraction checks.

#ifndef RCL_PROJECTIVE_HPP
#define RCL_PROJECTIVE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rcl/channels.hpp"
#include "rcl/observable.hpp"

namespace rcl {

enum class ConeMetric { frobenius, trace };

std::string_view metric_name(ConeMetric metric);

/// C(a, nu) = {psi > 0 : psi(x) <= exp(a d(x, y)^nu) psi(y) whenever d(x, y) <= delta0}.
struct ConeSpec {
  double a = 5.0;
  double nu = 1.0;
  double delta0 = 0.5;
  ConeMetric metric = ConeMetric::frobenius;

  /// Throws invalid_argument unless a, delta0 > 0 and nu in (0, 1].
  void validate() const;
  double distance(const ComplexMatrix& x, const ComplexMatrix& y) const;
  /// Diameter of X = {A >= 0, tr A <= 1}: sqrt 2 (Frobenius) or 2 (trace).
  double diameter() const;
};

struct MetricReport {
  double theta = 0.0;  // may be +inf
  double alpha = 0.0;
  double beta = 0.0;
  std::size_t samples_used = 0;
};

/// alpha, beta = extreme eigenvalues of A^{-1/2} B A^{-1/2}. Throws
/// not_positive_definite when either input has min eigenvalue < 1e-10.
MetricReport hilbert_metric_psd(const ComplexMatrix& a, const ComplexMatrix& b);

/// Metric of the nonnegative orthant: log(max(v2/v1) / min(v2/v1)).
/// Throws non_positive_values for entries <= 0.
MetricReport hilbert_metric_orthant(const RealVector& v1, const RealVector& v2);

/// Sampled theta_+ on the cone of positive functions (a lower bound).
MetricReport theta_plus(const Observable& phi1, const Observable& phi2, const std::vector<ComplexMatrix>& points);

/// Sampled Hilbert metric of C(a, nu) (a lower bound): alpha and beta from
/// min/max of phi2/phi1 and of the cross quotients over pairs within delta0.
MetricReport cone_theta(const Observable& phi1, const Observable& phi2, const ConeSpec& spec,
                        const std::vector<ComplexMatrix>& points);

/// Sample points of X: special points (0, I/n, basis projectors) followed by
/// random cone points and nearby perturbations, prefix-stable in count.
std::vector<ComplexMatrix> cone_sample_points(Eigen::Index n, std::size_t count, std::uint64_t seed);

struct MembershipReport {
  bool member = true;
  /// min over sampled pairs of a d^nu - |log psi(x) - log psi(y)|; -inf when
  /// psi is non-positive at a sampled point.
  double worst_margin = 0.0;
  std::size_t pairs_checked = 0;
};

/// Statistical membership test of psi in C(a, nu) over `pairs` sampled pairs
/// with d <= delta0, slack 1e-12.
MembershipReport cone_membership(const Observable& psi, Eigen::Index n, const ConeSpec& spec, std::size_t pairs,
                                 std::uint64_t seed);

/// Random member of C(scale * a, nu): c + sum_m w_m exp(b_m tr(A_m rho)) with
/// |b_m| delta0^(1-nu) <= scale * a and A_m normalised in the dual norm.
Observable random_cone_function(Eigen::Index n, const ConeSpec& spec, double scale, Rng& rng);

struct ContractionReport {
  double lambda1 = 0.0;  // (max p_i)^nu
  bool pass = true;
  double worst_margin = 0.0;
  std::size_t functions_checked = 0;
};

/// Checks T_c C(a, nu) in C(lambda1 a, nu) on `samples` random cone
/// functions. Throws probability_on_boundary unless all p_i lie in (0, 1).
ContractionReport verify_cone_contraction(const MixedUnitaryChannel& channel, const ConeSpec& spec,
                                          std::size_t samples, std::uint64_t seed);

struct DiameterEstimate {
  double lambda1 = 0.0;
  double lower = 0.0;    // sampled, over pairs from C(lambda1 a, nu)
  double upper = 0.0;    // 2 log((1+l)/(1-l)) + 2 l a m^(1-nu) D^nu, m = ceil(D / delta0)
  double Lambda1 = 0.0;  // 1 - exp(-upper)
  ConeSpec spec;
};

/// Analytic upper bound on the C(a, nu)-diameter of C(lambda a, nu).
double cone_diameter_upper_bound(const ConeSpec& spec, double lambda);

DiameterEstimate estimate_D1(const MixedUnitaryChannel& channel, const ConeSpec& spec, std::size_t function_samples,
                             std::size_t point_samples, std::uint64_t seed);

struct TanhReport {
  double delta_phi_estimate = 0.0;  // sampled sup, may be +inf
  double tanh_coeff = 1.0;          // tanh(1.1 * running sup / 4) at the end
  std::size_t violations = 0;
  std::size_t pairs_checked = 0;
  bool vacuous = false;  // Delta infinite: the bound reads ||.|| <= ||.||
  double worst_ratio = 0.0;  // max ||Phi(r) - Phi(e)||_tr / (coeff ||r - e||_tr)
};

/// Estimates Delta(Phi) on `pairs` input pairs (random and orthogonal pure
/// states) refined by a local search over pure pairs, then checks the tanh contraction on as many fresh pairs with the
/// running sup inflated by 10%.
TanhReport tanh_contraction_check(const Channel& channel, std::size_t pairs, std::uint64_t seed);

struct BirkhoffReport {
  bool holds = true;
  double coefficient = 1.0;  // 1 - exp(-D)
  double worst_excess = 0.0;  // max theta(Tv1, Tv2) - coefficient theta(v1, v2)
  std::size_t pairs_checked = 0;
};

/// max_{i,j} theta(column i, column j): diameter of T(orthant).
double orthant_image_diameter(const RealMatrix& t);

/// Positive matrix on the orthant.
BirkhoffReport birkhoff_lemma_check(const RealMatrix& t, double diameter, std::size_t pairs, std::uint64_t seed);
/// Positive linear map on positive definite matrices.
BirkhoffReport birkhoff_lemma_check(const Channel& channel, double diameter, std::size_t pairs, std::uint64_t seed);
/// T_c on C(a, nu) functions: lhs theta_+ on sampled points, rhs sampled
/// cone metric on those points and their branch images.
BirkhoffReport birkhoff_lemma_check(const MixedUnitaryChannel& channel, const ConeSpec& spec, double diameter,
                                    std::size_t pairs, std::uint64_t seed);

}  // namespace rcl

#endif  // RCL_PROJECTIVE_HPP
