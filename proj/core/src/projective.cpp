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

#include "rcl/projective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "rcl/transfer.hpp"

namespace rcl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPdFloor = 1e-10;
constexpr double kMinPairDistance = 1e-9;

MetricReport from_ratio_bounds(double alpha, double beta, std::size_t samples) {
  MetricReport r;
  r.alpha = alpha;
  r.beta = beta;
  r.samples_used = samples;
  if (!(alpha > 0.0) || std::isinf(beta)) {
    r.theta = kInf;
  } else {
    r.theta = std::max(0.0, std::log(beta / alpha));
  }
  return r;
}

std::vector<double> positive_values(const Observable& f, const std::vector<ComplexMatrix>& points) {
  std::vector<double> v;
  v.reserve(points.size());
  for (const auto& x : points) {
    const double y = f(x);
    if (!(y > 0.0)) throw Error(ErrorCode::non_positive_function_value, "function must be positive on the samples");
    v.push_back(y);
  }
  return v;
}

ComplexMatrix normalised_direction(Eigen::Index n, ConeMetric metric, Rng& rng) {
  ComplexMatrix a = random_hermitian(n, rng);
  if (metric == ConeMetric::frobenius) return a / a.norm();
  const HermitianEig eig = hermitian_eig(a);
  return a / std::max(std::abs(eig.values(0)), std::abs(eig.values(n - 1)));
}

Observable exponential_family(const ComplexMatrix& a, double b) {
  return Observable("exp_linear", [a, b](const ComplexMatrix& x) {
    return std::exp(b * a.transpose().cwiseProduct(x).sum().real());
  });
}

double max_probability_checked(const MixedUnitaryChannel& channel) {
  for (const auto& b : channel.branches()) {
    if (!(b.p > 0.0 && b.p < 1.0)) {
      throw Error(ErrorCode::probability_on_boundary, "branch probabilities must lie strictly inside (0, 1)");
    }
  }
  return channel.max_probability();
}

ComplexVector unit_vector(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector psi(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    psi(i) = Complex(re, im);
  }
  return psi / psi.norm();
}

ComplexMatrix orthogonal_pure(const ComplexVector& psi, Rng& rng) {
  const Eigen::Index n = psi.size();
  ComplexVector phi = unit_vector(n, rng);
  phi -= psi.dot(phi) * psi;  // psi normalised
  const double norm = phi.norm();
  if (norm < 1e-12) phi = ComplexVector::Unit(n, (n > 1) ? 1 : 0);
  phi /= phi.norm();
  return phi * phi.adjoint();
}

}  // namespace

std::string_view metric_name(ConeMetric metric) { return metric == ConeMetric::frobenius ? "frobenius" : "trace"; }

void ConeSpec::validate() const {
  if (!(a > 0.0) || !(delta0 > 0.0) || !(nu > 0.0 && nu <= 1.0) || !std::isfinite(a) || !std::isfinite(delta0)) {
    throw Error(ErrorCode::invalid_argument, "ConeSpec: need a > 0, delta0 > 0 and nu in (0, 1]");
  }
}

double ConeSpec::distance(const ComplexMatrix& x, const ComplexMatrix& y) const {
  return metric == ConeMetric::frobenius ? (x - y).norm() : trace_norm(x - y);
}

double ConeSpec::diameter() const { return metric == ConeMetric::frobenius ? std::sqrt(2.0) : 2.0; }

MetricReport hilbert_metric_psd(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
    throw Error(ErrorCode::dimension_mismatch, "hilbert_metric_psd: shape mismatch");
  }
  const HermitianEig ea = hermitian_eig(a);
  const HermitianEig eb = hermitian_eig(b);
  if (ea.values(0) < kPdFloor || eb.values(0) < kPdFloor) {
    throw Error(ErrorCode::not_positive_definite, "hilbert_metric_psd: inputs must be positive definite");
  }
  const RealVector inv_sqrt = ea.values.cwiseSqrt().cwiseInverse();
  const ComplexMatrix a_inv_half = ea.vectors * inv_sqrt.cast<Complex>().asDiagonal() * ea.vectors.adjoint();
  ComplexMatrix c = a_inv_half * b * a_inv_half;
  c = 0.5 * (c + c.adjoint()).eval();
  const HermitianEig ec = hermitian_eig(c);
  return from_ratio_bounds(ec.values(0), ec.values(ec.values.size() - 1), 1);
}

MetricReport hilbert_metric_orthant(const RealVector& v1, const RealVector& v2) {
  if (v1.size() != v2.size() || v1.size() == 0) throw Error(ErrorCode::dimension_mismatch, "orthant metric: sizes");
  if ((v1.array() <= 0.0).any() || (v2.array() <= 0.0).any()) {
    throw Error(ErrorCode::non_positive_values, "orthant metric: entries must be positive");
  }
  const RealVector r = v2.cwiseQuotient(v1);
  return from_ratio_bounds(r.minCoeff(), r.maxCoeff(), static_cast<std::size_t>(v1.size()));
}

MetricReport theta_plus(const Observable& phi1, const Observable& phi2, const std::vector<ComplexMatrix>& points) {
  if (points.empty()) throw Error(ErrorCode::insufficient_points, "theta_plus: no sample points");
  const std::vector<double> f1 = positive_values(phi1, points);
  const std::vector<double> f2 = positive_values(phi2, points);
  double alpha = kInf;
  double beta = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double r = f2[i] / f1[i];
    alpha = std::min(alpha, r);
    beta = std::max(beta, r);
  }
  return from_ratio_bounds(alpha, beta, points.size());
}

MetricReport cone_theta(const Observable& phi1, const Observable& phi2, const ConeSpec& spec,
                        const std::vector<ComplexMatrix>& points) {
  spec.validate();
  if (points.empty()) throw Error(ErrorCode::insufficient_points, "cone_theta: no sample points");
  const std::vector<double> f1 = positive_values(phi1, points);
  const std::vector<double> f2 = positive_values(phi2, points);
  double alpha = kInf;
  double beta = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double r = f2[i] / f1[i];
    alpha = std::min(alpha, r);
    beta = std::max(beta, r);
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double d = spec.distance(points[i], points[j]);
      if (d > spec.delta0 || d < kMinPairDistance) continue;
      const double e = std::exp(spec.a * std::pow(d, spec.nu));
      for (int order = 0; order < 2; ++order) {
        const std::size_t x = order == 0 ? i : j;
        const std::size_t y = order == 0 ? j : i;
        const double den = e * f1[y] - f1[x];
        if (!(den > 0.0)) continue;
        const double q = (e * f2[y] - f2[x]) / den;
        alpha = std::min(alpha, q);
        beta = std::max(beta, q);
      }
    }
  }
  return from_ratio_bounds(alpha, beta, points.size());
}

std::vector<ComplexMatrix> cone_sample_points(Eigen::Index n, std::size_t count, std::uint64_t seed) {
  std::vector<ComplexMatrix> out;
  out.reserve(count);
  auto push = [&](ComplexMatrix m) {
    if (out.size() < count) out.push_back(std::move(m));
  };
  push(ComplexMatrix::Zero(n, n));
  push(ComplexMatrix::Identity(n, n) / static_cast<double>(n));
  for (Eigen::Index k = 0; k < n; ++k) push(DensityMatrix::basis_projector(n, k).matrix());
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (out.size() < count) {
    switch (out.size() % 3) {
      case 0:
        push(random_cone_point(n, rng).matrix());
        break;
      case 1:
        push(random_pure_state(n, rng).matrix());
        break;
      default: {
        const ComplexMatrix& base = out[static_cast<std::size_t>(unit(rng) * static_cast<double>(out.size()))];
        const double s = 0.3 * unit(rng);
        push((1.0 - s) * base + s * random_cone_point(n, rng).matrix());
      }
    }
  }
  return out;
}

MembershipReport cone_membership(const Observable& psi, Eigen::Index n, const ConeSpec& spec, std::size_t pairs,
                                 std::uint64_t seed) {
  spec.validate();
  MembershipReport report;
  report.worst_margin = kInf;
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<ComplexMatrix> special{ComplexMatrix::Zero(n, n), ComplexMatrix::Identity(n, n) / static_cast<double>(n)};
  for (Eigen::Index k = 0; k < n; ++k) special.push_back(DensityMatrix::basis_projector(n, k).matrix());

  for (std::size_t p = 0; p < pairs; ++p) {
    const ComplexMatrix x = p < special.size() ? special[p] : random_cone_point(n, rng).matrix();
    ComplexMatrix y;
    double d = 0.0;
    bool found = false;
    for (int attempt = 0; attempt < 64 && !found; ++attempt) {
      const double s = unit(rng);
      y = (1.0 - s) * x + s * random_cone_point(n, rng).matrix();
      d = spec.distance(x, y);
      found = d <= spec.delta0;
    }
    if (!found) continue;
    const double fx = psi(x);
    const double fy = psi(y);
    ++report.pairs_checked;
    if (!(fx > 0.0) || !(fy > 0.0)) {
      report.worst_margin = -kInf;
      report.member = false;
      return report;
    }
    const double margin = spec.a * std::pow(d, spec.nu) - std::abs(std::log(fx) - std::log(fy));
    report.worst_margin = std::min(report.worst_margin, margin);
  }
  if (report.pairs_checked == 0) report.worst_margin = 0.0;
  report.member = report.worst_margin >= -1e-12;
  return report;
}

Observable random_cone_function(Eigen::Index n, const ConeSpec& spec, double scale, Rng& rng) {
  spec.validate();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double bound = scale * spec.a / std::pow(spec.delta0, 1.0 - spec.nu);
  const double c = unit(rng);
  const int terms = 1 + static_cast<int>(unit(rng) * 3.0);
  std::vector<ComplexMatrix> dirs;
  std::vector<double> b;
  std::vector<double> w;
  for (int m = 0; m < terms; ++m) {
    dirs.push_back(normalised_direction(n, spec.metric, rng));
    b.push_back((2.0 * unit(rng) - 1.0) * bound);
    w.push_back(0.1 + 0.9 * unit(rng));
  }
  return Observable("cone_function", [c, dirs, b, w](const ComplexMatrix& x) {
    double v = c;
    for (std::size_t m = 0; m < dirs.size(); ++m) {
      v += w[m] * std::exp(b[m] * dirs[m].transpose().cwiseProduct(x).sum().real());
    }
    return v;
  });
}

ContractionReport verify_cone_contraction(const MixedUnitaryChannel& channel, const ConeSpec& spec,
                                          std::size_t samples, std::uint64_t seed) {
  spec.validate();
  const double pmax = max_probability_checked(channel);
  ContractionReport report;
  report.lambda1 = std::pow(pmax, spec.nu);
  report.worst_margin = kInf;
  ConeSpec target = spec;
  target.a = report.lambda1 * spec.a;
  const BranchSystem tc = BranchSystem::contractive(channel);
  Rng rng(derive_seed(seed, 0));
  for (std::size_t s = 0; s < samples; ++s) {
    const Observable psi = random_cone_function(channel.dim(), spec, 1.0, rng);
    const MembershipReport m = cone_membership(apply(tc, psi), channel.dim(), target, 200, derive_seed(seed, 1 + s));
    report.worst_margin = std::min(report.worst_margin, m.worst_margin);
    report.pass = report.pass && m.member;
    ++report.functions_checked;
  }
  if (samples == 0) report.worst_margin = 0.0;
  return report;
}

double cone_diameter_upper_bound(const ConeSpec& spec, double lambda) {
  spec.validate();
  if (!(lambda >= 0.0 && lambda < 1.0)) return kInf;
  const double diam = spec.diameter();
  const double m = std::ceil(diam / spec.delta0);
  return 2.0 * std::log((1.0 + lambda) / (1.0 - lambda)) +
         2.0 * lambda * spec.a * std::pow(m, 1.0 - spec.nu) * std::pow(diam, spec.nu);
}

DiameterEstimate estimate_D1(const MixedUnitaryChannel& channel, const ConeSpec& spec, std::size_t function_samples,
                             std::size_t point_samples, std::uint64_t seed) {
  spec.validate();
  DiameterEstimate est;
  est.spec = spec;
  est.lambda1 = std::pow(max_probability_checked(channel), spec.nu);
  est.upper = cone_diameter_upper_bound(spec, est.lambda1);
  est.Lambda1 = 1.0 - std::exp(-est.upper);

  const Eigen::Index n = channel.dim();
  const std::vector<ComplexMatrix> points = cone_sample_points(n, std::max<std::size_t>(point_samples, 1),
                                                               derive_seed(seed, 1));
  Rng rng(derive_seed(seed, 2));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double bound = est.lambda1 * spec.a / std::pow(spec.delta0, 1.0 - spec.nu);
  for (std::size_t s = 0; s < function_samples; ++s) {
    Observable phi1 = observables::constant(1.0);
    Observable phi2 = observables::constant(1.0);
    if (s % 2 == 0) {
      const ComplexMatrix dir = normalised_direction(n, spec.metric, rng);
      const double b = bound * (0.5 + 0.5 * unit(rng));
      phi1 = exponential_family(dir, b);
      phi2 = exponential_family(dir, -b);
    } else {
      phi1 = random_cone_function(n, spec, est.lambda1, rng);
      phi2 = random_cone_function(n, spec, est.lambda1, rng);
    }
    est.lower = std::max(est.lower, cone_theta(phi1, phi2, spec, points).theta);
  }
  return est;
}

TanhReport tanh_contraction_check(const Channel& channel, std::size_t pairs, std::uint64_t seed) {
  if (!is_linear(channel)) {
    throw Error(ErrorCode::nonlinear_channel_unsupported, "tanh_contraction_check: channel must be linear");
  }
  const Eigen::Index n = channel_dim(channel);
  TanhReport report;
  Rng rng(seed);

  auto draw_pair = [&](std::size_t i) {
    if (i % 2 == 0) {
      const ComplexVector psi = unit_vector(n, rng);
      return std::make_pair(ComplexMatrix(psi * psi.adjoint()), orthogonal_pure(psi, rng));
    }
    ComplexMatrix a = random_density_hs(n, rng).matrix();
    ComplexMatrix b = random_density_hs(n, rng).matrix();
    return std::make_pair(a, b);
  };
  auto output_theta = [&](const ComplexMatrix& a, const ComplexMatrix& b) {
    const ComplexMatrix fa = rcl::apply(channel, a);
    const ComplexMatrix fb = rcl::apply(channel, b);
    if (min_eigenvalue(fa) < kPdFloor || min_eigenvalue(fb) < kPdFloor) return kInf;
    return hilbert_metric_psd(fa, fb).theta;
  };

  double running = 0.0;
  ComplexVector best_x = unit_vector(n, rng);
  ComplexVector best_y = unit_vector(n, rng);
  double best_pure = 0.0;
  for (std::size_t i = 0; i < pairs && std::isfinite(running); ++i) {
    const auto [a, b] = draw_pair(i);
    const double theta = output_theta(a, b);
    running = std::max(running, theta);
    if (i % 2 == 0 && theta > best_pure) {
      best_pure = theta;
      best_x = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(a).eigenvectors().col(n - 1);
      best_y = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(b).eigenvectors().col(n - 1);
    }
  }

  // The sup over the cone is attained on pure states: hill-climb the best pure pair.
  if (std::isfinite(running)) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto perturb = [&](const ComplexVector& v, double step) {
      ComplexVector w = v;
      for (Eigen::Index i = 0; i < n; ++i) w(i) += step * Complex(gauss(rng), gauss(rng));
      return ComplexVector(w / w.norm());
    };
    double step = 0.3;
    int failures = 0;
    for (std::size_t it = 0; it < pairs && step > 1e-6 && std::isfinite(running); ++it) {
      const ComplexVector x = perturb(best_x, step);
      const ComplexVector y = perturb(best_y, step);
      const double theta = output_theta(x * x.adjoint(), y * y.adjoint());
      if (theta > best_pure) {
        best_pure = theta;
        best_x = x;
        best_y = y;
        failures = 0;
      } else if (++failures >= 20) {
        step *= 0.5;
        failures = 0;
      }
      running = std::max(running, theta);
    }
  }
  report.delta_phi_estimate = running;

  for (std::size_t i = 0; i < pairs; ++i) {
    const auto [rho, eta] = draw_pair(i);
    if (std::isfinite(running)) running = std::max(running, output_theta(rho, eta));
    const double coeff = std::isfinite(running) ? std::tanh(1.1 * running / 4.0) : 1.0;
    const double lhs = trace_norm(rcl::apply(channel, rho) - rcl::apply(channel, eta));
    const double rhs = trace_norm(rho - eta);
    if (lhs > coeff * rhs + 1e-12) ++report.violations;
    if (coeff * rhs > 0.0) report.worst_ratio = std::max(report.worst_ratio, lhs / (coeff * rhs));
    ++report.pairs_checked;
  }
  report.vacuous = !std::isfinite(running);
  report.delta_phi_estimate = running;
  report.tanh_coeff = report.vacuous ? 1.0 : std::tanh(1.1 * running / 4.0);
  return report;
}

double orthant_image_diameter(const RealMatrix& t) {
  if (t.size() == 0) throw Error(ErrorCode::invalid_argument, "orthant_image_diameter: empty matrix");
  if ((t.array() <= 0.0).any()) return kInf;
  double d = 0.0;
  for (Eigen::Index i = 0; i < t.cols(); ++i) {
    for (Eigen::Index j = i + 1; j < t.cols(); ++j) {
      d = std::max(d, hilbert_metric_orthant(t.col(i), t.col(j)).theta);
    }
  }
  return d;
}

namespace {

void record(BirkhoffReport& report, double lhs, double rhs) {
  ++report.pairs_checked;
  if (std::isinf(rhs)) return;
  const double excess = std::isinf(lhs) ? kInf : lhs - report.coefficient * rhs;
  report.worst_excess = std::max(report.worst_excess, excess);
  if (excess > 1e-9) report.holds = false;
}

double birkhoff_coefficient(double diameter) {
  return std::isfinite(diameter) ? 1.0 - std::exp(-diameter) : 1.0;
}

}  // namespace

BirkhoffReport birkhoff_lemma_check(const RealMatrix& t, double diameter, std::size_t pairs, std::uint64_t seed) {
  if ((t.array() < 0.0).any()) throw Error(ErrorCode::non_positive_values, "birkhoff_lemma_check: T must be >= 0");
  BirkhoffReport report;
  report.coefficient = birkhoff_coefficient(diameter);
  report.worst_excess = -kInf;
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.5);
  for (std::size_t p = 0; p < pairs; ++p) {
    RealVector v1(t.cols());
    RealVector v2(t.cols());
    for (Eigen::Index i = 0; i < t.cols(); ++i) v1(i) = std::exp(normal(rng));
    for (Eigen::Index i = 0; i < t.cols(); ++i) v2(i) = std::exp(normal(rng));
    record(report, hilbert_metric_orthant(t * v1, t * v2).theta, hilbert_metric_orthant(v1, v2).theta);
  }
  if (report.pairs_checked == 0) report.worst_excess = 0.0;
  return report;
}

BirkhoffReport birkhoff_lemma_check(const Channel& channel, double diameter, std::size_t pairs, std::uint64_t seed) {
  if (!is_linear(channel)) {
    throw Error(ErrorCode::nonlinear_channel_unsupported, "birkhoff_lemma_check: channel must be linear");
  }
  const Eigen::Index n = channel_dim(channel);
  BirkhoffReport report;
  report.coefficient = birkhoff_coefficient(diameter);
  report.worst_excess = -kInf;
  Rng rng(seed);
  for (std::size_t p = 0; p < pairs; ++p) {
    const ComplexMatrix a = random_density_hs(n, rng).matrix();
    const ComplexMatrix b = random_density_hs(n, rng).matrix();
    if (min_eigenvalue(a) < kPdFloor || min_eigenvalue(b) < kPdFloor) continue;
    const ComplexMatrix fa = rcl::apply(channel, a);
    const ComplexMatrix fb = rcl::apply(channel, b);
    const double lhs = (min_eigenvalue(fa) < kPdFloor || min_eigenvalue(fb) < kPdFloor)
                           ? kInf
                           : hilbert_metric_psd(fa, fb).theta;
    record(report, lhs, hilbert_metric_psd(a, b).theta);
  }
  if (report.pairs_checked == 0) report.worst_excess = 0.0;
  return report;
}

BirkhoffReport birkhoff_lemma_check(const MixedUnitaryChannel& channel, const ConeSpec& spec, double diameter,
                                    std::size_t pairs, std::uint64_t seed) {
  spec.validate();
  const Eigen::Index n = channel.dim();
  const BranchSystem tc = BranchSystem::contractive(channel);
  BirkhoffReport report;
  report.coefficient = birkhoff_coefficient(diameter);
  report.worst_excess = -kInf;
  const std::vector<ComplexMatrix> base = cone_sample_points(n, 24, derive_seed(seed, 0));
  std::vector<ComplexMatrix> extended = base;
  for (const auto& x : base) {
    for (std::size_t i = 0; i < tc.size(); ++i) extended.push_back(tc.map(i, x));
  }
  Rng rng(derive_seed(seed, 1));
  for (std::size_t p = 0; p < pairs; ++p) {
    const Observable phi1 = random_cone_function(n, spec, 1.0, rng);
    const Observable phi2 = random_cone_function(n, spec, 1.0, rng);
    const double lhs = theta_plus(apply(tc, phi1), apply(tc, phi2), base).theta;
    const double rhs = cone_theta(phi1, phi2, spec, extended).theta;
    record(report, lhs, rhs);
  }
  if (report.pairs_checked == 0) report.worst_excess = 0.0;
  return report;
}

}  // namespace rcl
