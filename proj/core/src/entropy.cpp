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

#include "rcl/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rcl {

namespace {

constexpr double kProbabilityFloor = -1e-12;

double clamp_probability(double x) {
  if (x < kProbabilityFloor) throw Error(ErrorCode::negative_argument, "negative probability");
  return std::max(0.0, x);
}

double inner_entropy(const std::vector<ComplexMatrix>& effects, const ComplexMatrix& a) {
  double h = 0.0;
  for (const auto& q : effects) h += eta(std::max(0.0, q.transpose().cwiseProduct(a).sum().real()));
  return h;
}

}  // namespace

double eta(double x) {
  if (x < 0.0 || std::isnan(x)) throw Error(ErrorCode::negative_argument, "eta: argument must be >= 0");
  if (x == 0.0) return 0.0;
  return -x * std::log(x);
}

double shannon(const std::vector<double>& p) {
  double sum = 0.0;
  double h = 0.0;
  for (double x : p) {
    if (x < kProbabilityFloor) throw Error(ErrorCode::invalid_probability_vector, "shannon: negative entry");
    sum += x;
    h += eta(std::max(0.0, x));
  }
  if (std::abs(sum - 1.0) > 1e-9) throw Error(ErrorCode::invalid_probability_vector, "shannon: entries must sum to 1");
  return h;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  const HermitianEig eig = hermitian_eig(rho.matrix());
  double s = 0.0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) s += eta(std::max(0.0, eig.values(i)));
  return s;
}

double relative_entropy(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw Error(ErrorCode::dimension_mismatch, "relative_entropy: length mismatch");
  double d = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double pj = clamp_probability(p[j]);
    const double qj = clamp_probability(q[j]);
    if (pj == 0.0) continue;
    if (qj == 0.0) return std::numeric_limits<double>::infinity();
    d += pj * (std::log(pj) - std::log(qj));
  }
  return d;
}

PovmSet::PovmSet(std::vector<ComplexMatrix> elements) : elements_(std::move(elements)) {
  if (elements_.empty()) throw Error(ErrorCode::invalid_povm, "PovmSet: empty");
  const Eigen::Index n = elements_.front().rows();
  ComplexMatrix total = ComplexMatrix::Zero(n, n);
  for (const auto& q : elements_) {
    if (q.rows() != n || q.cols() != n) throw Error(ErrorCode::dimension_mismatch, "PovmSet: element shape mismatch");
    if (!is_hermitian(q, tol::kHermitianInput) || min_eigenvalue(q) < -tol::kState) {
      throw Error(ErrorCode::invalid_povm, "PovmSet: elements must be positive semidefinite");
    }
    total += q;
  }
  if ((total - ComplexMatrix::Identity(n, n)).norm() > tol::kPovmSum) {
    throw Error(ErrorCode::invalid_povm, "PovmSet: elements must sum to the identity");
  }
}

PovmSet PovmSet::of(const NonlinearChannel& channel) {
  std::vector<ComplexMatrix> q;
  for (const auto& b : channel.branches()) q.push_back(b.q);
  return PovmSet(std::move(q));
}

std::vector<double> PovmSet::probabilities(const ComplexMatrix& a) const {
  std::vector<double> p;
  p.reserve(elements_.size());
  for (const auto& q : elements_) p.push_back(std::max(0.0, q.transpose().cwiseProduct(a).sum().real()));
  return p;
}

Observable measurement_entropy(const PovmSet& povm) {
  auto effects = povm.elements();
  return Observable("measurement_entropy",
                    [effects](const ComplexMatrix& a) { return inner_entropy(effects, a); });
}

EntropyReport transfer_entropy(const NonlinearChannel& channel, const PovmSet& inner, const DensityMatrix& rho) {
  if (rho.dim() != channel.dim() || inner.dim() != channel.dim()) {
    throw Error(ErrorCode::dimension_mismatch, "transfer_entropy: dimension mismatch");
  }
  EntropyReport report;
  for (std::size_t i = 0; i < channel.size(); ++i) {
    const double p = channel.branch_probability(i, rho.matrix());
    const auto& u = channel.branch(i).u;
    const double h = p == 0.0 ? 0.0 : inner_entropy(inner.elements(), u * rho.matrix() * u.adjoint());
    report.branch_probabilities.push_back(p);
    report.branch_terms.push_back(p * h);
  }
  for (double t : report.branch_terms) report.value += t;
  report.bound = std::log(static_cast<double>(inner.size()));
  report.bounds_checked = report.value >= -1e-9 && report.value <= report.bound + 1e-9;
  return report;
}

EntropyReport transfer_entropy(const NonlinearChannel& channel, const DensityMatrix& rho) {
  return transfer_entropy(channel, PovmSet::of(channel), rho);
}

double relative_transfer_entropy(const std::vector<double>& weights, const std::vector<std::vector<double>>& inner_a,
                                 const std::vector<std::vector<double>>& inner_b) {
  if (weights.size() != inner_a.size() || weights.size() != inner_b.size()) {
    throw Error(ErrorCode::branch_count_mismatch, "relative_transfer_entropy: branch count mismatch");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double w = clamp_probability(weights[i]);
    if (w == 0.0) continue;
    const double d = relative_entropy(inner_a[i], inner_b[i]);
    if (std::isinf(d)) return d;
    total += w * d;
  }
  return total;
}

double relative_transfer_entropy(const NonlinearChannel& a, const NonlinearChannel& b, const DensityMatrix& rho) {
  if (a.size() != b.size()) throw Error(ErrorCode::branch_count_mismatch, "relative_transfer_entropy: k differs");
  if (a.dim() != b.dim() || rho.dim() != a.dim()) {
    throw Error(ErrorCode::dimension_mismatch, "relative_transfer_entropy: dimension mismatch");
  }
  const PovmSet qa = PovmSet::of(a);
  const PovmSet qb = PovmSet::of(b);
  std::vector<double> weights;
  std::vector<std::vector<double>> inner_a;
  std::vector<std::vector<double>> inner_b;
  for (std::size_t i = 0; i < a.size(); ++i) {
    weights.push_back(a.branch_probability(i, rho.matrix()));
    const auto& ua = a.branch(i).u;
    const auto& ub = b.branch(i).u;
    inner_a.push_back(qa.probabilities(ua * rho.matrix() * ua.adjoint()));
    inner_b.push_back(qb.probabilities(ub * rho.matrix() * ub.adjoint()));
  }
  return relative_transfer_entropy(weights, inner_a, inner_b);
}

ConcavityCheck check_concavity_inequality(const NonlinearChannel& channel, const DensityMatrix& rho1,
                                          const DensityMatrix& rho2, const std::vector<double>& alpha_grid) {
  const double h1 = transfer_entropy(channel, rho1).value;
  const double h2 = transfer_entropy(channel, rho2).value;
  ConcavityCheck check;
  check.worst_margin = std::numeric_limits<double>::infinity();
  for (double alpha : alpha_grid) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
      throw Error(ErrorCode::invalid_argument, "check_concavity_inequality: alpha must lie in (0, 1)");
    }
    const DensityMatrix mix = DensityMatrix::trusted(alpha * rho1.matrix() + (1.0 - alpha) * rho2.matrix());
    const double lhs = transfer_entropy(channel, mix).value;
    const double margin = lhs - alpha * alpha * h1 - (1.0 - alpha) * (1.0 - alpha) * h2;
    check.worst_margin = std::min(check.worst_margin, margin);
  }
  if (alpha_grid.empty()) check.worst_margin = 0.0;
  check.holds = check.worst_margin >= -1e-10;
  return check;
}

EofReport eof_inequality_demo(const DensityMatrix& omega, const std::vector<EmpiricalMeasure>& candidates,
                              const NonlinearChannel& channel) {
  const Eigen::Index n = channel.dim();
  if (omega.dim() != n * n) throw Error(ErrorCode::dimension_mismatch, "eof_inequality_demo: omega must be n^2 x n^2");
  if (candidates.empty()) throw Error(ErrorCode::invalid_argument, "eof_inequality_demo: no candidate measures");
  EofReport report;
  report.min_entanglement = std::numeric_limits<double>::infinity();
  report.min_transfer_entropy = std::numeric_limits<double>::infinity();
  for (const auto& mu : candidates) {
    if (mu.dim() != omega.dim()) throw Error(ErrorCode::dimension_mismatch, "eof_inequality_demo: atom shape");
    if (!mu.is_normalized(1e-9) || trace_norm(mu.mean_state() - omega.matrix()) > 1e-6) {
      throw Error(ErrorCode::barycenter_mismatch, "eof_inequality_demo: candidate barycenter differs from omega");
    }
    EofCandidate c;
    for (const auto& atom : mu.atoms()) {
      if (atom.weight == 0.0) continue;
      const DensityMatrix psi(atom.state);
      if (std::abs(psi.matrix().squaredNorm() - 1.0) > 1e-8) {
        throw Error(ErrorCode::invalid_state, "eof_inequality_demo: atoms must be pure states");
      }
      ComplexMatrix r = partial_trace(psi.matrix(), n, n, Factor::first);
      const DensityMatrix reduced = DensityMatrix::trusted(0.5 * (r + r.adjoint()));
      c.entanglement += atom.weight * von_neumann_entropy(reduced);
      c.transfer_entropy += atom.weight * transfer_entropy(channel, reduced).value;
    }
    report.min_entanglement = std::min(report.min_entanglement, c.entanglement);
    report.min_transfer_entropy = std::min(report.min_transfer_entropy, c.transfer_entropy);
    report.candidates.push_back(c);
  }
  report.inequality_holds = report.min_transfer_entropy <= report.min_entanglement + 1e-12;
  return report;
}

}  // namespace rcl
