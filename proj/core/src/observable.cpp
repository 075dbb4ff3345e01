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

#include "rcl/observable.hpp"

#include <algorithm>
#include <cmath>

namespace rcl {
namespace observables {

Observable constant(double c) {
  return Observable("constant(" + std::to_string(c) + ")", [c](const ComplexMatrix&) { return c; },
                    HolderCertificate{0.0, 1.0});
}

Observable linear(const ComplexMatrix& a) {
  // Re tr(A X) = sum_ij Re(A_ij X_ji).
  const ComplexMatrix at = a.transpose();
  return Observable(
      "linear", [at](const ComplexMatrix& x) { return at.cwiseProduct(x).sum().real(); },
      HolderCertificate{a.norm(), 1.0});
}

Observable trace(Eigen::Index n) {
  return Observable(
      "trace", [](const ComplexMatrix& x) { return x.trace().real(); },
      HolderCertificate{std::sqrt(static_cast<double>(n)), 1.0});
}

Observable frobenius_dist(const ComplexMatrix& sigma) {
  return Observable(
      "frobenius_dist", [sigma](const ComplexMatrix& x) { return (x - sigma).norm(); },
      HolderCertificate{1.0, 1.0});
}

Observable exp_neg_dist(const ComplexMatrix& sigma, double scale) {
  return Observable(
      "exp_neg_dist",
      [sigma, scale](const ComplexMatrix& x) { return std::exp(-scale * (x - sigma).norm()); },
      HolderCertificate{std::abs(scale), 1.0});
}

Observable purity() {
  // |tr A^2 - tr B^2| <= (||A|| + ||B||) ||A - B|| and ||A||_F <= 1 on X.
  return Observable(
      "purity", [](const ComplexMatrix& x) { return x.squaredNorm(); }, HolderCertificate{2.0, 1.0});
}

Observable entry(Eigen::Index i, Eigen::Index j, bool imaginary) {
  return Observable(
      "entry",
      [i, j, imaginary](const ComplexMatrix& x) { return imaginary ? x(i, j).imag() : x(i, j).real(); },
      HolderCertificate{1.0, 1.0});
}

Observable exp_linear(const ComplexMatrix& a, double b) {
  const ComplexMatrix at = a.transpose();
  // On X, |Re tr(A x)| <= ||A||_F, so the exponent stays within |b| ||A||_F.
  const double bound = std::abs(b) * a.norm() * std::exp(std::abs(b) * a.norm());
  return Observable(
      "exp_linear",
      [at, b](const ComplexMatrix& x) { return std::exp(b * at.cwiseProduct(x).sum().real()); },
      HolderCertificate{bound, 1.0});
}

}  // namespace observables

HolderCertificate estimate_holder(const Observable& f, Eigen::Index n, double exponent,
                                  std::size_t pairs, std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (std::size_t s = 0; s < pairs; ++s) {
    const ConePoint x = random_cone_point(n, rng);
    const ConePoint y = random_cone_point(n, rng);
    const double d = (x.matrix() - y.matrix()).norm();
    if (d <= 0.0) continue;
    worst = std::max(worst, std::abs(f(x) - f(y)) / std::pow(d, exponent));
  }
  return {1.5 * worst, exponent};
}

}  // namespace rcl
