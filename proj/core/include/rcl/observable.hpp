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

#ifndef RCL_OBSERVABLE_HPP
#define RCL_OBSERVABLE_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "rcl/matkernel.hpp"

namespace rcl {

/// |f(x) - f(y)| <= constant * d(x, y)^exponent in the Frobenius metric.
struct HolderCertificate {
  double constant = 0.0;
  double exponent = 1.0;
};

/// Real function on the cone X = {A >= 0, tr A <= 1}. Cheap to copy: the
/// evaluator is shared.
class Observable {
 public:
  using Fn = std::function<double(const ComplexMatrix&)>;

  Observable(std::string name, Fn fn, std::optional<HolderCertificate> holder = std::nullopt)
      : name_(std::move(name)), fn_(std::make_shared<Fn>(std::move(fn))), holder_(holder) {}

  double operator()(const ComplexMatrix& a) const { return (*fn_)(a); }
  double operator()(const ConePoint& x) const { return (*fn_)(x.matrix()); }

  const std::string& name() const { return name_; }
  const std::optional<HolderCertificate>& holder() const { return holder_; }
  Observable with_holder(HolderCertificate h) const {
    Observable copy = *this;
    copy.holder_ = h;
    return copy;
  }

 private:
  std::string name_;
  std::shared_ptr<const Fn> fn_;
  std::optional<HolderCertificate> holder_;
};

namespace observables {

Observable constant(double c);
/// Re tr(A rho). Hermitian A gives a real functional.
Observable linear(const ComplexMatrix& a);
/// tr(rho); Lipschitz constant sqrt(n) in the Frobenius metric.
Observable trace(Eigen::Index n);
/// ||rho - sigma||_F.
Observable frobenius_dist(const ComplexMatrix& sigma);
/// exp(-scale * ||rho - sigma||_F).
Observable exp_neg_dist(const ComplexMatrix& sigma, double scale);
/// tr(rho^2) = ||rho||_F^2.
Observable purity();
/// Re or Im of rho(i, j).
Observable entry(Eigen::Index i, Eigen::Index j, bool imaginary);
/// exp(b * Re tr(A rho)).
Observable exp_linear(const ComplexMatrix& a, double b);

}  // namespace observables

/// Sampled Holder constant: the largest difference quotient over `pairs`
/// random cone-point pairs, inflated by 1.5.
HolderCertificate estimate_holder(const Observable& f, Eigen::Index n, double exponent,
                                  std::size_t pairs, std::uint64_t seed);

}  // namespace rcl

#endif  // RCL_OBSERVABLE_HPP
