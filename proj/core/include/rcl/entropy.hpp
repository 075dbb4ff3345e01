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

// Transfer entropy of nonlinear channels and its relatives. Natural
// logarithms throughout.

#ifndef RCL_ENTROPY_HPP
#define RCL_ENTROPY_HPP

#include <vector>

#include "rcl/channels.hpp"
#include "rcl/measures.hpp"
#include "rcl/observable.hpp"

namespace rcl {

/// -x ln x, with eta(0) = 0. Throws negative_argument for x < 0.
double eta(double x);

/// Shannon entropy of a probability vector (entries >= -1e-12, sum within
/// 1e-9 of one).
double shannon(const std::vector<double>& p);

/// -sum_i lambda_i ln lambda_i over the spectrum.
double von_neumann_entropy(const DensityMatrix& rho);

/// Classical relative entropy sum_j p_j ln(p_j / q_j); +inf when some
/// p_j > 0 has q_j = 0.
double relative_entropy(const std::vector<double>& p, const std::vector<double>& q);

class PovmSet {
 public:
  /// Throws invalid_povm unless every element is PSD and they sum to I.
  explicit PovmSet(std::vector<ComplexMatrix> elements);
  static PovmSet of(const NonlinearChannel& channel);

  std::size_t size() const { return elements_.size(); }
  Eigen::Index dim() const { return elements_.front().rows(); }
  const std::vector<ComplexMatrix>& elements() const { return elements_; }
  /// tr(Q_j a), clamped at zero.
  std::vector<double> probabilities(const ComplexMatrix& a) const;

 private:
  std::vector<ComplexMatrix> elements_;
};

/// h(rho) = sum_j eta(tr(Q_j rho)).
Observable measurement_entropy(const PovmSet& povm);

struct EntropyReport {
  double value = 0.0;                        // nats
  std::vector<double> branch_terms;          // tr(Q_i rho) * h(U_i rho U_i*)
  std::vector<double> branch_probabilities;  // tr(Q_i rho)
  double bound = 0.0;                        // log M for an M-outcome inner POVM
  bool bounds_checked = false;               // 0 <= value <= bound within 1e-9
};

/// h_Q(rho) = sum_i tr(Q_i rho) sum_j eta(tr(Q_j U_i rho U_i*)) with the
/// channel's own effects as the inner measurement.
EntropyReport transfer_entropy(const NonlinearChannel& channel, const DensityMatrix& rho);
/// Same with a separate inner POVM of M outcomes; the bound becomes log M.
EntropyReport transfer_entropy(const NonlinearChannel& channel, const PovmSet& inner, const DensityMatrix& rho);

/// sum_i tr(Q_i^A rho) D(q_i^A || q_i^B) with q_i^X the inner distribution of
/// U_i^X rho U_i^X*. Branches with tr(Q_i^A rho) = 0 are dropped. Returns
/// +inf when an A-probability is positive where B's is zero.
double relative_transfer_entropy(const NonlinearChannel& a, const NonlinearChannel& b, const DensityMatrix& rho);
/// Same sum for given outer weights and inner distributions.
double relative_transfer_entropy(const std::vector<double>& weights, const std::vector<std::vector<double>>& inner_a,
                                 const std::vector<std::vector<double>>& inner_b);

struct ConcavityCheck {
  bool holds = true;
  /// min over the grid of h(a r1 + (1-a) r2) - a^2 h(r1) - (1-a)^2 h(r2).
  double worst_margin = 0.0;
};

ConcavityCheck check_concavity_inequality(const NonlinearChannel& channel, const DensityMatrix& rho1,
                                          const DensityMatrix& rho2, const std::vector<double>& alpha_grid);

struct EofCandidate {
  double entanglement = 0.0;       // integral of S(r(psi)) d mu
  double transfer_entropy = 0.0;   // integral of h_Q(r(psi)) d mu
};

struct EofReport {
  std::vector<EofCandidate> candidates;
  double min_entanglement = 0.0;
  double min_transfer_entropy = 0.0;
  /// min transfer entropy <= min entanglement over the supplied candidates.
  bool inequality_holds = false;
};

/// Evaluates both entanglement functionals on candidate decompositions of
/// omega on C^n (x) C^n into pure states; r traces out the second factor.
/// Throws barycenter_mismatch when a candidate's barycenter is more than
/// 1e-6 from omega in trace norm.
EofReport eof_inequality_demo(const DensityMatrix& omega, const std::vector<EmpiricalMeasure>& candidates,
                              const NonlinearChannel& channel);

}  // namespace rcl

#endif  // RCL_ENTROPY_HPP
