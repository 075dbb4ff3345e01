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

// Transfer operators induced by channels.
//
// All three operators share one shape, (T f)(x) = sum_i w_i(x) f(g_i(x)):
//
//   barycentric  T_b   w_i = p_i          g_i(x) = U_i x U_i*
//   contractive  T_c   w_i = 1            g_i(x) = p_i U_i x U_i*
//   nonlinear    T'    w_i = tr(Q_i x)    g_i(x) = U_i x U_i*
//
// The dual Markov operators on measures (see measures.hpp) push an atom
// (x, m) to {(g_i(x), m w_i(x))}, so the same BranchSystem drives both.

#ifndef RCL_TRANSFER_HPP
#define RCL_TRANSFER_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <variant>
#include <vector>

#include "rcl/channels.hpp"
#include "rcl/observable.hpp"

namespace rcl {

enum class OperatorKind { barycentric, contractive, nonlinear };

class BranchSystem {
 public:
  static BranchSystem barycentric(const MixedUnitaryChannel& channel);
  static BranchSystem contractive(const MixedUnitaryChannel& channel);
  static BranchSystem nonlinear(const NonlinearChannel& channel);

  OperatorKind kind() const { return kind_; }
  std::size_t size() const { return unitaries_.size(); }
  Eigen::Index dim() const { return n_; }

  double weight(std::size_t i, const ComplexMatrix& x) const;
  /// out = g_i(x); scratch is a caller-owned temporary of the same shape.
  void map(std::size_t i, const ComplexMatrix& x, ComplexMatrix& out, ComplexMatrix& scratch) const;
  ComplexMatrix map(std::size_t i, const ComplexMatrix& x) const;
  /// Scale factor of g_i (p_i for the contractive system, else 1).
  double contraction(std::size_t i) const { return scales_[i]; }

 private:
  BranchSystem() = default;
  OperatorKind kind_ = OperatorKind::barycentric;
  Eigen::Index n_ = 0;
  std::vector<ComplexMatrix> unitaries_;
  std::vector<ComplexMatrix> adjoints_;
  std::vector<double> scales_;
  std::vector<double> weights_;               // constant weights
  std::vector<ComplexMatrix> effects_t_;      // transposed Q_i (nonlinear only)
};

/// T f for the given branch system, as a new observable.
Observable apply(const BranchSystem& system, const Observable& f);

Observable apply_Tb(const MixedUnitaryChannel& channel, const Observable& f);
Observable apply_Tc(const MixedUnitaryChannel& channel, const Observable& f);
Observable apply_Tprime(const NonlinearChannel& channel, const Observable& f);

/// Word J = (j_1, ..., j_m), letters 0-based. F_J = F_{j_1} o ... o F_{j_m}.
struct Word {
  std::vector<std::size_t> letters;
  auto operator<=>(const Word&) const = default;
};

std::vector<Word> all_words(std::size_t k, std::size_t length);
ComplexMatrix apply_word(const BranchSystem& system, const Word& word, const ComplexMatrix& x);

/// Largest k^n accepted by exact word expansion.
inline constexpr double kExactWordBudget = 1e6;

struct ExactMode {};
struct MonteCarloMode {
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
};
using IterationMode = std::variant<ExactMode, MonteCarloMode>;

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;  // zero for exact evaluation
  bool exact = true;
  std::size_t samples = 0;
};

/// T^n f (x). Exact mode sums all k^n words (throws exact_budget_exceeded past
/// 1e6); Monte Carlo draws paths with letters chosen proportionally to the
/// branch weights and reweights by the total weight, which gives
/// k^n * mean over uniform words for T_c.
Estimate iterate(const BranchSystem& system, const Observable& f, const ComplexMatrix& x, int n,
                 const IterationMode& mode);

/// Frobenius diameter of the cone X used in derived bounds.
inline const double kConeDiameter = std::sqrt(2.0);

struct NormalizedLimit {
  Estimate estimate;      // k^-n T_c^n f (x)
  double limit = 0.0;     // f(0): <f, delta_0> h with h = 1
  /// H (max p)^(n nu) diam^nu when f carries a Holder certificate.
  std::optional<double> bound;
};

NormalizedLimit normalized_Tc_limit(const MixedUnitaryChannel& channel, const Observable& f,
                                    const ComplexMatrix& x, int n, const IterationMode& mode);

/// Leading eigendata of T_c: lambda = k, h = 1, eigenmeasure delta_0.
struct RuelleData {
  double lambda = 0.0;
  Observable h = observables::constant(1.0);
  ConePoint mu_atom = ConePoint::zero(1);
  double normalization = 0.0;  // <h, mu> = h(0)
};

/// Throws probability_on_boundary unless every p_i lies in (0, 1).
RuelleData ruelle_data(const MixedUnitaryChannel& channel);

/// max over sampled cone points of |k^-1 T_c h (x) - h(x)|.
double eigenfunction_residual(const MixedUnitaryChannel& channel, const Observable& h,
                              std::size_t samples, std::uint64_t seed);

struct AnalyticMode {};
struct SampledMode {
  std::size_t pairs = 1000;
  std::uint64_t seed = 0;
};
using JiangMode = std::variant<AnalyticMode, SampledMode>;

struct JiangReport {
  int m = 0;
  double lhs = 0.0;  // sup_x sum_{|J|=m} gamma_J(x)
  double rhs = 0.0;  // r(T_c)^m = k^m
  bool holds = false;
  bool sampled = false;
  std::map<Word, double> gamma;
  /// Largest sampled-minus-analytic gamma (sampled mode only).
  double max_excess = 0.0;
};

/// Lipschitz sum condition sum_{|J|=m} gamma_J < k^m for the contractive
/// branch maps in the Frobenius norm. Throws exact_budget_exceeded past 1e6
/// words.
JiangReport jiang_condition(const MixedUnitaryChannel& channel, int m, const JiangMode& mode);

}  // namespace rcl

#endif  // RCL_TRANSFER_HPP
