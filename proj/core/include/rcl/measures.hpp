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

// Empirical measures over D(C^n) or the cone X, the Markov operators dual to
// the transfer operators (P_b, P', P_e), chaos-game sampling, Cesaro scans
// and the barycenter-theorem harness.

#ifndef RCL_MEASURES_HPP
#define RCL_MEASURES_HPP

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "rcl/transfer.hpp"

namespace rcl {

struct Atom {
  ComplexMatrix state;
  double weight = 0.0;
};

class EmpiricalMeasure {
 public:
  explicit EmpiricalMeasure(Eigen::Index n) : n_(n) {}
  EmpiricalMeasure(Eigen::Index n, std::vector<Atom> atoms);

  static EmpiricalMeasure dirac(const ComplexMatrix& x);
  /// lambda a + (1 - lambda) b as a concatenated atom list.
  static EmpiricalMeasure mixture(double lambda, const EmpiricalMeasure& a, const EmpiricalMeasure& b);

  Eigen::Index dim() const { return n_; }
  std::size_t size() const { return atoms_.size(); }
  const std::vector<Atom>& atoms() const { return atoms_; }
  void add(ComplexMatrix state, double weight);
  void reserve(std::size_t count) { atoms_.reserve(count); }

  double total_mass() const;
  bool is_normalized(double tolerance = 1e-12) const;
  /// <f, mu> = sum_a w_a f(x_a).
  double expectation(const Observable& f) const;
  /// sum_a w_a x_a (not renormalised).
  ComplexMatrix mean_state() const;
  /// Same atoms with weights multiplied by f(x_a), i.e. the measure f dmu.
  EmpiricalMeasure weighted_by(const Observable& f) const;

 private:
  Eigen::Index n_;
  std::vector<Atom> atoms_;
};

/// Markov operators are the duals of the transfer operators and reuse their
/// branch structure: P_b <-> T_b, P' <-> T', P_e <-> T_c.
using MarkovOperator = BranchSystem;
inline MarkovOperator markov_b(const MixedUnitaryChannel& c) { return BranchSystem::barycentric(c); }
inline MarkovOperator markov_prime(const NonlinearChannel& c) { return BranchSystem::nonlinear(c); }
inline MarkovOperator markov_e(const MixedUnitaryChannel& c) { return BranchSystem::contractive(c); }

inline constexpr std::size_t kDefaultAtomCap = 100000;

struct PushforwardOptions {
  std::size_t atom_cap = kDefaultAtomCap;
  std::uint64_t seed = 0;  // resampling offset stream
};

/// Atom (x, w) -> {(g_i(x), w w_i(x))}, dropping zero-weight images, then
/// systematic resampling down to atom_cap if needed. Resampled measures are
/// reweighted to keep the first moment of the full image.
EmpiricalMeasure pushforward(const MarkovOperator& op, const EmpiricalMeasure& mu,
                             const PushforwardOptions& options = {});

/// Systematic resampling to `cap` equal-weight atoms over a seeded random
/// ordering of the input; preserves total mass.
EmpiricalMeasure systematic_resample(const EmpiricalMeasure& mu, std::size_t cap, std::uint64_t seed);

/// Linear reweighting w_a -> w_a (1 + <f(x_a) - f_bar, c>) that makes
/// sum_a w_a x_a equal target_sum while keeping the total mass. Leaves mu
/// untouched and returns false if some weight would not stay positive.
bool calibrate_first_moment(EmpiricalMeasure& mu, const ComplexMatrix& target_sum);

/// Trajectory x_{t+1} = U_i x_t U_i* with i drawn from the branch weights.
/// Returns the uniform measure on the states at t = burn_in .. steps-1.
EmpiricalMeasure chaos_game(const MarkovOperator& op, const ComplexMatrix& start, std::size_t steps,
                            std::size_t burn_in, std::uint64_t seed);
EmpiricalMeasure chaos_game(const MixedUnitaryChannel& channel, const ComplexMatrix& start,
                            std::size_t steps, std::size_t burn_in, std::uint64_t seed);
EmpiricalMeasure chaos_game(const NonlinearChannel& channel, const ComplexMatrix& start,
                            std::size_t steps, std::size_t burn_in, std::uint64_t seed);

/// Weighted mean state of a normalised measure over density matrices.
DensityMatrix barycenter(const EmpiricalMeasure& mu);

// --- witness observables ---------------------------------------------------

/// Fixed panel of test functions used to judge invariance of empirical
/// measures: 24 linear functionals and 8 nonlinear ones. Linear witnesses are
/// evaluated through the mean state.
class WitnessPanel {
 public:
  static WitnessPanel standard(Eigen::Index n);
  /// Subset of the standard panel by name ("linear0".."linear23",
  /// "expdist0".."expdist3", "expdist_mixed", "fdist0", "fdist1", "purity").
  static WitnessPanel select(Eigen::Index n, const std::vector<std::string>& names);

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  /// Expectations of every witness, in panel order.
  std::vector<double> evaluate(const EmpiricalMeasure& mu) const;

 private:
  std::vector<std::string> names_;
  std::vector<ComplexMatrix> linear_;
  std::vector<Observable> nonlinear_;
};

/// max_g |<g, P mu> - <g, mu>| over the panel.
double invariance_residual(const MarkovOperator& op, const EmpiricalMeasure& mu,
                           const WitnessPanel& panel, const PushforwardOptions& options = {});

// --- Cesaro scans ----------------------------------------------------------

struct PushforwardScan {
  std::size_t atom_cap = kDefaultAtomCap;
  std::uint64_t seed = 0;
};
struct ChaosScan {
  std::size_t runs = 1000;
  std::uint64_t seed = 0;
};
using CesaroMode = std::variant<PushforwardScan, ChaosScan>;

struct CesaroReport {
  std::string g;
  /// s_t = <g, P^t mu>, t = 0 .. n_max + j_max - 1.
  std::vector<double> sequence;
  std::vector<double> sequence_stderr;
  /// values[n-1][j] = (1/n) sum_{i<n} s_{i+j}.
  std::vector<std::vector<double>> values;
  double limsup_estimate = 0.0;  // inf_n sup_j values
  double liminf_estimate = 0.0;  // sup_n inf_j values
  double stderr_allowance = 0.0;
  int n_used = 0;
  bool early_stopped = false;
};

/// Block averages of <g, P^{i+j} mu>. Throws budget_exceeded when the scan
/// would exceed 1e10 atom-steps.
CesaroReport cesaro_scan(const MarkovOperator& op, const Observable& g, const EmpiricalMeasure& start,
                         int n_max, int j_max, const CesaroMode& mode);

// --- barycenter theorem ----------------------------------------------------

struct BarycenterOptions {
  std::size_t atom_cap = 4096;
  int window = 64;      // Cesaro block length n
  int min_shift = 8;    // smallest block offset j
  int max_steps = 600;  // give up (ConvergenceNotReached) past this many pushforwards
  double trace_tolerance = 1e-3;
  double invariance_tolerance = 1e-3;
  std::vector<std::string> witnesses;  // empty: the standard panel
};

struct CesaroInvariantMeasure {
  ComplexMatrix start;
  /// Last streamed measure of the accepted block (for dumps).
  EmpiricalMeasure measure{1};
  ComplexMatrix barycenter;
  double invariance_residual = 0.0;  // witness panel, max_g |<g, P mu> - <g, mu>|
  int shift = 0;                     // j of the accepted block
  int steps = 0;
  bool converged = false;
};

/// Streams mu = (1/n) sum_{i<n} P^{i+j} delta_x over a sliding block and
/// stops at the first j whose block passes the invariance tolerance.
CesaroInvariantMeasure cesaro_invariant_measure(const MarkovOperator& op, const ComplexMatrix& start,
                                                const WitnessPanel& panel, const BarycenterOptions& options,
                                                std::uint64_t seed);

struct BarycenterCase {
  CesaroInvariantMeasure measure;
  double residual = 0.0;  // forward: ||bary - rho0||_tr, reverse: ||Phi(bary) - bary||_tr
  bool pass = false;
};

struct BarycenterTheoremReport {
  std::vector<BarycenterCase> forward;
  std::vector<BarycenterCase> reverse;
  bool forward_pass = false;
  bool reverse_pass = false;
  bool convergence_not_reached = false;
};

/// Forward: every fixed point (plus random mixtures of them) is the
/// barycenter of a P_b-invariant measure. Reverse: barycenters of invariant
/// measures grown from random starts are fixed by the channel.
BarycenterTheoremReport verify_barycenter_theorem(const MixedUnitaryChannel& channel, int trials,
                                                  std::uint64_t seed, const BarycenterOptions& options = {});

}  // namespace rcl

#endif  // RCL_MEASURES_HPP
