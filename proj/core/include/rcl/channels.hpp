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

// Quantum channels: Kraus, mixed-unitary and nonlinear (place-dependent)
// forms, their superoperator spectra and fixed points.
//
// Superoperators use column-stacking vectorisation: vec(A X B) =
// (B^T (x) A) vec(X), so rho -> V rho V* has matrix conj(V) (x) V.

#ifndef RCL_CHANNELS_HPP
#define RCL_CHANNELS_HPP

#include <array>
#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

#include "rcl/matkernel.hpp"

namespace rcl {

namespace tol {
inline constexpr double kTracePreserving = 1e-9;
inline constexpr double kProbabilitySum = 1e-12;
inline constexpr double kUnitary = 1e-10;
inline constexpr double kPovmSum = 1e-10;
inline constexpr double kFixedEigenvalue = 1e-8;
inline constexpr double kFixedPointResidual = 1e-8;
}  // namespace tol

/// rho -> sum_i V_i rho V_i*. Trace preservation is reported, not enforced.
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<ComplexMatrix> kraus_ops);

  Eigen::Index dim() const { return n_; }
  const std::vector<ComplexMatrix>& kraus_ops() const { return ops_; }
  bool trace_preserving() const;

 private:
  Eigen::Index n_;
  std::vector<ComplexMatrix> ops_;
};

struct UnitaryBranch {
  double p;
  ComplexMatrix u;
};

/// rho -> sum_i p_i U_i rho U_i*, with branch maps F_i(rho) = p_i U_i rho U_i*.
class MixedUnitaryChannel {
 public:
  /// Throws invalid_probability_vector or invalid_channel.
  explicit MixedUnitaryChannel(std::vector<UnitaryBranch> branches);

  Eigen::Index dim() const { return n_; }
  std::size_t size() const { return branches_.size(); }
  const std::vector<UnitaryBranch>& branches() const { return branches_; }
  const UnitaryBranch& branch(std::size_t i) const { return branches_[i]; }
  double max_probability() const;
  std::vector<double> probabilities() const;

 private:
  Eigen::Index n_;
  std::vector<UnitaryBranch> branches_;
};

struct PovmBranch {
  ComplexMatrix q;  // PSD effect, branch probability tr(Q rho)
  ComplexMatrix u;  // unitary
};

/// rho -> sum_i tr(Q_i rho) U_i rho U_i* with sum_i Q_i = I.
class NonlinearChannel {
 public:
  explicit NonlinearChannel(std::vector<PovmBranch> branches);

  Eigen::Index dim() const { return n_; }
  std::size_t size() const { return branches_.size(); }
  const std::vector<PovmBranch>& branches() const { return branches_; }
  const PovmBranch& branch(std::size_t i) const { return branches_[i]; }

  /// tr(Q_i A), clamped at zero against roundoff.
  double branch_probability(std::size_t i, const ComplexMatrix& a) const;

 private:
  Eigen::Index n_;
  std::vector<PovmBranch> branches_;
};

using Channel = std::variant<KrausChannel, MixedUnitaryChannel, NonlinearChannel>;

Eigen::Index channel_dim(const Channel& channel);
bool is_linear(const Channel& channel);

ComplexMatrix apply(const KrausChannel& channel, const ComplexMatrix& a);
ComplexMatrix apply(const MixedUnitaryChannel& channel, const ComplexMatrix& a);
ComplexMatrix apply(const NonlinearChannel& channel, const ComplexMatrix& a);
ComplexMatrix apply(const Channel& channel, const ComplexMatrix& a);

/// Typed overloads: checks dimensions and keeps the state kind.
DensityMatrix apply(const Channel& channel, const DensityMatrix& rho);
ConePoint apply(const Channel& channel, const ConePoint& x);

/// n^2 x n^2 matrix M with vec(Phi(A)) = M vec(A). Throws
/// nonlinear_channel_unsupported for nonlinear channels.
ComplexMatrix superoperator_matrix(const Channel& channel);

struct SuperoperatorSpectrum {
  std::vector<Complex> eigenvalues;  // descending modulus
  int fixed_space_dim = 0;           // #{lambda : |lambda - 1| <= 1e-8}
  /// Largest-modulus eigenvalue outside the eigenvalue-1 cluster (0 when
  /// there is none). Governs the rate of convergence to the fixed space.
  Complex kappa{0.0, 0.0};
};

SuperoperatorSpectrum spectrum(const Channel& channel);

/// Density matrices spanning the fixed space ker(Phi - I). Each satisfies
/// ||Phi(rho) - rho||_tr <= 1e-8.
std::vector<DensityMatrix> fixed_points(const Channel& channel);

/// Averages (1/n) sum_{t<n} Phi^t(rho).
ComplexMatrix cesaro_average(const Channel& channel, const ComplexMatrix& rho, int n);

// --- named channels ----------------------------------------------------------

MixedUnitaryChannel identity_channel(Eigen::Index n);
MixedUnitaryChannel phase_flip(double p);
MixedUnitaryChannel bit_flip(double p);
MixedUnitaryChannel pauli_channel(const std::array<double, 4>& probs);
/// Dirichlet(1,...,1) weights and Haar unitaries, fully determined by seed.
MixedUnitaryChannel random_mixed_unitary(Eigen::Index n, std::size_t k, std::uint64_t seed);
/// (1 - w) a + w b as a single mixed-unitary channel.
MixedUnitaryChannel mix(const MixedUnitaryChannel& a, const MixedUnitaryChannel& b, double w);
/// Qubit channel (1 - q) * uniform Pauli + q * inner.
MixedUnitaryChannel depolarizing_mix(const MixedUnitaryChannel& inner, double q);

/// Parses "identity[:n]", "phase_flip:p", "bit_flip:p", "pauli:p0,p1,p2,p3",
/// "depolarizing:q" and "random_mixed_unitary:k:seedS[:n]".
MixedUnitaryChannel named_channel(std::string_view spec);

KrausChannel to_kraus(const MixedUnitaryChannel& channel);

/// Nonlinear channel with constant branch probabilities Q_i = p_i I.
NonlinearChannel constant_probability_channel(const MixedUnitaryChannel& channel);

/// Random k-outcome POVM: Q_i = S^{-1/2} G_i S^{-1/2} with Ginibre G_i G_i*
/// and S = sum_i G_i G_i*.
std::vector<ComplexMatrix> random_povm(Eigen::Index n, std::size_t k, std::uint64_t seed);
/// Random POVM paired with Haar unitaries.
NonlinearChannel random_nonlinear_channel(Eigen::Index n, std::size_t k, std::uint64_t seed);

}  // namespace rcl

#endif  // RCL_CHANNELS_HPP
