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

// Dense complex linear algebra over M_n(C), the state spaces built on it and
// the seeded random ensembles every other module samples from.

#ifndef RCL_MATKERNEL_HPP
#define RCL_MATKERNEL_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>

#include "rcl/errors.hpp"

namespace rcl {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using Rng = std::mt19937_64;

namespace tol {
// Type-level invariants (hermiticity, positivity, trace).
inline constexpr double kState = 1e-10;
// Algebraic identities (reconstructions, vec identities).
inline constexpr double kAlgebraic = 1e-9;
// Hermiticity precondition of the eigensolver.
inline constexpr double kHermitianInput = 1e-8;
}  // namespace tol

/// Validated point of D(C^n): Hermitian, PSD and unit trace.
class DensityMatrix {
 public:
  /// Throws ErrorCode::invalid_state when an invariant is violated.
  explicit DensityMatrix(ComplexMatrix mat);

  /// Skips validation. For internal use on matrices that are density
  /// matrices by construction.
  static DensityMatrix trusted(ComplexMatrix mat);

  Eigen::Index dim() const { return mat_.rows(); }
  const ComplexMatrix& matrix() const { return mat_; }

  static DensityMatrix maximally_mixed(Eigen::Index n);
  static DensityMatrix basis_projector(Eigen::Index n, Eigen::Index k);
  static DensityMatrix pure(const ComplexVector& psi);

 private:
  struct NoCheck {};
  DensityMatrix(ComplexMatrix mat, NoCheck) : mat_(std::move(mat)) {}
  ComplexMatrix mat_;
};

/// Point of the bounded cone X = {A >= 0, tr A <= 1}. Contains the zero
/// matrix, which is the attractor of the contractive branch maps.
class ConePoint {
 public:
  explicit ConePoint(ComplexMatrix mat);
  static ConePoint trusted(ComplexMatrix mat);
  static ConePoint zero(Eigen::Index n);
  // NOLINTNEXTLINE(google-explicit-constructor)
  ConePoint(const DensityMatrix& rho) : mat_(rho.matrix()) {}

  Eigen::Index dim() const { return mat_.rows(); }
  const ComplexMatrix& matrix() const { return mat_; }

 private:
  struct NoCheck {};
  ConePoint(ComplexMatrix mat, NoCheck) : mat_(std::move(mat)) {}
  ComplexMatrix mat_;
};

struct HermitianEig {
  RealVector values;     // ascending
  ComplexMatrix vectors;  // columns are eigenvectors
};

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
/// Throws not_hermitian if ||m - m*||_F > 1e-8 * max(1, ||m||_F).
HermitianEig hermitian_eig(const ComplexMatrix& m);

bool is_hermitian(const ComplexMatrix& m, double tolerance);

/// Sum of singular values.
double trace_norm(const ComplexMatrix& m);

inline double frobenius_norm(const ComplexMatrix& m) { return m.norm(); }

/// Smallest eigenvalue of the Hermitian part of m.
double min_eigenvalue(const ComplexMatrix& m);

/// Kronecker product a (x) b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

enum class Factor { first, second };

/// Partial trace of m acting on C^dim_a (x) C^dim_b, keeping `keep`.
ComplexMatrix partial_trace(const ComplexMatrix& m, Eigen::Index dim_a,
                            Eigen::Index dim_b, Factor keep);

/// Column-stacking vectorisation and its inverse.
ComplexVector vec(const ComplexMatrix& m);
ComplexMatrix unvec(const ComplexVector& v, Eigen::Index n);

/// Pauli matrices; index 0 is the identity.
ComplexMatrix pauli(int index);

// --- random ensembles ------------------------------------------------------

/// Mixes (root, stream) into an independent 64-bit seed (splitmix64).
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream);

/// n x n matrix of iid standard complex normals.
ComplexMatrix ginibre(Eigen::Index n, Rng& rng);

/// Haar unitary via QR of a Ginibre matrix with the R diagonal phase fixed.
ComplexMatrix random_haar_unitary(Eigen::Index n, Rng& rng);
ComplexMatrix random_haar_unitary(Eigen::Index n, std::uint64_t seed);

/// Hilbert-Schmidt random state G G* / tr(G G*).
DensityMatrix random_density_hs(Eigen::Index n, Rng& rng);
DensityMatrix random_density_hs(Eigen::Index n, std::uint64_t seed);

/// Haar-random pure state.
DensityMatrix random_pure_state(Eigen::Index n, Rng& rng);

/// t * rho with t ~ U[0,1] and rho Hilbert-Schmidt random.
ConePoint random_cone_point(Eigen::Index n, Rng& rng);
ConePoint random_cone_point(Eigen::Index n, std::uint64_t seed);

/// Random Hermitian matrix (GUE-like, unnormalised).
ComplexMatrix random_hermitian(Eigen::Index n, Rng& rng);

}  // namespace rcl

#endif  // RCL_MATKERNEL_HPP
