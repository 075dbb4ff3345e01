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

#include "rcl/matkernel.hpp"

#include <cmath>
#include <string>

namespace rcl {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::not_hermitian: return "NotHermitian";
    case ErrorCode::invalid_state: return "InvalidState";
    case ErrorCode::convergence_failure: return "ConvergenceFailure";
    case ErrorCode::dimension_mismatch: return "DimensionMismatch";
    case ErrorCode::nonlinear_channel_unsupported: return "NonlinearChannelUnsupported";
    case ErrorCode::no_fixed_density_found: return "NoFixedDensityFound";
    case ErrorCode::invalid_probability_vector: return "InvalidProbabilityVector";
    case ErrorCode::invalid_channel: return "ChannelInvalid";
    case ErrorCode::exact_budget_exceeded: return "ExactBudgetExceeded";
    case ErrorCode::budget_exceeded: return "BudgetExceeded";
    case ErrorCode::probability_on_boundary: return "ProbabilityOnBoundary";
    case ErrorCode::negative_argument: return "NegativeArgument";
    case ErrorCode::invalid_povm: return "InvalidPovm";
    case ErrorCode::branch_count_mismatch: return "BranchCountMismatch";
    case ErrorCode::not_positive_definite: return "NotPositiveDefinite";
    case ErrorCode::non_positive_function_value: return "NonPositiveFunctionValue";
    case ErrorCode::insufficient_points: return "InsufficientPoints";
    case ErrorCode::non_positive_values: return "NonPositiveValues";
    case ErrorCode::barycenter_mismatch: return "BarycenterMismatch";
    case ErrorCode::config_invalid: return "ConfigInvalid";
  }
  return "Unknown";
}

namespace {

void require_square(const ComplexMatrix& m, const char* who) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorCode::dimension_mismatch,
                std::string(who) + ": expected a non-empty square matrix, got " +
                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

// Shared validation of DensityMatrix / ConePoint. Returns an empty string on
// success, otherwise the reason.
std::string check_psd(const ComplexMatrix& m, double trace_lo, double trace_hi) {
  if (m.rows() != m.cols() || m.rows() == 0) return "matrix is not square";
  if (!m.allFinite()) return "matrix has non-finite entries";
  const double asym = (m - m.adjoint()).norm();
  if (asym > tol::kState) return "not Hermitian (asymmetry " + std::to_string(asym) + ")";
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) return "eigensolver failed";
  if (es.eigenvalues()(0) < -tol::kState) {
    return "not positive semidefinite (min eigenvalue " +
           std::to_string(es.eigenvalues()(0)) + ")";
  }
  const double tr = m.trace().real();
  if (tr < trace_lo || tr > trace_hi) return "trace " + std::to_string(tr) + " out of range";
  return {};
}

}  // namespace

DensityMatrix::DensityMatrix(ComplexMatrix mat) : mat_(std::move(mat)) {
  const std::string why = check_psd(mat_, 1.0 - tol::kState, 1.0 + tol::kState);
  if (!why.empty()) throw Error(ErrorCode::invalid_state, "DensityMatrix: " + why);
}

DensityMatrix DensityMatrix::trusted(ComplexMatrix mat) {
  return DensityMatrix(std::move(mat), NoCheck{});
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index n) {
  return trusted(ComplexMatrix::Identity(n, n) / static_cast<double>(n));
}

DensityMatrix DensityMatrix::basis_projector(Eigen::Index n, Eigen::Index k) {
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  m(k, k) = 1.0;
  return trusted(std::move(m));
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
  const double nrm = psi.norm();
  if (!(nrm > 0.0)) throw Error(ErrorCode::invalid_state, "pure: zero vector");
  const ComplexVector u = psi / nrm;
  return trusted(u * u.adjoint());
}

ConePoint::ConePoint(ComplexMatrix mat) : mat_(std::move(mat)) {
  const std::string why = check_psd(mat_, -tol::kState, 1.0 + tol::kState);
  if (!why.empty()) throw Error(ErrorCode::invalid_state, "ConePoint: " + why);
}

ConePoint ConePoint::trusted(ComplexMatrix mat) { return ConePoint(std::move(mat), NoCheck{}); }

ConePoint ConePoint::zero(Eigen::Index n) { return trusted(ComplexMatrix::Zero(n, n)); }

bool is_hermitian(const ComplexMatrix& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).norm() <= tolerance * std::max(1.0, m.norm());
}

HermitianEig hermitian_eig(const ComplexMatrix& m) {
  require_square(m, "hermitian_eig");
  if (!is_hermitian(m, tol::kHermitianInput)) {
    throw Error(ErrorCode::not_hermitian, "hermitian_eig: input is not Hermitian");
  }
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::convergence_failure, "hermitian_eig: eigensolver did not converge");
  }
  return {es.eigenvalues(), es.eigenvectors()};
}

double trace_norm(const ComplexMatrix& m) {
  require_square(m, "trace_norm");
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues().sum();
}

double min_eigenvalue(const ComplexMatrix& m) {
  require_square(m, "min_eigenvalue");
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::convergence_failure, "min_eigenvalue: eigensolver did not converge");
  }
  return es.eigenvalues()(0);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, Eigen::Index dim_a,
                            Eigen::Index dim_b, Factor keep) {
  if (dim_a <= 0 || dim_b <= 0 || m.rows() != dim_a * dim_b || m.cols() != dim_a * dim_b) {
    throw Error(ErrorCode::dimension_mismatch,
                "partial_trace: matrix is " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()) + ", factors " + std::to_string(dim_a) +
                    "*" + std::to_string(dim_b));
  }
  if (keep == Factor::first) {
    ComplexMatrix out = ComplexMatrix::Zero(dim_a, dim_a);
    for (Eigen::Index i = 0; i < dim_a; ++i)
      for (Eigen::Index j = 0; j < dim_a; ++j)
        for (Eigen::Index b = 0; b < dim_b; ++b) out(i, j) += m(i * dim_b + b, j * dim_b + b);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(dim_b, dim_b);
  for (Eigen::Index i = 0; i < dim_b; ++i)
    for (Eigen::Index j = 0; j < dim_b; ++j)
      for (Eigen::Index a = 0; a < dim_a; ++a) out(i, j) += m(a * dim_b + i, a * dim_b + j);
  return out;
}

ComplexVector vec(const ComplexMatrix& m) {
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

ComplexMatrix unvec(const ComplexVector& v, Eigen::Index n) {
  if (v.size() != n * n) {
    throw Error(ErrorCode::dimension_mismatch, "unvec: length is not n^2");
  }
  return Eigen::Map<const ComplexMatrix>(v.data(), n, n);
}

ComplexMatrix pauli(int index) {
  const Complex i1(0.0, 1.0);
  ComplexMatrix p(2, 2);
  switch (index) {
    case 0: p << 1, 0, 0, 1; break;
    case 1: p << 0, 1, 1, 0; break;
    case 2: p << 0, -i1, i1, 0; break;
    case 3: p << 1, 0, 0, -1; break;
    default: throw Error(ErrorCode::invalid_argument, "pauli: index must be 0..3");
  }
  return p;
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) {
  std::uint64_t z = root + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ComplexMatrix ginibre(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(n, n);
  // Fill column-major in a fixed order so results depend only on the seed.
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im) * M_SQRT1_2;
    }
  }
  return g;
}

ComplexMatrix random_haar_unitary(Eigen::Index n, Rng& rng) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "random_haar_unitary: n must be >= 1");
  const ComplexMatrix g = ginibre(n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    const Complex phase = mag > 0.0 ? r(j, j) / mag : Complex(1.0, 0.0);
    q.col(j) *= phase;
  }
  return q;
}

ComplexMatrix random_haar_unitary(Eigen::Index n, std::uint64_t seed) {
  Rng rng(seed);
  return random_haar_unitary(n, rng);
}

DensityMatrix random_density_hs(Eigen::Index n, Rng& rng) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "random_density_hs: n must be >= 1");
  const ComplexMatrix g = ginibre(n, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho = 0.5 * (rho + rho.adjoint().eval());
  rho /= rho.trace().real();
  return DensityMatrix::trusted(std::move(rho));
}

DensityMatrix random_density_hs(Eigen::Index n, std::uint64_t seed) {
  Rng rng(seed);
  return random_density_hs(n, rng);
}

DensityMatrix random_pure_state(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector psi(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    psi(i) = Complex(re, im);
  }
  return DensityMatrix::pure(psi);
}

ConePoint random_cone_point(Eigen::Index n, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double t = unit(rng);
  const DensityMatrix rho = random_density_hs(n, rng);
  return ConePoint::trusted(t * rho.matrix());
}

ConePoint random_cone_point(Eigen::Index n, std::uint64_t seed) {
  Rng rng(seed);
  return random_cone_point(n, rng);
}

ComplexMatrix random_hermitian(Eigen::Index n, Rng& rng) {
  const ComplexMatrix g = ginibre(n, rng);
  return 0.5 * (g + g.adjoint());
}

}  // namespace rcl
