// Hand-rolled generators and independent reference computations shared by
// the unit tests and the acceptance runner.

#ifndef RCL_TESTS_GENERATORS_HPP
#define RCL_TESTS_GENERATORS_HPP

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "rcl/channels.hpp"
#include "rcl/matkernel.hpp"
#include "rcl/measures.hpp"
#include "rcl/observable.hpp"

namespace rcl_test {

using rcl::Complex;
using rcl::ComplexMatrix;
using rcl::ComplexVector;
using rcl::Rng;

inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::size_t uniform_index(Rng& rng, std::size_t count) {
  return std::uniform_int_distribution<std::size_t>(0, count - 1)(rng);
}

/// Probability vector with every entry at least `floor`.
inline std::vector<double> random_probabilities(Rng& rng, std::size_t k, double floor = 0.02) {
  std::vector<double> p(k);
  double total = 0.0;
  for (double& x : p) {
    x = -std::log(1.0 - uniform(rng));
    total += x;
  }
  for (double& x : p) x = floor + (1.0 - floor * static_cast<double>(k)) * x / total;
  double sum = 0.0;
  for (double x : p) sum += x;
  p.back() += 1.0 - sum;
  return p;
}

inline rcl::MixedUnitaryChannel random_channel(Rng& rng, Eigen::Index n, std::size_t k) {
  const std::vector<double> p = random_probabilities(rng, k);
  std::vector<rcl::UnitaryBranch> branches;
  for (std::size_t i = 0; i < k; ++i) branches.push_back({p[i], rcl::random_haar_unitary(n, rng)});
  return rcl::MixedUnitaryChannel(std::move(branches));
}

/// POVM from Ginibre squares normalised by S^-1/2, built with a Hermitian
/// eigensolver independent of the library's helpers.
inline std::vector<ComplexMatrix> random_effects(Rng& rng, Eigen::Index n, std::size_t k) {
  std::vector<ComplexMatrix> g(k);
  ComplexMatrix s = ComplexMatrix::Zero(n, n);
  for (auto& gi : g) {
    const ComplexMatrix a = rcl::ginibre(n, rng);
    gi = a * a.adjoint();
    s += gi;
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(s);
  const ComplexMatrix s_inv_half = es.eigenvectors() *
                                   es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                                   es.eigenvectors().adjoint();
  ComplexMatrix total = ComplexMatrix::Zero(n, n);
  for (std::size_t i = 0; i + 1 < k; ++i) {
    g[i] = s_inv_half * g[i] * s_inv_half;
    g[i] = 0.5 * (g[i] + g[i].adjoint()).eval();
    total += g[i];
  }
  g[k - 1] = ComplexMatrix::Identity(n, n) - total;
  return g;
}

inline rcl::NonlinearChannel random_nonlinear(Rng& rng, Eigen::Index n, std::size_t k) {
  const auto q = random_effects(rng, n, k);
  std::vector<rcl::PovmBranch> branches;
  for (std::size_t i = 0; i < k; ++i) branches.push_back({q[i], rcl::random_haar_unitary(n, rng)});
  return rcl::NonlinearChannel(std::move(branches));
}

inline rcl::DensityMatrix random_state(Rng& rng, Eigen::Index n) { return rcl::random_density_hs(n, rng); }

inline ComplexMatrix random_herm(Rng& rng, Eigen::Index n) {
  const ComplexMatrix g = rcl::ginibre(n, rng);
  return 0.5 * (g + g.adjoint());
}

/// Normalised measure on a few random states with random weights.
inline rcl::EmpiricalMeasure random_measure(Rng& rng, Eigen::Index n, std::size_t atoms) {
  const std::vector<double> w = random_probabilities(rng, atoms, 0.0);
  rcl::EmpiricalMeasure mu(n);
  for (std::size_t a = 0; a < atoms; ++a) mu.add(random_state(rng, n).matrix(), w[a]);
  return mu;
}

/// Bounded nonlinear test function: a + b exp(-s ||x - sigma||_F) + c tr(A x).
inline rcl::Observable random_observable(Rng& rng, Eigen::Index n) {
  const ComplexMatrix sigma = random_state(rng, n).matrix();
  const ComplexMatrix a = random_herm(rng, n);
  const double c0 = uniform(rng, -1.0, 1.0);
  const double c1 = uniform(rng, 0.1, 2.0);
  const double c2 = uniform(rng, -1.0, 1.0);
  const double s = uniform(rng, 0.5, 3.0);
  return rcl::Observable("random", [=](const ComplexMatrix& x) {
    return c0 + c1 * std::exp(-s * (x - sigma).norm()) + c2 * (a * x).trace().real();
  });
}

// --- reference computations ------------------------------------------------

inline ComplexMatrix oracle_apply(const rcl::MixedUnitaryChannel& c, const ComplexMatrix& x) {
  ComplexMatrix out = ComplexMatrix::Zero(x.rows(), x.cols());
  for (const auto& b : c.branches()) out += b.p * b.u * x * b.u.adjoint();
  return out;
}

inline double oracle_trace_norm(const ComplexMatrix& m) {
  return Eigen::JacobiSVD<ComplexMatrix>(m).singularValues().sum();
}

/// conj(U) (x) U summed with weights, assembled entrywise.
inline ComplexMatrix oracle_superoperator(const rcl::MixedUnitaryChannel& c) {
  const Eigen::Index n = c.dim();
  ComplexMatrix m = ComplexMatrix::Zero(n * n, n * n);
  for (const auto& b : c.branches()) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) {
          for (Eigen::Index l = 0; l < n; ++l) {
            // vec index of (row r, col c) is c * n + r.
            m(i * n + k, j * n + l) += b.p * std::conj(b.u(i, j)) * b.u(k, l);
          }
        }
      }
    }
  }
  return m;
}

inline ComplexMatrix oracle_trace_out_second(const ComplexMatrix& m, Eigen::Index da, Eigen::Index db) {
  ComplexMatrix out = ComplexMatrix::Zero(da, da);
  for (Eigen::Index i = 0; i < da; ++i) {
    for (Eigen::Index j = 0; j < da; ++j) {
      for (Eigen::Index k = 0; k < db; ++k) out(i, j) += m(i * db + k, j * db + k);
    }
  }
  return out;
}

inline double oracle_eta(double x) { return x > 0.0 ? -x * std::log(x) : 0.0; }

/// 2x2 Birkhoff contraction coefficient tanh(D/4) of a positive matrix.
inline double oracle_birkhoff_tanh(const Eigen::Matrix2d& t) {
  const double d = std::abs(std::log(t(0, 0) * t(1, 1) / (t(0, 1) * t(1, 0))));
  return std::tanh(d / 4.0);
}

}  // namespace rcl_test

#endif  // RCL_TESTS_GENERATORS_HPP
