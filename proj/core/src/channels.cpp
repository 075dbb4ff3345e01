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

#include "rcl/channels.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <string>

namespace rcl {

namespace {

void check_square_dim(const ComplexMatrix& m, Eigen::Index n, const char* what) {
  if (m.rows() != n || m.cols() != n) {
    throw Error(ErrorCode::invalid_channel,
                std::string(what) + ": expected " + std::to_string(n) + "x" +
                    std::to_string(n) + " matrix");
  }
  if (!m.allFinite()) throw Error(ErrorCode::invalid_channel, std::string(what) + ": non-finite entry");
}

void check_unitary(const ComplexMatrix& u) {
  const Eigen::Index n = u.rows();
  const double dev = (u.adjoint() * u - ComplexMatrix::Identity(n, n)).norm();
  if (dev > tol::kUnitary) {
    throw Error(ErrorCode::invalid_channel,
                "branch unitary deviates from unitarity by " + std::to_string(dev));
  }
}

void check_dims(Eigen::Index expected, const ComplexMatrix& a, const char* who) {
  if (a.rows() != expected || a.cols() != expected) {
    throw Error(ErrorCode::dimension_mismatch,
                std::string(who) + ": channel acts on dimension " + std::to_string(expected) +
                    ", argument is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

}  // namespace

KrausChannel::KrausChannel(std::vector<ComplexMatrix> kraus_ops) : ops_(std::move(kraus_ops)) {
  if (ops_.empty()) throw Error(ErrorCode::invalid_channel, "KrausChannel: no Kraus operators");
  n_ = ops_.front().rows();
  if (n_ == 0) throw Error(ErrorCode::invalid_channel, "KrausChannel: empty operator");
  for (const auto& v : ops_) check_square_dim(v, n_, "KrausChannel");
}

bool KrausChannel::trace_preserving() const {
  ComplexMatrix s = ComplexMatrix::Zero(n_, n_);
  for (const auto& v : ops_) s += v.adjoint() * v;
  return (s - ComplexMatrix::Identity(n_, n_)).norm() <= tol::kTracePreserving;
}

MixedUnitaryChannel::MixedUnitaryChannel(std::vector<UnitaryBranch> branches)
    : branches_(std::move(branches)) {
  if (branches_.empty()) throw Error(ErrorCode::invalid_channel, "MixedUnitaryChannel: no branches");
  n_ = branches_.front().u.rows();
  if (n_ == 0) throw Error(ErrorCode::invalid_channel, "MixedUnitaryChannel: empty unitary");
  double total = 0.0;
  for (const auto& b : branches_) {
    if (!(b.p > 0.0) || !std::isfinite(b.p)) {
      throw Error(ErrorCode::invalid_probability_vector,
                  "MixedUnitaryChannel: branch probabilities must be positive");
    }
    total += b.p;
    check_square_dim(b.u, n_, "MixedUnitaryChannel");
    check_unitary(b.u);
  }
  if (std::abs(total - 1.0) > tol::kProbabilitySum) {
    throw Error(ErrorCode::invalid_probability_vector,
                "MixedUnitaryChannel: probabilities sum to " + std::to_string(total));
  }
}

double MixedUnitaryChannel::max_probability() const {
  double m = 0.0;
  for (const auto& b : branches_) m = std::max(m, b.p);
  return m;
}

std::vector<double> MixedUnitaryChannel::probabilities() const {
  std::vector<double> p;
  p.reserve(branches_.size());
  for (const auto& b : branches_) p.push_back(b.p);
  return p;
}

NonlinearChannel::NonlinearChannel(std::vector<PovmBranch> branches) : branches_(std::move(branches)) {
  if (branches_.empty()) throw Error(ErrorCode::invalid_channel, "NonlinearChannel: no branches");
  n_ = branches_.front().u.rows();
  if (n_ == 0) throw Error(ErrorCode::invalid_channel, "NonlinearChannel: empty unitary");
  ComplexMatrix sum = ComplexMatrix::Zero(n_, n_);
  for (const auto& b : branches_) {
    check_square_dim(b.q, n_, "NonlinearChannel");
    check_square_dim(b.u, n_, "NonlinearChannel");
    check_unitary(b.u);
    if (!is_hermitian(b.q, tol::kState) || min_eigenvalue(b.q) < -tol::kState) {
      throw Error(ErrorCode::invalid_povm, "NonlinearChannel: effect Q_i is not PSD");
    }
    sum += b.q;
  }
  if ((sum - ComplexMatrix::Identity(n_, n_)).norm() > tol::kPovmSum) {
    throw Error(ErrorCode::invalid_povm, "NonlinearChannel: effects do not sum to the identity");
  }
}

double NonlinearChannel::branch_probability(std::size_t i, const ComplexMatrix& a) const {
  const double p = (branches_[i].q.cwiseProduct(a.transpose())).sum().real();
  return std::max(p, 0.0);
}

Eigen::Index channel_dim(const Channel& channel) {
  return std::visit([](const auto& c) { return c.dim(); }, channel);
}

bool is_linear(const Channel& channel) {
  return !std::holds_alternative<NonlinearChannel>(channel);
}

ComplexMatrix apply(const KrausChannel& channel, const ComplexMatrix& a) {
  check_dims(channel.dim(), a, "apply");
  ComplexMatrix out = ComplexMatrix::Zero(a.rows(), a.cols());
  ComplexMatrix tmp(a.rows(), a.cols());
  for (const auto& v : channel.kraus_ops()) {
    tmp.noalias() = v * a;
    out.noalias() += tmp * v.adjoint();
  }
  return out;
}

ComplexMatrix apply(const MixedUnitaryChannel& channel, const ComplexMatrix& a) {
  check_dims(channel.dim(), a, "apply");
  ComplexMatrix out = ComplexMatrix::Zero(a.rows(), a.cols());
  ComplexMatrix tmp(a.rows(), a.cols());
  for (const auto& b : channel.branches()) {
    tmp.noalias() = b.u * a;
    out.noalias() += b.p * (tmp * b.u.adjoint());
  }
  return out;
}

ComplexMatrix apply(const NonlinearChannel& channel, const ComplexMatrix& a) {
  check_dims(channel.dim(), a, "apply");
  ComplexMatrix out = ComplexMatrix::Zero(a.rows(), a.cols());
  ComplexMatrix tmp(a.rows(), a.cols());
  for (std::size_t i = 0; i < channel.size(); ++i) {
    const auto& b = channel.branch(i);
    const double p = channel.branch_probability(i, a);
    if (p == 0.0) continue;
    tmp.noalias() = b.u * a;
    out.noalias() += p * (tmp * b.u.adjoint());
  }
  return out;
}

ComplexMatrix apply(const Channel& channel, const ComplexMatrix& a) {
  return std::visit([&](const auto& c) { return apply(c, a); }, channel);
}

DensityMatrix apply(const Channel& channel, const DensityMatrix& rho) {
  ComplexMatrix out = rcl::apply(channel, rho.matrix());
  if (std::holds_alternative<KrausChannel>(channel) &&
      !std::get<KrausChannel>(channel).trace_preserving()) {
    // Not CPT: the image need not be a state, so validate it.
    return DensityMatrix(std::move(out));
  }
  return DensityMatrix::trusted(std::move(out));
}

ConePoint apply(const Channel& channel, const ConePoint& x) {
  ComplexMatrix out = rcl::apply(channel, x.matrix());
  if (std::holds_alternative<KrausChannel>(channel)) return ConePoint(std::move(out));
  return ConePoint::trusted(std::move(out));
}

ComplexMatrix superoperator_matrix(const Channel& channel) {
  if (std::holds_alternative<NonlinearChannel>(channel)) {
    throw Error(ErrorCode::nonlinear_channel_unsupported,
                "superoperator_matrix: nonlinear channels have no matrix representation");
  }
  const Eigen::Index n = channel_dim(channel);
  ComplexMatrix m = ComplexMatrix::Zero(n * n, n * n);
  if (const auto* mu = std::get_if<MixedUnitaryChannel>(&channel)) {
    for (const auto& b : mu->branches()) m += b.p * kron(b.u.conjugate(), b.u);
  } else {
    for (const auto& v : std::get<KrausChannel>(channel).kraus_ops()) m += kron(v.conjugate(), v);
  }
  return m;
}

SuperoperatorSpectrum spectrum(const Channel& channel) {
  const ComplexMatrix m = superoperator_matrix(channel);
  Eigen::ComplexEigenSolver<ComplexMatrix> es(m, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::convergence_failure, "spectrum: eigensolver did not converge");
  }
  SuperoperatorSpectrum out;
  out.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), [](Complex a, Complex b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) > std::abs(b);
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  for (const Complex& z : out.eigenvalues) {
    if (std::abs(z - 1.0) <= tol::kFixedEigenvalue) {
      ++out.fixed_space_dim;
    } else if (std::abs(z) > std::abs(out.kappa)) {
      out.kappa = z;
    }
  }
  return out;
}

namespace {

// Real coordinates of a Hermitian matrix (diagonal, then Re/Im of the upper
// triangle). Linear independence over R of Hermitian matrices is independence
// of these vectors.
RealVector hermitian_coords(const ComplexMatrix& h) {
  const Eigen::Index n = h.rows();
  RealVector v(n * n);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i) v(k++) = h(i, i).real();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      v(k++) = M_SQRT2 * h(i, j).real();
      v(k++) = M_SQRT2 * h(i, j).imag();
    }
  }
  return v;
}

}  // namespace

std::vector<DensityMatrix> fixed_points(const Channel& channel) {
  const Eigen::Index n = channel_dim(channel);
  const ComplexMatrix m = superoperator_matrix(channel);
  const int dim = spectrum(channel).fixed_space_dim;
  if (dim == 0) {
    throw Error(ErrorCode::no_fixed_density_found, "fixed_points: no eigenvalue at 1");
  }
  const ComplexMatrix shifted = m - ComplexMatrix::Identity(n * n, n * n);
  Eigen::JacobiSVD<ComplexMatrix> svd(shifted, Eigen::ComputeFullV);
  const ComplexMatrix& v = svd.matrixV();

  // Kernel vectors come from the smallest singular values (last columns).
  // The fixed space is closed under adjoints, so it is spanned by the
  // Hermitian and anti-Hermitian parts of the kernel vectors.
  std::vector<ComplexMatrix> hermitian;
  for (int c = 0; c < dim; ++c) {
    const ComplexMatrix k = unvec(v.col(n * n - 1 - c), n);
    hermitian.push_back(0.5 * (k + k.adjoint()));
    hermitian.push_back(Complex(0.0, -0.5) * (k - k.adjoint()));
  }
  // Real orthonormal basis of their span.
  Eigen::MatrixXd coords(n * n, static_cast<Eigen::Index>(hermitian.size()));
  for (std::size_t i = 0; i < hermitian.size(); ++i) {
    coords.col(static_cast<Eigen::Index>(i)) = hermitian_coords(hermitian[i]);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> rsvd(coords, Eigen::ComputeThinU | Eigen::ComputeThinV);
  std::vector<ComplexMatrix> basis;
  for (Eigen::Index c = 0; c < std::min<Eigen::Index>(dim, rsvd.matrixU().cols()); ++c) {
    // Map U's column back to a Hermitian matrix via the coefficients.
    const Eigen::VectorXd coef = rsvd.matrixV().col(c) / rsvd.singularValues()(c);
    ComplexMatrix b = ComplexMatrix::Zero(n, n);
    for (std::size_t i = 0; i < hermitian.size(); ++i) b += coef(static_cast<Eigen::Index>(i)) * hermitian[i];
    basis.push_back(0.5 * (b + b.adjoint()));
  }

  // Positive and negative parts of a Hermitian fixed point of a positive
  // trace-preserving map are themselves fixed.
  std::vector<ComplexMatrix> candidates;
  for (const auto& b : basis) {
    const HermitianEig eig = hermitian_eig(b);
    ComplexMatrix pos = ComplexMatrix::Zero(n, n);
    ComplexMatrix neg = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double lam = eig.values(i);
      const ComplexMatrix proj = eig.vectors.col(i) * eig.vectors.col(i).adjoint();
      if (lam > 0) pos += lam * proj; else neg -= lam * proj;
    }
    for (ComplexMatrix* part : {&pos, &neg}) {
      const double tr = part->trace().real();
      if (tr > 1e-9) candidates.push_back(*part / tr);
    }
  }

  // Greedy selection of `dim` independent fixed densities.
  std::vector<DensityMatrix> out;
  std::vector<RealVector> ortho;
  for (const auto& cand : candidates) {
    if (static_cast<int>(out.size()) == dim) break;
    ComplexMatrix rho = 0.5 * (cand + cand.adjoint());
    rho /= rho.trace().real();
    if (trace_norm(rcl::apply(channel, rho) - rho) > tol::kFixedPointResidual) continue;
    RealVector r = hermitian_coords(rho);
    for (const auto& q : ortho) r -= q.dot(r) * q;
    const double nr = r.norm();
    if (nr < 1e-6) continue;
    ortho.push_back(r / nr);
    out.push_back(DensityMatrix::trusted(std::move(rho)));
  }
  if (out.empty()) {
    throw Error(ErrorCode::no_fixed_density_found,
                "fixed_points: kernel of Phi - I contains no density matrix");
  }
  return out;
}

ComplexMatrix cesaro_average(const Channel& channel, const ComplexMatrix& rho, int n) {
  ComplexMatrix acc = ComplexMatrix::Zero(rho.rows(), rho.cols());
  ComplexMatrix cur = rho;
  for (int t = 0; t < n; ++t) {
    acc += cur;
    cur = rcl::apply(channel, cur);
  }
  return acc / static_cast<double>(std::max(n, 1));
}

// --- named channels ----------------------------------------------------------

namespace {

void check_probability(double p, const char* who) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::invalid_probability_vector,
                std::string(who) + ": probability must lie in [0, 1]");
  }
}

MixedUnitaryChannel from_weights(const std::vector<double>& weights,
                                 const std::vector<ComplexMatrix>& unitaries) {
  std::vector<UnitaryBranch> branches;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0.0) branches.push_back({weights[i], unitaries[i]});
  }
  if (branches.empty()) {
    throw Error(ErrorCode::invalid_probability_vector, "channel has no positive-weight branch");
  }
  return MixedUnitaryChannel(std::move(branches));
}

}  // namespace

MixedUnitaryChannel identity_channel(Eigen::Index n) {
  return MixedUnitaryChannel({{1.0, ComplexMatrix::Identity(n, n)}});
}

MixedUnitaryChannel phase_flip(double p) {
  check_probability(p, "phase_flip");
  return from_weights({1.0 - p, p}, {pauli(0), pauli(3)});
}

MixedUnitaryChannel bit_flip(double p) {
  check_probability(p, "bit_flip");
  return from_weights({1.0 - p, p}, {pauli(0), pauli(1)});
}

MixedUnitaryChannel pauli_channel(const std::array<double, 4>& probs) {
  double total = 0.0;
  for (double p : probs) {
    check_probability(p, "pauli_channel");
    total += p;
  }
  if (std::abs(total - 1.0) > tol::kProbabilitySum) {
    throw Error(ErrorCode::invalid_probability_vector, "pauli_channel: probabilities must sum to 1");
  }
  return from_weights({probs.begin(), probs.end()}, {pauli(0), pauli(1), pauli(2), pauli(3)});
}

MixedUnitaryChannel random_mixed_unitary(Eigen::Index n, std::size_t k, std::uint64_t seed) {
  if (k == 0 || n < 1) throw Error(ErrorCode::invalid_argument, "random_mixed_unitary: need n >= 1, k >= 1");
  Rng rng(seed);
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(k);
  for (auto& x : w) x = expo(rng);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  std::vector<UnitaryBranch> branches;
  for (std::size_t i = 0; i < k; ++i) branches.push_back({w[i] / total, random_haar_unitary(n, rng)});
  return MixedUnitaryChannel(std::move(branches));
}

MixedUnitaryChannel mix(const MixedUnitaryChannel& a, const MixedUnitaryChannel& b, double w) {
  check_probability(w, "mix");
  if (a.dim() != b.dim()) throw Error(ErrorCode::dimension_mismatch, "mix: dimensions differ");
  std::vector<double> weights;
  std::vector<ComplexMatrix> us;
  for (const auto& br : a.branches()) { weights.push_back((1.0 - w) * br.p); us.push_back(br.u); }
  for (const auto& br : b.branches()) { weights.push_back(w * br.p); us.push_back(br.u); }
  return from_weights(weights, us);
}

MixedUnitaryChannel depolarizing_mix(const MixedUnitaryChannel& inner, double q) {
  if (inner.dim() != 2) throw Error(ErrorCode::dimension_mismatch, "depolarizing_mix: qubit channels only");
  return mix(pauli_channel({0.25, 0.25, 0.25, 0.25}), inner, q);
}

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::invalid_argument, "named_channel: bad number '" + std::string(s) + "'");
  }
  return v;
}

std::uint64_t parse_uint(std::string_view s) {
  if (s.rfind("seed", 0) == 0) s.remove_prefix(4);
  if (!s.empty() && s.front() == 'n') s.remove_prefix(1);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::invalid_argument, "named_channel: bad integer '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

MixedUnitaryChannel named_channel(std::string_view spec) {
  const auto parts = split(spec, ':');
  const std::string_view name = parts[0];
  auto need = [&](std::size_t count) {
    if (parts.size() != count) {
      throw Error(ErrorCode::invalid_argument, "named_channel: malformed spec '" + std::string(spec) + "'");
    }
  };
  if (name == "identity") {
    if (parts.size() == 1) return identity_channel(2);
    need(2);
    return identity_channel(static_cast<Eigen::Index>(parse_uint(parts[1])));
  }
  if (name == "phase_flip") { need(2); return phase_flip(parse_double(parts[1])); }
  if (name == "bit_flip") { need(2); return bit_flip(parse_double(parts[1])); }
  if (name == "depolarizing") {
    need(2);
    const double q = parse_double(parts[1]);
    return depolarizing_mix(identity_channel(2), q);
  }
  if (name == "pauli") {
    need(2);
    const auto ps = split(parts[1], ',');
    if (ps.size() != 4) throw Error(ErrorCode::invalid_probability_vector, "pauli: need four probabilities");
    return pauli_channel({parse_double(ps[0]), parse_double(ps[1]), parse_double(ps[2]), parse_double(ps[3])});
  }
  if (name == "random_mixed_unitary") {
    if (parts.size() != 3 && parts.size() != 4) need(3);
    const auto k = static_cast<std::size_t>(parse_uint(parts[1]));
    const std::uint64_t seed = parse_uint(parts[2]);
    const Eigen::Index n = parts.size() == 4 ? static_cast<Eigen::Index>(parse_uint(parts[3])) : 2;
    return random_mixed_unitary(n, k, seed);
  }
  throw Error(ErrorCode::invalid_argument, "named_channel: unknown channel '" + std::string(name) + "'");
}

KrausChannel to_kraus(const MixedUnitaryChannel& channel) {
  std::vector<ComplexMatrix> ops;
  for (const auto& b : channel.branches()) ops.push_back(std::sqrt(b.p) * b.u);
  return KrausChannel(std::move(ops));
}

NonlinearChannel constant_probability_channel(const MixedUnitaryChannel& channel) {
  std::vector<PovmBranch> branches;
  const Eigen::Index n = channel.dim();
  // Rescale so the effects sum to I exactly despite rounding in the weights.
  double total = 0.0;
  for (const auto& b : channel.branches()) total += b.p;
  for (const auto& b : channel.branches()) {
    branches.push_back({(b.p / total) * ComplexMatrix::Identity(n, n), b.u});
  }
  return NonlinearChannel(std::move(branches));
}

std::vector<ComplexMatrix> random_povm(Eigen::Index n, std::size_t k, std::uint64_t seed) {
  if (n < 1 || k < 1) throw Error(ErrorCode::invalid_argument, "random_povm: need n >= 1 and k >= 1");
  Rng rng(seed);
  std::vector<ComplexMatrix> g;
  ComplexMatrix s = ComplexMatrix::Zero(n, n);
  for (std::size_t i = 0; i < k; ++i) {
    const ComplexMatrix a = ginibre(n, rng);
    g.push_back(a * a.adjoint());
    s += g.back();
  }
  const HermitianEig eig = hermitian_eig(0.5 * (s + s.adjoint()));
  const RealVector inv_sqrt = eig.values.cwiseSqrt().cwiseInverse();
  const ComplexMatrix s_inv_half = eig.vectors * inv_sqrt.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
  std::vector<ComplexMatrix> out;
  ComplexMatrix total = ComplexMatrix::Zero(n, n);
  for (const auto& gi : g) {
    ComplexMatrix q = s_inv_half * gi * s_inv_half;
    q = 0.5 * (q + q.adjoint()).eval();
    total += q;
    out.push_back(std::move(q));
  }
  // Push the rounding residue of sum Q_i - I into the last effect.
  out.back() += ComplexMatrix::Identity(n, n) - total;
  out.back() = 0.5 * (out.back() + out.back().adjoint()).eval();
  return out;
}

NonlinearChannel random_nonlinear_channel(Eigen::Index n, std::size_t k, std::uint64_t seed) {
  const std::vector<ComplexMatrix> q = random_povm(n, k, derive_seed(seed, 0));
  std::vector<PovmBranch> branches;
  for (std::size_t i = 0; i < k; ++i) branches.push_back({q[i], random_haar_unitary(n, derive_seed(seed, 1 + i))});
  return NonlinearChannel(std::move(branches));
}

}  // namespace rcl
