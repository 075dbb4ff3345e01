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

#include "rcl/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "rcl/parallel.hpp"

namespace rcl {

EmpiricalMeasure::EmpiricalMeasure(Eigen::Index n, std::vector<Atom> atoms) : n_(n), atoms_(std::move(atoms)) {
  for (const auto& a : atoms_) {
    if (a.state.rows() != n || a.state.cols() != n) {
      throw Error(ErrorCode::dimension_mismatch, "EmpiricalMeasure: atom has the wrong shape");
    }
    if (!(a.weight >= 0.0) || !std::isfinite(a.weight)) {
      throw Error(ErrorCode::invalid_argument, "EmpiricalMeasure: weights must be finite and non-negative");
    }
  }
}

EmpiricalMeasure EmpiricalMeasure::dirac(const ComplexMatrix& x) {
  EmpiricalMeasure mu(x.rows());
  mu.add(x, 1.0);
  return mu;
}

EmpiricalMeasure EmpiricalMeasure::mixture(double lambda, const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::dimension_mismatch, "mixture: dimension mismatch");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error(ErrorCode::invalid_argument, "mixture: lambda outside [0, 1]");
  EmpiricalMeasure out(a.dim());
  out.reserve(a.size() + b.size());
  for (const auto& x : a.atoms()) out.atoms_.push_back({x.state, lambda * x.weight});
  for (const auto& x : b.atoms()) out.atoms_.push_back({x.state, (1.0 - lambda) * x.weight});
  return out;
}

void EmpiricalMeasure::add(ComplexMatrix state, double weight) {
  if (state.rows() != n_ || state.cols() != n_) {
    throw Error(ErrorCode::dimension_mismatch, "EmpiricalMeasure::add: atom has the wrong shape");
  }
  if (!(weight >= 0.0) || !std::isfinite(weight)) {
    throw Error(ErrorCode::invalid_argument, "EmpiricalMeasure::add: weight must be finite and non-negative");
  }
  atoms_.push_back({std::move(state), weight});
}

double EmpiricalMeasure::total_mass() const {
  double m = 0.0;
  for (const auto& a : atoms_) m += a.weight;
  return m;
}

bool EmpiricalMeasure::is_normalized(double tolerance) const { return std::abs(total_mass() - 1.0) <= tolerance; }

double EmpiricalMeasure::expectation(const Observable& f) const {
  double acc = 0.0;
  for (const auto& a : atoms_) acc += a.weight * f(a.state);
  return acc;
}

ComplexMatrix EmpiricalMeasure::mean_state() const {
  ComplexMatrix m = ComplexMatrix::Zero(n_, n_);
  for (const auto& a : atoms_) m += a.weight * a.state;
  return m;
}

EmpiricalMeasure EmpiricalMeasure::weighted_by(const Observable& f) const {
  EmpiricalMeasure out(n_);
  out.reserve(atoms_.size());
  for (const auto& a : atoms_) {
    const double v = f(a.state);
    if (v < 0.0) throw Error(ErrorCode::non_positive_function_value, "weighted_by: density must be non-negative");
    out.atoms_.push_back({a.state, a.weight * v});
  }
  return out;
}

EmpiricalMeasure systematic_resample(const EmpiricalMeasure& mu, std::size_t cap, std::uint64_t seed) {
  if (cap == 0) throw Error(ErrorCode::invalid_argument, "systematic_resample: cap must be positive");
  if (mu.size() <= cap) return mu;
  const double mass = mu.total_mass();
  EmpiricalMeasure out(mu.dim());
  if (mass <= 0.0) return out;
  out.reserve(cap);
  Rng rng(seed);
  // Pushforwards lay out the k images of each parent next to each other; a
  // single comb over that layout would pick the same branch for every parent.
  std::vector<std::size_t> order(mu.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = order.size() - 1; i > 0; --i) {
    std::swap(order[i], order[std::uniform_int_distribution<std::size_t>(0, i)(rng)]);
  }
  const double step = mass / static_cast<double>(cap);
  double target = std::uniform_real_distribution<double>(0.0, step)(rng);
  double cumulative = 0.0;
  std::size_t taken = 0;
  for (std::size_t idx : order) {
    const Atom& a = mu.atoms()[idx];
    cumulative += a.weight;
    while (taken < cap && target < cumulative) {
      out.add(a.state, step);
      target += step;
      ++taken;
    }
  }
  // Rounding can leave the final slot unfilled.
  while (taken < cap) {
    out.add(mu.atoms()[order.back()].state, step);
    ++taken;
  }
  return out;
}

namespace {

constexpr double kCalibrationTolerance = 1e-12;
constexpr double kCovarianceFloor = 1e-20;

}  // namespace

bool calibrate_first_moment(EmpiricalMeasure& mu, const ComplexMatrix& target_sum) {
  const Eigen::Index n = mu.dim();
  const Eigen::Index d = n * n;
  if (mu.size() == 0) return false;
  // Real coordinates of a Hermitian matrix: diagonal, then Re/Im above it.
  auto features = [n, d](const ComplexMatrix& x) {
    Eigen::VectorXd f(d);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < n; ++i) f(k++) = x(i, i).real();
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        f(k++) = x(i, j).real();
        f(k++) = x(i, j).imag();
      }
    }
    return f;
  };
  const double mass = mu.total_mass();
  if (mass <= 0.0) return false;
  std::vector<Eigen::VectorXd> f;
  f.reserve(mu.size());
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  for (const auto& a : mu.atoms()) {
    f.push_back(features(a.state));
    mean += a.weight * f.back();
  }
  mean /= mass;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Eigen::VectorXd c = f[i] - mean;
    cov.noalias() += mu.atoms()[i].weight * c * c.transpose();
  }
  cov /= mass;
  const Eigen::VectorXd target = features(target_sum) / mass;
  const Eigen::VectorXd shift = target - mean;
  if (shift.norm() <= kCalibrationTolerance) return true;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  const Eigen::VectorXd& lambda = es.eigenvalues();
  const double floor = std::max(kCovarianceFloor, 1e-10 * lambda.maxCoeff());
  Eigen::VectorXd coef = es.eigenvectors().transpose() * shift;
  for (Eigen::Index i = 0; i < d; ++i) coef(i) = lambda(i) > floor ? coef(i) / lambda(i) : 0.0;
  const Eigen::VectorXd c = es.eigenvectors() * coef;

  std::vector<Atom> atoms = mu.atoms();
  Eigen::VectorXd achieved = Eigen::VectorXd::Zero(d);
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const double scale = 1.0 + (f[i] - mean).dot(c);
    if (!(scale > 0.0)) return false;
    atoms[i].weight *= scale;
    achieved += atoms[i].weight * f[i];
  }
  if ((achieved / mass - target).norm() > kCalibrationTolerance) return false;
  mu = EmpiricalMeasure(n, std::move(atoms));
  return true;
}

EmpiricalMeasure pushforward(const MarkovOperator& op, const EmpiricalMeasure& mu, const PushforwardOptions& options) {
  if (mu.dim() != op.dim()) throw Error(ErrorCode::dimension_mismatch, "pushforward: dimension mismatch");
  EmpiricalMeasure out(mu.dim());
  out.reserve(mu.size() * op.size());
  ComplexMatrix scratch(mu.dim(), mu.dim());
  for (const auto& a : mu.atoms()) {
    for (std::size_t i = 0; i < op.size(); ++i) {
      const double w = op.weight(i, a.state);
      if (w <= 0.0) continue;
      ComplexMatrix image(mu.dim(), mu.dim());
      op.map(i, a.state, image, scratch);
      out.add(std::move(image), a.weight * w);
    }
  }
  if (out.size() <= options.atom_cap) return out;
  ComplexMatrix sum = ComplexMatrix::Zero(mu.dim(), mu.dim());
  for (const auto& a : out.atoms()) sum += a.weight * a.state;
  EmpiricalMeasure resampled = systematic_resample(out, options.atom_cap, options.seed);
  calibrate_first_moment(resampled, sum);
  return resampled;
}

namespace {

std::size_t draw_branch(const MarkovOperator& op, const ComplexMatrix& x, Rng& rng, double& total) {
  thread_local std::vector<double> w;
  w.resize(op.size());
  total = 0.0;
  for (std::size_t i = 0; i < op.size(); ++i) {
    w[i] = op.weight(i, x);
    total += w[i];
  }
  if (total <= 0.0) throw Error(ErrorCode::invalid_state, "chaos game: all branch weights vanish");
  double u = std::uniform_real_distribution<double>(0.0, total)(rng);
  std::size_t pick = 0;
  while (pick + 1 < op.size() && u >= w[pick]) {
    u -= w[pick];
    ++pick;
  }
  while (w[pick] == 0.0 && pick > 0) --pick;
  return pick;
}

}  // namespace

EmpiricalMeasure chaos_game(const MarkovOperator& op, const ComplexMatrix& start, std::size_t steps,
                            std::size_t burn_in, std::uint64_t seed) {
  if (start.rows() != op.dim() || start.cols() != op.dim()) {
    throw Error(ErrorCode::dimension_mismatch, "chaos_game: start has the wrong shape");
  }
  if (steps <= burn_in) throw Error(ErrorCode::invalid_argument, "chaos_game: steps must exceed burn_in");
  Rng rng(seed);
  ComplexMatrix x = start;
  ComplexMatrix next(x.rows(), x.cols());
  ComplexMatrix scratch(x.rows(), x.cols());
  const double w = 1.0 / static_cast<double>(steps - burn_in);
  EmpiricalMeasure out(op.dim());
  out.reserve(steps - burn_in);
  for (std::size_t t = 0; t < steps; ++t) {
    if (t >= burn_in) out.add(x, w);
    double total = 0.0;
    const std::size_t i = draw_branch(op, x, rng, total);
    op.map(i, x, next, scratch);
    std::swap(x, next);
  }
  return out;
}

EmpiricalMeasure chaos_game(const MixedUnitaryChannel& channel, const ComplexMatrix& start, std::size_t steps,
                            std::size_t burn_in, std::uint64_t seed) {
  return chaos_game(markov_b(channel), start, steps, burn_in, seed);
}

EmpiricalMeasure chaos_game(const NonlinearChannel& channel, const ComplexMatrix& start, std::size_t steps,
                            std::size_t burn_in, std::uint64_t seed) {
  return chaos_game(markov_prime(channel), start, steps, burn_in, seed);
}

DensityMatrix barycenter(const EmpiricalMeasure& mu) {
  if (!mu.is_normalized(1e-9)) {
    throw Error(ErrorCode::invalid_argument, "barycenter: measure must have total mass 1");
  }
  ComplexMatrix m = mu.mean_state();
  m = 0.5 * (m + m.adjoint()).eval();
  return DensityMatrix(std::move(m));
}

// --- witness panel ---------------------------------------------------------

namespace {

constexpr std::uint64_t kPanelSeed = 0x77697473ULL;
constexpr int kLinearWitnesses = 24;

std::vector<std::pair<std::string, Observable>> nonlinear_witnesses(Eigen::Index n) {
  std::vector<std::pair<std::string, Observable>> out;
  for (int m = 0; m < 4; ++m) {
    const ComplexMatrix sigma = random_density_hs(n, derive_seed(kPanelSeed, 100 + m)).matrix();
    out.emplace_back("expdist" + std::to_string(m), observables::exp_neg_dist(sigma, 1.0));
  }
  for (int m = 0; m < 2; ++m) {
    Rng rng(derive_seed(kPanelSeed, 200 + m));
    out.emplace_back("fdist" + std::to_string(m), observables::frobenius_dist(random_pure_state(n, rng).matrix()));
  }
  out.emplace_back("purity", observables::purity());
  out.emplace_back("expdist_mixed",
                   observables::exp_neg_dist(ComplexMatrix::Identity(n, n) / static_cast<double>(n), 2.0));
  return out;
}

ComplexMatrix linear_witness(Eigen::Index n, int m) {
  Rng rng(derive_seed(kPanelSeed, m));
  ComplexMatrix a = random_hermitian(n, rng);
  const HermitianEig eig = hermitian_eig(a);
  const double op_norm = std::max(std::abs(eig.values(0)), std::abs(eig.values(eig.values.size() - 1)));
  return a / op_norm;
}

}  // namespace

WitnessPanel WitnessPanel::standard(Eigen::Index n) {
  WitnessPanel p;
  for (int m = 0; m < kLinearWitnesses; ++m) {
    p.names_.push_back("linear" + std::to_string(m));
    p.linear_.push_back(linear_witness(n, m));
  }
  for (auto& [name, g] : nonlinear_witnesses(n)) {
    p.names_.push_back(name);
    p.nonlinear_.push_back(g);
  }
  return p;
}

WitnessPanel WitnessPanel::select(Eigen::Index n, const std::vector<std::string>& names) {
  const WitnessPanel full = standard(n);
  WitnessPanel p;
  for (const auto& name : names) {
    const auto it = std::find(full.names_.begin(), full.names_.end(), name);
    if (it == full.names_.end()) throw Error(ErrorCode::invalid_argument, "unknown witness observable: " + name);
    const auto idx = static_cast<std::size_t>(it - full.names_.begin());
    if (idx < full.linear_.size()) {
      p.linear_.push_back(full.linear_[idx]);
    } else {
      p.nonlinear_.push_back(full.nonlinear_[idx - full.linear_.size()]);
    }
  }
  // Keep names in evaluation order: linear first.
  for (const auto& name : names) {
    if (name.rfind("linear", 0) == 0) p.names_.push_back(name);
  }
  for (const auto& name : names) {
    if (name.rfind("linear", 0) != 0) p.names_.push_back(name);
  }
  return p;
}

std::vector<double> WitnessPanel::evaluate(const EmpiricalMeasure& mu) const {
  std::vector<double> out;
  out.reserve(size());
  if (!linear_.empty()) {
    const ComplexMatrix mean = mu.mean_state();
    for (const auto& a : linear_) out.push_back((a.transpose().cwiseProduct(mean)).sum().real());
  }
  for (const auto& g : nonlinear_) out.push_back(mu.expectation(g));
  return out;
}

double invariance_residual(const MarkovOperator& op, const EmpiricalMeasure& mu, const WitnessPanel& panel,
                           const PushforwardOptions& options) {
  const std::vector<double> before = panel.evaluate(mu);
  const std::vector<double> after = panel.evaluate(pushforward(op, mu, options));
  double worst = 0.0;
  for (std::size_t i = 0; i < before.size(); ++i) worst = std::max(worst, std::abs(after[i] - before[i]));
  return worst;
}

// --- Cesaro scans ----------------------------------------------------------

namespace {

constexpr double kScanBudget = 1e10;
constexpr double kEarlyStopTolerance = 1e-6;
constexpr int kEarlyStopRows = 5;

struct Sequence {
  std::vector<double> values;
  std::vector<double> stderrs;
};

Sequence pushforward_sequence(const MarkovOperator& op, const Observable& g, const EmpiricalMeasure& start,
                              std::size_t length, const PushforwardScan& mode) {
  const double cost = static_cast<double>(mode.atom_cap) * static_cast<double>(op.size()) * static_cast<double>(length);
  if (cost > kScanBudget) throw Error(ErrorCode::budget_exceeded, "cesaro_scan: pushforward budget exceeded");
  Sequence s;
  EmpiricalMeasure mu = systematic_resample(start, mode.atom_cap, derive_seed(mode.seed, 0));
  for (std::size_t t = 0; t < length; ++t) {
    s.values.push_back(mu.expectation(g));
    s.stderrs.push_back(0.0);
    if (t + 1 < length) mu = pushforward(op, mu, {mode.atom_cap, derive_seed(mode.seed, t + 1)});
  }
  return s;
}

Sequence chaos_sequence(const MarkovOperator& op, const Observable& g, const EmpiricalMeasure& start,
                        std::size_t length, const ChaosScan& mode) {
  if (mode.runs < 2) throw Error(ErrorCode::invalid_argument, "cesaro_scan: chaos mode needs at least two runs");
  if (static_cast<double>(mode.runs) * static_cast<double>(length) > kScanBudget) {
    throw Error(ErrorCode::budget_exceeded, "cesaro_scan: chaos budget exceeded");
  }
  const double mass = start.total_mass();
  if (start.size() == 0 || mass <= 0.0) throw Error(ErrorCode::invalid_argument, "cesaro_scan: empty start measure");
  std::vector<double> cumulative;
  double acc = 0.0;
  for (const auto& a : start.atoms()) cumulative.push_back(acc += a.weight);

  // samples[r * length + t] = W_t g(x_t) for run r.
  std::vector<double> samples(mode.runs * length);
  parallel_for(mode.runs, [&](std::size_t r) {
    Rng rng(derive_seed(mode.seed, r));
    const double u = std::uniform_real_distribution<double>(0.0, mass)(rng);
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    ComplexMatrix x = start.atoms()[static_cast<std::size_t>(it - cumulative.begin())].state;
    ComplexMatrix next(x.rows(), x.cols());
    ComplexMatrix scratch(x.rows(), x.cols());
    double weight = mass;
    for (std::size_t t = 0; t < length; ++t) {
      samples[r * length + t] = weight * g(x);
      if (t + 1 == length) break;
      double total = 0.0;
      const std::size_t i = draw_branch(op, x, rng, total);
      op.map(i, x, next, scratch);
      std::swap(x, next);
      weight *= total;
    }
  });
  Sequence s;
  const double runs = static_cast<double>(mode.runs);
  for (std::size_t t = 0; t < length; ++t) {
    double sum = 0.0;
    double sum2 = 0.0;
    for (std::size_t r = 0; r < mode.runs; ++r) {
      const double v = samples[r * length + t];
      sum += v;
      sum2 += v * v;
    }
    const double mean = sum / runs;
    const double var = std::max(0.0, (sum2 - runs * mean * mean) / (runs - 1.0));
    s.values.push_back(mean);
    s.stderrs.push_back(std::sqrt(var / runs));
  }
  return s;
}

}  // namespace

CesaroReport cesaro_scan(const MarkovOperator& op, const Observable& g, const EmpiricalMeasure& start, int n_max,
                         int j_max, const CesaroMode& mode) {
  if (n_max < 1 || j_max < 0) throw Error(ErrorCode::invalid_argument, "cesaro_scan: need n_max >= 1, j_max >= 0");
  if (start.dim() != op.dim()) throw Error(ErrorCode::dimension_mismatch, "cesaro_scan: dimension mismatch");
  const auto length = static_cast<std::size_t>(n_max + j_max);
  const Sequence seq = std::holds_alternative<PushforwardScan>(mode)
                           ? pushforward_sequence(op, g, start, length, std::get<PushforwardScan>(mode))
                           : chaos_sequence(op, g, start, length, std::get<ChaosScan>(mode));

  CesaroReport report;
  report.g = g.name();
  report.sequence = seq.values;
  report.sequence_stderr = seq.stderrs;
  std::vector<double> prefix(length + 1, 0.0);
  for (std::size_t t = 0; t < length; ++t) prefix[t + 1] = prefix[t] + seq.values[t];

  double limsup = std::numeric_limits<double>::infinity();
  double liminf = -std::numeric_limits<double>::infinity();
  int quiet_rows = 0;
  for (int n = 1; n <= n_max; ++n) {
    std::vector<double> row;
    row.reserve(static_cast<std::size_t>(j_max) + 1);
    for (int j = 0; j <= j_max; ++j) {
      const auto lo = static_cast<std::size_t>(j);
      const auto hi = static_cast<std::size_t>(j + n);
      if (hi > length) break;
      row.push_back((prefix[hi] - prefix[lo]) / n);
    }
    const double row_sup = *std::max_element(row.begin(), row.end());
    const double row_inf = *std::min_element(row.begin(), row.end());
    const double new_limsup = std::min(limsup, row_sup);
    const double new_liminf = std::max(liminf, row_inf);
    const bool quiet = n > 1 && std::abs(new_limsup - limsup) < kEarlyStopTolerance &&
                       std::abs(new_liminf - liminf) < kEarlyStopTolerance;
    limsup = new_limsup;
    liminf = new_liminf;
    report.values.push_back(std::move(row));
    report.n_used = n;
    quiet_rows = quiet ? quiet_rows + 1 : 0;
    if (quiet_rows >= kEarlyStopRows && n < n_max) {
      report.early_stopped = true;
      break;
    }
  }
  report.limsup_estimate = limsup;
  report.liminf_estimate = liminf;
  const double worst_stderr = seq.stderrs.empty() ? 0.0 : *std::max_element(seq.stderrs.begin(), seq.stderrs.end());
  report.stderr_allowance = 4.0 * worst_stderr;
  return report;
}

// --- barycenter theorem ----------------------------------------------------

// Streaming stops once the witness drift is this fraction of the tolerance;
// the barycenter check is in trace norm, which dominates the linear witnesses.
constexpr double kStopFraction = 0.25;

CesaroInvariantMeasure cesaro_invariant_measure(const MarkovOperator& op, const ComplexMatrix& start,
                                                const WitnessPanel& panel, const BarycenterOptions& options,
                                                std::uint64_t seed) {
  if (options.window < 1 || options.min_shift < 0) {
    throw Error(ErrorCode::invalid_argument, "cesaro_invariant_measure: bad window");
  }
  CesaroInvariantMeasure result;
  result.start = start;
  result.invariance_residual = std::numeric_limits<double>::infinity();

  const std::size_t g_count = panel.size();
  // Prefix sums of the per-step witness drift and of the barycenters, so a
  // block of any length is averaged in O(g_count).
  std::vector<std::vector<double>> drift_sum{std::vector<double>(g_count, 0.0)};
  std::vector<ComplexMatrix> bary_sum{ComplexMatrix::Zero(start.rows(), start.cols())};
  EmpiricalMeasure nu = EmpiricalMeasure::dirac(start);
  std::vector<double> before = panel.evaluate(nu);
  const auto window = static_cast<std::size_t>(options.window);
  const double stop_at = kStopFraction * options.invariance_tolerance;

  for (int t = 0; t < options.max_steps; ++t) {
    EmpiricalMeasure image = pushforward(op, nu, {std::numeric_limits<std::size_t>::max(), 0});
    std::vector<double> after = panel.evaluate(image);
    std::vector<double> d = drift_sum.back();
    for (std::size_t g = 0; g < g_count; ++g) d[g] += after[g] - before[g];
    drift_sum.push_back(std::move(d));
    bary_sum.push_back(bary_sum.back() + nu.mean_state());
    nu = systematic_resample(image, options.atom_cap, derive_seed(seed, static_cast<std::uint64_t>(t)));
    if (nu.size() != image.size()) calibrate_first_moment(nu, image.mean_state());
    before = nu.size() == image.size() ? std::move(after) : panel.evaluate(nu);
    result.steps = t + 1;

    const std::size_t done = drift_sum.size() - 1;
    if (done < window + static_cast<std::size_t>(options.min_shift)) continue;
    // The block covers the later half of the trajectory once that exceeds the window.
    const std::size_t length = std::max(window, done / 2);
    const std::size_t first = done - length;
    double worst = 0.0;
    for (std::size_t g = 0; g < g_count; ++g) {
      worst = std::max(worst, std::abs(drift_sum[done][g] - drift_sum[first][g]) / static_cast<double>(length));
    }
    if (worst < result.invariance_residual) {
      const ComplexMatrix mean = (bary_sum[done] - bary_sum[first]) / static_cast<double>(length);
      result.invariance_residual = worst;
      result.measure = nu;
      result.barycenter = 0.5 * (mean + mean.adjoint());
      result.shift = static_cast<int>(first);
    }
    if (worst <= stop_at) {
      result.converged = true;
      break;
    }
  }
  if (!result.converged && result.invariance_residual <= options.invariance_tolerance) result.converged = true;
  if (result.barycenter.size() == 0) {
    result.barycenter = start;
    result.measure = nu;
  }
  return result;
}

BarycenterTheoremReport verify_barycenter_theorem(const MixedUnitaryChannel& channel, int trials, std::uint64_t seed,
                                                  const BarycenterOptions& options) {
  if (trials < 0) throw Error(ErrorCode::invalid_argument, "verify_barycenter_theorem: trials must be >= 0");
  const MarkovOperator op = markov_b(channel);
  const WitnessPanel panel = options.witnesses.empty() ? WitnessPanel::standard(channel.dim())
                                                       : WitnessPanel::select(channel.dim(), options.witnesses);
  const Channel phi = channel;
  BarycenterTheoremReport report;

  // Forward: fixed points and random mixtures of them.
  const std::vector<DensityMatrix> fixed = fixed_points(phi);
  std::vector<ComplexMatrix> targets;
  for (const auto& f : fixed) targets.push_back(f.matrix());
  Rng rng(derive_seed(seed, 0));
  std::exponential_distribution<double> expo(1.0);
  if (fixed.size() > 1) {
    for (int t = 0; t < trials; ++t) {
      ComplexMatrix mix = ComplexMatrix::Zero(channel.dim(), channel.dim());
      double total = 0.0;
      for (const auto& f : fixed) {
        const double w = expo(rng);
        mix += w * f.matrix();
        total += w;
      }
      targets.push_back(mix / total);
    }
  }
  std::uint64_t stream = 1;
  for (const auto& rho0 : targets) {
    BarycenterCase c;
    c.measure = cesaro_invariant_measure(op, rho0, panel, options, derive_seed(seed, stream++));
    c.residual = trace_norm(c.measure.barycenter - rho0);
    c.pass = c.measure.converged && c.residual <= options.trace_tolerance;
    report.forward.push_back(std::move(c));
  }

  // Reverse: invariant measures grown from random starts.
  for (int t = 0; t < trials; ++t) {
    const ComplexMatrix start = random_density_hs(channel.dim(), derive_seed(seed, 1000 + t)).matrix();
    BarycenterCase c;
    c.measure = cesaro_invariant_measure(op, start, panel, options, derive_seed(seed, stream++));
    c.residual = trace_norm(rcl::apply(phi, c.measure.barycenter) - c.measure.barycenter);
    c.pass = c.measure.converged && c.residual <= options.trace_tolerance;
    report.reverse.push_back(std::move(c));
  }

  auto all_pass = [](const std::vector<BarycenterCase>& cases) {
    return std::all_of(cases.begin(), cases.end(), [](const BarycenterCase& c) { return c.pass; });
  };
  auto any_unconverged = [](const std::vector<BarycenterCase>& cases) {
    return std::any_of(cases.begin(), cases.end(), [](const BarycenterCase& c) { return !c.measure.converged; });
  };
  report.forward_pass = all_pass(report.forward);
  report.reverse_pass = all_pass(report.reverse);
  report.convergence_not_reached = any_unconverged(report.forward) || any_unconverged(report.reverse);
  return report;
}

}  // namespace rcl
