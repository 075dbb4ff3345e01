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

#include "rcl/transfer.hpp"

#include <cmath>
#include <string>

#include "rcl/parallel.hpp"

namespace rcl {

BranchSystem BranchSystem::barycentric(const MixedUnitaryChannel& channel) {
  BranchSystem s;
  s.kind_ = OperatorKind::barycentric;
  s.n_ = channel.dim();
  for (const auto& b : channel.branches()) {
    s.unitaries_.push_back(b.u);
    s.adjoints_.push_back(b.u.adjoint());
    s.scales_.push_back(1.0);
    s.weights_.push_back(b.p);
  }
  return s;
}

BranchSystem BranchSystem::contractive(const MixedUnitaryChannel& channel) {
  BranchSystem s;
  s.kind_ = OperatorKind::contractive;
  s.n_ = channel.dim();
  for (const auto& b : channel.branches()) {
    s.unitaries_.push_back(b.u);
    s.adjoints_.push_back(b.u.adjoint());
    s.scales_.push_back(b.p);
    s.weights_.push_back(1.0);
  }
  return s;
}

BranchSystem BranchSystem::nonlinear(const NonlinearChannel& channel) {
  BranchSystem s;
  s.kind_ = OperatorKind::nonlinear;
  s.n_ = channel.dim();
  for (const auto& b : channel.branches()) {
    s.unitaries_.push_back(b.u);
    s.adjoints_.push_back(b.u.adjoint());
    s.scales_.push_back(1.0);
    s.effects_t_.push_back(b.q.transpose());
  }
  return s;
}

double BranchSystem::weight(std::size_t i, const ComplexMatrix& x) const {
  if (kind_ != OperatorKind::nonlinear) return weights_[i];
  return std::max(0.0, effects_t_[i].cwiseProduct(x).sum().real());
}

void BranchSystem::map(std::size_t i, const ComplexMatrix& x, ComplexMatrix& out,
                       ComplexMatrix& scratch) const {
  scratch.noalias() = unitaries_[i] * x;
  out.noalias() = scratch * adjoints_[i];
  if (scales_[i] != 1.0) out *= scales_[i];
}

ComplexMatrix BranchSystem::map(std::size_t i, const ComplexMatrix& x) const {
  ComplexMatrix out(x.rows(), x.cols());
  ComplexMatrix scratch(x.rows(), x.cols());
  map(i, x, out, scratch);
  return out;
}

Observable apply(const BranchSystem& system, const Observable& f) {
  const char* prefix = system.kind() == OperatorKind::barycentric   ? "Tb "
                       : system.kind() == OperatorKind::contractive ? "Tc "
                                                                    : "T' ";
  auto fn = [system, f](const ComplexMatrix& x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < system.size(); ++i) {
      const double w = system.weight(i, x);
      if (w == 0.0) continue;
      acc += w * f(system.map(i, x));
    }
    return acc;
  };
  return Observable(prefix + f.name(), std::move(fn));
}

Observable apply_Tb(const MixedUnitaryChannel& channel, const Observable& f) {
  return apply(BranchSystem::barycentric(channel), f);
}

Observable apply_Tc(const MixedUnitaryChannel& channel, const Observable& f) {
  return apply(BranchSystem::contractive(channel), f);
}

Observable apply_Tprime(const NonlinearChannel& channel, const Observable& f) {
  return apply(BranchSystem::nonlinear(channel), f);
}

std::vector<Word> all_words(std::size_t k, std::size_t length) {
  std::vector<Word> out;
  Word w{std::vector<std::size_t>(length, 0)};
  if (k == 0) return out;
  while (true) {
    out.push_back(w);
    std::size_t pos = length;
    while (pos > 0) {
      --pos;
      if (++w.letters[pos] < k) break;
      w.letters[pos] = 0;
      if (pos == 0) return out;
    }
    if (length == 0) return out;
  }
}

ComplexMatrix apply_word(const BranchSystem& system, const Word& word, const ComplexMatrix& x) {
  ComplexMatrix cur = x;
  ComplexMatrix next(x.rows(), x.cols());
  ComplexMatrix scratch(x.rows(), x.cols());
  for (auto it = word.letters.rbegin(); it != word.letters.rend(); ++it) {
    if (*it >= system.size()) throw Error(ErrorCode::invalid_argument, "apply_word: letter out of range");
    system.map(*it, cur, next, scratch);
    std::swap(cur, next);
  }
  return cur;
}

namespace {

void check_budget(std::size_t k, int n) {
  if (std::pow(static_cast<double>(k), n) > kExactWordBudget) {
    throw Error(ErrorCode::exact_budget_exceeded,
                "exact expansion needs k^n = " + std::to_string(k) + "^" + std::to_string(n) +
                    " words, budget is 1e6");
  }
}

// Depth-first sum over all words with per-depth buffers.
struct ExactExpander {
  const BranchSystem& system;
  const Observable& f;
  std::vector<ComplexMatrix> level;
  ComplexMatrix scratch;

  double run(const ComplexMatrix& x, int n) {
    level.assign(static_cast<std::size_t>(n) + 1, ComplexMatrix(x.rows(), x.cols()));
    scratch.resize(x.rows(), x.cols());
    level[0] = x;
    return recurse(0, n);
  }

  double recurse(int depth, int n) {
    const ComplexMatrix& cur = level[static_cast<std::size_t>(depth)];
    if (depth == n) return f(cur);
    double acc = 0.0;
    for (std::size_t i = 0; i < system.size(); ++i) {
      const double w = system.weight(i, cur);
      if (w == 0.0) continue;
      system.map(i, cur, level[static_cast<std::size_t>(depth) + 1], scratch);
      acc += w * recurse(depth + 1, n);
    }
    return acc;
  }
};

}  // namespace

Estimate iterate(const BranchSystem& system, const Observable& f, const ComplexMatrix& x, int n,
                 const IterationMode& mode) {
  if (n < 0) throw Error(ErrorCode::invalid_argument, "iterate: n must be >= 0");
  if (x.rows() != system.dim() || x.cols() != system.dim()) {
    throw Error(ErrorCode::dimension_mismatch, "iterate: point dimension differs from the channel");
  }
  if (n == 0) return {f(x), 0.0, true, 1};

  if (std::holds_alternative<ExactMode>(mode)) {
    check_budget(system.size(), n);
    ExactExpander ex{system, f, {}, {}};
    return {ex.run(x, n), 0.0, true, static_cast<std::size_t>(std::pow(system.size(), n))};
  }

  const auto& mc = std::get<MonteCarloMode>(mode);
  if (mc.samples < 2) throw Error(ErrorCode::invalid_argument, "iterate: need at least 2 samples");
  const std::size_t chunks = (mc.samples + kChunkSize - 1) / kChunkSize;
  std::vector<double> sums(chunks, 0.0);
  std::vector<double> sq(chunks, 0.0);
  parallel_for(chunks, [&](std::size_t c) {
    Rng rng(derive_seed(mc.seed, c));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t begin = c * kChunkSize;
    const std::size_t end = std::min(mc.samples, begin + kChunkSize);
    ComplexMatrix cur(x.rows(), x.cols());
    ComplexMatrix next(x.rows(), x.cols());
    ComplexMatrix scratch(x.rows(), x.cols());
    std::vector<double> w(system.size());
    for (std::size_t s = begin; s < end; ++s) {
      cur = x;
      double factor = 1.0;
      for (int t = 0; t < n && factor != 0.0; ++t) {
        double total = 0.0;
        for (std::size_t i = 0; i < system.size(); ++i) total += (w[i] = system.weight(i, cur));
        if (total <= 0.0) { factor = 0.0; break; }
        double u = unit(rng) * total;
        std::size_t pick = 0;
        while (pick + 1 < system.size() && u >= w[pick]) u -= w[pick++];
        while (w[pick] == 0.0 && pick > 0) --pick;
        factor *= total;
        system.map(pick, cur, next, scratch);
        std::swap(cur, next);
      }
      const double v = factor == 0.0 ? 0.0 : factor * f(cur);
      sums[c] += v;
      sq[c] += v * v;
    }
  });
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t c = 0; c < chunks; ++c) {
    sum += sums[c];
    sum_sq += sq[c];
  }
  const auto count = static_cast<double>(mc.samples);
  const double mean = sum / count;
  const double var = std::max(0.0, (sum_sq - count * mean * mean) / (count - 1.0));
  return {mean, std::sqrt(var / count), false, mc.samples};
}

NormalizedLimit normalized_Tc_limit(const MixedUnitaryChannel& channel, const Observable& f,
                                    const ComplexMatrix& x, int n, const IterationMode& mode) {
  const auto system = BranchSystem::contractive(channel);
  NormalizedLimit out;
  out.estimate = iterate(system, f, x, n, mode);
  const double scale = std::pow(static_cast<double>(channel.size()), -n);
  out.estimate.value *= scale;
  out.estimate.std_error *= scale;
  out.limit = f(ComplexMatrix::Zero(channel.dim(), channel.dim()));
  if (const auto& h = f.holder()) {
    out.bound = h->constant * std::pow(channel.max_probability(), n * h->exponent) *
                std::pow(kConeDiameter, h->exponent);
  }
  return out;
}

RuelleData ruelle_data(const MixedUnitaryChannel& channel) {
  for (const auto& b : channel.branches()) {
    if (!(b.p > 0.0 && b.p < 1.0)) {
      throw Error(ErrorCode::probability_on_boundary,
                  "ruelle_data: branch probabilities must lie strictly inside (0, 1)");
    }
  }
  RuelleData out;
  out.lambda = static_cast<double>(channel.size());
  out.h = observables::constant(1.0);
  out.mu_atom = ConePoint::zero(channel.dim());
  out.normalization = out.h(out.mu_atom);
  return out;
}

double eigenfunction_residual(const MixedUnitaryChannel& channel, const Observable& h,
                              std::size_t samples, std::uint64_t seed) {
  const Observable th = apply_Tc(channel, h);
  const double k = static_cast<double>(channel.size());
  Rng rng(seed);
  double worst = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const ConePoint x = random_cone_point(channel.dim(), rng);
    worst = std::max(worst, std::abs(th(x) / k - h(x)));
  }
  return worst;
}

JiangReport jiang_condition(const MixedUnitaryChannel& channel, int m, const JiangMode& mode) {
  if (m < 1) throw Error(ErrorCode::invalid_argument, "jiang_condition: word length must be >= 1");
  const std::size_t k = channel.size();
  check_budget(k, m);
  const auto system = BranchSystem::contractive(channel);
  JiangReport out;
  out.m = m;
  out.rhs = std::pow(static_cast<double>(k), m);
  out.sampled = std::holds_alternative<SampledMode>(mode);

  const auto words = all_words(k, static_cast<std::size_t>(m));
  std::vector<double> gammas(words.size(), 0.0);
  std::vector<double> analytic(words.size(), 1.0);
  for (std::size_t w = 0; w < words.size(); ++w) {
    // Unitary conjugation is a Frobenius isometry, so F_J is exactly p_J-Lipschitz.
    for (std::size_t j : words[w].letters) analytic[w] *= channel.branch(j).p;
  }
  if (!out.sampled) {
    gammas = analytic;
  } else {
    const auto& sm = std::get<SampledMode>(mode);
    parallel_for(words.size(), [&](std::size_t w) {
      Rng rng(derive_seed(sm.seed, w));
      double best = 0.0;
      for (std::size_t s = 0; s < sm.pairs; ++s) {
        const ConePoint a = random_cone_point(channel.dim(), rng);
        const ConePoint b = random_cone_point(channel.dim(), rng);
        const double d = (a.matrix() - b.matrix()).norm();
        if (d == 0.0) continue;
        const double q =
            (apply_word(system, words[w], a.matrix()) - apply_word(system, words[w], b.matrix())).norm() / d;
        best = std::max(best, q);
      }
      gammas[w] = best;
    });
  }
  for (std::size_t w = 0; w < words.size(); ++w) {
    out.gamma.emplace(words[w], gammas[w]);
    out.lhs += gammas[w];
    if (out.sampled) out.max_excess = std::max(out.max_excess, gammas[w] - analytic[w]);
  }
  out.holds = out.lhs < out.rhs;
  return out;
}

}  // namespace rcl
