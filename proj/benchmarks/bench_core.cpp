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

#include <benchmark/benchmark.h>

#include "rcl/channels.hpp"
#include "rcl/decay.hpp"
#include "rcl/entropy.hpp"
#include "rcl/measures.hpp"
#include "rcl/projective.hpp"
#include "rcl/transfer.hpp"

namespace {

using namespace rcl;
namespace obs = rcl::observables;

void BM_apply_channel(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const Channel c = random_mixed_unitary(n, 3, 1);
  const ComplexMatrix rho = random_density_hs(n, 2).matrix();
  for (auto _ : state) benchmark::DoNotOptimize(rcl::apply(c, rho));
}
BENCHMARK(BM_apply_channel)->Arg(2)->Arg(4);

void BM_spectrum(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const Channel c = random_mixed_unitary(n, 3, 1);
  for (auto _ : state) benchmark::DoNotOptimize(spectrum(c));
}
BENCHMARK(BM_spectrum)->Arg(2)->Arg(4);

void BM_iterate_exact(benchmark::State& state) {
  const auto c = random_mixed_unitary(2, 2, 3);
  const BranchSystem tc = BranchSystem::contractive(c);
  const Observable f = obs::exp_neg_dist(ComplexMatrix::Identity(2, 2) / 2.0, 2.0);
  const ComplexMatrix x = random_density_hs(2, 4).matrix();
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(iterate(tc, f, x, n, ExactMode{}));
  state.SetItemsProcessed(state.iterations() * (int64_t{1} << n));
}
BENCHMARK(BM_iterate_exact)->Arg(8)->Arg(12);

void BM_iterate_monte_carlo(benchmark::State& state) {
  const auto c = random_mixed_unitary(2, 3, 3);
  const BranchSystem tc = BranchSystem::contractive(c);
  const Observable f = obs::purity();
  const ComplexMatrix x = random_density_hs(2, 4).matrix();
  const auto samples = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(iterate(tc, f, x, 20, MonteCarloMode{samples, 5}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_iterate_monte_carlo)->Arg(1000)->Arg(10000);

void BM_pushforward_resampled(benchmark::State& state) {
  const auto c = random_mixed_unitary(2, 3, 6);
  const MarkovOperator op = markov_b(c);
  PushforwardOptions options;
  options.atom_cap = static_cast<std::size_t>(state.range(0));
  EmpiricalMeasure mu = EmpiricalMeasure::dirac(random_density_hs(2, 7).matrix());
  for (int t = 0; t < 12; ++t) mu = pushforward(op, mu, options);
  for (auto _ : state) benchmark::DoNotOptimize(pushforward(op, mu, options));
}
BENCHMARK(BM_pushforward_resampled)->Arg(1024)->Arg(4096);

void BM_transfer_entropy(benchmark::State& state) {
  const NonlinearChannel c = random_nonlinear_channel(2, 4, 8);
  const DensityMatrix rho = random_density_hs(2, 9);
  for (auto _ : state) benchmark::DoNotOptimize(transfer_entropy(c, rho));
}
BENCHMARK(BM_transfer_entropy);

void BM_hilbert_metric_psd(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const ComplexMatrix a = random_density_hs(n, 10).matrix() + 0.1 * ComplexMatrix::Identity(n, n);
  const ComplexMatrix b = random_density_hs(n, 11).matrix() + 0.1 * ComplexMatrix::Identity(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(hilbert_metric_psd(a, b));
}
BENCHMARK(BM_hilbert_metric_psd)->Arg(2)->Arg(4);

void BM_correlation_decay(benchmark::State& state) {
  const auto c = random_mixed_unitary(2, 2, 12);
  const Observable phi = obs::exp_neg_dist(ComplexMatrix::Identity(2, 2) / 2.0, 2.0);
  DecayOptions options;
  options.mode = state.range(0) == 0 ? DecayMode::monte_carlo : DecayMode::exact;
  for (auto _ : state) {
    benchmark::DoNotOptimize(correlation_decay(c, phi, obs::purity(), 500, 10, 13, options));
  }
}
BENCHMARK(BM_correlation_decay)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
