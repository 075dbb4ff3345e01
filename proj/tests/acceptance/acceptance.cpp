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

// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "rcl/channels.hpp"
#include "rcl/cli/run.hpp"
#include "rcl/decay.hpp"
#include "rcl/entropy.hpp"
#include "rcl/measures.hpp"
#include "rcl/projective.hpp"
#include "rcl/transfer.hpp"

namespace {

using namespace rcl;
namespace obs = rcl::observables;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Records the first failing check; later checks still run so the detail
// reports the worst value seen.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && outcome_.pass) {
      outcome_.pass = false;
      outcome_.detail = what;
    }
  }
  void note(const std::string& detail) {
    if (outcome_.pass) outcome_.detail = detail;
  }
  Outcome result() const { return outcome_; }

 private:
  Outcome outcome_;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c);
  return buf;
}

// --- 1 ---------------------------------------------------------------------

Outcome phase_flip_fixed_space() {
  Checker check;
  const SuperoperatorSpectrum s = spectrum(phase_flip(0.5));
  check.expect(s.fixed_space_dim == 2, fmt("fixed_space_dim = %g", s.fixed_space_dim));
  int peripheral = 0;
  double worst = 0.0;
  for (const Complex& lambda : s.eigenvalues) {
    if (std::abs(lambda) < 1.0 - 1e-8) continue;
    ++peripheral;
    worst = std::max(worst, std::abs(lambda - 1.0));
  }
  check.expect(worst <= 1e-8, fmt("unit-circle eigenvalue %g away from 1", worst));
  check.expect(peripheral == 2, fmt("%g unit-circle eigenvalues", peripheral));
  check.note(fmt("fixed_space_dim = %g, max |lambda - 1| = %.1e", s.fixed_space_dim, worst));
  return check.result();
}

// --- 2 ---------------------------------------------------------------------

Outcome barycenter_theorem() {
  Checker check;
  Rng rng(2001);
  double worst_trace = 0.0, worst_witness = 0.0;
  for (int t = 0; t < 20; ++t) {
    const auto c = rcl_test::random_channel(rng, 2, 2 + static_cast<std::size_t>(t % 2));
    const BarycenterTheoremReport r = verify_barycenter_theorem(c, 2, static_cast<std::uint64_t>(t));
    check.expect(r.forward_pass, fmt("channel %g: forward direction failed", t));
    check.expect(r.reverse_pass, fmt("channel %g: reverse direction failed", t));
    for (const auto* cases : {&r.forward, &r.reverse}) {
      for (const BarycenterCase& bc : *cases) {
        worst_trace = std::max(worst_trace, bc.residual);
        worst_witness = std::max(worst_witness, bc.measure.invariance_residual);
      }
    }
  }
  check.expect(worst_trace <= 1e-3, fmt("trace residual %.3e", worst_trace));
  check.expect(worst_witness <= 1e-3, fmt("witness residual %.3e", worst_witness));
  check.note(fmt("max trace residual %.2e, max witness residual %.2e", worst_trace, worst_witness));
  return check.result();
}

// --- 3 ---------------------------------------------------------------------

EmpiricalMeasure random_cone_measure(Rng& rng, Eigen::Index n, std::size_t atoms) {
  EmpiricalMeasure mu(n);
  const std::vector<double> w = rcl_test::random_probabilities(rng, atoms);
  for (std::size_t a = 0; a < atoms; ++a) mu.add(random_cone_point(n, rng).matrix(), w[a]);
  return mu;
}

Outcome duality_suite() {
  Checker check;
  Rng rng(3001);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rcl_test::uniform_index(rng, 2));
    const std::size_t k = 2 + rcl_test::uniform_index(rng, 3);
    const auto c = rcl_test::random_channel(rng, n, k);
    const auto nl = rcl_test::random_nonlinear(rng, n, k);
    const Observable g = rcl_test::random_observable(rng, n);
    const EmpiricalMeasure mu = rcl_test::random_measure(rng, n, 8);
    const EmpiricalMeasure cone = random_cone_measure(rng, n, 8);
    worst = std::max(worst, std::abs(mu.expectation(apply_Tb(c, g)) - pushforward(markov_b(c), mu).expectation(g)));
    worst = std::max(worst,
                     std::abs(mu.expectation(apply_Tprime(nl, g)) - pushforward(markov_prime(nl), mu).expectation(g)));
    worst =
        std::max(worst, std::abs(cone.expectation(apply_Tc(c, g)) - pushforward(markov_e(c), cone).expectation(g)));
  }
  check.expect(worst <= 1e-10, fmt("pairing gap %.3e", worst));
  check.note(fmt("max pairing gap %.2e over 300 instances", worst));
  return check.result();
}

// --- 4 ---------------------------------------------------------------------

Outcome ruelle_eigendata() {
  Checker check;
  Rng rng(4001);
  double worst_eigen = 0.0, worst_excess = -1.0;
  for (int t = 0; t < 20; ++t) {
    const std::size_t k = 2 + static_cast<std::size_t>(t % 2);
    const auto c = rcl_test::random_channel(rng, 2, k);
    const RuelleData d = ruelle_data(c);
    worst_eigen = std::max(worst_eigen, eigenfunction_residual(c, d.h, 200, static_cast<std::uint64_t>(t)));
    const ComplexMatrix sigma = rcl_test::random_state(rng, 2).matrix();
    const ComplexMatrix a = rcl_test::random_herm(rng, 2);
    const std::vector<Observable> fs = {obs::linear(a), obs::exp_neg_dist(sigma, 2.0), obs::frobenius_dist(sigma),
                                        obs::purity(), obs::exp_linear(a, 0.5)};
    const ComplexMatrix rho = rcl_test::random_state(rng, 2).matrix();
    const ComplexMatrix zero = ComplexMatrix::Zero(2, 2);
    const double pmax = c.max_probability();
    for (const Observable& f : fs) {
      const HolderCertificate h = *f.holder();
      for (int n = 1; n <= 12; ++n) {
        const NormalizedLimit lim = normalized_Tc_limit(c, f, rho, n, ExactMode{});
        const double gap = std::abs(lim.estimate.value - f(zero));
        const double bound = h.constant * std::pow(pmax, n * h.exponent) * std::pow(2.0, h.exponent);
        worst_excess = std::max(worst_excess, gap - bound);
      }
    }
  }
  check.expect(worst_eigen <= 1e-12, fmt("eigenfunction residual %.3e", worst_eigen));
  check.expect(worst_excess <= 0.0, fmt("Holder bound exceeded by %.3e", worst_excess));
  check.note(fmt("eigenfunction residual %.1e, max (gap - bound) %.2e", worst_eigen, worst_excess));
  return check.result();
}

// --- 5 ---------------------------------------------------------------------

Outcome jiang_condition_suite() {
  Checker check;
  Rng rng(5001);
  double worst_gamma = 0.0;
  for (int t = 0; t < 10; ++t) {
    const std::size_t k = 2 + static_cast<std::size_t>(t % 3);
    const auto c = rcl_test::random_channel(rng, 2, k);
    for (int m = 1; m <= 3; ++m) {
      const JiangReport a = jiang_condition(c, m, AnalyticMode{});
      check.expect(std::abs(a.lhs - 1.0) <= 1e-12, fmt("analytic lhs %g", a.lhs));
      check.expect(a.rhs == std::pow(static_cast<double>(k), m), fmt("rhs %g", a.rhs));
      check.expect(a.holds && a.lhs < a.rhs, "analytic condition does not hold");
      const JiangReport s = jiang_condition(c, m, SampledMode{200, static_cast<std::uint64_t>(10 * t + m)});
      for (const auto& [word, g] : s.gamma) {
        double prod = 1.0;
        for (std::size_t letter : word.letters) prod *= c.branch(letter).p;
        worst_gamma = std::max(worst_gamma, std::abs(g - prod));
      }
    }
  }
  check.expect(worst_gamma <= 1e-6, fmt("sampled gamma off by %.3e", worst_gamma));
  check.note(fmt("max |gamma_sampled - prod p| = %.2e", worst_gamma));
  return check.result();
}

// --- 6 ---------------------------------------------------------------------

Outcome entropy_suite() {
  Checker check;
  Rng rng(6001);
  constexpr int kInstances = 10000;
  constexpr double kSlack = 1e-9;
  std::size_t violations = 0;
  double worst_shannon = 0.0;
  const std::vector<double> grid = {0.1, 0.25, 0.5, 0.75, 0.9};
  for (int t = 0; t < kInstances; ++t) {
    const std::size_t k = 2 + rcl_test::uniform_index(rng, 3);
    const auto c = rcl_test::random_nonlinear(rng, 2, k);
    const DensityMatrix rho = rcl_test::random_state(rng, 2);
    const EntropyReport e = transfer_entropy(c, rho);
    if (e.value < -kSlack || e.value > std::log(static_cast<double>(k)) + kSlack) ++violations;

    const auto mu = rcl_test::random_channel(rng, 2, k);
    std::vector<double> p;
    for (const auto& b : mu.branches()) p.push_back(b.p);
    worst_shannon = std::max(worst_shannon, std::abs(transfer_entropy(constant_probability_channel(mu), rho).value -
                                                     shannon(p)));

    const ConcavityCheck cc = check_concavity_inequality(c, rho, rcl_test::random_state(rng, 2), grid);
    if (cc.worst_margin < -kSlack) ++violations;

    const auto other = rcl_test::random_nonlinear(rng, 2, k);
    if (relative_transfer_entropy(c, other, rho) < -kSlack) ++violations;

    const std::size_t m = 2 + rcl_test::uniform_index(rng, 3);
    const std::vector<double> w = rcl_test::random_probabilities(rng, k, 0.01);
    std::vector<std::vector<double>> a1, a2, b1, b2, am, bm;
    const double lam = rcl_test::uniform(rng);
    for (std::size_t i = 0; i < k; ++i) {
      a1.push_back(rcl_test::random_probabilities(rng, m, 0.01));
      a2.push_back(rcl_test::random_probabilities(rng, m, 0.01));
      b1.push_back(rcl_test::random_probabilities(rng, m, 0.01));
      b2.push_back(rcl_test::random_probabilities(rng, m, 0.01));
      am.emplace_back(m);
      bm.emplace_back(m);
      for (std::size_t j = 0; j < m; ++j) {
        am[i][j] = lam * a1[i][j] + (1.0 - lam) * a2[i][j];
        bm[i][j] = lam * b1[i][j] + (1.0 - lam) * b2[i][j];
      }
    }
    const double lhs = relative_transfer_entropy(w, am, bm);
    const double rhs = lam * relative_transfer_entropy(w, a1, b1) + (1.0 - lam) * relative_transfer_entropy(w, a2, b2);
    if (lhs > rhs + kSlack) ++violations;
  }
  check.expect(violations == 0, fmt("%g violations", static_cast<double>(violations)));
  check.expect(worst_shannon <= 1e-12, fmt("Shannon reduction gap %.3e", worst_shannon));
  check.note(fmt("%g instances per property, 0 violations, Shannon gap %.1e", kInstances, worst_shannon));
  return check.result();
}

// --- 7 ---------------------------------------------------------------------

ComplexMatrix random_pd(Rng& rng, Eigen::Index n) {
  const ComplexMatrix g = ginibre(n, rng);
  return g * g.adjoint() + 0.05 * ComplexMatrix::Identity(n, n);
}

Outcome projective_suite() {
  Checker check;
  Rng rng(7001);
  constexpr double kTol = 1e-9;
  double worst = -1.0;
  for (int t = 0; t < 2000; ++t) {
    const ComplexMatrix a = random_pd(rng, 2);
    const ComplexMatrix b = random_pd(rng, 2);
    const ComplexMatrix c = random_pd(rng, 2);
    const double ab = hilbert_metric_psd(a, b).theta;
    const double scale = std::max(1.0, ab);
    worst = std::max(worst, -ab);
    worst = std::max(worst, std::abs(ab - hilbert_metric_psd(b, a).theta) / scale);
    worst = std::max(worst, hilbert_metric_psd(a, c).theta - ab - hilbert_metric_psd(b, c).theta);
    const double s = rcl_test::uniform(rng, 0.01, 100.0);
    const double u = rcl_test::uniform(rng, 0.01, 100.0);
    worst = std::max(worst, std::abs(hilbert_metric_psd(s * a, u * b).theta - ab) / scale);
    const Channel phi = rcl_test::random_channel(rng, 2, 1 + rcl_test::uniform_index(rng, 3));
    worst = std::max(worst, hilbert_metric_psd(rcl::apply(phi, a), rcl::apply(phi, b)).theta - ab);
  }
  for (int t = 0; t < 200; ++t) {
    Eigen::Matrix2d s;
    const double p = rcl_test::uniform(rng, 0.05, 0.95);
    const double q = rcl_test::uniform(rng, 0.05, 0.95);
    s << p, q, 1.0 - p, 1.0 - q;
    const RealMatrix m = s;
    const double d = orthant_image_diameter(m);
    worst = std::max(worst, std::abs(std::tanh(d / 4.0) - rcl_test::oracle_birkhoff_tanh(s)));
    const BirkhoffReport r = birkhoff_lemma_check(m, d, 100, static_cast<std::uint64_t>(t));
    worst = std::max(worst, r.worst_excess);
    check.expect(r.holds, "Birkhoff contraction violated");
  }
  check.expect(worst <= kTol, fmt("worst excess %.3e", worst));
  check.note(fmt("worst excess over all properties %.2e", worst));
  return check.result();
}

// --- 8 ---------------------------------------------------------------------

Outcome tanh_bound() {
  Checker check;
  Rng rng(8001);
  int finite = 0;
  std::size_t violations = 0;
  double worst_ratio = 0.0;
  for (int t = 0; t < 10; ++t) {
    const auto inner = rcl_test::random_channel(rng, 2, 2 + rcl_test::uniform_index(rng, 2));
    const auto c = depolarizing_mix(inner, rcl_test::uniform(rng, 0.2, 0.8));
    const TanhReport r = tanh_contraction_check(c, 500, static_cast<std::uint64_t>(t));
    if (!std::isfinite(r.delta_phi_estimate)) continue;
    ++finite;
    violations += r.violations;
    worst_ratio = std::max(worst_ratio, r.worst_ratio);
  }
  check.expect(finite == 10, fmt("only %g channels with finite Delta", finite));
  check.expect(violations == 0, fmt("%g violating pairs", static_cast<double>(violations)));
  check.note(fmt("%g channels, max ||dPhi|| / (tanh ||d||) = %.3f", finite, worst_ratio));
  return check.result();
}

// --- 9 ---------------------------------------------------------------------

Outcome exponential_decay() {
  Checker check;
  Rng rng(9001);
  double worst_excess = -1.0, worst_z = 0.0;
  for (int t = 0; t < 10; ++t) {
    const auto c = rcl_test::random_channel(rng, 2, 2);
    const Observable phi = obs::exp_neg_dist(rcl_test::random_state(rng, 2).matrix(), 2.0);
    DecayOptions options;
    options.mode = DecayMode::both;
    const DecayReport r = correlation_decay(c, phi, obs::purity(), 2000, 12, static_cast<std::uint64_t>(t), options);
    check.expect(r.fit_valid, fmt("channel %g: no fit range above noise", t));
    const double envelope = std::min(r.Lambda1, std::pow(c.max_probability(), r.nu));
    worst_excess = std::max(worst_excess, r.fitted_rate - envelope);
    worst_z = std::max(worst_z, r.max_exact_mc_z);
  }
  check.expect(worst_excess <= 0.05, fmt("rate exceeds envelope by %.3f", worst_excess));
  check.expect(worst_z <= 4.0, fmt("exact vs Monte Carlo z = %.2f", worst_z));
  check.note(fmt("max (rate - min(Lambda1, pmax^nu)) = %.3f, max z = %.2f", worst_excess, worst_z));
  return check.result();
}

// --- 10 --------------------------------------------------------------------

Outcome cpt_spectral_convergence() {
  Checker check;
  Rng rng(10001);
  int channels = 0;
  double worst = 0.0;
  for (int t = 0; t < 200 && channels < 10; ++t) {
    const auto inner = rcl_test::random_channel(rng, 2, 2 + rcl_test::uniform_index(rng, 2));
    const auto c = depolarizing_mix(inner, rcl_test::uniform(rng, 0.3, 0.95));
    const double kappa = std::abs(spectrum(Channel(c)).kappa);
    if (kappa < 0.2 || kappa > 0.9) continue;
    ++channels;
    const CptConvergenceReport r = cpt_convergence(c, 20, 30, static_cast<std::uint64_t>(t));
    check.expect(r.fit_valid, "no fit");
    worst = std::max(worst, std::abs(r.log_slope - std::log(kappa)));
    for (std::size_t i = 0; i < r.trace_distances.size(); ++i) {
      check.expect(r.trace_distances[i] <= r.C_fit * std::pow(kappa, r.n_values[i]) * (1.0 + 1e-9) + 1e-11,
                   "distance above C |kappa|^n");
    }
  }
  check.expect(channels == 10, fmt("only %g channels in range", channels));
  check.expect(worst <= 0.05, fmt("|log slope - log|kappa|| = %.3f", worst));
  check.note(fmt("%g channels, max |log slope - log|kappa|| = %.4f", channels, worst));
  return check.result();
}

// --- 11 --------------------------------------------------------------------

std::string run_cli(const std::vector<std::string>& args, int& code) {
  std::vector<const char*> argv = {"rcl"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  code = cli::run_command_line(static_cast<int>(argv.size()), argv.data(), out, err);
  return out.str();
}

Outcome reproducibility() {
  Checker check;
  const std::string config = std::string(RCL_TEST_TMPDIR) + "/acceptance_decay.json";
  {
    std::ofstream f(config);
    f << R"({"command": "decay", "channel": "random_mixed_unitary:2:seed7", "seed": 42, "samples": 500,
             "n_max": 8, "mode": "both"})";
  }
  const std::vector<std::vector<std::string>> runs = {
      {"analyze", "--channel", "random_mixed_unitary:3:seed2", "--seed", "9"},
      {"fixed-point", "--channel", "phase_flip:0.5", "--seed", "9"},
      {"barycenter", "--channel", "random_mixed_unitary:2:seed2", "--seed", "9", "--trials", "1"},
      {"cesaro", "--channel", "random_mixed_unitary:2:seed2", "--seed", "9", "--n-max", "40", "--j-max", "5"},
      {"entropy", "scan", "--seed", "9", "--samples", "200"},
      {"projective", "--channel", "random_mixed_unitary:2:seed2", "--seed", "9", "--pairs", "200"},
      {"jiang", "--channel", "random_mixed_unitary:2:seed2", "--seed", "9", "--m", "2", "--mode", "sampled"},
      {"ruelle", "--channel", "random_mixed_unitary:2:seed2", "--seed", "9", "--n-max", "8"},
      {"decay", "--config", config},
      {"decay", "--config", config, "--threads", "1"},
  };
  std::string decay_report;
  for (const auto& args : runs) {
    int code_a = 0, code_b = 0;
    const std::string a = run_cli(args, code_a);
    const std::string b = run_cli(args, code_b);
    check.expect(code_a == 0 && code_b == 0, args[0] + " exited non-zero");
    check.expect(!a.empty() && a == b, args[0] + " reports differ between runs");
    if (args[0] == "decay") {
      // The thread count is not part of the report; both decay runs must agree.
      const std::string body = a.substr(a.find("\"result\""));
      if (decay_report.empty()) decay_report = body;
      check.expect(body == decay_report, "decay result depends on the thread count");
    }
  }
  check.note(fmt("%g commands rerun, all byte-identical", static_cast<double>(runs.size())));
  return check.result();
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"phase-flip fixed space", phase_flip_fixed_space},
      {"barycenter theorem", barycenter_theorem},
      {"duality suite", duality_suite},
      {"Ruelle eigendata", ruelle_eigendata},
      {"Jiang condition", jiang_condition_suite},
      {"entropy suite", entropy_suite},
      {"projective metric suite", projective_suite},
      {"tanh bound", tanh_bound},
      {"exponential decay", exponential_decay},
      {"CPT spectral convergence", cpt_spectral_convergence},
      {"reproducibility", reproducibility},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!outcome.pass) ++failures;
    std::printf("%s %2zu %-26s %8.2fs  %s\n", outcome.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), seconds,
                outcome.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
