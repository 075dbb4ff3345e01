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

#include "rcl/cli/run.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rcl/channels.hpp"
#include "rcl/cli/io.hpp"
#include "rcl/decay.hpp"
#include "rcl/entropy.hpp"
#include "rcl/errors.hpp"
#include "rcl/measures.hpp"
#include "rcl/parallel.hpp"
#include "rcl/projective.hpp"
#include "rcl/transfer.hpp"

namespace rcl::cli {

using nlohmann::ordered_json;

namespace {

[[noreturn]] void invalid(const std::string& message) { throw Error(ErrorCode::config_invalid, message); }

ordered_json num(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

ordered_json nums(const std::vector<double>& xs) {
  ordered_json a = ordered_json::array();
  for (double x : xs) a.push_back(num(x));
  return a;
}

ordered_json matrix_json(const ComplexMatrix& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({num(m(i, j).real()), num(m(i, j).imag())});
    rows.push_back(row);
  }
  return rows;
}

ordered_json complex_json(Complex z) { return {num(z.real()), num(z.imag())}; }

std::string shortest(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

ordered_json tolerances() {
  return {{"trace_preserving", tol::kTracePreserving},
          {"probability_sum", tol::kProbabilitySum},
          {"unitary", tol::kUnitary},
          {"povm_sum", tol::kPovmSum},
          {"fixed_eigenvalue", tol::kFixedEigenvalue},
          {"fixed_point_residual", tol::kFixedPointResidual},
          {"algebraic", tol::kAlgebraic},
          {"hermitian_input", tol::kHermitianInput},
          {"exact_word_budget", kExactWordBudget},
          {"default_atom_cap", kDefaultAtomCap}};
}

const MixedUnitaryChannel& require_mixed_unitary(const Channel& channel, const std::string& command) {
  if (const auto* mu = std::get_if<MixedUnitaryChannel>(&channel)) return *mu;
  throw Error(ErrorCode::invalid_channel, command + " requires a mixed-unitary channel");
}

std::vector<std::string> split_names(const std::string& list) {
  std::vector<std::string> names;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) names.push_back(item);
  }
  return names;
}

ConeSpec cone_spec(const ExperimentConfig& c) {
  ConeSpec spec;
  spec.a = c.cone_a;
  spec.nu = c.cone_nu;
  spec.delta0 = c.cone_delta0;
  spec.metric = c.metric == "trace" ? ConeMetric::trace : ConeMetric::frobenius;
  spec.validate();
  return spec;
}

const char* kind_name(const Channel& channel) {
  switch (channel.index()) {
    case 0: return "kraus";
    case 1: return "mixed_unitary";
    default: return "nonlinear";
  }
}

// --- commands ---------------------------------------------------------------

ordered_json run_analyze(const ExperimentConfig&, const Channel& channel) {
  const Eigen::Index n = channel_dim(channel);
  ordered_json r;
  r["n"] = n;
  r["kind"] = kind_name(channel);
  const ComplexMatrix identity = ComplexMatrix::Identity(n, n);
  const ComplexMatrix image = rcl::apply(channel, identity);
  r["unital"] = (image - identity).norm() <= tol::kAlgebraic;
  if (const auto* k = std::get_if<KrausChannel>(&channel)) {
    r["trace_preserving"] = k->trace_preserving();
  } else {
    r["trace_preserving"] = true;
  }
  if (!is_linear(channel)) {
    r["linear"] = false;
    r["analytic"] = false;
    return r;
  }
  r["linear"] = true;
  const SuperoperatorSpectrum s = spectrum(channel);
  ordered_json eig = ordered_json::array();
  for (Complex z : s.eigenvalues) eig.push_back(complex_json(z));
  r["eigenvalues"] = eig;
  r["fixed_space_dim"] = s.fixed_space_dim;
  r["kappa"] = complex_json(s.kappa);
  r["kappa_mod"] = num(std::abs(s.kappa));
  ordered_json fps = ordered_json::array();
  for (const DensityMatrix& rho : fixed_points(channel)) fps.push_back(matrix_json(rho.matrix()));
  r["fixed_points"] = fps;
  r["analytic"] = true;
  return r;
}

ordered_json run_fixed_point(const ExperimentConfig& c, const Channel& channel) {
  ordered_json r;
  ordered_json fps = ordered_json::array();
  for (const DensityMatrix& rho : fixed_points(channel)) {
    const double residual = trace_norm(rcl::apply(channel, rho.matrix()) - rho.matrix());
    fps.push_back({{"rho", matrix_json(rho.matrix())}, {"residual", num(residual)}});
  }
  r["fixed_points"] = fps;
  const CptConvergenceReport cv = cpt_convergence(channel, *c.samples, *c.n_max, *c.seed);
  r["convergence"] = {{"n_values", cv.n_values},
                      {"trace_distances", nums(cv.trace_distances)},
                      {"kappa_mod", num(cv.kappa_mod)},
                      {"fitted_rate", num(cv.fitted_rate)},
                      {"log_slope", num(cv.log_slope)},
                      {"C_fit", num(cv.C_fit)},
                      {"fit_valid", cv.fit_valid},
                      {"fit_points", cv.fit_points},
                      {"slope_ok", cv.slope_ok},
                      {"degraded", cv.degraded},
                      {"fallback_reason", cv.fallback_reason}};
  r["analytic"] = false;
  return r;
}

ordered_json case_json(const BarycenterCase& bc) {
  const CesaroInvariantMeasure& m = bc.measure;
  return {{"start", matrix_json(m.start)},
          {"barycenter", matrix_json(m.barycenter)},
          {"residual", num(bc.residual)},
          {"invariance_residual", num(m.invariance_residual)},
          {"shift", m.shift},
          {"steps", m.steps},
          {"converged", m.converged},
          {"atoms", m.measure.size()},
          {"pass", bc.pass}};
}

ordered_json run_barycenter(const ExperimentConfig& c, const Channel& channel) {
  const MixedUnitaryChannel& mu = require_mixed_unitary(channel, "barycenter");
  BarycenterOptions opts;
  opts.atom_cap = *c.atom_cap;
  opts.max_steps = *c.n_max;
  if (c.witness_panel != "standard") opts.witnesses = split_names(c.witness_panel);
  const BarycenterTheoremReport rep = verify_barycenter_theorem(mu, c.trials, *c.seed, opts);
  ordered_json fwd = ordered_json::array();
  for (const auto& bc : rep.forward) fwd.push_back(case_json(bc));
  ordered_json rev = ordered_json::array();
  for (const auto& bc : rep.reverse) rev.push_back(case_json(bc));
  const WitnessPanel panel = opts.witnesses.empty() ? WitnessPanel::standard(mu.dim())
                                                    : WitnessPanel::select(mu.dim(), opts.witnesses);
  ordered_json r;
  r["witnesses"] = panel.names();
  r["forward_pass"] = rep.forward_pass;
  r["reverse_pass"] = rep.reverse_pass;
  r["convergence_not_reached"] = rep.convergence_not_reached;
  r["forward"] = fwd;
  r["reverse"] = rev;
  r["analytic"] = false;
  if (!c.dump_measure.empty()) {
    const BarycenterCase* last = !rep.reverse.empty() ? &rep.reverse.back()
                                 : !rep.forward.empty() ? &rep.forward.back()
                                                        : nullptr;
    std::ofstream f(c.dump_measure);
    if (!f) invalid("cannot open " + c.dump_measure);
    write_measure_csv(f, last ? last->measure.measure : EmpiricalMeasure(mu.dim()));
  }
  return r;
}

ordered_json run_cesaro(const ExperimentConfig& c, const Channel& channel) {
  std::optional<MarkovOperator> op;
  if (const auto* mu = std::get_if<MixedUnitaryChannel>(&channel)) {
    op = markov_b(*mu);
  } else if (const auto* nl = std::get_if<NonlinearChannel>(&channel)) {
    op = markov_prime(*nl);
  } else {
    throw Error(ErrorCode::invalid_channel, "cesaro requires a mixed-unitary or nonlinear channel");
  }
  const Eigen::Index n = channel_dim(channel);
  const Observable g = parse_observable(c.g, n);
  const DensityMatrix start = parse_state(c.rho, n);
  CesaroMode mode = PushforwardScan{*c.atom_cap, *c.seed};
  if (c.mode == "chaos") mode = ChaosScan{*c.samples, *c.seed};
  const CesaroReport rep = cesaro_scan(*op, g, EmpiricalMeasure::dirac(start.matrix()), *c.n_max, c.j_max, mode);
  ordered_json values = ordered_json::array();
  for (const auto& row : rep.values) values.push_back(nums(row));
  ordered_json r;
  r["g"] = rep.g;
  r["sequence"] = nums(rep.sequence);
  r["sequence_stderr"] = nums(rep.sequence_stderr);
  r["limsup_estimate"] = num(rep.limsup_estimate);
  r["liminf_estimate"] = num(rep.liminf_estimate);
  r["gap"] = num(rep.limsup_estimate - rep.liminf_estimate);
  r["stderr_allowance"] = num(rep.stderr_allowance);
  r["n_used"] = rep.n_used;
  r["early_stopped"] = rep.early_stopped;
  r["values"] = values;
  r["analytic"] = false;
  return r;
}

NonlinearChannel as_nonlinear(const Channel& channel) {
  if (const auto* nl = std::get_if<NonlinearChannel>(&channel)) return *nl;
  if (const auto* mu = std::get_if<MixedUnitaryChannel>(&channel)) return constant_probability_channel(*mu);
  throw Error(ErrorCode::invalid_channel, "entropy requires a mixed-unitary or nonlinear channel");
}

ordered_json entropy_json(const EntropyReport& e) {
  return {{"value", num(e.value)},
          {"branch_terms", nums(e.branch_terms)},
          {"branch_probabilities", nums(e.branch_probabilities)},
          {"bound", num(e.bound)},
          {"bounds_checked", e.bounds_checked}};
}

ordered_json run_entropy(const ExperimentConfig& c, const Channel& channel) {
  const NonlinearChannel nl = as_nonlinear(channel);
  const DensityMatrix rho = parse_state(c.rho, nl.dim());
  const PovmSet inner = c.povm.empty() ? PovmSet::of(nl) : load_povm(c.povm, nl.dim());
  const EntropyReport rep = transfer_entropy(nl, inner, rho);
  ordered_json r = entropy_json(rep);
  r["via_transfer_operator"] = num(apply_Tprime(nl, measurement_entropy(inner))(rho.matrix()));
  r["inner_povm"] = c.povm.empty() ? "channel" : "file";
  r["analytic"] = true;
  return r;
}

struct ScanRow {
  std::size_t id;
  double h;
  double bound;
  double margin;
};

std::vector<ScanRow> entropy_scan_rows(const ExperimentConfig& c) {
  std::vector<ScanRow> rows(*c.samples);
  parallel_for(rows.size(), [&](std::size_t i) {
    const NonlinearChannel nl =
        random_nonlinear_channel(c.dim, static_cast<std::size_t>(c.k), derive_seed(*c.seed, 2 * i));
    const DensityMatrix rho = random_density_hs(c.dim, derive_seed(*c.seed, 2 * i + 1));
    const EntropyReport e = transfer_entropy(nl, rho);
    rows[i] = {i, e.value, e.bound, std::min(e.value, e.bound - e.value)};
  });
  return rows;
}

std::string scan_csv(const std::vector<ScanRow>& rows) {
  std::string s = "instance_id,h_Q,bound,margin\n";
  for (const ScanRow& row : rows) {
    s += std::to_string(row.id) + "," + shortest(row.h) + "," + shortest(row.bound) + "," + shortest(row.margin) + "\n";
  }
  return s;
}

ordered_json run_entropy_scan(const std::vector<ScanRow>& rows) {
  std::size_t violations = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  for (const ScanRow& row : rows) {
    if (row.margin < -1e-9) ++violations;
    min_margin = std::min(min_margin, row.margin);
  }
  ordered_json r;
  r["instances"] = rows.size();
  r["violations"] = violations;
  r["min_margin"] = num(min_margin);
  ordered_json h = ordered_json::array();
  for (const ScanRow& row : rows) h.push_back(num(row.h));
  r["h_Q"] = h;
  r["analytic"] = false;
  return r;
}

ordered_json birkhoff_json(const BirkhoffReport& b) {
  return {{"holds", b.holds},
          {"coefficient", num(b.coefficient)},
          {"worst_excess", num(b.worst_excess)},
          {"pairs_checked", b.pairs_checked}};
}

ordered_json run_projective(const ExperimentConfig& c, const Channel& channel) {
  if (!is_linear(channel)) {
    throw Error(ErrorCode::nonlinear_channel_unsupported, "projective requires a linear channel");
  }
  const ConeSpec spec = cone_spec(c);
  const Eigen::Index n = channel_dim(channel);
  ordered_json r;
  r["cone"] = {{"a", spec.a}, {"nu", spec.nu}, {"delta0", spec.delta0}, {"metric", metric_name(spec.metric)}};

  const TanhReport t = tanh_contraction_check(channel, *c.pairs, derive_seed(*c.seed, 0));
  r["tanh"] = {{"delta_phi_estimate", num(t.delta_phi_estimate)},
               {"tanh_coeff", num(t.tanh_coeff)},
               {"violations", t.violations},
               {"pairs_checked", t.pairs_checked},
               {"vacuous", t.vacuous},
               {"worst_ratio", num(t.worst_ratio)}};
  r["birkhoff_psd"] = birkhoff_json(birkhoff_lemma_check(channel, t.delta_phi_estimate, *c.pairs,
                                                         derive_seed(*c.seed, 1)));

  const ComplexMatrix e0 = rcl::apply(channel, DensityMatrix::basis_projector(n, 0).matrix());
  const ComplexMatrix e1 = rcl::apply(channel, DensityMatrix::basis_projector(n, n - 1).matrix());
  if (min_eigenvalue(e0) >= 1e-10 && min_eigenvalue(e1) >= 1e-10) {
    const MetricReport m = hilbert_metric_psd(e0, e1);
    r["basis_image_metric"] = {{"theta", num(m.theta)}, {"alpha", num(m.alpha)}, {"beta", num(m.beta)}};
  } else {
    r["basis_image_metric"] = nullptr;
  }

  const auto* mu = std::get_if<MixedUnitaryChannel>(&channel);
  bool interior = mu != nullptr;
  if (mu) {
    for (double p : mu->probabilities()) interior = interior && p > 0.0 && p < 1.0;
  }
  if (interior) {
    const ContractionReport cr = verify_cone_contraction(*mu, spec, *c.samples, derive_seed(*c.seed, 2));
    r["cone_contraction"] = {{"lambda1", num(cr.lambda1)},
                             {"pass", cr.pass},
                             {"worst_margin", num(cr.worst_margin)},
                             {"functions_checked", cr.functions_checked}};
    const DiameterEstimate d = estimate_D1(*mu, spec, *c.samples, 40, derive_seed(*c.seed, 3));
    r["D1"] = {{"lambda1", num(d.lambda1)},
               {"lower", num(d.lower)},
               {"upper", num(d.upper)},
               {"Lambda1", num(d.Lambda1)}};
    r["birkhoff_cone"] = birkhoff_json(birkhoff_lemma_check(*mu, spec, d.upper, *c.samples, derive_seed(*c.seed, 4)));
  } else {
    r["cone_contraction"] = nullptr;
    r["D1"] = nullptr;
    r["birkhoff_cone"] = nullptr;
  }
  r["analytic"] = false;
  return r;
}

ordered_json word_json(const Word& w) {
  ordered_json a = ordered_json::array();
  for (std::size_t letter : w.letters) a.push_back(letter);
  return a;
}

ordered_json run_jiang(const ExperimentConfig& c, const Channel& channel) {
  const MixedUnitaryChannel& mu = require_mixed_unitary(channel, "jiang");
  JiangMode mode = AnalyticMode{};
  if (c.mode == "sampled") mode = SampledMode{*c.pairs, *c.seed};
  const JiangReport rep = jiang_condition(mu, c.m, mode);
  ordered_json gamma = ordered_json::array();
  for (const auto& [word, value] : rep.gamma) gamma.push_back({{"word", word_json(word)}, {"gamma", num(value)}});
  ordered_json r;
  r["m"] = rep.m;
  r["lhs"] = num(rep.lhs);
  r["rhs"] = num(rep.rhs);
  r["holds"] = rep.holds;
  r["sampled"] = rep.sampled;
  r["max_excess"] = num(rep.max_excess);
  r["gamma"] = gamma;
  r["analytic"] = !rep.sampled;
  return r;
}

DecayReport decay_report(const ExperimentConfig& c, const Channel& channel) {
  const MixedUnitaryChannel& mu = require_mixed_unitary(channel, "decay");
  DecayOptions opts;
  opts.spec = cone_spec(c);
  if (c.mode == "exact") opts.mode = DecayMode::exact;
  else if (c.mode == "both") opts.mode = DecayMode::both;
  const Observable phi = parse_observable(c.phi, mu.dim());
  const Observable psi = parse_observable(c.psi, mu.dim());
  return correlation_decay(mu, phi, psi, *c.samples, *c.n_max, *c.seed, opts);
}

std::string decay_csv(const DecayReport& d) {
  std::string s = "n,C_n,stderr,bound_lambda1,bound_pmax\n";
  for (std::size_t i = 0; i < d.n_values.size(); ++i) {
    s += std::to_string(d.n_values[i]) + "," + shortest(d.C_n[i]) + "," + shortest(d.stderr_n[i]) + "," +
         shortest(d.bound_lambda1[i]) + "," + shortest(d.bound_pmax[i]) + "\n";
  }
  return s;
}

ordered_json decay_json(const DecayReport& d) {
  ordered_json r;
  r["n_values"] = d.n_values;
  r["signed_mean"] = nums(d.signed_mean);
  r["C_n"] = nums(d.C_n);
  r["stderr"] = nums(d.stderr_n);
  r["C_n_integral"] = nums(d.C_n_integral);
  r["limit_phi_at_zero"] = num(d.limit_phi_at_zero);
  r["limit_phi_integral"] = num(d.limit_phi_integral);
  r["final_gap_phi_at_zero"] = num(d.final_gap_phi_at_zero);
  r["final_gap_phi_integral"] = num(d.final_gap_phi_integral);
  r["preferred_limit"] = d.preferred_limit;
  r["exact"] = d.exact;
  if (!d.mc_signed_mean.empty()) {
    r["mc_signed_mean"] = nums(d.mc_signed_mean);
    r["mc_stderr"] = nums(d.mc_stderr);
    r["max_exact_mc_z"] = num(d.max_exact_mc_z);
  }
  r["fit_end"] = d.fit_end;
  r["signal_below_noise"] = d.signal_below_noise;
  r["noise_floor_n"] = d.noise_floor_n;
  r["fitted_rate"] = num(d.fitted_rate);
  r["K_fit"] = num(d.K_fit);
  r["r_squared"] = num(d.r_squared);
  r["fit_valid"] = d.fit_valid;
  r["lambda1"] = num(d.lambda1);
  r["Lambda1"] = num(d.Lambda1);
  r["D1_lower"] = num(d.D1_lower);
  r["D1_upper"] = num(d.D1_upper);
  r["kappa_mod"] = num(d.kappa_mod);
  r["nu"] = num(d.nu);
  r["bound_lambda1"] = nums(d.bound_lambda1);
  r["bound_pmax"] = nums(d.bound_pmax);
  r["envelope_lambda1_holds"] = d.envelope_lambda1_holds;
  r["envelope_pmax_holds"] = d.envelope_pmax_holds;
  r["analytic"] = false;
  return r;
}

ordered_json run_ruelle(const ExperimentConfig& c, const Channel& channel) {
  const MixedUnitaryChannel& mu = require_mixed_unitary(channel, "ruelle");
  const RuelleData data = ruelle_data(mu);
  ordered_json r;
  r["lambda"] = num(data.lambda);
  r["h"] = data.h.name();
  r["mu_atom"] = matrix_json(data.mu_atom.matrix());
  r["normalization"] = num(data.normalization);
  r["eigenfunction_residual"] = num(eigenfunction_residual(mu, data.h, *c.pairs, derive_seed(*c.seed, 0)));

  const Observable phi = parse_observable(c.phi, mu.dim());
  const DensityMatrix rho = parse_state(c.rho, mu.dim());
  ordered_json limits = ordered_json::array();
  for (int n = 1; n <= *c.n_max; ++n) {
    IterationMode mode = ExactMode{};
    if (std::pow(static_cast<double>(mu.size()), n) > kExactWordBudget) {
      mode = MonteCarloMode{*c.samples, derive_seed(*c.seed, static_cast<std::uint64_t>(n))};
    }
    const NormalizedLimit lim = normalized_Tc_limit(mu, phi, rho.matrix(), n, mode);
    ordered_json row = {{"n", n},
                        {"estimate", num(lim.estimate.value)},
                        {"stderr", num(lim.estimate.std_error)},
                        {"exact", lim.estimate.exact},
                        {"limit", num(lim.limit)},
                        {"gap", num(std::abs(lim.estimate.value - lim.limit))}};
    row["bound"] = lim.bound ? num(*lim.bound) : ordered_json(nullptr);
    limits.push_back(row);
  }
  r["phi"] = phi.name();
  r["normalized_limits"] = limits;
  r["analytic"] = true;
  return r;
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) invalid("cannot open " + path);
  f << text;
}

int report_error(std::ostream& err, std::string_view code, const std::string& message) {
  ordered_json e;
  e["error"] = code;
  e["message"] = message;
  err << e.dump() << "\n";
  const bool budget = code == error_code_name(ErrorCode::budget_exceeded) ||
                      code == error_code_name(ErrorCode::exact_budget_exceeded);
  return budget ? kExitBudget : kExitInvalid;
}

}  // namespace

int run(const ExperimentConfig& input, std::ostream& out, std::ostream& err) {
  try {
    ExperimentConfig c = input;
    resolve(c);
    validate(c);
    if (c.threads > 0) set_thread_count(c.threads);

    ordered_json report;
    report["schema"] = 1;
    report["command"] = c.command;
    report["version"] = RCL_VERSION_STRING;
    report["config"] = ordered_json::parse(config_to_json(c));
    report["tolerances"] = tolerances();

    std::string csv;
    if (c.command == "entropy" && c.action == "scan") {
      const std::vector<ScanRow> rows = entropy_scan_rows(c);
      csv = scan_csv(rows);
      report["result"] = run_entropy_scan(rows);
    } else {
      const Channel channel = load_channel(c.channel);
      if (c.command == "analyze") report["result"] = run_analyze(c, channel);
      else if (c.command == "fixed-point") report["result"] = run_fixed_point(c, channel);
      else if (c.command == "barycenter") report["result"] = run_barycenter(c, channel);
      else if (c.command == "cesaro") report["result"] = run_cesaro(c, channel);
      else if (c.command == "entropy") report["result"] = run_entropy(c, channel);
      else if (c.command == "projective") report["result"] = run_projective(c, channel);
      else if (c.command == "jiang") report["result"] = run_jiang(c, channel);
      else if (c.command == "ruelle") report["result"] = run_ruelle(c, channel);
      else if (c.command == "decay") {
        const DecayReport d = decay_report(c, channel);
        csv = decay_csv(d);
        report["result"] = decay_json(d);
      }
    }

    if (!c.csv.empty()) write_text(c.csv, csv, out);
    write_text(c.output, c.format == "csv" ? csv : report.dump(2) + "\n", out);
    return kExitOk;
  } catch (const Error& e) {
    return report_error(err, error_code_name(e.code()), e.what());
  } catch (const std::exception& e) {
    return report_error(err, "InternalError", e.what());
  }
}

int run_command_line(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Transfer operators and invariant measures of quantum channels", "rcl"};
  app.set_version_flag("--version", std::string(RCL_VERSION_STRING));
  app.require_subcommand(1);

  ExperimentConfig flags;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  int n_max = 0;
  std::size_t atom_cap = 0;
  std::size_t pairs = 0;
  std::string config_file;
  std::string cone_triple;

  struct Binding {
    CLI::Option* option;
    std::function<void(ExperimentConfig&)> copy;
  };
  std::vector<Binding> bindings;

  auto add_common = [&](CLI::App* sub) {
    auto bind = [&](const std::string& name, auto& storage, auto setter, const std::string& desc) {
      CLI::Option* opt = sub->add_option(name, storage, desc);
      bindings.push_back({opt, [&storage, setter](ExperimentConfig& c) { setter(c, storage); }});
    };
    sub->add_option("--config", config_file, "JSON config file; explicit flags override it");
    bind("--channel", flags.channel, [](ExperimentConfig& c, const std::string& v) { c.channel = v; },
         "channel JSON file or named channel");
    bind("--seed", seed, [](ExperimentConfig& c, std::uint64_t v) { c.seed = v; }, "64-bit root seed");
    bind("--samples", samples, [](ExperimentConfig& c, std::size_t v) { c.samples = v; }, "sample budget");
    bind("--n-max", n_max, [](ExperimentConfig& c, int v) { c.n_max = v; }, "iteration budget");
    bind("--atom-cap", atom_cap, [](ExperimentConfig& c, std::size_t v) { c.atom_cap = v; }, "atoms per measure");
    bind("--pairs", pairs, [](ExperimentConfig& c, std::size_t v) { c.pairs = v; }, "sampled pairs");
    bind("--j-max", flags.j_max, [](ExperimentConfig& c, int v) { c.j_max = v; }, "largest Cesaro shift");
    bind("--trials", flags.trials, [](ExperimentConfig& c, int v) { c.trials = v; }, "random trials");
    bind("--m", flags.m, [](ExperimentConfig& c, int v) { c.m = v; }, "word length");
    bind("--mode", flags.mode, [](ExperimentConfig& c, const std::string& v) { c.mode = v; }, "evaluation mode");
    bind("--phi", flags.phi, [](ExperimentConfig& c, const std::string& v) { c.phi = v; }, "observable phi");
    bind("--psi", flags.psi, [](ExperimentConfig& c, const std::string& v) { c.psi = v; }, "observable psi");
    bind("--g", flags.g, [](ExperimentConfig& c, const std::string& v) { c.g = v; }, "Cesaro test function");
    bind("--rho", flags.rho, [](ExperimentConfig& c, const std::string& v) { c.rho = v; }, "state");
    bind("--povm", flags.povm, [](ExperimentConfig& c, const std::string& v) { c.povm = v; }, "inner POVM JSON");
    bind("--witness-panel", flags.witness_panel,
         [](ExperimentConfig& c, const std::string& v) { c.witness_panel = v; }, "standard or comma-separated names");
    bind("--cone-a", flags.cone_a, [](ExperimentConfig& c, double v) { c.cone_a = v; }, "cone constant a");
    bind("--cone-nu", flags.cone_nu, [](ExperimentConfig& c, double v) { c.cone_nu = v; }, "Holder exponent");
    bind("--cone-delta0", flags.cone_delta0, [](ExperimentConfig& c, double v) { c.cone_delta0 = v; },
         "cone locality radius");
    bind("--cone", cone_triple,
         [](ExperimentConfig& c, const std::string& v) {
           const std::vector<std::string> parts = split_names(v);
           if (parts.size() != 3) invalid("--cone expects a,nu,delta0");
           try {
             c.cone_a = std::stod(parts[0]);
             c.cone_nu = std::stod(parts[1]);
             c.cone_delta0 = std::stod(parts[2]);
           } catch (const std::exception&) {
             invalid("--cone expects three numbers");
           }
         },
         "cone parameters a,nu,delta0");
    bind("--metric", flags.metric, [](ExperimentConfig& c, const std::string& v) { c.metric = v; },
         "frobenius or trace");
    bind("--dim", flags.dim, [](ExperimentConfig& c, int v) { c.dim = v; }, "dimension for entropy scan");
    bind("--k", flags.k, [](ExperimentConfig& c, int v) { c.k = v; }, "branches for entropy scan");
    bind("--threads", flags.threads, [](ExperimentConfig& c, int v) { c.threads = v; }, "worker threads");
    bind("--output,-o", flags.output, [](ExperimentConfig& c, const std::string& v) { c.output = v; },
         "report path (default stdout)");
    bind("--format", flags.format, [](ExperimentConfig& c, const std::string& v) { c.format = v; }, "json or csv");
    bind("--csv", flags.csv, [](ExperimentConfig& c, const std::string& v) { c.csv = v; }, "also write CSV here");
    bind("--dump-measure", flags.dump_measure,
         [](ExperimentConfig& c, const std::string& v) { c.dump_measure = v; }, "measure CSV path");
  };

  std::string action;
  std::vector<CLI::App*> subs;
  for (const std::string& name : kCommands) {
    CLI::App* sub = app.add_subcommand(name);
    add_common(sub);
    if (name == "entropy") sub->add_option("action", action, "optional action: scan");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    return report_error(err, error_code_name(ErrorCode::config_invalid), e.what());
  }

  std::string command;
  for (CLI::App* sub : subs) {
    if (sub->parsed()) command = sub->get_name();
  }

  ExperimentConfig config;
  try {
    if (!config_file.empty()) {
      std::ifstream f(config_file);
      if (!f) invalid("cannot open config file " + config_file);
      std::stringstream ss;
      ss << f.rdbuf();
      config = config_from_json(ss.str());
      if (!config.command.empty() && config.command != command) {
        invalid("config file is for '" + config.command + "', not '" + command + "'");
      }
    }
    config.command = command;
    if (!action.empty()) config.action = action;
    for (const Binding& b : bindings) {
      if (b.option->count() > 0) b.copy(config);
    }
  } catch (const Error& e) {
    return report_error(err, error_code_name(e.code()), e.what());
  }
  return run(config, out, err);
}

}  // namespace rcl::cli
