#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "json.hpp"
#include "rcl/cli/config.hpp"
#include "rcl/cli/io.hpp"
#include "rcl/cli/run.hpp"
#include "rcl/errors.hpp"

namespace {

using namespace rcl;
using nlohmann::json;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_args(std::vector<std::string> args) {
  args.insert(args.begin(), "rcl");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_command_line(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string tmp_path(const std::string& name) { return std::string(RCL_TEST_TMPDIR) + "/" + name; }

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
}

TEST(Cli, AnalyzePhaseFlipHasTwoFixedDirections) {
  const Outcome o = run_args({"analyze", "--channel", "phase_flip:0.5", "--seed", "1"});
  ASSERT_EQ(o.code, cli::kExitOk) << o.err;
  const json r = json::parse(o.out);
  EXPECT_EQ(r["schema"], 1);
  EXPECT_EQ(r["command"], "analyze");
  EXPECT_TRUE(r.contains("version"));
  EXPECT_TRUE(r.contains("tolerances"));
  EXPECT_EQ(r["config"]["channel"], "phase_flip:0.5");
  EXPECT_EQ(r["result"]["fixed_space_dim"], 2);
}

TEST(Cli, JiangSingleLetterWords) {
  const Outcome o = run_args({"jiang", "--channel", "random_mixed_unitary:2:seed7", "--m", "1", "--seed", "1"});
  ASSERT_EQ(o.code, cli::kExitOk) << o.err;
  const json r = json::parse(o.out)["result"];
  EXPECT_TRUE(r["holds"].get<bool>());
  EXPECT_DOUBLE_EQ(r["lhs"].get<double>(), 1.0);
  EXPECT_DOUBLE_EQ(r["rhs"].get<double>(), 2.0);
  double total = 0.0;
  for (const auto& g : r["gamma"]) total += g["gamma"].get<double>();
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Cli, DecayOfConstantIsAtNoiseFloor) {
  const Outcome o = run_args({"decay", "--channel", "pauli:0.25,0.25,0.25,0.25", "--phi", "constant:1", "--seed", "4",
                              "--samples", "200", "--n-max", "5"});
  ASSERT_EQ(o.code, cli::kExitOk) << o.err;
  const json r = json::parse(o.out)["result"];
  ASSERT_EQ(r["C_n"].size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_LE(r["C_n"][i].get<double>(), r["stderr"][i].get<double>() + 1e-14);
  EXPECT_FALSE(r["fit_valid"].get<bool>());
}

TEST(Cli, DecayCsvColumns) {
  const Outcome o = run_args({"decay", "--channel", "random_mixed_unitary:2:seed3", "--seed", "5", "--samples", "300",
                              "--n-max", "6", "--format", "csv"});
  ASSERT_EQ(o.code, cli::kExitOk) << o.err;
  std::istringstream in(o.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "n,C_n,stderr,bound_lambda1,bound_pmax");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 4);
    EXPECT_EQ(line.substr(0, line.find(',')), std::to_string(rows));
  }
  EXPECT_EQ(rows, 6);
}

TEST(Cli, EntropyScanCsvAndReport) {
  const std::string csv = tmp_path("scan.csv");
  const Outcome o = run_args({"entropy", "scan", "--seed", "2", "--samples", "50", "--csv", csv});
  ASSERT_EQ(o.code, cli::kExitOk) << o.err;
  EXPECT_EQ(json::parse(o.out)["result"]["violations"], 0);
  std::istringstream in(read_file(csv));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "instance_id,h_Q,bound,margin");
  int rows = 0;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string id, h, bound, margin;
    std::getline(ss, id, ',');
    std::getline(ss, h, ',');
    std::getline(ss, bound, ',');
    std::getline(ss, margin, ',');
    EXPECT_GE(std::stod(h), -1e-12);
    EXPECT_NEAR(std::stod(bound), std::log(3.0), 1e-12);
    EXPECT_GE(std::stod(margin), -1e-9);
    ++rows;
  }
  EXPECT_EQ(rows, 50);
}

TEST(Cli, ReportsAreByteIdenticalAcrossRuns) {
  const std::string nonlinear = tmp_path("nonlinear.json");
  write_file(nonlinear, cli::channel_to_json(Channel(random_nonlinear_channel(2, 3, 1))));
  const std::vector<std::vector<std::string>> commands = {
      {"analyze", "--channel", "random_mixed_unitary:3:seed2", "--seed", "9"},
      {"fixed-point", "--channel", "random_mixed_unitary:2:seed2", "--seed", "9"},
      {"barycenter", "--channel", "random_mixed_unitary:2:seed2", "--seed", "9", "--trials", "1"},
      {"cesaro", "--channel", "phase_flip:0.3", "--seed", "9", "--n-max", "30", "--j-max", "5"},
      {"entropy", "--channel", nonlinear, "--seed", "9"},
      {"projective", "--channel", "random_mixed_unitary:2:seed2", "--seed", "9", "--pairs", "200"},
      {"jiang", "--channel", "random_mixed_unitary:2:seed2", "--seed", "9", "--m", "2", "--mode", "sampled"},
      {"decay", "--channel", "random_mixed_unitary:2:seed2", "--seed", "9", "--samples", "300", "--n-max", "6"},
      {"ruelle", "--channel", "random_mixed_unitary:2:seed2", "--seed", "9", "--n-max", "6"},
  };
  for (const auto& args : commands) {
    const Outcome a = run_args(args);
    const Outcome b = run_args(args);
    ASSERT_EQ(a.code, cli::kExitOk) << args[0] << ": " << a.err;
    EXPECT_FALSE(a.out.empty());
    EXPECT_EQ(a.out, b.out) << args[0];
  }
}

TEST(Cli, ReportDoesNotDependOnThreadCount) {
  const std::vector<std::string> base = {"decay", "--channel", "random_mixed_unitary:2:seed2", "--seed", "9",
                                         "--samples", "600", "--n-max", "6"};
  auto one = base;
  one.insert(one.end(), {"--threads", "1"});
  auto four = base;
  four.insert(four.end(), {"--threads", "4"});
  const json a = json::parse(run_args(one).out);
  const json b = json::parse(run_args(four).out);
  EXPECT_EQ(a["result"], b["result"]);
}

TEST(Cli, ConfigFileAndFlagOverride) {
  const std::string path = tmp_path("decay_config.json");
  write_file(path, R"({"command": "decay", "channel": "random_mixed_unitary:2:seed3", "seed": 5,
                      "samples": 300, "n_max": 6})");
  const Outcome from_file = run_args({"decay", "--config", path});
  const Outcome from_flags = run_args({"decay", "--channel", "random_mixed_unitary:2:seed3", "--seed", "5",
                                       "--samples", "300", "--n-max", "6"});
  ASSERT_EQ(from_file.code, cli::kExitOk) << from_file.err;
  EXPECT_EQ(from_file.out, from_flags.out);

  const Outcome overridden = run_args({"decay", "--config", path, "--n-max", "4"});
  ASSERT_EQ(overridden.code, cli::kExitOk) << overridden.err;
  const json r = json::parse(overridden.out);
  EXPECT_EQ(r["config"]["n_max"], 4);
  EXPECT_EQ(r["config"]["seed"], 5);
  EXPECT_EQ(r["result"]["C_n"].size(), 4u);

  EXPECT_EQ(run_args({"jiang", "--config", path}).code, cli::kExitInvalid);
}

TEST(Cli, ConfigRoundTrip) {
  cli::ExperimentConfig c;
  c.command = "cesaro";
  c.channel = "phase_flip:0.3";
  c.seed = 17;
  c.n_max = 40;
  c.cone_a = 2.5;
  c.witness_panel = "expdist0,purity";
  cli::resolve(c);
  const cli::ExperimentConfig back = cli::config_from_json(cli::config_to_json(c));
  EXPECT_EQ(cli::config_to_json(back), cli::config_to_json(c));
}

TEST(Cli, ExitCodes) {
  const Outcome no_seed = run_args({"analyze", "--channel", "phase_flip:0.5"});
  EXPECT_EQ(no_seed.code, cli::kExitInvalid);
  EXPECT_EQ(json::parse(no_seed.err)["error"], "ConfigInvalid");

  const Outcome bad_channel = run_args({"analyze", "--channel", "no_such_channel", "--seed", "1"});
  EXPECT_EQ(bad_channel.code, cli::kExitInvalid);
  EXPECT_EQ(json::parse(bad_channel.err)["error"], "ChannelInvalid");

  const Outcome zero_budget = run_args({"decay", "--channel", "phase_flip:0.3", "--seed", "1", "--samples", "0"});
  EXPECT_EQ(zero_budget.code, cli::kExitInvalid);

  const Outcome unknown_flag = run_args({"analyze", "--channel", "phase_flip:0.5", "--seed", "1", "--bogus", "1"});
  EXPECT_EQ(unknown_flag.code, cli::kExitInvalid);

  const Outcome budget = run_args({"decay", "--channel", "random_mixed_unitary:2:seed7", "--seed", "1", "--mode",
                                   "exact", "--n-max", "25"});
  EXPECT_EQ(budget.code, cli::kExitBudget);
  EXPECT_EQ(json::parse(budget.err)["error"], "ExactBudgetExceeded");
  EXPECT_TRUE(budget.out.empty());
}

TEST(Cli, ChannelJsonRoundTrip) {
  Rng rng(21);
  const Channel channels[] = {Channel(rcl_test::random_channel(rng, 2, 3)),
                              Channel(random_nonlinear_channel(2, 2, 5)),
                              Channel(to_kraus(phase_flip(0.3)))};
  for (const Channel& c : channels) {
    const std::string text = cli::channel_to_json(c);
    const Channel back = cli::parse_channel_json(text);
    ASSERT_EQ(back.index(), c.index());
    EXPECT_EQ(cli::channel_to_json(back), text);
    const DensityMatrix rho = rcl_test::random_state(rng, 2);
    EXPECT_LE((rcl::apply(back, rho.matrix()) - rcl::apply(c, rho.matrix())).norm(), 1e-14);
  }
}

TEST(Cli, ChannelJsonFileIsAccepted) {
  const std::string path = tmp_path("phase_flip.json");
  write_file(path, cli::channel_to_json(Channel(phase_flip(0.5))));
  const Outcome o = run_args({"analyze", "--channel", path, "--seed", "1"});
  ASSERT_EQ(o.code, cli::kExitOk) << o.err;
  EXPECT_EQ(json::parse(o.out)["result"]["fixed_space_dim"], 2);
}

TEST(Cli, MalformedChannelJson) {
  const char* bad[] = {
      "not json",
      R"({"n": 2, "kind": "mixed_unitary", "branches": []})",
      R"({"n": 2, "kind": "mixed_unitary", "branches": [{"p": 0.7, "U": [[[1,0],[0,0]],[[0,0],[1,0]]]}]})",
      R"({"n": 2, "kind": "mixed_unitary", "branches": [{"p": 1.0, "U": [[[1,0],[1,0]],[[0,0],[1,0]]]}]})",
      R"({"n": 2, "kind": "teleporter", "branches": []})",
  };
  for (const char* text : bad) {
    try {
      cli::parse_channel_json(text);
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::invalid_channel) << text;
    }
  }
}

TEST(Cli, MeasureDumpRoundTrip) {
  const std::string path = tmp_path("measure.csv");
  const Outcome o = run_args({"barycenter", "--channel", "random_mixed_unitary:2:seed7", "--seed", "3", "--trials",
                              "1", "--dump-measure", path});
  ASSERT_EQ(o.code, cli::kExitOk) << o.err;
  std::ifstream f(path);
  std::string header;
  std::getline(f, header);
  EXPECT_EQ(header, "atom_index,weight,re00,im00,re01,im01,re10,im10,re11,im11");
  f.seekg(0);
  const EmpiricalMeasure mu = cli::read_measure_csv(f, 2);
  EXPECT_GT(mu.size(), 0u);
  EXPECT_NEAR(mu.total_mass(), 1.0, 1e-12);
  for (const auto& atom : mu.atoms()) EXPECT_NEAR(atom.state.matrix().trace().real(), 1.0, 1e-10);

  std::ostringstream again;
  cli::write_measure_csv(again, mu);
  EXPECT_EQ(again.str(), read_file(path));
}

TEST(Cli, ObservableAndStateSpecs) {
  EXPECT_NEAR(cli::parse_observable("constant:2.5", 2)(ComplexMatrix::Zero(2, 2)), 2.5, 0.0);
  const DensityMatrix plus = cli::parse_state("plus", 2);
  EXPECT_NEAR(cli::parse_observable("linear:pauli:1", 2)(plus.matrix()), 1.0, 1e-14);
  EXPECT_NEAR(cli::parse_observable("entry:0:1", 2)(plus.matrix()), 0.5, 1e-14);
  EXPECT_NEAR(cli::parse_observable("purity", 2)(cli::parse_state("mixed", 2).matrix()), 0.5, 1e-14);
  EXPECT_NEAR(cli::parse_state("basis:1", 2).matrix()(1, 1).real(), 1.0, 0.0);
  EXPECT_TRUE(cli::parse_observable("exp_neg_dist:2", 2).holder().has_value());
  EXPECT_THROW(cli::parse_observable("linear:pauli:7", 2), Error);
  EXPECT_THROW(cli::parse_state("basis:5", 2), Error);
}

}  // namespace
