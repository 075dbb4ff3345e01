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

#ifndef RCL_CLI_CONFIG_HPP
#define RCL_CLI_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rcl::cli {

inline const std::vector<std::string> kCommands = {"analyze", "fixed-point", "barycenter", "cesaro", "entropy",
                                                  "projective", "jiang", "decay", "ruelle"};

struct ExperimentConfig {
  std::string command;
  std::string action;  // "scan" for `entropy scan`
  std::string channel;
  std::optional<std::uint64_t> seed;

  // Budgets; unset values take per-command defaults in resolve().
  std::optional<std::size_t> samples;
  std::optional<int> n_max;
  std::optional<std::size_t> atom_cap;
  std::optional<std::size_t> pairs;
  int j_max = 20;
  int trials = 2;
  int m = 1;
  std::string mode;

  std::string phi = "trace";
  std::string psi = "constant:1";
  std::string g = "purity";
  std::string rho = "mixed";
  std::string povm;
  std::string witness_panel = "standard";

  double cone_a = 5.0;
  double cone_nu = 1.0;
  double cone_delta0 = 0.5;
  std::string metric = "frobenius";

  int dim = 2;  // entropy scan instances
  int k = 3;
  int threads = 0;

  std::string output;  // empty: stdout
  std::string format = "json";
  std::string csv;
  std::string dump_measure;
};

/// Fills per-command defaults (mode, samples, n_max, atom_cap, pairs).
void resolve(ExperimentConfig& config);

/// Throws Error(config_invalid) when the seed is missing, a budget is not
/// positive or an enumerated field has an unknown value.
void validate(const ExperimentConfig& config);

/// Config JSON: same keys as the long flags with '-' replaced by '_'.
ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& config);

}  // namespace rcl::cli

#endif  // RCL_CLI_CONFIG_HPP
