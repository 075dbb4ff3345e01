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

#include "rcl/cli/config.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"
#include "rcl/errors.hpp"

namespace rcl::cli {

using nlohmann::ordered_json;

namespace {

[[noreturn]] void invalid(const std::string& message) { throw Error(ErrorCode::config_invalid, message); }

template <typename T>
void set_default(std::optional<T>& field, T value) {
  if (!field) field = value;
}

}  // namespace

void resolve(ExperimentConfig& c) {
  const std::string& cmd = c.command;
  if (cmd == "fixed-point") {
    set_default<std::size_t>(c.samples, 16);
    set_default(c.n_max, 100);
  } else if (cmd == "barycenter") {
    set_default<std::size_t>(c.atom_cap, 4096);
    set_default(c.n_max, 600);
  } else if (cmd == "cesaro") {
    set_default(c.n_max, 200);
    set_default<std::size_t>(c.atom_cap, 4096);
    set_default<std::size_t>(c.samples, 1000);
    if (c.mode.empty()) c.mode = "pushforward";
  } else if (cmd == "entropy") {
    set_default<std::size_t>(c.samples, 100);
  } else if (cmd == "projective") {
    set_default<std::size_t>(c.pairs, 500);
    set_default<std::size_t>(c.samples, 8);
  } else if (cmd == "jiang") {
    set_default<std::size_t>(c.pairs, 1000);
    if (c.mode.empty()) c.mode = "analytic";
  } else if (cmd == "decay") {
    set_default<std::size_t>(c.samples, 2000);
    set_default(c.n_max, 12);
    if (c.mode.empty()) c.mode = "mc";
  } else if (cmd == "ruelle") {
    set_default(c.n_max, 12);
    set_default<std::size_t>(c.samples, 10000);
    set_default<std::size_t>(c.pairs, 100);
  }
}

void validate(const ExperimentConfig& c) {
  if (std::find(kCommands.begin(), kCommands.end(), c.command) == kCommands.end()) {
    invalid("unknown command: " + c.command);
  }
  if (!c.action.empty() && !(c.command == "entropy" && c.action == "scan")) invalid("unknown action: " + c.action);
  if (!c.seed) invalid("seed is required");
  if (c.channel.empty() && !(c.command == "entropy" && c.action == "scan")) invalid("channel is required");
  if (c.samples && *c.samples == 0) invalid("samples must be positive");
  if (c.n_max && *c.n_max <= 0) invalid("n_max must be positive");
  if (c.atom_cap && *c.atom_cap == 0) invalid("atom_cap must be positive");
  if (c.pairs && *c.pairs == 0) invalid("pairs must be positive");
  if (c.j_max < 0) invalid("j_max must be non-negative");
  if (c.trials < 0) invalid("trials must be non-negative");
  if (c.m < 1) invalid("m must be positive");
  if (c.dim < 1 || c.k < 1) invalid("dim and k must be positive");
  if (c.threads < 0) invalid("threads must be non-negative");
  if (c.format != "json" && c.format != "csv") invalid("format must be json or csv");
  if (c.metric != "frobenius" && c.metric != "trace") invalid("metric must be frobenius or trace");
  static const std::set<std::pair<std::string, std::string>> modes = {
      {"cesaro", "pushforward"}, {"cesaro", "chaos"}, {"jiang", "analytic"}, {"jiang", "sampled"},
      {"decay", "exact"},        {"decay", "mc"},     {"decay", "both"}};
  if (!c.mode.empty() && !modes.count({c.command, c.mode})) invalid("mode '" + c.mode + "' not valid for " + c.command);
  if (c.format == "csv" && !(c.command == "decay" || (c.command == "entropy" && c.action == "scan"))) {
    invalid("csv format is available for decay and entropy scan");
  }
}

ExperimentConfig config_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const ordered_json::exception& e) {
    invalid(std::string("config JSON parse error: ") + e.what());
  }
  if (!j.is_object()) invalid("config must be a JSON object");
  ExperimentConfig c;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "command") c.command = v.get<std::string>();
      else if (key == "action") c.action = v.get<std::string>();
      else if (key == "channel") c.channel = v.get<std::string>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "samples") c.samples = v.get<std::size_t>();
      else if (key == "n_max") c.n_max = v.get<int>();
      else if (key == "atom_cap") c.atom_cap = v.get<std::size_t>();
      else if (key == "pairs") c.pairs = v.get<std::size_t>();
      else if (key == "j_max") c.j_max = v.get<int>();
      else if (key == "trials") c.trials = v.get<int>();
      else if (key == "m") c.m = v.get<int>();
      else if (key == "mode") c.mode = v.get<std::string>();
      else if (key == "phi") c.phi = v.get<std::string>();
      else if (key == "psi") c.psi = v.get<std::string>();
      else if (key == "g") c.g = v.get<std::string>();
      else if (key == "rho") c.rho = v.get<std::string>();
      else if (key == "povm") c.povm = v.get<std::string>();
      else if (key == "witness_panel") c.witness_panel = v.get<std::string>();
      else if (key == "cone_a") c.cone_a = v.get<double>();
      else if (key == "cone_nu") c.cone_nu = v.get<double>();
      else if (key == "cone_delta0") c.cone_delta0 = v.get<double>();
      else if (key == "metric") c.metric = v.get<std::string>();
      else if (key == "dim") c.dim = v.get<int>();
      else if (key == "k") c.k = v.get<int>();
      else if (key == "threads") c.threads = v.get<int>();
      else if (key == "output") c.output = v.get<std::string>();
      else if (key == "format") c.format = v.get<std::string>();
      else if (key == "csv") c.csv = v.get<std::string>();
      else if (key == "dump_measure") c.dump_measure = v.get<std::string>();
      else invalid("unknown config key: " + key);
    }
  } catch (const ordered_json::exception& e) {
    invalid(std::string("config value has the wrong type: ") + e.what());
  }
  return c;
}

std::string config_to_json(const ExperimentConfig& c) {
  ordered_json j;
  j["command"] = c.command;
  if (!c.action.empty()) j["action"] = c.action;
  j["channel"] = c.channel;
  if (c.seed) j["seed"] = *c.seed;
  if (c.samples) j["samples"] = *c.samples;
  if (c.n_max) j["n_max"] = *c.n_max;
  if (c.atom_cap) j["atom_cap"] = *c.atom_cap;
  if (c.pairs) j["pairs"] = *c.pairs;
  j["j_max"] = c.j_max;
  j["trials"] = c.trials;
  j["m"] = c.m;
  j["mode"] = c.mode;
  j["phi"] = c.phi;
  j["psi"] = c.psi;
  j["g"] = c.g;
  j["rho"] = c.rho;
  j["povm"] = c.povm;
  j["witness_panel"] = c.witness_panel;
  j["cone_a"] = c.cone_a;
  j["cone_nu"] = c.cone_nu;
  j["cone_delta0"] = c.cone_delta0;
  j["metric"] = c.metric;
  j["dim"] = c.dim;
  j["k"] = c.k;
  j["format"] = c.format;
  return j.dump();
}

}  // namespace rcl::cli
