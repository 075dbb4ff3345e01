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

// File formats of the command-line tool: channel and observable JSON, state
// specs and the measure dump CSV.

#ifndef RCL_CLI_IO_HPP
#define RCL_CLI_IO_HPP

#include <iosfwd>
#include <string>
#include <string_view>

#include "rcl/channels.hpp"
#include "rcl/entropy.hpp"
#include "rcl/measures.hpp"
#include "rcl/observable.hpp"

namespace rcl::cli {

/// {"n": 2, "kind": "mixed_unitary" | "nonlinear" | "kraus",
///  "branches": [{"p": 0.5, "U": [[re, im], ...]}, {"Q": ..., "U": ...}, {"V": ...}]}
/// with matrices row-major. Throws Error(invalid_channel) on malformed input.
Channel parse_channel_json(std::string_view text);
std::string channel_to_json(const Channel& channel);

/// A path to a channel JSON file, or a named channel spec.
Channel load_channel(const std::string& source);

/// {"elements": [[[re, im], ...], ...]} row-major, or a path to such a file.
PovmSet load_povm(const std::string& source, Eigen::Index n);

/// "constant:c", "trace", "purity", "entry:i:j[:im]", "linear:pauli:k",
/// "linear:diag:a,b,...", "frobenius_dist[:<state>]",
/// "exp_neg_dist:scale[:<state>]", "exp_linear:pauli:k:b", or a JSON file
/// {"kind": ..., "A" | "sigma": matrix, "scale" | "b": number}.
Observable parse_observable(const std::string& spec, Eigen::Index n);

/// "mixed", "basis:k", "plus", "pure:seed", "hs:seed" or a JSON matrix file.
DensityMatrix parse_state(const std::string& spec, Eigen::Index n);

/// atom_index,weight,re00,im00,re01,im01,... (row-major).
void write_measure_csv(std::ostream& out, const EmpiricalMeasure& mu);
EmpiricalMeasure read_measure_csv(std::istream& in, Eigen::Index n);

}  // namespace rcl::cli

#endif  // RCL_CLI_IO_HPP
