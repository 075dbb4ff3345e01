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

#ifndef RCL_ERRORS_HPP
#define RCL_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace rcl {

enum class ErrorCode {
  invalid_argument,
  not_hermitian,
  invalid_state,
  convergence_failure,
  dimension_mismatch,
  nonlinear_channel_unsupported,
  no_fixed_density_found,
  invalid_probability_vector,
  invalid_channel,
  exact_budget_exceeded,
  budget_exceeded,
  probability_on_boundary,
  negative_argument,
  invalid_povm,
  branch_count_mismatch,
  not_positive_definite,
  non_positive_function_value,
  insufficient_points,
  non_positive_values,
  barycenter_mismatch,
  config_invalid,
};

std::string_view error_code_name(ErrorCode code) noexcept;

/// Single exception type for the library; callers dispatch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rcl

#endif  // RCL_ERRORS_HPP
