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

#ifndef RCL_PARALLEL_HPP
#define RCL_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace rcl {

/// Worker threads used by parallel_for. Resolution order: set_thread_count,
/// the RCL_THREADS environment variable, hardware concurrency.
int thread_count();

/// 0 restores automatic resolution.
void set_thread_count(int n);

/// Calls fn(i) for every i in [0, count). Work items must only write to
/// their own output slot; callers reduce the slots in index order so that
/// results do not depend on the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

/// Default number of samples per independently seeded work item.
inline constexpr std::size_t kChunkSize = 512;

}  // namespace rcl

#endif  // RCL_PARALLEL_HPP
