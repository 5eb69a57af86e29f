// Copyright 2026 The tcpa-loopctl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// PolyBench-style kernels written as equations over the global iteration
// space, then partitioned: loop dimensions 0 and 1 are split into
// ceil(n / grid) sized tiles, one per PE.

#ifndef TCPA_BENCH_HPP_
#define TCPA_BENCH_HPP_

#include <string>
#include <vector>

#include "tcpa/model.hpp"

namespace tcpa::bench {

enum class ScheduleMode { kBuiltin, kHelper };

struct KernelSpec {
  std::string name = "gemm";
  poly::Int n = 8;
  int rows = 4;
  int cols = 4;
  poly::Int ii = 0;  // 0: the kernel's own II (builtin) or the smallest feasible one (helper)
  ScheduleMode mode = ScheduleMode::kBuiltin;
};

const std::vector<std::string>& kernel_names();

/// Throws kValidation for unknown kernels or a grid larger than n, and
/// kInfeasible when helper scheduling cannot fit the given II.
model::LoopProgram generate(const KernelSpec& spec);

}  // namespace tcpa::bench

#endif  // TCPA_BENCH_HPP_
