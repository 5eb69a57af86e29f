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

// model -> alloc -> reduce -> gcmap -> assemble, the checks that tie the
// result back to the input program, and the statistics report.

#ifndef TCPA_PIPELINE_HPP_
#define TCPA_PIPELINE_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "tcpa/alloc.hpp"
#include "tcpa/gcmap.hpp"
#include "tcpa/model.hpp"
#include "tcpa/reduce.hpp"
#include "tcpa/sim.hpp"

namespace tcpa::pipeline {

struct CompileOptions {
  int tries = reduce::kDefaultTries;
  std::uint64_t seed = 0;
  gcmap::Capacities capacities;
  /// Fault injection: invert the polarity bound to this original condition.
  int flip_condition = -1;
};

struct Report {
  poly::Int ii = 0;
  poly::Int local_latency = 0;
  poly::Int max_delay = 0;
  int blocks = 0;  // distinct program blocks over all PEs and FUs
  std::size_t conditions = 0;
  std::size_t prime = 0;
  std::size_t unified = 0;
  int programs = 0;
  int instrs = 0;
  int waits = 0;
  int mem = 0;
  gcmap::Usage usage;
  double factor_prime = 1.0;
  double factor_unified = 1.0;
  double factor_total = 1.0;
};

struct Compiled {
  model::LoopProgram program;
  poly::ScanBox box;  // with epilog
  std::vector<alloc::ControlGraph> graphs;  // (tile, fu) order
  std::vector<alloc::ControlCondition> conditions;
  reduce::UnifyResult reduction;
  gcmap::GcConfig gc;
  sim::Memories memories;
  Report report;
};

Compiled compile(const model::LoopProgram& p, const CompileOptions& opt = {});

struct CheckResult {
  std::string name;
  bool ok = true;
  std::string detail;  // counterexample on failure
};

struct VerifyResult {
  std::vector<CheckResult> checks;
  bool ok() const;
};

/// Reduction soundness, GC exactness (signals and accumulators), delay
/// model equivalence, graph replay and end-to-end trace equality.
VerifyResult verify(const Compiled& c, const sim::ArrayOptions& opt = {});

/// First difference between two traces as "tile, fu, cycle" text.
std::string first_difference(const sim::ExecTrace& got, const sim::ExecTrace& want,
                             const model::LoopProgram& p);

nlohmann::json to_json(const Report& r);
Report report_from_json(const nlohmann::json& j);
/// Aligned table, one row per named report, columns in a fixed order.
std::string report_table(const std::vector<std::pair<std::string, Report>>& rows);

}  // namespace tcpa::pipeline

#endif  // TCPA_PIPELINE_HPP_
