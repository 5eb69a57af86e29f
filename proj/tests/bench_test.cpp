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

#include "tcpa/bench.hpp"

#include <gtest/gtest.h>

#include <map>
#include <set>

#include "oracle.hpp"
#include "tcpa/error.hpp"
#include "tcpa/pipeline.hpp"

namespace tcpa::bench {
namespace {

using model::LoopProgram;
using poly::Int;

// Iterations of equation `op` summed over all tiles, by enumeration.
Int executions(const LoopProgram& p, const std::string& op) {
  const auto box = p.intra_box();
  Int total = 0;
  for (std::size_t i = 0; i < p.equations.size(); ++i) {
    if (p.equations[i].opcode != op) continue;
    for (const auto& t : p.tiles())
      for (const auto& j : testing::scanned_points(box)) total += testing::in_union(p.domain(t, i), j);
  }
  return total;
}

KernelSpec spec(const std::string& name, Int n, int grid = 4) {
  KernelSpec s;
  s.name = name;
  s.n = n;
  s.rows = s.cols = grid;
  return s;
}

bool uses_affine(const pipeline::Compiled& c) { return c.report.usage.afs > 0; }

TEST(BenchTest, AllKernelsValidateAtDeskScale) {
  for (const auto& name : kernel_names()) {
    LoopProgram p = generate(spec(name, 8));
    EXPECT_NO_THROW(model::validate(p)) << name;
    EXPECT_EQ(p.pe_rows, 4);
    EXPECT_EQ(p.pe_cols, 4);
  }
}

TEST(BenchTest, GemmIsUnitIntervalWithoutWaits) {
  LoopProgram p = generate(spec("gemm", 8));
  EXPECT_EQ(p.ii, 1);
  EXPECT_EQ(model::compute_stats(p).overlap_depth, 10);
  EXPECT_EQ(pipeline::compile(p).report.waits, 0);
}

TEST(BenchTest, LuIsNotPipelined) {
  LoopProgram p = generate(spec("lu", 8));
  auto st = model::compute_stats(p);
  EXPECT_EQ(st.local_latency, 29);
  EXPECT_EQ(p.ii, 29);
  EXPECT_EQ(st.overlap_depth, 1);
  std::set<Int> taus;
  for (const auto& e : p.equations) taus.insert(e.tau);
  EXPECT_EQ(taus, (std::set<Int>{0, 2, 12, 18, 28}));
}

TEST(BenchTest, TriangularKernelsNeedAffineEvaluators) {
  for (const char* name : {"lu", "trsm"}) EXPECT_TRUE(uses_affine(pipeline::compile(generate(spec(name, 8))))) << name;
  for (const char* name : {"gemm", "atax", "mvt", "gesummv"})
    EXPECT_FALSE(uses_affine(pipeline::compile(generate(spec(name, 8))))) << name;
}

TEST(BenchTest, IterationCountsMatchLoopBounds) {
  // Uneven tilings (10 over 4) included: the idle tail must not execute.
  for (Int n : {8, 10}) {
    LoopProgram gemm = generate(spec("gemm", n));
    EXPECT_EQ(executions(gemm, "mul"), n * n * n);
    EXPECT_EQ(executions(gemm, "ld_a"), n * n);
    EXPECT_EQ(executions(gemm, "st_c"), n * n);

    LoopProgram trsm = generate(spec("trsm", n));
    EXPECT_EQ(executions(trsm, "mul"), n * n * (n - 1) / 2);
    EXPECT_EQ(executions(trsm, "div"), n * n);

    LoopProgram lu = generate(spec("lu", n));
    Int update = 0, pivots = 0;
    for (Int k = 0; k < n; ++k) {
      update += (n - k - 1) * (n - k - 1);
      pivots += n - k - 1;
    }
    EXPECT_EQ(executions(lu, "mul"), update);
    EXPECT_EQ(executions(lu, "div"), pivots);
    // Every element is final exactly once.
    EXPECT_EQ(executions(lu, "st_a"), n * n);

    for (const char* name : {"atax", "mvt", "gesummv"}) {
      LoopProgram p = generate(spec(name, n));
      EXPECT_EQ(executions(p, p.equations[0].opcode) + executions(p, p.equations[1].opcode), n * n) << name;
    }
  }
}

TEST(BenchTest, DegenerateSinglePe) {
  LoopProgram p = generate(spec("mvt", 4, 1));
  EXPECT_TRUE(p.tile_overrides.empty());
  EXPECT_TRUE(pipeline::verify(pipeline::compile(p)).ok());
}

TEST(BenchTest, EveryKernelVerifiesInBothModes) {
  for (auto mode : {ScheduleMode::kBuiltin, ScheduleMode::kHelper}) {
    for (const auto& name : kernel_names()) {
      KernelSpec s = spec(name, 8);
      s.mode = mode;
      auto r = pipeline::verify(pipeline::compile(generate(s)));
      for (const auto& chk : r.checks) EXPECT_TRUE(chk.ok) << name << ": " << chk.name << ": " << chk.detail;
    }
  }
}

TEST(BenchTest, HelperModeUsesFeasibleInterval) {
  KernelSpec s = spec("gemm", 8);
  s.mode = ScheduleMode::kHelper;
  LoopProgram p = generate(s);
  EXPECT_EQ(p.ii, 2);  // two equations share fu 0
  for (const auto& e : p.equations) EXPECT_LT(e.tau, p.ii);
  s.ii = 1;
  try {
    generate(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInfeasible);
  }
}

TEST(BenchTest, RejectsBadSpecs) {
  EXPECT_THROW(generate(spec("fft", 8)), Error);
  EXPECT_THROW(generate(spec("gemm", 3)), Error);
  EXPECT_THROW(generate(spec("gemm", 0, 1)), Error);
}

TEST(BenchTest, GenerationIsDeterministic) {
  for (const auto& name : kernel_names())
    EXPECT_EQ(model::print_program(generate(spec(name, 8))), model::print_program(generate(spec(name, 8))));
}

TEST(BenchTest, FilesRoundTrip) {
  for (const auto& name : kernel_names()) {
    LoopProgram p = generate(spec(name, 8));
    EXPECT_EQ(model::parse_program(model::print_program(p)), p) << name;
  }
}

}  // namespace
}  // namespace tcpa::bench
