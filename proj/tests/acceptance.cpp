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

// Acceptance run: one PASS/FAIL line per top-level criterion. Expected
// values come from the brute-force oracles in oracle.hpp, never from the
// code under test. Exit status is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "oracle.hpp"
#include "tcpa/bench.hpp"
#include "tcpa/pipeline.hpp"

namespace {

using namespace tcpa;
using model::LoopProgram;
using poly::DomainUnion;
using poly::Int;
using poly::IntVec;
using poly::Polyhedron;
using poly::ScanBox;

// Pinned budgets and sizes.
constexpr int kFuzzPrograms = 200;
constexpr double kEndToEndBudgetSeconds = 300.0;
constexpr double kCompileBudgetSeconds = 60.0;
constexpr std::size_t kMaxUnifiedAtScale = 32;
constexpr int kDelayStreams = 10000;
constexpr std::size_t kDelayWidth = 18;
constexpr Int kDelayTail = 256;  // cycles past the latency per stream
const std::vector<Int> kLatencies = {0, 1, 151, 643, 4096};

struct Case {
  std::string name;
  LoopProgram program;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<Case> desk_benchmarks() {
  std::vector<Case> out;
  for (const auto& name : bench::kernel_names()) out.push_back({name, bench::generate({name, 8, 4, 4})});
  return out;
}

std::vector<Case> fuzz_programs() {
  testing::Random rnd(20240601);
  std::vector<Case> out;
  for (int i = 0; i < kFuzzPrograms; ++i) out.push_back({"fuzz" + std::to_string(i), rnd.program(3)});
  return out;
}

// Expected issues straight from the domains: equation i runs in extended
// position pos if its source iteration pos - tau/II is in its domain.
sim::ExecTrace oracle_trace(const LoopProgram& p) {
  const ScanBox box = p.intra_box();
  sim::ExecTrace t;
  for (const auto& tile : p.tiles()) {
    for (int fu = 0; fu < p.fu_count(); ++fu) t[tile][fu];
    for (Int pos = 0; pos < box.base_positions() + p.epilog(); ++pos) {
      for (std::size_t i = 0; i < p.equations.size(); ++i) {
        if (!testing::issues_at(p, tile, i, pos)) continue;
        const auto& e = p.equations[i];
        t[tile][e.fu].push_back({p.pe_delay(tile) + pos * p.ii + e.tau % p.ii, e.id, e.opcode});
      }
    }
    for (auto& [fu, is] : t[tile])
      std::stable_sort(is.begin(), is.end(), [](const sim::Issue& a, const sim::Issue& b) { return a.cycle < b.cycle; });
  }
  return t;
}

struct Verdict {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

void print(const char* criterion, const Verdict& v, const std::string& summary) {
  std::cout << (v.ok ? "PASS " : "FAIL ") << criterion << ": " << (v.ok ? summary : v.detail) << std::endl;
}

// --- Criteria -----------------------------------------------------------------

Verdict end_to_end(const std::vector<Case>& cases, double& elapsed) {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& c : cases) {
    const auto compiled = pipeline::compile(c.program);
    const auto want = oracle_trace(c.program);
    if (sim::reference_interpret(c.program) != want) v.fail(c.name + ": reference interpreter disagrees with oracle");
    for (auto model : {sim::DelayModel::kShiftRegister, sim::DelayModel::kTimestampFifo}) {
      const auto got = sim::run_array(c.program, compiled.gc, compiled.memories, {.delay = model});
      if (got != want) v.fail(c.name + ": " + pipeline::first_difference(got, want, c.program));
    }
  }
  elapsed = seconds_since(t0);
  if (elapsed >= kEndToEndBudgetSeconds) v.fail("took " + std::to_string(elapsed) + " s");
  return v;
}

Verdict soundness(const std::vector<Case>& cases) {
  Verdict v;
  for (const auto& c : cases) {
    const auto compiled = pipeline::compile(c.program);
    const auto points = testing::scanned_points(compiled.box);
    for (const auto& cond : compiled.conditions) {
      const auto b = compiled.reduction.binding.at(cond.id);
      const auto& signal = compiled.reduction.unified.at(static_cast<std::size_t>(b.signal));
      for (const auto& j : points) {
        const bool in_one = testing::in_union(cond.one, j);
        const bool in_zero = testing::in_union(cond.zero, j);
        if (!in_one && !in_zero) continue;
        const bool value = testing::in_union(signal.one, j) != b.negative;
        if (value != in_one) {
          std::ostringstream os;
          os << c.name << ": condition " << cond.id << " at (";
          for (std::size_t d = 0; d < j.size(); ++d) os << (d ? "," : "") << j[d];
          os << ")";
          v.fail(os.str());
        }
      }
    }
  }
  return v;
}

Verdict fidelity() {
  Verdict v;
  poly::PointSpace space(ScanBox({4, 4}));
  auto cond = [](int id, DomainUnion zero, DomainUnion one) {
    alloc::ControlCondition c;
    c.id = id;
    c.zero = std::move(zero);
    c.one = std::move(one);
    return c;
  };
  const Polyhedron P(2);

  // Chain: c2 covers c1 and is then itself covered by c3; both evicted
  // conditions must end up on c3's signal, c1 through c2's binding.
  auto c1 = cond(0, Polyhedron(P).equal(0, 0), Polyhedron(P).equal(0, 3));
  auto c2 = cond(1, Polyhedron(P).upper(0, 1), Polyhedron(P).equal(0, 3));
  auto c3 = cond(2, Polyhedron(P).upper(0, 1), Polyhedron(P).lower(0, 2));
  auto pr = reduce::prime_filter({c1, c2, c3}, space);
  if (pr.prime.size() != 1 ||
      testing::member_positions(pr.prime[0].one, space.box()) != testing::member_positions(c3.one, space.box()) ||
      testing::member_positions(pr.prime[0].zero, space.box()) != testing::member_positions(c3.zero, space.box()))
    v.fail("chain: expected only c3 to stay prime");
  for (int id = 0; id < 3; ++id)
    if (!(pr.binding.at(id) == reduce::Binding{0, false})) v.fail("chain: condition " + std::to_string(id) + " not bound to c3");

  // Same chain with c3 inverted: the eviction must carry the polarity.
  auto c3n = c3;
  std::swap(c3n.zero, c3n.one);
  auto c1n = cond(0, Polyhedron(P).equal(0, 3), Polyhedron(P).equal(0, 0));
  pr = reduce::prime_filter({c1n, c2, c3n}, space);
  if (pr.prime.size() != 1 || !(pr.binding.at(1) == reduce::Binding{0, true}) ||
      !(pr.binding.at(0) == reduce::Binding{0, false}))
    v.fail("chain with inversion: wrong polarity composition");

  // The three-condition example on the quadrants a, b, c, d of the tile.
  const Polyhedron qa = Polyhedron(P).upper(0, 1).upper(1, 1);
  const Polyhedron qb = Polyhedron(P).lower(0, 2).upper(1, 1);
  const Polyhedron qc = Polyhedron(P).upper(0, 1).lower(1, 2);
  const Polyhedron qd = Polyhedron(P).lower(0, 2).lower(1, 2);
  std::vector<alloc::ControlCondition> triple = {cond(0, DomainUnion(2, {qa, qc}), qb),
                                                 cond(1, qb, DomainUnion(2, {qa, qd})), cond(2, qc, qd)};
  std::vector<int> order = {0, 1, 2};
  do {
    std::vector<alloc::ControlCondition> in;
    for (int k : order) in.push_back(triple[static_cast<std::size_t>(k)]);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      auto r = reduce::unify_greedy(in, reduce::kDefaultTries, seed, space);
      if (r.unified.size() < 2) v.fail("triple unified into one condition");
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return v;
}

Verdict monotone(const std::vector<Case>& cases, double& compile_seconds, std::size_t& worst) {
  Verdict v;
  for (const auto& c : cases) {
    const auto r = pipeline::compile(c.program).report;
    if (!(r.unified <= r.prime && r.prime <= r.conditions)) v.fail(c.name + ": counts not monotone");
  }
  const auto t0 = std::chrono::steady_clock::now();
  worst = 0;
  for (const auto& name : bench::kernel_names()) {
    const auto r = pipeline::compile(bench::generate({name, 20, 4, 4})).report;
    worst = std::max(worst, r.unified);
    if (!(r.unified <= r.prime && r.prime <= r.conditions)) v.fail(name + "@20: counts not monotone");
    if (r.unified > kMaxUnifiedAtScale) v.fail(name + "@20: " + std::to_string(r.unified) + " unified conditions");
  }
  compile_seconds = seconds_since(t0);
  if (compile_seconds >= kCompileBudgetSeconds) v.fail("n=20 compile took " + std::to_string(compile_seconds) + " s");
  return v;
}

Verdict gc_exact(const std::vector<Case>& cases) {
  Verdict v;
  for (const auto& c : cases) {
    const auto compiled = pipeline::compile(c.program);
    const auto points = testing::scanned_points(compiled.box);
    const Int ii = c.program.ii;
    const auto trace = sim::run_gc(compiled.gc, static_cast<Int>(points.size()) * ii);
    for (std::size_t t = 0; t < trace.signals.size(); ++t) {
      const auto& j = points[t / static_cast<std::size_t>(ii)];
      for (std::size_t s = 0; s < compiled.reduction.unified.size(); ++s)
        if (trace.signals[t].test(s) != testing::in_union(compiled.reduction.unified[s].one, j))
          v.fail(c.name + ": signal " + std::to_string(s) + " at cycle " + std::to_string(t));
    }
    for (std::size_t pos = 0; pos < points.size(); ++pos) {
      std::size_t k = 0;
      for (const auto& e : compiled.gc.evaluators) {
        if (e.kind != gcmap::EvalKind::kAffine) continue;
        if (trace.accumulators[pos][k++] != poly::dot(e.weights, points[pos]))
          v.fail(c.name + ": accumulator at position " + std::to_string(pos));
      }
    }
  }
  return v;
}

Verdict delay_equivalence() {
  Verdict v;
  testing::Random rnd(4096);
  for (Int latency : kLatencies) {
    for (int s = 0; s < kDelayStreams; ++s) {
      const double p = rnd.coin() ? 0.5 : (rnd.coin() ? 0.02 : 0.98);
      const auto len = static_cast<std::size_t>(latency + kDelayTail);
      std::vector<poly::PointSet> in(len, poly::PointSet(kDelayWidth));
      for (auto& b : in)
        for (std::size_t k = 0; k < kDelayWidth; ++k) b[k] = rnd.coin(p);
      sim::DelayElement sr(sim::DelayModel::kShiftRegister, latency, kDelayWidth);
      sim::DelayElement ff(sim::DelayModel::kTimestampFifo, latency, kDelayWidth);
      for (std::size_t t = 0; t < len; ++t) {
        const auto a = sr.step(in[t]);
        const auto b = ff.step(in[t]);
        const auto want = t < static_cast<std::size_t>(latency) ? poly::PointSet(kDelayWidth)
                                                                : in[t - static_cast<std::size_t>(latency)];
        if (a != b || a != want) {
          v.fail("latency " + std::to_string(latency) + ", stream " + std::to_string(s) + ", cycle " +
                 std::to_string(t));
          break;
        }
      }
      if (!v.ok) return v;
    }
  }
  return v;
}

// Expected instruction count of a block: its busy slots plus one control
// instruction when the block starts with a NOP.
int block_instrs(const alloc::ProgramBlock& b) {
  int n = 0;
  for (int s : b.slots) n += s != alloc::kNop;
  return n + (b.slots.front() == alloc::kNop);
}

Verdict wait_compression(const std::vector<Case>& cases) {
  Verdict v;
  for (const auto& c : cases) {
    const auto compiled = pipeline::compile(c.program);
    const auto& m = compiled.memories;
    if (c.program.ii == 1 && m.waits != 0) v.fail(c.name + ": II = 1 but " + std::to_string(m.waits) + " waits");
    // Uncompressed size and instruction count per distinct program, from
    // the graphs alone.
    std::vector<int> slots(m.programs.size(), -1), instrs(m.programs.size(), 0);
    for (const auto& g : compiled.graphs) {
      const auto idx = static_cast<std::size_t>(m.program_of.at(g.tile).at(g.fu));
      if (slots[idx] >= 0) continue;
      slots[idx] = static_cast<int>(g.nodes.size() * static_cast<std::size_t>(c.program.ii));
      for (const auto& node : g.nodes) instrs[idx] += block_instrs(g.blocks[static_cast<std::size_t>(node.block)]);
    }
    int total_slots = 0, total_instrs = 0;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      total_slots += slots[i];
      total_instrs += instrs[i];
    }
    if (m.instrs != total_instrs) v.fail(c.name + ": instruction count differs from block oracle");
    if (m.instrs + m.waits != total_slots)
      v.fail(c.name + ": " + std::to_string(m.instrs) + " instrs + " + std::to_string(m.waits) + " waits != " +
             std::to_string(total_slots) + " slots");
  }
  return v;
}

Verdict determinism(const std::vector<Case>& cases) {
  Verdict v;
  auto artifacts = [](const LoopProgram& p) {
    const auto c = pipeline::compile(p, {.seed = 42});
    return pipeline::to_json(c.report).dump(1) + gcmap::to_json(c.gc).dump(1) + sim::to_json(c.memories).dump(1) +
           pipeline::report_table({{"x", c.report}});
  };
  for (const auto& c : cases)
    if (artifacts(c.program) != artifacts(c.program)) v.fail(c.name + ": artifacts differ between runs");
  return v;
}

}  // namespace

int main() {
  const auto bench_cases = desk_benchmarks();
  auto all_cases = bench_cases;
  for (auto& c : fuzz_programs()) all_cases.push_back(std::move(c));

  int failed = 0;
  auto run = [&](const char* name, const std::function<std::pair<Verdict, std::string>()>& f) {
    Verdict v;
    std::string summary;
    try {
      std::tie(v, summary) = f();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    print(name, v, summary);
    failed += !v.ok;
  };

  run("end-to-end trace equality", [&] {
    double s = 0;
    Verdict v = end_to_end(all_cases, s);
    char buf[128];
    std::snprintf(buf, sizeof buf, "6 benchmarks + %d fuzzed programs, both delay models, %.1f s", kFuzzPrograms, s);
    return std::make_pair(v, std::string(buf));
  });
  run("reduction soundness", [&] {
    return std::make_pair(soundness(all_cases), std::string("exhaustive over every zero/one point"));
  });
  run("algorithm fidelity", [&] {
    return std::make_pair(fidelity(), std::string("chain eviction reproduced; triple never below 2 signals"));
  });
  run("monotonic reduction", [&] {
    double s = 0;
    std::size_t worst = 0;
    Verdict v = monotone(all_cases, s, worst);
    char buf[128];
    std::snprintf(buf, sizeof buf, "max |C_unified| at n=20 is %zu, six compiles in %.1f s", worst, s);
    return std::make_pair(v, std::string(buf));
  });
  run("gc exactness", [&] {
    return std::make_pair(gc_exact(all_cases), std::string("signals and affine accumulators at every position"));
  });
  run("delay equivalence", [&] {
    return std::make_pair(delay_equivalence(),
                          std::to_string(kDelayStreams) + " streams per latency in {0, 1, 151, 643, 4096}");
  });
  run("wait compression", [&] {
    return std::make_pair(wait_compression(all_cases), std::string("II=1 has no waits; instrs + waits == slots"));
  });
  run("determinism", [&] {
    return std::make_pair(determinism(all_cases), std::string("identical artifacts for identical seeds"));
  });
  return failed;
}
