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

// Cycle-level models of the global controller, the per-PE signal delay and
// the per-FU instruction sequencer, plus a direct interpreter that ignores
// all control machinery and serves as the reference.

#ifndef TCPA_SIM_HPP_
#define TCPA_SIM_HPP_

#include <deque>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "tcpa/alloc.hpp"
#include "tcpa/gcmap.hpp"
#include "tcpa/model.hpp"
#include "tcpa/reduce.hpp"

namespace tcpa::sim {

using model::LoopProgram;
using model::Tile;
using poly::Int;
using poly::IntVec;
using poly::PointSet;

// --- Global controller ----------------------------------------------------

struct ControlTrace {
  std::vector<PointSet> signals;  // per cycle, one bit per signal
  std::vector<Int> position;      // per cycle, scan position
  std::vector<bool> update;       // per cycle
  std::vector<int> step;          // per cycle, -1 unless update
  /// Per position, the accumulator of every AFFINE evaluator (in evaluator
  /// order, other kinds skipped) as seen during that position.
  std::vector<IntVec> accumulators;

  std::string csv() const;
};

/// Throws kSimulation if the horizon cannot cover the scan.
ControlTrace run_gc(const gcmap::GcConfig& cfg, Int horizon);

// --- Delay network --------------------------------------------------------

enum class DelayModel { kShiftRegister, kTimestampFifo };

inline constexpr std::size_t kDefaultFifoDepth = 4096;

/// Delays a bit vector by exactly `latency` cycles; outputs 0 before the
/// first input arrives. The FIFO model stores the cycle of every transition
/// per signal instead of every bit.
class DelayElement {
 public:
  DelayElement(DelayModel model, Int latency, std::size_t width,
               std::size_t fifo_depth = kDefaultFifoDepth);

  PointSet step(const PointSet& in);
  std::vector<PointSet> run(const std::vector<PointSet>& in);

 private:
  DelayModel model_;
  Int latency_;
  std::size_t width_;
  std::size_t depth_;
  Int now_ = 0;
  std::deque<PointSet> shift_;
  std::vector<std::deque<Int>> fifo_;
  PointSet last_in_;
  PointSet out_;
};

// --- Instruction memories -------------------------------------------------

struct Instruction {
  int eq = alloc::kNop;  // kNop for a pure control instruction
  std::string tag;
  int bt0 = 0;
  int bt1 = 0;
  int cs = -1;  // signal index, -1 when bt0 == bt1
  Int wait = 0;

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

using Program = std::vector<Instruction>;

struct Memories {
  std::map<Tile, std::map<int, int>> program_of;  // tile -> fu -> program index
  std::vector<Program> programs;                  // distinct programs
  int instrs = 0;   // summed over distinct programs
  int waits = 0;    // NOP cycles folded into wait fields
  int mem = 0;      // longest program
  int slots = 0;    // II times node count, summed over distinct programs

  const Program& program(const Tile& t, int fu) const;
};

/// Lays out every graph (entry node at address 0) and binds each branch to
/// its signal; a negative binding swaps bt0 and bt1.
Memories assemble(const std::vector<alloc::ControlGraph>& graphs, const reduce::SignalBinding& binding,
                  Int ii);

nlohmann::json to_json(const Memories& m);

// --- Array ----------------------------------------------------------------

struct Issue {
  Int cycle = 0;
  int eq = 0;
  std::string tag;

  friend bool operator==(const Issue&, const Issue&) = default;
};

/// tile -> fu -> issued non-NOP instructions in cycle order.
using ExecTrace = std::map<Tile, std::map<int, std::vector<Issue>>>;

std::string dump(const ExecTrace& t);

struct ArrayOptions {
  DelayModel delay = DelayModel::kShiftRegister;
  std::size_t fifo_depth = kDefaultFifoDepth;
  Int horizon = 0;  // 0: default_horizon(p)
};

/// (P+E)·II + max PE delay + L_local.
Int default_horizon(const LoopProgram& p);

ExecTrace run_array(const LoopProgram& p, const gcmap::GcConfig& cfg, const Memories& mem,
                    const ArrayOptions& opt = {});

/// Issues every active equation at delay(PE) + pos·II + (tau mod II),
/// evaluating the original domains directly.
ExecTrace reference_interpret(const LoopProgram& p);

}  // namespace tcpa::sim

#endif  // TCPA_SIM_HPP_
