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

// Control allocation front half: overlapping iterations are folded into one
// II-cycle window by shifting condition spaces along the scan, each FU's
// per-position slot vector becomes a program block, and the block sequence
// becomes a control graph whose branches are binary control conditions.

#ifndef TCPA_ALLOC_HPP_
#define TCPA_ALLOC_HPP_

#include <optional>
#include <string>
#include <vector>

#include "tcpa/model.hpp"
#include "tcpa/poly.hpp"

namespace tcpa::alloc {

using model::LoopProgram;
using model::Tile;
using poly::DomainUnion;
using poly::Int;
using poly::PointSet;
using poly::PointSpace;
using poly::ScanBox;

inline constexpr int kNop = -1;

struct ShiftedEquation {
  int id = 0;
  int fu = 0;
  std::string opcode;
  Int shift = 0;  // floor(tau / II) scan positions
  Int tau = 0;    // tau mod II
  DomainUnion domain;
  PointSet points;  // scanned positions of `domain`
};

struct OverlapResult {
  std::vector<ShiftedEquation> equations;  // program order
  Int epilog = 0;
};

/// Shifts every equation of `tile` into the first II cycles of some later
/// iteration. `space` must be built on intra_box().with_epilog(p.epilog()).
/// Re-runs the slot check on the shifted domains.
OverlapResult resolve_overlaps(const LoopProgram& p, const Tile& tile, PointSpace& space);
OverlapResult resolve_overlaps(const LoopProgram& p, const Tile& tile = {});

struct ProgramBlock {
  int id = 0;
  int fu = 0;
  std::vector<int> slots;  // equation id or kNop, length II
  std::vector<std::string> tags;  // opcode or "NOP"

  bool all_nop() const;
  friend bool operator==(const ProgramBlock&, const ProgramBlock&) = default;
};

struct FuBlocks {
  int fu = 0;
  std::vector<ProgramBlock> blocks;     // id == index, numbered by first use
  std::vector<int> block_of_position;  // over the extended scan
};

/// One entry per FU in 0..fu_count-1.
std::vector<FuBlocks> extract_blocks(const OverlapResult& shifted, Int ii, int fu_count,
                                     const ScanBox& box);

struct ControlCondition {
  int id = 0;
  DomainUnion zero;
  DomainUnion one;
  Tile tile;
  int fu = 0;
  int node = 0;
};

struct Edge {
  int to = 0;
  DomainUnion guard;  // source iterations taking this edge
  PointSet points;
};

struct Node {
  int id = 0;
  int block = 0;
  DomainUnion domain;
  PointSet points;
  std::vector<Edge> out;  // ordered by smallest guarded position
  /// Present iff the node has two successors: zero = out[0], one = out[1].
  std::optional<ControlCondition> condition;
};

struct ControlGraph {
  Tile tile;
  int fu = 0;
  std::vector<ProgramBlock> blocks;
  std::vector<Node> nodes;
  int entry = 0;
  std::vector<int> node_of_position;
};

/// Builds the graph and clones nodes until no node has more than two
/// successors. Domains are derived from the shifted equation domains so
/// triangular conditions stay affine.
ControlGraph build_graph(const FuBlocks& blocks, const OverlapResult& shifted, const Tile& tile,
                         PointSpace& space);

/// All conditions of all graphs, renumbered 0..n-1 in (graph, node) order.
std::vector<ControlCondition> harvest_conditions(std::vector<ControlGraph>& graphs);

/// Per-position replay of a graph: edges are chosen by evaluating the
/// conditions on the scanned point. Returns the visited block per position.
std::vector<int> replay(const ControlGraph& g, const PointSpace& space);

}  // namespace tcpa::alloc

#endif  // TCPA_ALLOC_HPP_
