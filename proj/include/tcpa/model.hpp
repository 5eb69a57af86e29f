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

// Loop program data model: a tiled iteration space, guarded equations with
// their modulo schedule, and the processor grid the tiles are mapped onto.

#ifndef TCPA_MODEL_HPP_
#define TCPA_MODEL_HPP_

#include <array>
#include <compare>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tcpa/poly.hpp"

namespace tcpa::model {

using poly::DomainUnion;
using poly::Int;
using poly::IntVec;
using poly::ScanBox;

/// One guarded statement. Instructions are opaque: the opcode is only a tag,
/// the id distinguishes instructions that share an opcode.
struct Equation {
  int id = 0;
  int fu = 0;
  std::string opcode;
  Int tau = 0;
  Int latency = 1;
  DomainUnion domain;

  friend bool operator==(const Equation&, const Equation&) = default;
};

struct Tile {
  int row = 0;
  int col = 0;

  std::string key() const;
  friend auto operator<=>(const Tile&, const Tile&) = default;
};

struct LoopProgram {
  std::size_t dims = 0;
  IntVec intra_extents;
  int pe_rows = 1;
  int pe_cols = 1;
  Int ii = 1;
  std::array<Int, 2> lambda_inter{0, 0};
  std::vector<Equation> equations;
  /// Tile-specific condition spaces; equations not listed for a tile use
  /// their global domain.
  std::map<Tile, std::map<int, DomainUnion>> tile_overrides;

  ScanBox intra_box() const { return ScanBox(intra_extents); }
  std::vector<Tile> tiles() const;
  const DomainUnion& domain(const Tile& tile, std::size_t eq_index) const;
  /// Number of functional units referenced (max fu + 1).
  int fu_count() const;
  /// Start offset of a tile relative to tile (0,0).
  Int pe_delay(const Tile& tile) const {
    return tile.row * lambda_inter[0] + tile.col * lambda_inter[1];
  }
  Int max_pe_delay() const;
  /// Largest overlap shift floor(tau / II) over all equations.
  Int epilog() const;

  friend bool operator==(const LoopProgram&, const LoopProgram&) = default;
};

struct ScheduleStats {
  Int local_latency = 0;
  Int overlap_depth = 0;
  /// fu -> number of equations issued in each of the II slots.
  std::map<int, std::vector<int>> slot_occupancy;
};

/// Parses and validates the JSON program format. Throws Error(kParse) on
/// syntax/schema problems and the validation kinds otherwise.
LoopProgram parse_program(std::string_view text);
LoopProgram load_program(const std::string& path);
std::string print_program(const LoopProgram& p);

/// Structural checks plus the per-tile slot check: two equations on one FU
/// whose overlap-resolved domains meet must not share tau mod II.
void validate(const LoopProgram& p);

ScheduleStats compute_stats(const LoopProgram& p);

/// Greedy modulo schedule in id order: each equation gets the smallest
/// start time whose slot (mod II) is still free on its FU.
LoopProgram helper_schedule(LoopProgram p);

}  // namespace tcpa::model

#endif  // TCPA_MODEL_HPP_
