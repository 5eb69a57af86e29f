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

#include "tcpa/model.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "tcpa/error.hpp"
#include "tcpa/json_io.hpp"

namespace tcpa::model {

using json = nlohmann::json;

namespace {

[[noreturn]] void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, msg); }

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                std::initializer_list<std::string_view> required, const std::string& where) {
  if (!obj.is_object()) fail(ErrorKind::kParse, where + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      fail(ErrorKind::kParse, where + ": unknown field \"" + key + "\"");
  }
  for (auto key : required) {
    if (!obj.contains(std::string(key)))
      fail(ErrorKind::kParse, where + ": missing field \"" + std::string(key) + "\"");
  }
}

template <typename T>
T get(const json& obj, const char* key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorKind::kParse, where + "." + key + ": wrong type");
  }
}

Tile parse_tile_key(const std::string& key) {
  Tile t;
  char comma = 0;
  std::istringstream is(key);
  if (!(is >> t.row >> comma >> t.col) || comma != ',' || !is.eof())
    fail(ErrorKind::kParse, "tile_overrides: bad tile key \"" + key + "\" (expected \"row,col\")");
  return t;
}

// A part that has no points in the tile but does have points one step
// outside it is almost certainly an off-by-one in the input.
void check_inside_tile(const DomainUnion& d, const ScanBox& box, const std::string& where) {
  IntVec grown = box.extents();
  for (Int& e : grown) e += 2;
  poly::PointSpace inner(box);
  poly::PointSpace margin{ScanBox(grown)};
  const IntVec one(box.dim(), 1);
  for (std::size_t i = 0; i < d.parts().size(); ++i) {
    const auto& part = d.parts()[i];
    if (!poly::is_empty(part, inner)) continue;
    if (!poly::is_empty(part.translated(one), margin))
      fail(ErrorKind::kValidation,
           where + ": domain part " + std::to_string(i) + " lies outside the tile");
  }
}

}  // namespace

std::string Tile::key() const { return std::to_string(row) + "," + std::to_string(col); }

std::vector<Tile> LoopProgram::tiles() const {
  std::vector<Tile> out;
  for (int r = 0; r < pe_rows; ++r)
    for (int c = 0; c < pe_cols; ++c) out.push_back({r, c});
  return out;
}

const DomainUnion& LoopProgram::domain(const Tile& tile, std::size_t eq_index) const {
  auto t = tile_overrides.find(tile);
  if (t != tile_overrides.end()) {
    auto e = t->second.find(equations[eq_index].id);
    if (e != t->second.end()) return e->second;
  }
  return equations[eq_index].domain;
}

int LoopProgram::fu_count() const {
  int n = 0;
  for (const auto& e : equations) n = std::max(n, e.fu + 1);
  return n;
}

Int LoopProgram::max_pe_delay() const {
  return pe_delay({pe_rows - 1, pe_cols - 1});
}

Int LoopProgram::epilog() const {
  Int e = 0;
  for (const auto& eq : equations) e = std::max(e, eq.tau / ii);
  return e;
}

void validate(const LoopProgram& p) {
  if (p.dims < 1) fail(ErrorKind::kValidation, "dims must be >= 1");
  if (p.intra_extents.size() != p.dims)
    fail(ErrorKind::kValidation, "intra_extents must have dims entries");
  for (Int e : p.intra_extents)
    if (e < 1) fail(ErrorKind::kValidation, "intra_extents must be >= 1");
  if (p.pe_rows < 1 || p.pe_cols < 1) fail(ErrorKind::kValidation, "pe_grid must be >= 1x1");
  if (p.ii < 1) fail(ErrorKind::kValidation, "ii must be >= 1");
  if (p.lambda_inter[0] < 0 || p.lambda_inter[1] < 0)
    fail(ErrorKind::kValidation, "lambda_inter components must be >= 0");

  const ScanBox box = p.intra_box();
  std::set<int> ids;
  for (std::size_t i = 0; i < p.equations.size(); ++i) {
    const auto& e = p.equations[i];
    const std::string where = "equations[" + std::to_string(i) + "]";
    if (!ids.insert(e.id).second)
      fail(ErrorKind::kValidation, where + ": duplicate id " + std::to_string(e.id));
    if (e.fu < 0) fail(ErrorKind::kValidation, where + ": fu must be >= 0");
    if (e.tau < 0) fail(ErrorKind::kValidation, where + ": tau must be >= 0");
    if (e.latency < 1) fail(ErrorKind::kValidation, where + ": latency must be >= 1");
    if (e.domain.dim() != p.dims)
      fail(ErrorKind::kDimensionMismatch, where + ": domain dimension differs from dims");
    check_inside_tile(e.domain, box, where + ".domain");
  }
  for (const auto& [tile, doms] : p.tile_overrides) {
    const std::string where = "tile_overrides[" + tile.key() + "]";
    if (tile.row < 0 || tile.col < 0 || tile.row >= p.pe_rows || tile.col >= p.pe_cols)
      fail(ErrorKind::kValidation, where + ": tile outside the PE grid");
    for (const auto& [id, d] : doms) {
      if (!ids.count(id))
        fail(ErrorKind::kValidation, where + ": unknown equation id " + std::to_string(id));
      if (d.dim() != p.dims)
        fail(ErrorKind::kDimensionMismatch, where + ": domain dimension differs from dims");
      check_inside_tile(d, box, where + "[" + std::to_string(id) + "]");
    }
  }

  // Slot check on the overlap-resolved domains. Shifting by m scan positions
  // is a plain bit shift of the position set.
  poly::PointSpace space(box.with_epilog(p.epilog()));
  const poly::PointSet base = space.base();
  for (const Tile& tile : p.tiles()) {
    std::vector<poly::PointSet> shifted;
    for (std::size_t i = 0; i < p.equations.size(); ++i)
      shifted.push_back((space.points(p.domain(tile, i)) & base) << p.equations[i].tau / p.ii);
    for (std::size_t a = 0; a < p.equations.size(); ++a) {
      for (std::size_t b = a + 1; b < p.equations.size(); ++b) {
        const auto& ea = p.equations[a];
        const auto& eb = p.equations[b];
        if (ea.fu != eb.fu || ea.tau % p.ii != eb.tau % p.ii) continue;
        if (!shifted[a].intersects(shifted[b])) continue;
        std::ostringstream os;
        os << "equations " << ea.id << " and " << eb.id << " both issue on fu " << ea.fu
           << " in slot " << ea.tau % p.ii << " (tile " << tile.key() << ")";
        fail(ErrorKind::kSlotConflict, os.str());
      }
    }
  }
}

LoopProgram parse_program(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::kParse, e.what());
  }
  check_keys(doc,
             {"dims", "intra_extents", "pe_grid", "ii", "lambda_inter", "equations", "tile_overrides"},
             {"dims", "intra_extents", "pe_grid", "ii", "equations"}, "program");

  LoopProgram p;
  p.dims = get<std::size_t>(doc, "dims", "program");
  p.intra_extents = get<IntVec>(doc, "intra_extents", "program");
  auto grid = get<std::vector<int>>(doc, "pe_grid", "program");
  if (grid.size() != 2) fail(ErrorKind::kParse, "program.pe_grid: expected [rows, cols]");
  p.pe_rows = grid[0];
  p.pe_cols = grid[1];
  p.ii = get<Int>(doc, "ii", "program");
  if (doc.contains("lambda_inter")) {
    auto l = get<IntVec>(doc, "lambda_inter", "program");
    if (l.size() != 2) fail(ErrorKind::kParse, "program.lambda_inter: expected [l0, l1]");
    p.lambda_inter = {l[0], l[1]};
  }
  if (!doc.at("equations").is_array()) fail(ErrorKind::kParse, "program.equations: expected an array");
  for (std::size_t i = 0; i < doc.at("equations").size(); ++i) {
    const json& e = doc.at("equations")[i];
    const std::string where = "equations[" + std::to_string(i) + "]";
    check_keys(e, {"id", "fu", "opcode", "tau", "latency", "domain"},
               {"id", "fu", "opcode", "tau", "latency", "domain"}, where);
    Equation eq;
    eq.id = get<int>(e, "id", where);
    eq.fu = get<int>(e, "fu", where);
    eq.opcode = get<std::string>(e, "opcode", where);
    eq.tau = get<Int>(e, "tau", where);
    eq.latency = get<Int>(e, "latency", where);
    eq.domain = io::domain_from_json(e.at("domain"), p.dims, where + ".domain");
    p.equations.push_back(std::move(eq));
  }
  if (doc.contains("tile_overrides")) {
    const json& to = doc.at("tile_overrides");
    if (!to.is_object()) fail(ErrorKind::kParse, "program.tile_overrides: expected an object");
    for (const auto& [key, doms] : to.items()) {
      Tile tile = parse_tile_key(key);
      if (!doms.is_object())
        fail(ErrorKind::kParse, "tile_overrides[" + key + "]: expected an object");
      for (const auto& [id, d] : doms.items()) {
        int eq_id = 0;
        try {
          std::size_t used = 0;
          eq_id = std::stoi(id, &used);
          if (used != id.size()) throw std::invalid_argument(id);
        } catch (const std::exception&) {
          fail(ErrorKind::kParse, "tile_overrides[" + key + "]: bad equation id \"" + id + "\"");
        }
        p.tile_overrides[tile][eq_id] =
            io::domain_from_json(d, p.dims, "tile_overrides[" + key + "][" + id + "]");
      }
    }
  }
  validate(p);
  return p;
}

LoopProgram load_program(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kParse, path + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_program(ss.str());
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

std::string print_program(const LoopProgram& p) {
  json doc;
  doc["dims"] = p.dims;
  doc["intra_extents"] = p.intra_extents;
  doc["pe_grid"] = {p.pe_rows, p.pe_cols};
  doc["ii"] = p.ii;
  doc["lambda_inter"] = {p.lambda_inter[0], p.lambda_inter[1]};
  doc["equations"] = json::array();
  for (const auto& e : p.equations) {
    doc["equations"].push_back({{"id", e.id},
                                {"fu", e.fu},
                                {"opcode", e.opcode},
                                {"tau", e.tau},
                                {"latency", e.latency},
                                {"domain", io::domain_to_json(e.domain)}});
  }
  if (!p.tile_overrides.empty()) {
    json to = json::object();
    for (const auto& [tile, doms] : p.tile_overrides) {
      json entry = json::object();
      for (const auto& [id, d] : doms) entry[std::to_string(id)] = io::domain_to_json(d);
      to[tile.key()] = std::move(entry);
    }
    doc["tile_overrides"] = std::move(to);
  }
  return doc.dump(1) + "\n";
}

ScheduleStats compute_stats(const LoopProgram& p) {
  ScheduleStats s;
  if (!p.equations.empty()) {
    Int lo = p.equations.front().tau, hi = 0;
    for (const auto& e : p.equations) {
      lo = std::min(lo, e.tau);
      hi = std::max(hi, e.tau + e.latency);
    }
    s.local_latency = hi - lo;
  }
  s.overlap_depth = (s.local_latency + p.ii - 1) / p.ii;
  for (const auto& e : p.equations) {
    auto& slots = s.slot_occupancy[e.fu];
    slots.resize(static_cast<std::size_t>(p.ii), 0);
    ++slots[static_cast<std::size_t>(e.tau % p.ii)];
  }
  return s;
}

LoopProgram helper_schedule(LoopProgram p) {
  if (p.ii < 1) fail(ErrorKind::kValidation, "ii must be >= 1");
  std::vector<std::size_t> order(p.equations.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](auto a, auto b) { return p.equations[a].id < p.equations[b].id; });
  std::map<int, std::vector<bool>> used;
  for (std::size_t i : order) {
    auto& eq = p.equations[i];
    auto& slots = used[eq.fu];
    slots.resize(static_cast<std::size_t>(p.ii), false);
    auto free = std::find(slots.begin(), slots.end(), false);
    if (free == slots.end()) {
      fail(ErrorKind::kInfeasible, "helper_schedule: fu " + std::to_string(eq.fu) + " needs more than " +
                                       std::to_string(p.ii) + " slots");
    }
    *free = true;
    eq.tau = free - slots.begin();
  }
  validate(p);
  return p;
}

}  // namespace tcpa::model
