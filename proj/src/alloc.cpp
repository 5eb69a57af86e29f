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

#include "tcpa/alloc.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "tcpa/error.hpp"

namespace tcpa::alloc {

using poly::Polyhedron;

namespace {

// Every derived domain is checked against the position bitset it is meant
// to describe. A mismatch is a bug in the set algebra, never bad input.
void check_points(const DomainUnion& d, const PointSet& expected, PointSpace& space,
                  const char* what) {
  if (space.points(d) != expected)
    throw Error(ErrorKind::kValidation, std::string("internal: ") + what +
                                            " domain disagrees with its position set");
}

}  // namespace

bool ProgramBlock::all_nop() const {
  return std::all_of(slots.begin(), slots.end(), [](int s) { return s == kNop; });
}

OverlapResult resolve_overlaps(const LoopProgram& p, const Tile& tile, PointSpace& space) {
  const ScanBox expected = p.intra_box().with_epilog(p.epilog());
  if (!(space.box() == expected))
    throw Error(ErrorKind::kDimensionMismatch, "resolve_overlaps: point space has the wrong box");
  const std::size_t n = p.dims;

  OverlapResult r;
  r.epilog = p.epilog();
  // Unshifted domains still have to stay out of the epilog.
  const Polyhedron base = Polyhedron(n).upper(n - 1, p.intra_extents[n - 1] - 1);
  for (std::size_t i = 0; i < p.equations.size(); ++i) {
    const auto& eq = p.equations[i];
    ShiftedEquation s;
    s.id = eq.id;
    s.fu = eq.fu;
    s.opcode = eq.opcode;
    s.shift = eq.tau / p.ii;
    s.tau = eq.tau % p.ii;
    const DomainUnion& d = p.domain(tile, i);
    if (s.shift == 0) {
      s.domain = r.epilog > 0 ? space.simplify(d.intersect(DomainUnion(base))) : space.simplify(d);
    } else {
      s.domain = space.simplify(poly::scan_shift(d, s.shift, space));
    }
    s.points = space.points(s.domain);
    r.equations.push_back(std::move(s));
  }

  for (std::size_t a = 0; a < r.equations.size(); ++a) {
    for (std::size_t b = a + 1; b < r.equations.size(); ++b) {
      const auto& ea = r.equations[a];
      const auto& eb = r.equations[b];
      if (ea.fu != eb.fu || ea.tau != eb.tau || !ea.points.intersects(eb.points)) continue;
      std::ostringstream os;
      os << "equations " << ea.id << " and " << eb.id << " share slot " << ea.tau << " of fu "
         << ea.fu << " after overlap resolution (tile " << tile.key() << ")";
      throw Error(ErrorKind::kSlotConflict, os.str());
    }
  }
  return r;
}

OverlapResult resolve_overlaps(const LoopProgram& p, const Tile& tile) {
  PointSpace space(p.intra_box().with_epilog(p.epilog()));
  return resolve_overlaps(p, tile, space);
}

std::vector<FuBlocks> extract_blocks(const OverlapResult& shifted, Int ii, int fu_count,
                                     const ScanBox& box) {
  const auto positions = static_cast<std::size_t>(box.positions());
  std::vector<FuBlocks> out;
  for (int fu = 0; fu < fu_count; ++fu) {
    FuBlocks fb;
    fb.fu = fu;
    std::map<std::vector<int>, int> ids;
    for (std::size_t pos = 0; pos < positions; ++pos) {
      ProgramBlock b;
      b.fu = fu;
      b.slots.assign(static_cast<std::size_t>(ii), kNop);
      b.tags.assign(static_cast<std::size_t>(ii), "NOP");
      for (const auto& e : shifted.equations) {
        if (e.fu != fu || !e.points.test(pos)) continue;
        auto slot = static_cast<std::size_t>(e.tau);
        if (b.slots[slot] != kNop)
          throw Error(ErrorKind::kSlotConflict, "extract_blocks: two equations in one slot");
        b.slots[slot] = e.id;
        b.tags[slot] = e.opcode;
      }
      auto [it, fresh] = ids.try_emplace(b.slots, static_cast<int>(fb.blocks.size()));
      if (fresh) {
        b.id = it->second;
        fb.blocks.push_back(std::move(b));
      }
      fb.block_of_position.push_back(it->second);
    }
    out.push_back(std::move(fb));
  }
  return out;
}

ControlGraph build_graph(const FuBlocks& fb, const OverlapResult& shifted, const Tile& tile,
                         PointSpace& space) {
  const std::size_t n = space.dim();
  const std::size_t positions = space.size();
  const std::size_t last = positions - 1;

  ControlGraph g;
  g.tile = tile;
  g.fu = fb.fu;
  g.blocks = fb.blocks;
  g.node_of_position = fb.block_of_position;

  std::vector<const ShiftedEquation*> on_fu;
  for (const auto& e : shifted.equations)
    if (e.fu == fb.fu) on_fu.push_back(&e);

  // Node domain of a block: inside every equation it issues, outside all
  // the others of this FU.
  for (const auto& b : fb.blocks) {
    Node v;
    v.id = b.id;
    v.block = b.id;
    v.points = space.none();
    for (std::size_t pos = 0; pos < positions; ++pos)
      if (fb.block_of_position[pos] == b.id) v.points.set(pos);
    std::set<int> active(b.slots.begin(), b.slots.end());
    DomainUnion inside = DomainUnion::universe(n);
    DomainUnion outside(n);
    for (const auto* e : on_fu) {
      if (active.count(e->id)) {
        inside = space.simplify(inside.intersect(e->domain));
      } else {
        outside = outside.unite(e->domain);
      }
    }
    v.domain = space.simplify(poly::subtract(inside, space.simplify(outside), space));
    check_points(v.domain, v.points, space, "block");
    g.nodes.push_back(std::move(v));
  }

  // Successor nodes of v in order of their first guarded position.
  auto successors = [&](const Node& v) {
    std::vector<std::pair<std::size_t, int>> first;  // (position, node)
    std::set<int> seen;
    for (std::size_t pos = v.points.find_first(); pos != PointSet::npos && pos < last;
         pos = v.points.find_next(pos)) {
      int w = g.node_of_position[pos + 1];
      if (seen.insert(w).second) first.emplace_back(pos, w);
    }
    std::vector<int> out;
    for (auto& [pos, w] : first) out.push_back(w);
    return out;
  };

  // Clone nodes with more than two successors. Every split refines the
  // partition of scan positions, so this terminates.
  for (;;) {
    std::size_t victim = g.nodes.size();
    std::vector<int> succ;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      succ = successors(g.nodes[i]);
      if (succ.size() > 2) {
        victim = i;
        break;
      }
    }
    if (victim == g.nodes.size()) break;

    const std::size_t half = (succ.size() + 1) / 2;
    PointSet a_pts = space.none(), b_pts = space.none();
    DomainUnion a_dom(n), b_dom(n);
    for (std::size_t k = 0; k < succ.size(); ++k) {
      const Node& w = g.nodes[static_cast<std::size_t>(succ[k])];
      if (k < half) {
        a_pts |= w.points;
        a_dom = a_dom.unite(w.domain);
      } else {
        b_pts |= w.points;
        b_dom = b_dom.unite(w.domain);
      }
    }
    Node& v = g.nodes[victim];
    Node clone;
    clone.id = static_cast<int>(g.nodes.size());
    clone.block = v.block;
    const PointSet va = v.points & (a_pts >> 1);
    clone.points = v.points - va;
    DomainUnion va_dom = space.simplify(v.domain.intersect(poly::scan_preimage(a_dom, 1, space)));
    DomainUnion vb_dom = v.domain.intersect(poly::scan_preimage(b_dom, 1, space));
    if (v.points.test(last)) vb_dom.add_part(poly::point_domain(space.point(last)));
    clone.domain = space.simplify(vb_dom);
    v.points = va;
    v.domain = std::move(va_dom);
    check_points(v.domain, v.points, space, "split");
    check_points(clone.domain, clone.points, space, "split");
    for (std::size_t pos = clone.points.find_first(); pos != PointSet::npos;
         pos = clone.points.find_next(pos))
      g.node_of_position[pos] = clone.id;
    g.nodes.push_back(std::move(clone));
  }

  for (auto& u : g.nodes) {
    for (int w : successors(u)) {
      const Node& target = g.nodes[static_cast<std::size_t>(w)];
      Edge e;
      e.to = w;
      e.points = u.points & (target.points >> 1);
      e.guard = space.simplify(u.domain.intersect(poly::scan_preimage(target.domain, 1, space)));
      check_points(e.guard, e.points, space, "guard");
      u.out.push_back(std::move(e));
    }
    if (u.out.size() == 2) {
      ControlCondition c;
      c.zero = u.out[0].guard;
      c.one = u.out[1].guard;
      c.tile = tile;
      c.fu = g.fu;
      c.node = u.id;
      u.condition = std::move(c);
    }
  }
  g.entry = g.node_of_position[0];
  return g;
}

std::vector<ControlCondition> harvest_conditions(std::vector<ControlGraph>& graphs) {
  std::vector<ControlCondition> out;
  for (auto& g : graphs) {
    for (auto& v : g.nodes) {
      if (!v.condition) continue;
      v.condition->id = static_cast<int>(out.size());
      out.push_back(*v.condition);
    }
  }
  return out;
}

std::vector<int> replay(const ControlGraph& g, const PointSpace& space) {
  std::vector<int> blocks;
  int u = g.entry;
  for (std::size_t pos = 0; pos < space.size(); ++pos) {
    const Node& v = g.nodes[static_cast<std::size_t>(u)];
    blocks.push_back(v.block);
    if (pos + 1 == space.size()) break;
    if (v.out.empty()) break;  // truncated replay shows up as a length mismatch
    if (v.out.size() == 1) {
      u = v.out[0].to;
    } else {
      u = v.condition->one.contains(space.point(pos)) ? v.out[1].to : v.out[0].to;
    }
  }
  return blocks;
}

}  // namespace tcpa::alloc
