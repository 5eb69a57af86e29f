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

#include "tcpa/pipeline.hpp"

#include <cstdio>
#include <set>
#include <sstream>

#include "tcpa/error.hpp"

namespace tcpa::pipeline {

using json = nlohmann::json;
using model::Tile;
using poly::Int;
using poly::PointSet;
using poly::PointSpace;

Compiled compile(const model::LoopProgram& p, const CompileOptions& opt) {
  model::validate(p);
  Compiled c;
  c.program = p;
  c.box = p.intra_box().with_epilog(p.epilog());
  PointSpace space(c.box);

  std::set<std::pair<int, std::vector<int>>> distinct_blocks;
  for (const Tile& tile : p.tiles()) {
    alloc::OverlapResult ov = alloc::resolve_overlaps(p, tile, space);
    for (const auto& fb : alloc::extract_blocks(ov, p.ii, p.fu_count(), c.box)) {
      for (const auto& b : fb.blocks) distinct_blocks.emplace(b.fu, b.slots);
      c.graphs.push_back(alloc::build_graph(fb, ov, tile, space));
    }
  }
  c.conditions = alloc::harvest_conditions(c.graphs);
  c.reduction = reduce::reduce_conditions(c.conditions, opt.tries, opt.seed, space);
  if (opt.flip_condition >= 0) {
    auto it = c.reduction.binding.find(opt.flip_condition);
    if (it == c.reduction.binding.end())
      throw Error(ErrorKind::kValidation, "flip: no condition " + std::to_string(opt.flip_condition));
    it->second.negative = !it->second.negative;
  }
  c.gc = gcmap::allocate(c.reduction.unified, c.box, p.ii, opt.capacities);
  c.memories = sim::assemble(c.graphs, c.reduction.binding, p.ii);

  Report& r = c.report;
  r.ii = p.ii;
  r.local_latency = model::compute_stats(p).local_latency;
  r.max_delay = p.max_pe_delay();
  r.blocks = static_cast<int>(distinct_blocks.size());
  r.conditions = c.reduction.report.conditions;
  r.prime = c.reduction.report.prime;
  r.unified = c.reduction.report.unified;
  r.programs = static_cast<int>(c.memories.programs.size());
  r.instrs = c.memories.instrs;
  r.waits = c.memories.waits;
  r.mem = c.memories.mem;
  r.usage = c.gc.usage;
  r.factor_prime = c.reduction.report.factor_prime;
  r.factor_unified = c.reduction.report.factor_unified;
  r.factor_total = c.reduction.report.factor_total;
  return c;
}

bool VerifyResult::ok() const {
  for (const auto& c : checks)
    if (!c.ok) return false;
  return true;
}

std::string first_difference(const sim::ExecTrace& got, const sim::ExecTrace& want,
                             const model::LoopProgram& p) {
  for (const auto& [tile, fus] : want) {
    auto gt = got.find(tile);
    for (const auto& [fu, issues] : fus) {
      static const std::vector<sim::Issue> kNone;
      const auto& g = gt == got.end() || !gt->second.count(fu) ? kNone : gt->second.at(fu);
      const std::size_t n = std::min(g.size(), issues.size());
      std::size_t k = 0;
      while (k < n && g[k] == issues[k]) ++k;
      if (k == g.size() && k == issues.size()) continue;
      // The earlier of the two mismatching events.
      Int cycle = k < issues.size() ? issues[k].cycle : g[k].cycle;
      if (k < g.size() && k < issues.size()) cycle = std::min(cycle, g[k].cycle);
      const Int pos = (cycle - p.pe_delay(tile)) / p.ii;
      std::ostringstream os;
      os << "pe " << tile.key() << " fu " << fu << " cycle " << cycle << " (position " << pos << "): ";
      if (k < issues.size()) os << "expected " << issues[k].tag << "@" << issues[k].cycle;
      else os << "expected nothing";
      if (k < g.size()) os << ", got " << g[k].tag << "@" << g[k].cycle;
      else os << ", got nothing";
      return os.str();
    }
  }
  for (const auto& [tile, fus] : got)
    if (!want.count(tile)) return "pe " + tile.key() + " is not in the reference";
  return "";
}

VerifyResult verify(const Compiled& c, const sim::ArrayOptions& opt) {
  const auto& p = c.program;
  VerifyResult out;
  PointSpace space(c.box);

  {
    CheckResult r{"reduction soundness"};
    if (auto bad = reduce::check_soundness(c.conditions, c.reduction.unified, c.reduction.binding, space)) {
      r.ok = false;
      r.detail = *bad;
    }
    out.checks.push_back(r);
  }

  {
    CheckResult r{"graph replay"};
    for (const auto& g : c.graphs) {
      std::vector<int> want;
      for (int v : g.node_of_position) want.push_back(g.nodes[static_cast<std::size_t>(v)].block);
      if (alloc::replay(g, space) != want) {
        r.ok = false;
        r.detail = "pe " + g.tile.key() + " fu " + std::to_string(g.fu);
        break;
      }
    }
    out.checks.push_back(r);
  }

  const Int horizon = opt.horizon > 0 ? opt.horizon : sim::default_horizon(p);
  const sim::ControlTrace gc = sim::run_gc(c.gc, horizon);
  {
    CheckResult r{"gc exactness"};
    std::vector<PointSet> one;
    for (const auto& u : c.reduction.unified) one.push_back(space.points(u.one));
    for (Int t = 0; t < c.box.positions() * p.ii && r.ok; ++t) {
      const auto pos = static_cast<std::size_t>(t / p.ii);
      for (std::size_t s = 0; s < one.size(); ++s) {
        if (gc.signals[static_cast<std::size_t>(t)].test(s) == one[s].test(pos)) continue;
        r.ok = false;
        r.detail = "signal " + std::to_string(s) + " at cycle " + std::to_string(t) + " (position " +
                   std::to_string(pos) + ")";
        break;
      }
    }
    for (std::size_t pos = 0; pos < space.size() && r.ok; ++pos) {
      std::size_t k = 0;
      for (const auto& e : c.gc.evaluators) {
        if (e.kind != gcmap::EvalKind::kAffine) continue;
        if (gc.accumulators[pos][k++] != poly::dot(e.weights, space.point(pos))) {
          r.ok = false;
          r.detail = "affine accumulator " + std::to_string(k - 1) + " at position " + std::to_string(pos);
          break;
        }
      }
    }
    out.checks.push_back(r);
  }

  {
    CheckResult r{"delay equivalence"};
    std::set<Int> delays;
    for (const Tile& t : p.tiles()) delays.insert(p.pe_delay(t));
    for (Int d : delays) {
      sim::DelayElement sr(sim::DelayModel::kShiftRegister, d, c.gc.signal_count());
      sim::DelayElement ff(sim::DelayModel::kTimestampFifo, d, c.gc.signal_count(), opt.fifo_depth);
      if (sr.run(gc.signals) != ff.run(gc.signals)) {
        r.ok = false;
        r.detail = "latency " + std::to_string(d);
        break;
      }
    }
    out.checks.push_back(r);
  }

  {
    CheckResult r{"end-to-end trace"};
    const sim::ExecTrace got = sim::run_array(p, c.gc, c.memories, opt);
    const sim::ExecTrace want = sim::reference_interpret(p);
    if (got != want) {
      r.ok = false;
      r.detail = first_difference(got, want, p);
    }
    out.checks.push_back(r);
  }
  return out;
}

json to_json(const Report& r) {
  return {{"II", r.ii},
          {"L_local", r.local_latency},
          {"max_delay", r.max_delay},
          {"PBs", r.blocks},
          {"C", r.conditions},
          {"C_prime", r.prime},
          {"C_unified", r.unified},
          {"Progs", r.programs},
          {"Instrs", r.instrs},
          {"Waits", r.waits},
          {"Mem", r.mem},
          {"Lows", r.usage.lows},
          {"Ups", r.usage.ups},
          {"Afs", r.usage.afs},
          {"Conjs", r.usage.conjs},
          {"Disjs", r.usage.disjs},
          {"literals_unshared", r.usage.literals_unshared},
          {"conjs_unshared", r.usage.conjs_unshared},
          {"factor_prime", r.factor_prime},
          {"factor_unified", r.factor_unified},
          {"factor_total", r.factor_total}};
}

Report report_from_json(const json& j) {
  try {
    Report r;
    r.ii = j.at("II");
    r.local_latency = j.at("L_local");
    r.max_delay = j.at("max_delay");
    r.blocks = j.at("PBs");
    r.conditions = j.at("C");
    r.prime = j.at("C_prime");
    r.unified = j.at("C_unified");
    r.programs = j.at("Progs");
    r.instrs = j.at("Instrs");
    r.waits = j.at("Waits");
    r.mem = j.at("Mem");
    r.usage.lows = j.at("Lows");
    r.usage.ups = j.at("Ups");
    r.usage.afs = j.at("Afs");
    r.usage.conjs = j.at("Conjs");
    r.usage.disjs = j.at("Disjs");
    r.usage.literals_unshared = j.at("literals_unshared");
    r.usage.conjs_unshared = j.at("conjs_unshared");
    r.factor_prime = j.at("factor_prime");
    r.factor_unified = j.at("factor_unified");
    r.factor_total = j.at("factor_total");
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("report: ") + e.what());
  }
}

std::string report_table(const std::vector<std::pair<std::string, Report>>& rows) {
  static const char* kHeader[] = {"Benchmark", "II",     "L_local", "MaxDelay", "#PBs",  "|C|",
                                  "|C_prime|", "|C_unified|", "#Progs", "#Instrs", "#Waits", "#Mem",
                                  "#Lows",     "#Ups",   "#Afs",    "#Conjs",   "#Disjs", "f_prime",
                                  "f_unified", "f_total"};
  auto fixed = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };
  std::vector<std::vector<std::string>> cells;
  cells.emplace_back(std::begin(kHeader), std::end(kHeader));
  for (const auto& [name, r] : rows) {
    cells.push_back({name,
                     std::to_string(r.ii),
                     std::to_string(r.local_latency),
                     std::to_string(r.max_delay),
                     std::to_string(r.blocks),
                     std::to_string(r.conditions),
                     std::to_string(r.prime),
                     std::to_string(r.unified),
                     std::to_string(r.programs),
                     std::to_string(r.instrs),
                     std::to_string(r.waits),
                     std::to_string(r.mem),
                     std::to_string(r.usage.lows),
                     std::to_string(r.usage.ups),
                     std::to_string(r.usage.afs),
                     std::to_string(r.usage.conjs),
                     std::to_string(r.usage.disjs),
                     fixed(r.factor_prime),
                     fixed(r.factor_unified),
                     fixed(r.factor_total)});
  }
  std::vector<std::size_t> width(cells.front().size(), 0);
  for (const auto& row : cells)
    for (std::size_t k = 0; k < row.size(); ++k) width[k] = std::max(width[k], row[k].size());
  std::ostringstream os;
  for (const auto& row : cells) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k == 0) {
        os << row[k] << std::string(width[k] - row[k].size(), ' ');
      } else {
        os << "  " << std::string(width[k] - row[k].size(), ' ') << row[k];
      }
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace tcpa::pipeline
