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

#include "tcpa/sim.hpp"

#include <algorithm>
#include <sstream>

#include "tcpa/error.hpp"

namespace tcpa::sim {

using json = nlohmann::json;
using gcmap::EvalKind;
using gcmap::EvalMode;

// --- Global controller ----------------------------------------------------

std::string ControlTrace::csv() const {
  std::ostringstream os;
  const std::size_t width = signals.empty() ? 0 : signals.front().size();
  os << "cycle";
  for (std::size_t s = 0; s < width; ++s) os << ",s" << s;
  os << "\n";
  for (std::size_t t = 0; t < signals.size(); ++t) {
    os << t;
    for (std::size_t s = 0; s < width; ++s) os << "," << (signals[t].test(s) ? 1 : 0);
    os << "\n";
  }
  return os.str();
}

ControlTrace run_gc(const gcmap::GcConfig& cfg, Int horizon) {
  const poly::ScanBox& box = cfg.scanner;
  const Int ii = cfg.ii;
  const Int positions = box.positions();
  if (horizon < positions * ii) {
    throw Error(ErrorKind::kSimulation, "run_gc: horizon " + std::to_string(horizon) +
                                            " shorter than the scan (" +
                                            std::to_string(positions * ii) + " cycles)");
  }
  const std::size_t n = box.dim();
  const std::size_t nsig = cfg.signal_count();

  ControlTrace tr;
  IntVec j(n, 0);
  std::vector<Int> acc(cfg.evaluators.size(), 0);
  std::vector<bool> valid(cfg.evaluators.size());
  std::vector<bool> conj(cfg.conjunctions.size());

  for (Int t = 0; t < horizon; ++t) {
    const Int pos = std::min(t / ii, positions - 1);
    if (t % ii == 0 && t / ii < positions) {
      IntVec snap;
      for (std::size_t e = 0; e < cfg.evaluators.size(); ++e)
        if (cfg.evaluators[e].kind == EvalKind::kAffine) snap.push_back(acc[e]);
      tr.accumulators.push_back(std::move(snap));
    }

    for (std::size_t e = 0; e < cfg.evaluators.size(); ++e) {
      const auto& ev = cfg.evaluators[e];
      const bool eq = ev.mode == EvalMode::kEq;
      switch (ev.kind) {
        case EvalKind::kLower: valid[e] = eq ? j[ev.dim] == ev.value : j[ev.dim] >= ev.value; break;
        case EvalKind::kUpper: valid[e] = eq ? j[ev.dim] == ev.value : j[ev.dim] <= ev.value; break;
        case EvalKind::kAffine: valid[e] = eq ? acc[e] == ev.b : acc[e] >= ev.b; break;
      }
    }
    for (std::size_t c = 0; c < cfg.conjunctions.size(); ++c) {
      bool all = true;
      for (int e : cfg.conjunctions[c]) all = all && valid[static_cast<std::size_t>(e)];
      conj[c] = all;
    }
    PointSet sig(nsig);
    for (std::size_t s = 0; s < nsig; ++s)
      for (int c : cfg.disjunctions[s])
        if (conj[static_cast<std::size_t>(c)]) sig.set(s);
    tr.signals.push_back(std::move(sig));
    tr.position.push_back(pos);

    const bool update = t % ii == ii - 1 && t / ii < positions - 1;
    tr.update.push_back(update);
    if (!update) {
      tr.step.push_back(-1);
      continue;
    }
    const std::size_t step = box.step_dimension(pos);
    tr.step.push_back(static_cast<int>(step));
    for (std::size_t e = 0; e < cfg.evaluators.size(); ++e)
      if (cfg.evaluators[e].kind == EvalKind::kAffine) acc[e] += cfg.evaluators[e].strides[step];
    for (std::size_t d = 0; d < step; ++d) j[d] = 0;
    ++j[step];
  }
  return tr;
}

// --- Delay network --------------------------------------------------------

DelayElement::DelayElement(DelayModel model, Int latency, std::size_t width, std::size_t fifo_depth)
    : model_(model), latency_(latency), width_(width), depth_(fifo_depth), last_in_(width), out_(width) {
  if (latency < 0) throw Error(ErrorKind::kSimulation, "delay latency must be >= 0");
  if (model_ == DelayModel::kShiftRegister) {
    shift_.assign(static_cast<std::size_t>(latency), PointSet(width));
  } else {
    fifo_.resize(width);
  }
}

PointSet DelayElement::step(const PointSet& in) {
  if (in.size() != width_) throw Error(ErrorKind::kSimulation, "delay element: width mismatch");
  const Int t = now_++;
  if (model_ == DelayModel::kShiftRegister) {
    if (latency_ == 0) return in;
    PointSet out = std::move(shift_.front());
    shift_.pop_front();
    shift_.push_back(in);
    return out;
  }
  for (std::size_t k = 0; k < width_; ++k) {
    auto& q = fifo_[k];
    if (in.test(k) != last_in_.test(k)) q.push_back(t);
    while (!q.empty() && q.front() + latency_ <= t) {
      out_.flip(k);
      q.pop_front();
    }
    if (q.size() > depth_) {
      throw Error(ErrorKind::kFifoOverflow, "timestamp FIFO of signal " + std::to_string(k) +
                                                " holds more than " + std::to_string(depth_) +
                                                " transitions");
    }
  }
  last_in_ = in;
  return out_;
}

std::vector<PointSet> DelayElement::run(const std::vector<PointSet>& in) {
  std::vector<PointSet> out;
  out.reserve(in.size());
  for (const auto& x : in) out.push_back(step(x));
  return out;
}

// --- Assembly -------------------------------------------------------------

const Program& Memories::program(const Tile& t, int fu) const {
  return programs.at(static_cast<std::size_t>(program_of.at(t).at(fu)));
}

namespace {

// Non-NOP slots become instructions; the NOP run after each one goes into
// its wait field. A leading NOP run needs a control instruction of its own.
Program lower_block(const alloc::ProgramBlock& b) {
  const auto ii = static_cast<Int>(b.slots.size());
  std::vector<Int> busy;
  for (Int s = 0; s < ii; ++s)
    if (b.slots[static_cast<std::size_t>(s)] != alloc::kNop) busy.push_back(s);
  Program out;
  if (busy.empty() || busy.front() > 0) {
    Instruction nop;
    nop.tag = "NOP";
    nop.wait = (busy.empty() ? ii : busy.front()) - 1;
    out.push_back(nop);
  }
  for (std::size_t k = 0; k < busy.size(); ++k) {
    const Int s = busy[k];
    Instruction in;
    in.eq = b.slots[static_cast<std::size_t>(s)];
    in.tag = b.tags[static_cast<std::size_t>(s)];
    in.wait = (k + 1 < busy.size() ? busy[k + 1] : ii) - s - 1;
    out.push_back(in);
  }
  return out;
}

}  // namespace

Memories assemble(const std::vector<alloc::ControlGraph>& graphs, const reduce::SignalBinding& binding,
                  Int ii) {
  Memories mem;
  std::vector<int> node_count;
  for (const auto& g : graphs) {
    std::vector<int> order;
    order.push_back(g.entry);
    for (const auto& v : g.nodes)
      if (v.id != g.entry) order.push_back(v.id);

    std::vector<Program> bodies(g.nodes.size());
    std::vector<int> addr(g.nodes.size());
    int next = 0;
    for (int id : order) {
      const auto& v = g.nodes[static_cast<std::size_t>(id)];
      bodies[static_cast<std::size_t>(id)] = lower_block(g.blocks[static_cast<std::size_t>(v.block)]);
      addr[static_cast<std::size_t>(id)] = next;
      next += static_cast<int>(bodies[static_cast<std::size_t>(id)].size());
    }

    Program prog;
    for (int id : order) {
      const auto& v = g.nodes[static_cast<std::size_t>(id)];
      Program body = bodies[static_cast<std::size_t>(id)];
      for (std::size_t k = 0; k + 1 < body.size(); ++k) {
        body[k].bt0 = body[k].bt1 = static_cast<int>(prog.size() + k + 1);
      }
      Instruction& tail = body.back();
      if (v.out.empty()) {
        tail.bt0 = tail.bt1 = addr[static_cast<std::size_t>(id)];
      } else if (v.out.size() == 1) {
        tail.bt0 = tail.bt1 = addr[static_cast<std::size_t>(v.out[0].to)];
      } else {
        const auto& b = binding.at(v.condition->id);
        const bool negative = b.negative;
        // The sequencer takes bt0 on a 1; a positive signal is 1 on the
        // condition's one domain, which leads to out[1].
        const int zero = addr[static_cast<std::size_t>(v.out[0].to)];
        const int one = addr[static_cast<std::size_t>(v.out[1].to)];
        tail.bt0 = negative ? zero : one;
        tail.bt1 = negative ? one : zero;
        tail.cs = b.signal;
      }
      prog.insert(prog.end(), body.begin(), body.end());
    }

    auto it = std::find(mem.programs.begin(), mem.programs.end(), prog);
    int index = static_cast<int>(it - mem.programs.begin());
    if (it == mem.programs.end()) {
      mem.programs.push_back(prog);
      node_count.push_back(static_cast<int>(g.nodes.size()));
    }
    mem.program_of[g.tile][g.fu] = index;
  }
  for (std::size_t i = 0; i < mem.programs.size(); ++i) {
    const auto& prog = mem.programs[i];
    mem.instrs += static_cast<int>(prog.size());
    for (const auto& in : prog) mem.waits += static_cast<int>(in.wait);
    mem.mem = std::max(mem.mem, static_cast<int>(prog.size()));
    mem.slots += node_count[i] * static_cast<int>(ii);
  }
  return mem;
}

json to_json(const Memories& m) {
  json progs = json::array();
  for (const auto& p : m.programs) {
    json instrs = json::array();
    for (const auto& in : p) {
      instrs.push_back({{"op", in.tag}, {"eq", in.eq}, {"bt0", in.bt0}, {"bt1", in.bt1},
                        {"cs", in.cs}, {"wait", in.wait}});
    }
    progs.push_back(std::move(instrs));
  }
  json map = json::object();
  for (const auto& [tile, fus] : m.program_of) {
    json entry = json::object();
    for (const auto& [fu, idx] : fus) entry[std::to_string(fu)] = idx;
    map[tile.key()] = std::move(entry);
  }
  return {{"programs", std::move(progs)}, {"program_of", std::move(map)},
          {"instrs", m.instrs}, {"waits", m.waits}, {"mem", m.mem}};
}

// --- Array ----------------------------------------------------------------

std::string dump(const ExecTrace& t) {
  std::ostringstream os;
  for (const auto& [tile, fus] : t)
    for (const auto& [fu, issues] : fus)
      for (const auto& i : issues)
        os << "pe=" << tile.row << "," << tile.col << " fu=" << fu << " cycle=" << i.cycle
           << " op=" << i.tag << "\n";
  return os.str();
}

Int default_horizon(const LoopProgram& p) {
  const Int positions = p.intra_box().base_positions() + p.epilog();
  return positions * p.ii + p.max_pe_delay() + model::compute_stats(p).local_latency;
}

ExecTrace run_array(const LoopProgram& p, const gcmap::GcConfig& cfg, const Memories& mem,
                    const ArrayOptions& opt) {
  const Int horizon = opt.horizon > 0 ? opt.horizon : default_horizon(p);
  const ControlTrace gc = run_gc(cfg, horizon);
  const Int positions = cfg.scanner.positions();

  ExecTrace trace;
  for (const Tile& tile : p.tiles()) {
    trace[tile];
    const Int delay = p.pe_delay(tile);
    DelayElement element(opt.delay, delay, cfg.signal_count(), opt.fifo_depth);
    const std::vector<PointSet> signals = element.run(gc.signals);
    const Int halt = delay + positions * p.ii;

    for (int fu = 0; fu < p.fu_count(); ++fu) {
      const Program& prog = mem.program(tile, fu);
      auto& issues = trace[tile][fu];
      std::size_t pc = 0;
      Int issue_at = delay;
      Int commit_at = -1;
      for (Int t = delay; t < std::min(horizon, halt); ++t) {
        if (t == issue_at) {
          if (pc >= prog.size()) {
            throw Error(ErrorKind::kSimulation, "pc " + std::to_string(pc) + " out of range on pe " +
                                                    tile.key() + " fu " + std::to_string(fu));
          }
          const Instruction& in = prog[pc];
          if (in.eq != alloc::kNop) issues.push_back({t, in.eq, in.tag});
          commit_at = t + in.wait;
        }
        if (t == commit_at) {
          const Instruction& in = prog[pc];
          const bool take0 = in.cs < 0 || signals[static_cast<std::size_t>(t)].test(static_cast<std::size_t>(in.cs));
          pc = static_cast<std::size_t>(take0 ? in.bt0 : in.bt1);
          issue_at = t + 1;
        }
      }
    }
  }
  return trace;
}

ExecTrace reference_interpret(const LoopProgram& p) {
  const poly::ScanBox box = p.intra_box();
  ExecTrace trace;
  for (const Tile& tile : p.tiles()) {
    auto& fus = trace[tile];
    for (int fu = 0; fu < p.fu_count(); ++fu) fus[fu];
    for (std::size_t i = 0; i < p.equations.size(); ++i) {
      const auto& eq = p.equations[i];
      const auto& dom = p.domain(tile, i);
      for (Int src = 0; src < box.base_positions(); ++src) {
        if (!dom.contains(box.point_at(src))) continue;
        fus[eq.fu].push_back({p.pe_delay(tile) + src * p.ii + eq.tau, eq.id, eq.opcode});
      }
    }
    for (auto& [fu, issues] : fus)
      std::sort(issues.begin(), issues.end(),
                [](const Issue& a, const Issue& b) { return a.cycle < b.cycle; });
  }
  return trace;
}

}  // namespace tcpa::sim
