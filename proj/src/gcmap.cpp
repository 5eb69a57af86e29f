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

#include "tcpa/gcmap.hpp"

#include <algorithm>
#include <map>

#include "tcpa/error.hpp"

namespace tcpa::gcmap {

using json = nlohmann::json;
using poly::LiteralKind;

std::string to_string(EvalKind k) {
  switch (k) {
    case EvalKind::kLower: return "LOWER";
    case EvalKind::kUpper: return "UPPER";
    case EvalKind::kAffine: return "AFFINE";
  }
  return "?";
}

bool Evaluator::holds(std::span<const Int> j) const {
  switch (kind) {
    case EvalKind::kLower: return mode == EvalMode::kEq ? j[dim] == value : j[dim] >= value;
    case EvalKind::kUpper: return mode == EvalMode::kEq ? j[dim] == value : j[dim] <= value;
    case EvalKind::kAffine: {
      const Int u = poly::dot(weights, j);
      return mode == EvalMode::kEq ? u == b : u >= b;
    }
  }
  return false;
}

std::vector<bool> GcConfig::evaluate(std::span<const Int> j) const {
  std::vector<bool> valid;
  for (const auto& e : evaluators) valid.push_back(e.holds(j));
  std::vector<bool> conj;
  for (const auto& c : conjunctions)
    conj.push_back(std::all_of(c.begin(), c.end(), [&](int e) { return valid[static_cast<std::size_t>(e)]; }));
  std::vector<bool> out;
  for (const auto& d : disjunctions)
    out.push_back(std::any_of(d.begin(), d.end(), [&](int c) { return conj[static_cast<std::size_t>(c)]; }));
  return out;
}

std::vector<std::vector<Literal>> decompose(const DomainUnion& one) {
  std::vector<std::vector<Literal>> out;
  for (const auto& part : one.parts()) out.push_back(poly::classify_literals(part));
  return out;
}

IntVec stride_table(std::span<const Int> a, const ScanBox& box) {
  const std::size_t n = box.dim();
  if (a.size() != n) throw Error(ErrorKind::kDimensionMismatch, "stride_table: weight length");
  IntVec out(n);
  Int carry = 0;  // sum over i < d of a_i (N_i - 1)
  for (std::size_t d = 0; d < n; ++d) {
    out[d] = a[d] - carry;
    carry += a[d] * (box.extent(d) - 1);
  }
  return out;
}

GcConfig allocate(const std::vector<ControlCondition>& unified, const ScanBox& scanner, Int ii,
                  const Capacities& caps) {
  GcConfig cfg;
  cfg.scanner = scanner;
  cfg.ii = ii;
  cfg.capacities = caps;
  Usage& use = cfg.usage;

  std::map<Literal, int> literal_ids;
  std::map<std::vector<int>, int> conj_ids;
  auto evaluator_for = [&](const Literal& lit) {
    auto it = literal_ids.find(lit);
    if (it != literal_ids.end()) return it->second;
    Evaluator e;
    switch (lit.kind) {
      case LiteralKind::kConstLower:
        e.kind = EvalKind::kLower;
        break;
      case LiteralKind::kConstUpper:
        e.kind = EvalKind::kUpper;
        break;
      case LiteralKind::kConstEq:
        // Either bound evaluator can test equality; balance the two.
        e.kind = use.ups < use.lows ? EvalKind::kUpper : EvalKind::kLower;
        e.mode = EvalMode::kEq;
        break;
      case LiteralKind::kAffineEq:
      case LiteralKind::kAffineIneq:
        e.kind = EvalKind::kAffine;
        e.mode = lit.kind == LiteralKind::kAffineEq ? EvalMode::kEq : EvalMode::kIneq;
        break;
    }
    if (e.kind == EvalKind::kAffine) {
      e.weights = lit.a;
      e.strides = stride_table(lit.a, scanner);
      e.b = lit.b;
      ++use.afs;
    } else {
      e.dim = lit.dim;
      e.value = lit.value;
      ++(e.kind == EvalKind::kLower ? use.lows : use.ups);
    }
    const int id = static_cast<int>(cfg.evaluators.size());
    cfg.evaluators.push_back(std::move(e));
    literal_ids.emplace(lit, id);
    return id;
  };

  for (const auto& c : unified) {
    cfg.signals.push_back(c.id);
    std::vector<int> disj;
    for (const auto& conj : decompose(c.one)) {
      std::vector<int> mask;
      for (const auto& lit : conj) mask.push_back(evaluator_for(lit));
      use.literals_unshared += static_cast<int>(conj.size());
      ++use.conjs_unshared;
      std::sort(mask.begin(), mask.end());
      mask.erase(std::unique(mask.begin(), mask.end()), mask.end());
      auto [it, fresh] = conj_ids.try_emplace(mask, static_cast<int>(cfg.conjunctions.size()));
      if (fresh) cfg.conjunctions.push_back(mask);
      disj.push_back(it->second);
    }
    std::sort(disj.begin(), disj.end());
    disj.erase(std::unique(disj.begin(), disj.end()), disj.end());
    cfg.disjunctions.push_back(std::move(disj));
  }
  use.conjs = static_cast<int>(cfg.conjunctions.size());
  use.disjs = static_cast<int>(cfg.disjunctions.size());

  auto check = [](const char* what, int need, int cap) {
    if (need > cap)
      throw Error(ErrorKind::kCapacity, std::string(what) + ": need " + std::to_string(need) +
                                            ", capacity " + std::to_string(cap));
  };
  check("LOWER evaluators", use.lows, caps.lows);
  check("UPPER evaluators", use.ups, caps.ups);
  check("AFFINE evaluators", use.afs, caps.afs);
  check("conjunctions", use.conjs, caps.conjs);
  check("disjunctions", use.disjs, caps.disjs);
  return cfg;
}

json to_json(const GcConfig& cfg) {
  json evals = json::array();
  for (const auto& e : cfg.evaluators) {
    json j = {{"kind", to_string(e.kind)}};
    if (e.kind == EvalKind::kAffine) {
      j["mode"] = e.mode == EvalMode::kEq ? "EQ" : "GEQ";
      j["weights"] = e.weights;
      j["strides"] = e.strides;
      j["b"] = e.b;
    } else {
      j["mode"] = e.mode == EvalMode::kEq ? "EQ" : "INEQ";
      j["dim"] = e.dim;
      j["value"] = e.value;
    }
    evals.push_back(std::move(j));
  }
  const auto& c = cfg.capacities;
  const auto& u = cfg.usage;
  return {
      {"scanner", {{"extents", cfg.scanner.extents()}, {"epilog", cfg.scanner.epilog()}, {"ii", cfg.ii}}},
      {"evaluators", std::move(evals)},
      {"conjunctions", cfg.conjunctions},
      {"disjunctions", cfg.disjunctions},
      {"signals", cfg.signals},
      {"capacities",
       {{"lows", c.lows}, {"ups", c.ups}, {"afs", c.afs}, {"conjs", c.conjs}, {"disjs", c.disjs}}},
      {"usage",
       {{"lows", u.lows},
        {"ups", u.ups},
        {"afs", u.afs},
        {"conjs", u.conjs},
        {"disjs", u.disjs},
        {"literals_unshared", u.literals_unshared},
        {"conjs_unshared", u.conjs_unshared}}},
  };
}

GcConfig gc_config_from_json(const json& j) {
  try {
    GcConfig cfg;
    const json& s = j.at("scanner");
    cfg.scanner = ScanBox(s.at("extents").get<IntVec>(), s.at("epilog").get<Int>());
    cfg.ii = s.at("ii").get<Int>();
    for (const json& e : j.at("evaluators")) {
      Evaluator ev;
      const std::string kind = e.at("kind").get<std::string>();
      const std::string mode = e.at("mode").get<std::string>();
      ev.mode = mode == "EQ" ? EvalMode::kEq : EvalMode::kIneq;
      if (kind == "AFFINE") {
        ev.kind = EvalKind::kAffine;
        ev.weights = e.at("weights").get<IntVec>();
        ev.strides = e.at("strides").get<IntVec>();
        ev.b = e.at("b").get<Int>();
      } else if (kind == "LOWER" || kind == "UPPER") {
        ev.kind = kind == "LOWER" ? EvalKind::kLower : EvalKind::kUpper;
        ev.dim = e.at("dim").get<std::size_t>();
        ev.value = e.at("value").get<Int>();
      } else {
        throw Error(ErrorKind::kParse, "gc config: unknown evaluator kind " + kind);
      }
      cfg.evaluators.push_back(std::move(ev));
    }
    cfg.conjunctions = j.at("conjunctions").get<std::vector<std::vector<int>>>();
    cfg.disjunctions = j.at("disjunctions").get<std::vector<std::vector<int>>>();
    cfg.signals = j.at("signals").get<std::vector<int>>();
    const json& c = j.at("capacities");
    cfg.capacities = {c.at("lows"), c.at("ups"), c.at("afs"), c.at("conjs"), c.at("disjs")};
    const json& u = j.at("usage");
    cfg.usage = {u.at("lows"), u.at("ups"), u.at("afs"), u.at("conjs"), u.at("disjs"),
                 u.at("literals_unshared"), u.at("conjs_unshared")};
    return cfg;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("gc config: ") + e.what());
  }
}

}  // namespace tcpa::gcmap
