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

#include "tcpa/reduce.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "tcpa/error.hpp"

namespace tcpa::reduce {

using poly::DomainUnion;

namespace {

struct Sets {
  PointSet zero;
  PointSet one;
};

Sets sets_of(const ControlCondition& c, PointSpace& space) {
  return {space.points(c.zero), space.points(c.one)};
}

Encapsulation encapsulates(const Sets& j, const Sets& i) {
  if (i.zero.is_subset_of(j.zero) && i.one.is_subset_of(j.one)) return Encapsulation::kDirect;
  if (i.zero.is_subset_of(j.one) && i.one.is_subset_of(j.zero)) return Encapsulation::kInverted;
  return Encapsulation::kNo;
}

Compatibility can_unify(const Sets& i, const Sets& j) {
  if (!i.zero.intersects(j.one) && !i.one.intersects(j.zero)) return Compatibility::kSamePolarity;
  if (!i.zero.intersects(j.zero) && !i.one.intersects(j.one)) return Compatibility::kReversed;
  return Compatibility::kNo;
}

double ratio(std::size_t a, std::size_t b) {
  return b == 0 ? 1.0 : static_cast<double>(a) / static_cast<double>(b);
}

}  // namespace

Encapsulation encapsulates(const ControlCondition& cj, const ControlCondition& ci, PointSpace& space) {
  return encapsulates(sets_of(cj, space), sets_of(ci, space));
}

Compatibility can_unify(const ControlCondition& ci, const ControlCondition& cj, PointSpace& space) {
  return can_unify(sets_of(ci, space), sets_of(cj, space));
}

PrimeResult prime_filter(const std::vector<ControlCondition>& conditions, PointSpace& space) {
  const std::size_t n = conditions.size();
  std::vector<Sets> sets;
  for (const auto& c : conditions) sets.push_back(sets_of(c, space));

  // target[k] is the input index that currently represents input k.
  std::vector<std::size_t> target(n);
  std::vector<bool> negative(n, false);
  std::vector<std::size_t> retained;
  for (std::size_t i = 0; i < n; ++i) {
    target[i] = i;
    bool covered = false;
    for (std::size_t r : retained) {
      Encapsulation e = encapsulates(sets[r], sets[i]);
      if (e == Encapsulation::kNo) continue;
      target[i] = r;
      negative[i] = e == Encapsulation::kInverted;
      covered = true;
      break;
    }
    if (covered) continue;
    std::vector<std::size_t> keep;
    for (std::size_t r : retained) {
      Encapsulation e = encapsulates(sets[i], sets[r]);
      if (e == Encapsulation::kNo) {
        keep.push_back(r);
        continue;
      }
      for (std::size_t k = 0; k < i; ++k) {
        if (target[k] != r) continue;
        target[k] = i;
        negative[k] = negative[k] != (e == Encapsulation::kInverted);
      }
    }
    keep.push_back(i);
    retained = std::move(keep);
  }

  PrimeResult out;
  std::vector<int> index(n, -1);
  for (std::size_t r : retained) {
    index[r] = static_cast<int>(out.prime.size());
    ControlCondition c = conditions[r];
    c.id = index[r];
    out.prime.push_back(std::move(c));
  }
  for (std::size_t k = 0; k < n; ++k)
    out.binding[conditions[k].id] = {index[target[k]], negative[k]};
  return out;
}

UnifyResult unify_greedy(const std::vector<ControlCondition>& prime, int tries, std::uint64_t seed,
                         PointSpace& space) {
  if (tries < 1) throw Error(ErrorKind::kValidation, "unify_greedy: tries must be >= 1");
  const std::size_t n = prime.size();
  std::vector<Sets> sets;
  for (const auto& c : prime) sets.push_back(sets_of(c, space));

  struct Group {
    Sets sets;
    std::vector<std::pair<std::size_t, bool>> members;  // (prime index, negative)
  };
  std::vector<Group> best;
  int best_try = 0;
  for (int t = 0; t < tries; ++t) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(t));
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<Group> groups;
    for (std::size_t i : order) {
      bool placed = false;
      for (auto& g : groups) {
        Compatibility c = can_unify(sets[i], g.sets);
        if (c == Compatibility::kSamePolarity) {
          g.sets.zero |= sets[i].zero;
          g.sets.one |= sets[i].one;
          g.members.emplace_back(i, false);
        } else if (c == Compatibility::kReversed) {
          g.sets.zero |= sets[i].one;
          g.sets.one |= sets[i].zero;
          g.members.emplace_back(i, true);
        } else {
          continue;
        }
        placed = true;
        break;
      }
      if (!placed) groups.push_back({sets[i], {{i, false}}});
    }
    if (t == 0 || groups.size() < best.size()) {
      best = std::move(groups);
      best_try = t;
    }
  }

  UnifyResult out;
  for (std::size_t s = 0; s < best.size(); ++s) {
    const Group& g = best[s];
    ControlCondition u;
    u.id = static_cast<int>(s);
    u.zero = DomainUnion(space.dim());
    u.one = DomainUnion(space.dim());
    // Provenance of a signal is its first member.
    const ControlCondition& first = prime[g.members.front().first];
    u.tile = first.tile;
    u.fu = first.fu;
    u.node = first.node;
    for (auto [i, neg] : g.members) {
      u.zero = u.zero.unite(neg ? prime[i].one : prime[i].zero);
      u.one = u.one.unite(neg ? prime[i].zero : prime[i].one);
      out.binding[prime[i].id] = {static_cast<int>(s), neg};
    }
    u.zero = space.simplify(u.zero);
    u.one = space.simplify(u.one);
    out.unified.push_back(std::move(u));
  }
  out.report.conditions = n;
  out.report.prime = n;
  out.report.unified = out.unified.size();
  out.report.tries = tries;
  out.report.best_try = best_try;
  out.report.factor_unified = ratio(n, out.unified.size());
  out.report.factor_total = out.report.factor_unified;
  return out;
}

UnifyResult reduce_conditions(const std::vector<ControlCondition>& conditions, int tries,
                              std::uint64_t seed, PointSpace& space) {
  PrimeResult pr = prime_filter(conditions, space);
  UnifyResult ur = unify_greedy(pr.prime, tries, seed, space);
  SignalBinding composed;
  for (const auto& [id, b] : pr.binding) {
    const Binding& u = ur.binding.at(b.signal);
    composed[id] = {u.signal, u.negative != b.negative};
  }
  ur.binding = std::move(composed);
  auto& r = ur.report;
  r.conditions = conditions.size();
  r.prime = pr.prime.size();
  r.factor_prime = ratio(r.conditions, r.prime);
  r.factor_unified = ratio(r.prime, r.unified);
  r.factor_total = ratio(r.conditions, r.unified);
  return ur;
}

std::optional<std::string> check_soundness(const std::vector<ControlCondition>& conditions,
                                           const std::vector<ControlCondition>& signals,
                                           const SignalBinding& binding, PointSpace& space) {
  std::vector<PointSet> one;
  for (const auto& s : signals) one.push_back(space.points(s.one));
  for (const auto& c : conditions) {
    auto it = binding.find(c.id);
    if (it == binding.end()) return "condition " + std::to_string(c.id) + " has no binding";
    const Binding& b = it->second;
    if (b.signal < 0 || static_cast<std::size_t>(b.signal) >= signals.size())
      return "condition " + std::to_string(c.id) + " bound to a missing signal";
    Sets s = sets_of(c, space);
    PointSet value = one[static_cast<std::size_t>(b.signal)];
    if (b.negative) value.flip();
    // Wrong on the one domain: value 0; wrong on the zero domain: value 1.
    PointSet bad = (s.one - value) | (s.zero & value);
    if (bad.none()) continue;
    const std::size_t pos = bad.find_first();
    std::ostringstream os;
    os << "condition " << c.id << " (tile " << c.tile.key() << ", fu " << c.fu << ", node " << c.node
       << ") disagrees with signal " << b.signal << (b.negative ? " (negative)" : "")
       << " at position " << pos;
    return os.str();
  }
  return std::nullopt;
}

}  // namespace tcpa::reduce
