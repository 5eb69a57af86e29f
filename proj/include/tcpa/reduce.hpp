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

// Condition reduction. A control condition only constrains its signal on its
// zero and one domains, so conditions that never disagree can share a wire:
// first drop conditions covered by another (prime filtering), then greedily
// merge compatible ones, possibly with swapped polarity.

#ifndef TCPA_REDUCE_HPP_
#define TCPA_REDUCE_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tcpa/alloc.hpp"

namespace tcpa::reduce {

using alloc::ControlCondition;
using poly::PointSet;
using poly::PointSpace;

enum class Encapsulation { kNo, kDirect, kInverted };
enum class Compatibility { kNo, kSamePolarity, kReversed };

/// Does c_j cover c_i (possibly with swapped polarity)?
Encapsulation encapsulates(const ControlCondition& cj, const ControlCondition& ci, PointSpace& space);
Compatibility can_unify(const ControlCondition& ci, const ControlCondition& cj, PointSpace& space);

struct Binding {
  int signal = 0;
  bool negative = false;

  friend bool operator==(const Binding&, const Binding&) = default;
};

/// Condition id -> physical signal (or prime condition index) and polarity.
using SignalBinding = std::map<int, Binding>;

struct PrimeResult {
  std::vector<ControlCondition> prime;  // ids renumbered 0..n-1
  SignalBinding binding;                // input id -> prime index
};

PrimeResult prime_filter(const std::vector<ControlCondition>& conditions, PointSpace& space);

struct ReductionReport {
  std::size_t conditions = 0;
  std::size_t prime = 0;
  std::size_t unified = 0;
  int tries = 0;
  int best_try = 0;
  double factor_prime = 1.0;
  double factor_unified = 1.0;
  double factor_total = 1.0;
};

struct UnifyResult {
  std::vector<ControlCondition> unified;  // id == signal index
  SignalBinding binding;                  // input id -> signal
  ReductionReport report;
};

inline constexpr int kDefaultTries = 100;

/// Greedy unification over `tries` seeded permutations (seed + try index);
/// the smallest result wins, ties go to the earliest try.
UnifyResult unify_greedy(const std::vector<ControlCondition>& prime, int tries, std::uint64_t seed,
                         PointSpace& space);

/// prime_filter followed by unify_greedy, with bindings composed back to
/// the original condition ids.
UnifyResult reduce_conditions(const std::vector<ControlCondition>& conditions, int tries,
                              std::uint64_t seed, PointSpace& space);

/// Checks that every original condition is reproduced by its bound signal on
/// its zero and one domains. Returns a description of the first violation.
std::optional<std::string> check_soundness(const std::vector<ControlCondition>& conditions,
                                           const std::vector<ControlCondition>& signals,
                                           const SignalBinding& binding, PointSpace& space);

}  // namespace tcpa::reduce

#endif  // TCPA_REDUCE_HPP_
