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

// Global controller configuration. Each signal is a disjunction of
// conjunctions of literals; every literal is bound to one evaluator:
// LOWER/UPPER compare one muxed index against a constant, AFFINE compares an
// incrementally updated accumulator a·j against b.

#ifndef TCPA_GCMAP_HPP_
#define TCPA_GCMAP_HPP_

#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "tcpa/alloc.hpp"
#include "tcpa/poly.hpp"

namespace tcpa::gcmap {

using alloc::ControlCondition;
using poly::DomainUnion;
using poly::Int;
using poly::IntVec;
using poly::Literal;
using poly::ScanBox;

enum class EvalKind { kLower, kUpper, kAffine };
/// kIneq is >= for LOWER and AFFINE, <= for UPPER.
enum class EvalMode { kIneq, kEq };

std::string to_string(EvalKind k);

struct Evaluator {
  EvalKind kind = EvalKind::kLower;
  EvalMode mode = EvalMode::kIneq;
  std::size_t dim = 0;  // LOWER/UPPER
  Int value = 0;        // LOWER/UPPER
  IntVec weights;       // AFFINE
  IntVec strides;       // AFFINE, weights·epsilon_d
  Int b = 0;            // AFFINE

  /// Direct evaluation on a point; the simulator uses the accumulator instead.
  bool holds(std::span<const Int> j) const;
  friend bool operator==(const Evaluator&, const Evaluator&) = default;
};

struct Capacities {
  int lows = 32;
  int ups = 32;
  int afs = 65;
  int conjs = 83;
  int disjs = 18;

  friend bool operator==(const Capacities&, const Capacities&) = default;
};

struct Usage {
  int lows = 0;
  int ups = 0;
  int afs = 0;
  int conjs = 0;
  int disjs = 0;
  // Without sharing: one evaluator per literal occurrence, one conjunction
  // per polyhedron part.
  int literals_unshared = 0;
  int conjs_unshared = 0;

  friend bool operator==(const Usage&, const Usage&) = default;
};

struct GcConfig {
  ScanBox scanner;  // with epilog
  Int ii = 1;
  std::vector<Evaluator> evaluators;
  std::vector<std::vector<int>> conjunctions;  // evaluator indices
  std::vector<std::vector<int>> disjunctions;  // conjunction indices, one per signal
  std::vector<int> signals;                    // unified condition ids
  Capacities capacities;
  Usage usage;

  std::size_t signal_count() const { return disjunctions.size(); }
  /// Signal values at a point by direct evaluation.
  std::vector<bool> evaluate(std::span<const Int> j) const;
  friend bool operator==(const GcConfig&, const GcConfig&) = default;
};

/// One conjunction per polyhedron part.
std::vector<std::vector<Literal>> decompose(const DomainUnion& one);

/// Entry d is a·epsilon_d, the change of a·j when the scan increments
/// dimension d (and resets all lower dimensions).
IntVec stride_table(std::span<const Int> a, const ScanBox& box);

/// Throws Error(kCapacity) naming the first exceeded resource.
GcConfig allocate(const std::vector<ControlCondition>& unified, const ScanBox& scanner, Int ii,
                  const Capacities& caps = {});

nlohmann::json to_json(const GcConfig& cfg);
GcConfig gc_config_from_json(const nlohmann::json& j);

}  // namespace tcpa::gcmap

#endif  // TCPA_GCMAP_HPP_
