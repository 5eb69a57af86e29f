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

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "tcpa/error.hpp"

namespace tcpa::gcmap {
namespace {

using poly::Polyhedron;
using poly::LiteralKind;

ControlCondition one_domain(int id, DomainUnion one) {
  ControlCondition c;
  c.id = id;
  c.zero = DomainUnion(one.dim());
  c.one = std::move(one);
  return c;
}

TEST(GcmapTest, DecomposeBoxIsOneConstantConjunction) {
  auto d = decompose(Polyhedron(2).lower(0, 1).upper(1, 2));
  ASSERT_EQ(d.size(), 1u);
  for (const auto& lit : d[0]) EXPECT_FALSE(lit.is_affine());
}

TEST(GcmapTest, DecomposeShiftedDomainIsTwoConjunctions) {
  DomainUnion d(2, {Polyhedron(2).equal(0, 3), Polyhedron(2).equal(0, 0).lower(1, 1)});
  EXPECT_EQ(decompose(d).size(), 2u);
}

TEST(GcmapTest, DecomposeTriangle) {
  auto d = decompose(Polyhedron(2).affine_ge({1, -1}, 0));
  ASSERT_EQ(d.size(), 1u);
  ASSERT_EQ(d[0].size(), 1u);
  EXPECT_EQ(d[0][0].kind, LiteralKind::kAffineIneq);
}

TEST(GcmapTest, StrideTableExamples) {
  ScanBox box({4, 4});
  EXPECT_EQ(stride_table(IntVec{1, 0}, box), (IntVec{1, -3}));
  EXPECT_EQ(stride_table(IntVec{1, -1}, box), (IntVec{1, -4}));
  // u at (3,0) is 3; one step later at (0,1) it is -1 = 3 - 4.
  EXPECT_EQ(3 + stride_table(IntVec{1, -1}, box)[1], -1);
  EXPECT_EQ(stride_table(IntVec{0, 0}, box), (IntVec{0, 0}));
}

TEST(GcmapTest, StrideTableTelescopes) {
  testing::Random rnd(42);
  for (int iter = 0; iter < 50; ++iter) {
    ScanBox box = rnd.box(4, 5, 6);
    IntVec a(box.dim());
    for (auto& c : a) c = rnd.uniform(-3, 3);
    IntVec s = stride_table(a, box);
    auto pts = testing::scanned_points(box);
    for (std::size_t p = 0; p + 1 < pts.size(); ++p) {
      Int diff = poly::dot(a, pts[p + 1]) - poly::dot(a, pts[p]);
      EXPECT_EQ(diff, s[box.step_dimension(static_cast<Int>(p))]);
    }
  }
}

TEST(GcmapTest, SingleLowerBound) {
  GcConfig cfg = allocate({one_domain(0, Polyhedron(2).lower(0, 2))}, ScanBox({4, 4}), 1);
  EXPECT_EQ(cfg.usage.lows, 1);
  EXPECT_EQ(cfg.usage.ups, 0);
  EXPECT_EQ(cfg.usage.afs, 0);
  EXPECT_EQ(cfg.usage.conjs, 1);
  EXPECT_EQ(cfg.usage.disjs, 1);
}

TEST(GcmapTest, SharedLiteralUsesOneEvaluator) {
  std::vector<ControlCondition> c;
  for (int i = 0; i < 5; ++i) c.push_back(one_domain(i, Polyhedron(2).lower(0, 2).equal(1, i % 4)));
  GcConfig cfg = allocate(c, ScanBox({4, 4}), 1);
  int refs = 0;
  for (const auto& conj : cfg.conjunctions)
    for (int e : conj) refs += cfg.evaluators[static_cast<std::size_t>(e)].kind == EvalKind::kLower &&
                               cfg.evaluators[static_cast<std::size_t>(e)].mode == EvalMode::kIneq;
  // j0 >= 2 is one evaluator; the fifth condition repeats the first
  // conjunction exactly, so four conjunctions reference it.
  EXPECT_EQ(cfg.usage.conjs, 4);
  EXPECT_EQ(refs, 4);
  EXPECT_EQ(cfg.usage.literals_unshared, 10);
  EXPECT_EQ(cfg.usage.conjs_unshared, 5);
  EXPECT_EQ(cfg.disjunctions[0], cfg.disjunctions[4]);
}

TEST(GcmapTest, EqualityBalancesLowerAndUpper) {
  GcConfig cfg = allocate({one_domain(0, Polyhedron(2).equal(0, 1)), one_domain(1, Polyhedron(2).equal(0, 2))},
                          ScanBox({4, 4}), 1);
  EXPECT_EQ(cfg.usage.lows, 1);
  EXPECT_EQ(cfg.usage.ups, 1);
}

TEST(GcmapTest, PaperScaleCapacitiesAreDefaults) {
  Capacities c;
  EXPECT_EQ(c.lows, 32);
  EXPECT_EQ(c.ups, 32);
  EXPECT_EQ(c.afs, 65);
  EXPECT_EQ(c.conjs, 83);
  EXPECT_EQ(c.disjs, 18);
}

TEST(GcmapTest, CapacityErrorNamesResource) {
  Capacities caps;
  caps.afs = 1;
  try {
    allocate({one_domain(0, Polyhedron(2).affine_ge({1, -1}, 0).affine_ge({1, 1}, 2))}, ScanBox({4, 4}), 1, caps);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kCapacity);
    EXPECT_NE(std::string(e.what()).find("AFFINE"), std::string::npos);
  }
}

TEST(GcmapTest, JsonRoundTrip) {
  GcConfig cfg = allocate({one_domain(0, Polyhedron(2).affine_eq({1, -1}, -1)),
                           one_domain(1, DomainUnion(2, {Polyhedron(2).equal(0, 3), Polyhedron(2).upper(1, 0)}))},
                          ScanBox({4, 4}, 3), 2);
  EXPECT_EQ(gc_config_from_json(to_json(cfg)), cfg);
}

TEST(GcmapTest, SemanticPreservationFuzz) {
  testing::Random rnd(99);
  for (int iter = 0; iter < 60; ++iter) {
    ScanBox box = rnd.box(3, 5, 5);
    std::vector<ControlCondition> c;
    const int n = static_cast<int>(rnd.uniform(0, 6));
    for (int i = 0; i < n; ++i) c.push_back(one_domain(i, rnd.domain(box)));
    Capacities big{1000, 1000, 1000, 1000, 1000};
    GcConfig cfg = allocate(c, box, 1, big);
    for (const auto& j : testing::scanned_points(box)) {
      std::vector<bool> v = cfg.evaluate(j);
      for (int i = 0; i < n; ++i) EXPECT_EQ(v[static_cast<std::size_t>(i)], testing::in_union(c[static_cast<std::size_t>(i)].one, j));
      // Unshared evaluation: literals straight from the decomposition.
      for (int i = 0; i < n; ++i) {
        bool any = false;
        for (const auto& conj : decompose(c[static_cast<std::size_t>(i)].one)) {
          bool all = true;
          for (const auto& lit : conj) all = all && lit.holds(j);
          any = any || all;
        }
        EXPECT_EQ(any, v[static_cast<std::size_t>(i)]);
      }
    }
  }
}

}  // namespace
}  // namespace tcpa::gcmap
