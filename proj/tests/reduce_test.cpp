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

#include <gtest/gtest.h>

#include "oracle.hpp"

namespace tcpa::reduce {
namespace {

using poly::DomainUnion;
using poly::Int;
using poly::Polyhedron;
using poly::ScanBox;
using testing::member_positions;

Polyhedron P() { return Polyhedron(2); }

ControlCondition cond(int id, DomainUnion zero, DomainUnion one) {
  ControlCondition c;
  c.id = id;
  c.zero = std::move(zero);
  c.one = std::move(one);
  return c;
}

ControlCondition inverse(ControlCondition c, int id) {
  std::swap(c.zero, c.one);
  c.id = id;
  return c;
}

DomainUnion both(Polyhedron a, Polyhedron b) { return DomainUnion(2, {std::move(a), std::move(b)}); }

// Quadrants of the 4x4 tile.
Polyhedron qa() { return P().upper(0, 1).upper(1, 1); }
Polyhedron qb() { return P().lower(0, 2).upper(1, 1); }
Polyhedron qc() { return P().upper(0, 1).lower(1, 2); }
Polyhedron qd() { return P().lower(0, 2).lower(1, 2); }

// c_i and c_j only unify with reversed polarity; each unifies with c_k only
// at the same polarity, so no order merges all three.
std::vector<ControlCondition> triple() {
  return {cond(0, both(qa(), qc()), qb()), cond(1, qb(), both(qa(), qd())), cond(2, qc(), qd())};
}

class ReduceTest : public ::testing::Test {
 protected:
  PointSpace space{ScanBox({4, 4})};
};

TEST_F(ReduceTest, EncapsulationExamples) {
  ControlCondition ci = cond(0, P().equal(0, 0), P().lower(0, 2));
  ControlCondition cj = cond(1, P().upper(0, 1), P().lower(0, 2));
  EXPECT_EQ(encapsulates(ci, ci, space), Encapsulation::kDirect);
  EXPECT_EQ(encapsulates(cj, ci, space), Encapsulation::kDirect);
  EXPECT_EQ(encapsulates(cj, inverse(ci, 2), space), Encapsulation::kInverted);
  EXPECT_EQ(encapsulates(ci, cj, space), Encapsulation::kNo);
}

TEST_F(ReduceTest, CompatibilityExamples) {
  ControlCondition ci = cond(0, P().equal(0, 0), P().equal(0, 1));
  ControlCondition cj = cond(1, P().lower(0, 2).equal(1, 0), P().lower(0, 2).lower(1, 1));
  EXPECT_EQ(can_unify(ci, cj, space), Compatibility::kSamePolarity);

  ControlCondition rows = cond(2, P().upper(1, 1), P().lower(1, 2));
  ControlCondition cols = cond(3, P().upper(0, 1), P().lower(0, 2));
  EXPECT_EQ(can_unify(rows, cols, space), Compatibility::kNo);

  // Against its own inverse only the swapped pairing is disjoint.
  EXPECT_EQ(can_unify(ci, inverse(ci, 4), space), Compatibility::kReversed);
}

TEST_F(ReduceTest, PrimeDropsDuplicates) {
  ControlCondition c = cond(0, P().upper(0, 1), P().lower(0, 2));
  ControlCondition d = c;
  d.id = 1;
  PrimeResult r = prime_filter({c, d}, space);
  EXPECT_EQ(r.prime.size(), 1u);
  EXPECT_EQ(r.binding.at(1), (Binding{0, false}));
}

TEST_F(ReduceTest, PrimeBindsInverseNegative) {
  ControlCondition c = cond(0, P().upper(0, 1), P().lower(0, 2));
  PrimeResult r = prime_filter({c, inverse(c, 1)}, space);
  ASSERT_EQ(r.prime.size(), 1u);
  EXPECT_EQ(r.binding.at(0), (Binding{0, false}));
  EXPECT_EQ(r.binding.at(1), (Binding{0, true}));
}

TEST_F(ReduceTest, PrimeChainEvicts) {
  ControlCondition c1 = cond(0, P().equal(0, 0), P().equal(0, 3));
  ControlCondition c2 = cond(1, P().upper(0, 1), P().equal(0, 3));
  ControlCondition c3 = cond(2, P().upper(0, 1), P().lower(0, 2));
  PrimeResult r = prime_filter({c1, c2, c3}, space);
  ASSERT_EQ(r.prime.size(), 1u);
  EXPECT_EQ(member_positions(r.prime[0].one, space.box()), member_positions(c3.one, space.box()));
  for (int id = 0; id < 3; ++id) EXPECT_EQ(r.binding.at(id), (Binding{0, false}));
}

TEST_F(ReduceTest, PrimeEvictionComposesPolarity) {
  // c1 is covered by the inverse of c2, which is later covered by c3.
  ControlCondition c1 = cond(0, P().equal(0, 3), P().equal(0, 0));
  ControlCondition c2 = cond(1, P().upper(0, 1), P().equal(0, 3));
  ControlCondition c3 = inverse(cond(2, P().upper(0, 1), P().lower(0, 2)), 2);
  PrimeResult r = prime_filter({c1, c2, c3}, space);
  ASSERT_EQ(r.prime.size(), 1u);
  EXPECT_EQ(r.binding.at(0), (Binding{0, false}));
  EXPECT_EQ(r.binding.at(1), (Binding{0, true}));
  EXPECT_EQ(r.binding.at(2), (Binding{0, false}));
  EXPECT_FALSE(check_soundness({c1, c2, c3}, r.prime, r.binding, space));
}

TEST_F(ReduceTest, IncompatibleSetStaysPut) {
  ControlCondition rows = cond(0, P().upper(1, 1), P().lower(1, 2));
  ControlCondition cols = cond(1, P().upper(0, 1), P().lower(0, 2));
  UnifyResult r = unify_greedy({rows, cols}, kDefaultTries, 1, space);
  EXPECT_EQ(r.unified.size(), 2u);
}

TEST_F(ReduceTest, SamePolarityPairMerges) {
  ControlCondition ci = cond(0, P().equal(0, 0), P().equal(0, 1));
  ControlCondition cj = cond(1, P().lower(0, 2).equal(1, 0), P().lower(0, 2).lower(1, 1));
  UnifyResult r = unify_greedy({ci, cj}, kDefaultTries, 3, space);
  ASSERT_EQ(r.unified.size(), 1u);
  DomainUnion zero = both(P().equal(0, 0), P().lower(0, 2).equal(1, 0));
  EXPECT_EQ(member_positions(r.unified[0].zero, space.box()), member_positions(zero, space.box()));
  EXPECT_FALSE(check_soundness({ci, cj}, r.unified, r.binding, space));
}

TEST_F(ReduceTest, TripleNeedsTwoSignals) {
  auto c = triple();
  EXPECT_EQ(can_unify(c[0], c[1], space), Compatibility::kReversed);
  EXPECT_EQ(can_unify(c[0], c[2], space), Compatibility::kSamePolarity);
  EXPECT_EQ(can_unify(c[1], c[2], space), Compatibility::kSamePolarity);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    UnifyResult r = unify_greedy(c, 1, seed, space);
    EXPECT_EQ(r.unified.size(), 2u) << "seed " << seed;
    EXPECT_FALSE(check_soundness(c, r.unified, r.binding, space));
  }
  EXPECT_EQ(unify_greedy(c, kDefaultTries, 0, space).unified.size(), 2u);
}

TEST_F(ReduceTest, FlippedPolarityIsCaught) {
  ControlCondition c = cond(0, P().upper(0, 1), P().lower(0, 2));
  UnifyResult r = reduce_conditions({c}, 1, 0, space);
  EXPECT_FALSE(check_soundness({c}, r.unified, r.binding, space));
  r.binding[0].negative = !r.binding[0].negative;
  EXPECT_TRUE(check_soundness({c}, r.unified, r.binding, space));
}

// --- Properties ------------------------------------------------------------

// Disjoint zero/one pair drawn from random domains.
ControlCondition random_condition(testing::Random& rnd, const ScanBox& box, int id, PointSpace& space) {
  DomainUnion a = rnd.domain(box, 2), b = rnd.domain(box, 2);
  return cond(id, a, poly::subtract(b, a, space));
}

class ReducePropertyTest : public ::testing::TestWithParam<int> {};

TEST_P(ReducePropertyTest, SoundMonotonicDeterministic) {
  testing::Random rnd(8000 + GetParam());
  for (int iter = 0; iter < 20; ++iter) {
    ScanBox box = rnd.box(2, 5, 3);
    PointSpace space(box);
    std::vector<ControlCondition> c;
    const int n = static_cast<int>(rnd.uniform(0, 12));
    for (int i = 0; i < n; ++i) {
      c.push_back(random_condition(rnd, box, i, space));
      // Sprinkle in duplicates and inverses so the prime filter has work.
      if (rnd.coin(0.2)) c.push_back(inverse(c.back(), ++i));
    }
    for (auto& x : c) x.id = static_cast<int>(&x - c.data());

    const std::uint64_t seed = static_cast<std::uint64_t>(rnd.uniform(0, 1000));
    UnifyResult r = reduce_conditions(c, 20, seed, space);
    EXPECT_LE(r.report.unified, r.report.prime);
    EXPECT_LE(r.report.prime, r.report.conditions);
    EXPECT_EQ(r.report.conditions, c.size());

    // Soundness against a point-by-point oracle.
    for (const auto& orig : c) {
      const Binding b = r.binding.at(orig.id);
      auto one = member_positions(r.unified[static_cast<std::size_t>(b.signal)].one, box);
      for (Int p : member_positions(orig.one, box)) EXPECT_NE(one.count(p) > 0, b.negative);
      for (Int p : member_positions(orig.zero, box)) EXPECT_EQ(one.count(p) > 0, b.negative);
    }
    for (const auto& u : r.unified) EXPECT_FALSE(poly::intersects(u.zero, u.one, box));

    PrimeResult pr = prime_filter(c, space);
    for (const auto& a : pr.prime)
      for (const auto& b : pr.prime)
        if (a.id != b.id) EXPECT_EQ(encapsulates(a, b, space), Encapsulation::kNo);

    UnifyResult again = reduce_conditions(c, 20, seed, space);
    EXPECT_EQ(again.binding, r.binding);
    ASSERT_EQ(again.unified.size(), r.unified.size());
    for (std::size_t s = 0; s < r.unified.size(); ++s) {
      EXPECT_EQ(again.unified[s].zero, r.unified[s].zero);
      EXPECT_EQ(again.unified[s].one, r.unified[s].one);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, ReducePropertyTest, ::testing::Range(0, 5));

}  // namespace
}  // namespace tcpa::reduce
