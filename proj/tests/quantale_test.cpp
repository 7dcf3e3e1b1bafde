// Copyright 2026 The qprop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <memory>
#include <utility>
#include <vector>

#include "oracles.hpp"
#include "qprop/families.hpp"
#include "qprop/propagation.hpp"
#include "qprop/sampling.hpp"

namespace {

using qprop::ActualitySet;
using qprop::Elem;
using qprop::JoinMap;
using qprop::LatticePtr;
using qprop::PowersetMap;
using qprop::Rng;

LatticePtr make(qprop::OrthoLattice l) { return std::make_shared<const qprop::OrthoLattice>(std::move(l)); }

struct Family {
  LatticePtr lib;
  oracle::Lattice ref;
};

std::vector<Family> families() {
  std::vector<Family> out;
  for (int n = 1; n <= 3; ++n) out.push_back({make(qprop::boolean_lattice(n)), oracle::boolean(n)});
  for (int n = 1; n <= 3; ++n) out.push_back({make(qprop::mo_lattice(n)), oracle::mo(n)});
  return out;
}

TEST(JoinMaps, SasakiProjectionPreservesJoins) {
  for (const auto& [lp, ref] : families())
    for (Elem a : lp->all()) EXPECT_TRUE(JoinMap::sasaki(lp, a).preserves_joins()) << lp->name();
}

TEST(JoinMaps, NonJoinMapIsRejected) {
  const LatticePtr l = make(qprop::mo_lattice(2));
  std::vector<Elem> t(l->size(), l->bottom());
  t[l->at("1").index] = l->at("1");  // a ↦ 0, b ↦ 0 but a ∨ b = 1 ↦ 1
  EXPECT_THROW(JoinMap::from_table(l, t), qprop::Error);
  EXPECT_TRUE(JoinMap::from_table_unchecked(l, t).join_violation().has_value());
}

TEST(JoinMaps, PointwiseOrderAndOperations) {
  const LatticePtr l = make(qprop::mo_lattice(2));
  const JoinMap pa = JoinMap::sasaki(l, l->at("a"));
  const JoinMap zero = JoinMap::sasaki(l, l->bottom());
  const JoinMap one = JoinMap::identity(l);
  EXPECT_TRUE(zero.pointwise_leq(pa));
  // φ_a(b) = a is not below b, so φ_a and the identity are incomparable.
  EXPECT_FALSE(pa.pointwise_leq(one));
  EXPECT_FALSE(one.pointwise_leq(pa));
  EXPECT_EQ(pointwise_join(zero, pa), pa);
  EXPECT_EQ(pointwise_join(pa, one)(l->at("b")), l->top());
  EXPECT_EQ(compose(pa, pa), pa);
}

TEST(QSharp, MeasurementMapsPassFastAndBruteForce) {
  for (const auto& [lp, ref] : families()) {
    for (int a = 0; a < ref.size(); ++a) {
      const auto f = PowersetMap::perfect_measurement(lp, lp->at(ref.name(a)));
      EXPECT_TRUE(f.q_sharp().member);
      EXPECT_TRUE(f.q_sharp_bruteforce().member);
      EXPECT_TRUE(oracle::a_sharp(ref, [&](const std::set<int>& B) { return oracle::measure(ref, a, B); }));
    }
  }
}

TEST(QSharp, FastCheckAgreesWithReferenceOnRandomMaps) {
  Rng rng(7);
  for (const auto& [lp, ref] : families()) {
    std::size_t members = 0;
    for (int i = 0; i < 60; ++i) {
      const PowersetMap f = qprop::random_mixed_map(lp, rng);
      const bool expected = oracle::a_sharp(ref, oracle::from_lib(ref, f));
      EXPECT_EQ(f.q_sharp().member, expected) << lp->name() << " sample " << i;
      EXPECT_EQ(f.q_sharp_bruteforce().member, expected) << lp->name() << " sample " << i;
      members += expected;
    }
    // The mixture exercises both outcomes on lattices with room for it.
    if (ref.size() >= 6) {
      EXPECT_GT(members, 0u) << lp->name();
      EXPECT_LT(members, 60u) << lp->name();
    }
  }
}

TEST(QSharp, WitnessHasEqualJoinsAndDifferentImages) {
  Rng rng(11);
  const LatticePtr l = make(qprop::mo_lattice(3));
  int seen = 0;
  for (int i = 0; i < 200 && seen < 20; ++i) {
    const PowersetMap f = qprop::random_union_preserving_map(l, rng);
    for (const auto& r : {f.q_sharp(), f.q_sharp_bruteforce()}) {
      if (r.member) continue;
      ++seen;
      const auto& w = *r.witness;
      EXPECT_EQ(l->join_all(w.first), l->join_all(w.second));
      EXPECT_EQ(l->join_all(w.first), w.join);
      EXPECT_EQ(l->join_all(f.apply(w.first)), w.first_image);
      EXPECT_EQ(l->join_all(f.apply(w.second)), w.second_image);
      EXPECT_NE(w.first_image, w.second_image);
    }
  }
  EXPECT_GT(seen, 0);
}

TEST(QSharp, SupOfNonMemberThrowsWithWitness) {
  const LatticePtr l = make(qprop::mo_lattice(2));
  std::vector<ActualitySet> action(l->size());
  action[l->at("a").index] = {l->at("a")};  // a ↦ {a}, b ↦ ∅, a ∨ b = 1 ↦ ∅
  const PowersetMap f = PowersetMap::from_action(l, action);
  EXPECT_FALSE(f.in_q_sharp());
  EXPECT_THROW(f.sup(), qprop::ASharpViolation);
}

TEST(SupMorphism, MeasurementPairsPreserveCompositionAndUnion) {
  for (const auto& [lp, ref] : families()) {
    for (int a = 0; a < ref.size(); ++a) {
      const auto f = PowersetMap::perfect_measurement(lp, lp->at(ref.name(a)));
      for (int b = 0; b < ref.size(); ++b) {
        const auto g = PowersetMap::perfect_measurement(lp, lp->at(ref.name(b)));
        EXPECT_FALSE(qprop::sup_morphism_failure(f, g).has_value());

        // Reference: ⋁ computed from the literal maps.
        auto fg = [&](const std::set<int>& B) { return oracle::measure(ref, a, oracle::measure(ref, b, B)); };
        const auto lhs = oracle::sup(ref, fg);
        const auto sf = oracle::sup(ref, [&](const std::set<int>& B) { return oracle::measure(ref, a, B); });
        const auto sg = oracle::sup(ref, [&](const std::set<int>& B) { return oracle::measure(ref, b, B); });
        for (int x = 0; x < ref.size(); ++x) {
          EXPECT_EQ(lhs[x], sf[sg[x]]);
          const Elem lib_x = lp->at(ref.name(x));
          EXPECT_EQ(lp->name_of(compose(f, g).sup()(lib_x)), ref.name(lhs[x]));
          EXPECT_EQ(lp->name_of(unite(f, g).sup()(lib_x)), ref.name(ref.join(sf[x], sg[x])));
        }
      }
    }
  }
}

TEST(SupMorphism, DefiniteMapOfMeasurementIsSumOfProjections) {
  // ⋁[σ_{a}](b) = φ_a(b) ∨ φ_{a⊥}(b).
  const LatticePtr l = make(qprop::mo_lattice(3));
  for (Elem a : l->all()) {
    const JoinMap s = PowersetMap::perfect_measurement(l, a).sup();
    for (Elem b : l->all()) EXPECT_EQ(s(b), l->join(l->sasaki(a, b), l->sasaki(l->ortho(a), b)));
  }
}

TEST(SupMorphism, RandomQSharpPairsAndClosure) {
  Rng rng(3);
  for (const auto& [lp, ref] : families()) {
    for (int i = 0; i < 40; ++i) {
      const PowersetMap f = qprop::random_q_sharp_map(lp, rng);
      const PowersetMap g = qprop::random_q_sharp_map(lp, rng);
      ASSERT_TRUE(oracle::a_sharp(ref, oracle::from_lib(ref, f)));
      EXPECT_FALSE(qprop::sup_morphism_failure(f, g).has_value());
      EXPECT_TRUE(compose(f, g).in_q_sharp());
      EXPECT_TRUE(unite(f, g).in_q_sharp());
    }
  }
}

TEST(SupMorphism, SurjectiveThroughLift) {
  Rng rng(5);
  for (const auto& [lp, ref] : families()) {
    for (int i = 0; i < 40; ++i) {
      const JoinMap g = qprop::random_join_map(lp, rng);
      const PowersetMap lifted = PowersetMap::lift(g);
      EXPECT_TRUE(lifted.in_q_sharp());
      EXPECT_EQ(lifted.sup(), g);
      EXPECT_FALSE(lifted.image(lp->top()).contains(lp->bottom()));
    }
  }
}

TEST(Operations, CompositionAndUnionActPointwise) {
  const LatticePtr l = make(qprop::mo_lattice(2));
  const auto fa = PowersetMap::perfect_measurement(l, l->at("a"));
  const auto fb = PowersetMap::perfect_measurement(l, l->at("b"));
  // Measure b then a, starting from {a}: {b, b'} then {a, a'}.
  EXPECT_EQ(compose(fa, fb).apply({l->at("a")}), (ActualitySet{l->at("a"), l->at("a'")}));
  EXPECT_EQ(unite(fa, fb).apply({l->at("a")}), (ActualitySet{l->at("a"), l->at("b"), l->at("b'")}));
  EXPECT_EQ(compose(fa, fb).name(), "measure_a_o_measure_b");
  const auto other = make(qprop::mo_lattice(3));
  EXPECT_THROW(compose(fa, PowersetMap::perfect_measurement(other, other->at("a"))), qprop::LatticeMismatch);
}

TEST(Operations, KillSet) {
  const LatticePtr l = make(qprop::mo_lattice(2));
  std::vector<ActualitySet> action(l->size());
  action[l->at("a").index] = {l->at("a")};
  const PowersetMap f = PowersetMap::from_action(l, action);
  EXPECT_EQ(f.kill_set(), (ActualitySet{l->at("a'"), l->at("b"), l->at("b'"), l->at("1")}));
  action[l->at("b").index] = {l->bottom()};
  EXPECT_THROW(PowersetMap::from_action(l, action), qprop::InvalidActualitySet);
}

TEST(Sampling, SameSeedSameMaps) {
  const LatticePtr l = make(qprop::mo_lattice(3));
  Rng r1(99), r2(99);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(qprop::random_mixed_map(l, r1), qprop::random_mixed_map(l, r2));
}

}  // namespace
