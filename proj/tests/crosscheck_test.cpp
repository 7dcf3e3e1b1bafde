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
#include <set>
#include <vector>

#include "oracles.hpp"
#include "qprop/builders.hpp"
#include "qprop/crosscheck.hpp"
#include "qprop/families.hpp"

namespace {

using namespace qprop;

Theory theory(OrthoLattice l) { return Theory{std::make_shared<const OrthoLattice>(std::move(l)), {}}; }

// Branches read off the derivation, checked against the literal maps of
// the reference model applied to {a}.
void expect_agreement(const Theory& th, const oracle::Lattice& ref) {
  const OrthoLattice& L = th.L();
  for (Elem a : L.nonzero())
    for (Elem b : L.nonzero()) {
      const int ra = ref.index(L.name_of(a)), rb = ref.index(L.name_of(b));
      const std::set<int> once = oracle::measure(ref, rb, {ra});
      const CrosscheckVerdict v = semantic_crosscheck(th, build::measurement(th, a, b));
      EXPECT_TRUE(v.agrees()) << v.detail;
      EXPECT_EQ(oracle::from_lib(ref, L, v.logic_branches), once);
      for (Elem c : L.nonzero()) {
        const int rc = ref.index(L.name_of(c));
        const CrosscheckVerdict w = semantic_crosscheck(th, build::composed(th, a, b, c));
        EXPECT_TRUE(w.agrees()) << w.detail;
        EXPECT_EQ(oracle::from_lib(ref, L, w.logic_branches), oracle::measure(ref, rc, once));
        EXPECT_EQ(w.measured, (std::vector<Elem>{b, c}));
        EXPECT_EQ(w.initial, a);
      }
    }
}

TEST(Crosscheck, Mo2MeasurementsAgreeWithReference) { expect_agreement(theory(mo_lattice(2)), oracle::mo(2)); }

TEST(Crosscheck, Boolean3MeasurementsAgreeWithReference) {
  expect_agreement(theory(boolean_lattice(3)), oracle::boolean(3));
}

TEST(Crosscheck, SuccessiveMeasurementsGiveFourBranches) {
  // σ_c σ_b({a}) with a, b, c pairwise incomparable atoms of MO3.
  const Theory th = theory(mo_lattice(3));
  const OrthoLattice& L = th.L();
  const CrosscheckVerdict v = semantic_crosscheck(th, build::composed(th, L.at("a"), L.at("b"), L.at("c")));
  ASSERT_TRUE(v.agrees());
  EXPECT_EQ(v.logic_branches, (ElemSet{L.at("c"), L.at("c'")}));
  const ElemSet two = semantic_crosscheck(th, build::composed(th, L.at("a"), L.at("b"), L.at("a"))).logic_branches;
  EXPECT_EQ(two, (ElemSet{L.at("a"), L.at("a'")}));
}

TEST(Crosscheck, WrongBranchesDisagree) {
  const Theory th = theory(mo_lattice(2));
  const OrthoLattice& L = th.L();
  const Elem a = L.at("a"), b = L.at("b");
  const Sequent s{{Formula::tensor(M(b), build::confirmed(a))}, build::confirmed(b)};
  const CrosscheckVerdict v = crosscheck_sequent(th, s);
  EXPECT_EQ(v.status, CrosscheckStatus::kDisagree);
  EXPECT_EQ(v.algebra_branches, (ElemSet{b, L.at("b'")}));
}

TEST(Crosscheck, ClosedImplicationIsRead) {
  const Theory th = theory(mo_lattice(2));
  const OrthoLattice& L = th.L();
  const Elem a = L.at("a");
  const Sequent s{{}, Formula::lolli(Formula::tensor(M(a), build::confirmed(a)), build::confirmed(a))};
  EXPECT_TRUE(crosscheck_sequent(th, s).agrees());
}

TEST(Crosscheck, UnrecognizedShapesAndInvalidDerivations) {
  const Theory th = theory(mo_lattice(2));
  const OrthoLattice& L = th.L();
  const Elem a = L.at("a");
  EXPECT_EQ(crosscheck_sequent(th, Sequent{{In(a)}, In(a)}).status, CrosscheckStatus::kUnrecognized);
  EXPECT_EQ(crosscheck_sequent(th, Sequent{{In(a), In(a)}, In(a)}).status, CrosscheckStatus::kUnrecognized);
  const Derivation bogus = Derivation::by_rule(Rule::kId, Sequent{{In(a)}, In(L.at("b"))});
  EXPECT_EQ(semantic_crosscheck(th, bogus).status, CrosscheckStatus::kInvalidDerivation);
}

TEST(Crosscheck, GeneralPropagationAgrees) {
  Theory th = theory(mo_lattice(2));
  const OrthoLattice& L = th.L();
  std::vector<ActualitySet> action(L.size());
  action[L.at("a").index] = {L.at("b"), L.at("a")};
  action[L.at("b").index] = {L.at("1")};
  th.add_map(PowersetMap::from_action(th.lattice, action, "alpha"));
  for (Elem x : {L.at("a"), L.at("b")}) {
    const CrosscheckVerdict v = semantic_crosscheck(th, build::general_propagation(th, "alpha", x));
    EXPECT_TRUE(v.agrees()) << v.detail;
    EXPECT_EQ(v.shape, "general-propagation");
    EXPECT_EQ(v.logic_branches, th.map("alpha").image(x));
  }
}

}  // namespace
