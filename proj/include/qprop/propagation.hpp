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

#ifndef QPROP_PROPAGATION_HPP_
#define QPROP_PROPAGATION_HPP_

#include <optional>
#include <string>
#include <vector>

#include "qprop/join_map.hpp"
#include "qprop/lattice.hpp"
#include "qprop/parallel.hpp"
#include "qprop/powerset_map.hpp"

// Sweeps over perfect-measurement maps: the Sasaki preorder, the
// order-embedding counterexample, the pairing identities of measurement
// maps, and the physical invariants of a perfect measurement.

namespace qprop {

/// One named check with an optional failure witness (element names).
struct CheckResult {
  std::string name;
  bool pass = true;
  std::vector<std::string> witness;
  std::string detail;
};

inline bool all_pass(const std::vector<CheckResult>& rs) {
  for (const auto& r : rs)
    if (!r.pass) return false;
  return true;
}

inline void require_orthomodular(const OrthoLattice& l) {
  if (!l.is_orthomodular()) throw NotOrthomodular(l.name());
}

/// φ_a ⊴ φ_{a'}  ⇔  φ_a ∘ φ_{a'} = φ_a.
inline bool sasaki_precedes(const LatticePtr& l, Elem a, Elem a2) {
  JoinMap pa = JoinMap::sasaki(l, a);
  return compose(pa, JoinMap::sasaki(l, a2)) == pa;
}

/// Witness that the Sasaki preorder is not the pointwise order of S(L):
/// φ_a ⊴ φ_{a∨a'} while φ_a(x) ≰ φ_{a∨a'}(x).
struct OrderCounterexample {
  Elem a;
  Elem a_prime;
  Elem argument;
  Elem lhs_image;  // φ_a(argument)
  Elem rhs_image;  // φ_{a∨a'}(argument)
};

inline bool recheck(const LatticePtr& l, const OrderCounterexample& w) {
  const OrthoLattice& L = *l;
  const Elem j = L.join(w.a, w.a_prime);
  return sasaki_precedes(l, w.a, j) && L.sasaki(w.a, w.argument) == w.lhs_image &&
         L.sasaki(j, w.argument) == w.rhs_image && !L.leq(w.lhs_image, w.rhs_image);
}

/// Searches pairs (a, a') with a ∉ {0, 1}, a ∧ a' = 0 and a' ≰ a⊥. The
/// argument a' itself is tried first, then every element in index order.
inline std::optional<OrderCounterexample> find_order_counterexample(const LatticePtr& l) {
  const OrthoLattice& L = *l;
  require_orthomodular(L);
  for (Elem a : L.all()) {
    if (a == L.bottom() || a == L.top()) continue;
    for (Elem ap : L.all()) {
      if (L.meet(a, ap) != L.bottom() || L.leq(ap, L.ortho(a))) continue;
      const Elem j = L.join(a, ap);
      if (!sasaki_precedes(l, a, j)) continue;
      std::vector<Elem> args{ap};
      for (Elem x : L.all())
        if (x != ap) args.push_back(x);
      for (Elem x : args) {
        Elem lhs = L.sasaki(a, x), rhs = L.sasaki(j, x);
        if (!L.leq(lhs, rhs)) return OrderCounterexample{a, ap, x, lhs, rhs};
      }
    }
  }
  return std::nullopt;
}

/// Pairing identities of perfect-measurement maps:
///   (i)  the map for a equals the map for a⊥;
///   (ii) the maps for a and b coincide iff b ∈ {a, a⊥}.
inline std::vector<CheckResult> check_measurement_pairing(const LatticePtr& l, unsigned workers = 1) {
  const OrthoLattice& L = *l;
  require_orthomodular(L);
  std::vector<Elem> elems(L.all().begin(), L.all().end());
  auto maps = parallel_map(elems.size(), workers,
                           [&](std::size_t i) { return PowersetMap::perfect_measurement(l, elems[i]); });

  CheckResult self_dual{"pairing-self-dual", true, {}, {}};
  for (std::size_t i = 0; i < elems.size() && self_dual.pass; ++i) {
    const Elem a = elems[i];
    if (!(maps[i] == maps[L.ortho(a).index])) self_dual = {"pairing-self-dual", false, {L.name_of(a)}, {}};
  }

  auto rows = parallel_map(elems.size(), workers, [&](std::size_t i) -> std::optional<std::pair<Elem, Elem>> {
    const Elem a = elems[i];
    for (std::size_t j = 0; j < elems.size(); ++j) {
      const Elem b = elems[j];
      const bool same = maps[i] == maps[j];
      const bool paired = b == a || b == L.ortho(a);
      if (same != paired) return std::pair{a, b};
    }
    return std::nullopt;
  });
  CheckResult exact{"pairing-exact", true, {}, {}};
  for (const auto& r : rows)
    if (r) {
      exact = {"pairing-exact", false, {L.name_of(r->first), L.name_of(r->second)}, {}};
      break;
    }
  return {self_dual, exact};
}

/// Every outcome of measuring {a, a⊥} lies below a or below a⊥.
inline CheckResult check_branch_soundness(const LatticePtr& l) {
  const OrthoLattice& L = *l;
  require_orthomodular(L);
  for (Elem a : L.all()) {
    auto f = PowersetMap::perfect_measurement(l, a);
    for (Elem b : L.nonzero())
      for (Elem c : f.image(b))
        if (!L.leq(c, a) && !L.leq(c, L.ortho(a)))
          return {"branch-soundness", false, {L.name_of(a), L.name_of(b), L.name_of(c)}, {}};
  }
  return {"branch-soundness", true, {}, {}};
}

/// A property compatible with the measured one stays actual: every outcome
/// lies below it and the outcomes join back to it.
inline CheckResult check_compatibility_preservation(const LatticePtr& l) {
  const OrthoLattice& L = *l;
  require_orthomodular(L);
  for (Elem a : L.all()) {
    auto f = PowersetMap::perfect_measurement(l, a);
    for (Elem b : L.nonzero()) {
      if (!L.compatible(a, b)) continue;
      auto img = f.image(b);
      bool below = true;
      for (Elem c : img) below = below && L.leq(c, b);
      if (!below || L.join_all(img) != b)
        return {"compatibility-preservation", false, {L.name_of(a), L.name_of(b)}, {}};
    }
  }
  return {"compatibility-preservation", true, {}, {}};
}

/// ∨[-] respects composition and union for the pair (f, g).
inline std::optional<std::string> sup_morphism_failure(const PowersetMap& f, const PowersetMap& g) {
  const JoinMap sf = f.sup(), sg = g.sup();
  if (!(compose(f, g).sup() == compose(sf, sg))) return "composition";
  if (!(unite(f, g).sup() == pointwise_join(sf, sg))) return "union";
  return std::nullopt;
}

}  // namespace qprop

#endif  // QPROP_PROPAGATION_HPP_
