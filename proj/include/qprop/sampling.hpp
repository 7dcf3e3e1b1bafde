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

#ifndef QPROP_SAMPLING_HPP_
#define QPROP_SAMPLING_HPP_

#include <cstdint>
#include <random>
#include <vector>

#include "qprop/join_map.hpp"
#include "qprop/powerset_map.hpp"

// Seeded generators for random maps. All randomness in the library flows
// through a caller-owned Rng so runs are reproducible from one seed.

namespace qprop {

using Rng = std::mt19937_64;

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline Elem uniform_element(Rng& rng, ElemSet from) {
  std::vector<Elem> v(from.begin(), from.end());
  return v[uniform_index(rng, v.size())];
}

inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

/// Random subset of `from`, each member kept with probability p.
inline ElemSet random_subset(Rng& rng, ElemSet from, double p) {
  ElemSet out;
  for (Elem e : from)
    if (coin(rng, p)) out.insert(e);
  return out;
}

/// Random join-preserving map: pointwise join of one to three terms, each
/// a step map x ↦ (x ≤ u ? 0 : v) possibly precomposed with a Sasaki
/// projection, or a Sasaki projection alone. Requires an orthomodular L.
inline JoinMap random_join_map(const LatticePtr& l, Rng& rng) {
  const OrthoLattice& L = *l;
  auto term = [&]() {
    const std::size_t shape = uniform_index(rng, 4);
    if (shape == 0) return JoinMap::sasaki(l, uniform_element(rng, L.all()));
    const Elem u = uniform_element(rng, L.all());
    const Elem v = uniform_element(rng, L.all());
    std::vector<Elem> t;
    for (Elem x : L.all()) t.push_back(L.leq(x, u) ? L.bottom() : v);
    JoinMap step = JoinMap::from_table(l, std::move(t));
    if (shape == 1) return compose(step, JoinMap::sasaki(l, uniform_element(rng, L.all())));
    if (shape == 2) return compose(JoinMap::sasaki(l, uniform_element(rng, L.all())), step);
    return step;
  };
  JoinMap f = term();
  const std::size_t extra = uniform_index(rng, 3);
  for (std::size_t i = 0; i < extra; ++i) f = pointwise_join(f, term());
  return JoinMap::from_table(l, f.table());
}

/// Random member of Q#(L) whose definite-join map is g: each σ(x) is a
/// random set of nonzero elements below g(x) joining exactly to g(x).
inline PowersetMap random_q_sharp_map_over(const JoinMap& g, Rng& rng) {
  const LatticePtr& l = g.lattice();
  const OrthoLattice& L = *l;
  std::vector<ActualitySet> action(L.size());
  for (Elem x : L.nonzero()) {
    const Elem target = g(x);
    if (target == L.bottom()) continue;
    ElemSet below = L.down_set(target);
    below.erase(L.bottom());
    ElemSet s = random_subset(rng, below, 0.35);
    if (L.join_all(s) != target) s.insert(target);
    action[x.index] = s;
  }
  return PowersetMap::from_action(l, std::move(action), "q");
}

inline PowersetMap random_q_sharp_map(const LatticePtr& l, Rng& rng) {
  return random_q_sharp_map_over(random_join_map(l, rng), rng);
}

/// Arbitrary union-preserving map; usually outside Q#(L).
inline PowersetMap random_union_preserving_map(const LatticePtr& l, Rng& rng, double density = 0.3) {
  std::vector<ActualitySet> action(l->size());
  for (Elem x : l->nonzero()) action[x.index] = random_subset(rng, l->nonzero(), density);
  return PowersetMap::from_action(l, std::move(action), "u");
}

/// Mixture used to exercise both outcomes of the A# checks: a third
/// arbitrary maps, a third Q# members, a third Q# members with one
/// singleton image replaced.
inline PowersetMap random_mixed_map(const LatticePtr& l, Rng& rng) {
  switch (uniform_index(rng, 3)) {
    case 0:
      return random_union_preserving_map(l, rng);
    case 1:
      return random_q_sharp_map(l, rng);
    default: {
      PowersetMap q = random_q_sharp_map(l, rng);
      std::vector<ActualitySet> action = q.action();
      const Elem x = uniform_element(rng, l->nonzero());
      action[x.index] = random_subset(rng, l->nonzero(), 0.3);
      return PowersetMap::from_action(l, std::move(action), "p");
    }
  }
}

}  // namespace qprop

#endif  // QPROP_SAMPLING_HPP_
