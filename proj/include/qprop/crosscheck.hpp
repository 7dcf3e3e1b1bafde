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

#ifndef QPROP_CROSSCHECK_HPP_
#define QPROP_CROSSCHECK_HPP_

#include <optional>
#include <string>
#include <vector>

#include "qprop/derivation.hpp"
#include "qprop/formula.hpp"
#include "qprop/kernel.hpp"
#include "qprop/powerset_map.hpp"

// Operational reading of two sequent shapes, compared against the
// propagation maps:
//
//   M(bn) ⊗ (... (M(b1) ⊗ (In(a) ⊗ R(a)))) ⊢ ⊕ In(p) ⊗ R(p)
//       branches must equal φ_{bn,bn⊥} ∘ ... ∘ φ_{b1,b1⊥} applied to {a}
//   IND(α) ⊗ In(x) ⊢ ⊕ In(z)
//       branches must equal α({x})
//
// Both the sequent form and the closed implication form ⊢ A ⊸ B are read.

namespace qprop {

enum class CrosscheckStatus { kAgree, kDisagree, kInvalidDerivation, kUnrecognized };

inline const char* to_string(CrosscheckStatus s) {
  switch (s) {
    case CrosscheckStatus::kAgree:
      return "agree";
    case CrosscheckStatus::kDisagree:
      return "disagree";
    case CrosscheckStatus::kInvalidDerivation:
      return "invalid-derivation";
    case CrosscheckStatus::kUnrecognized:
      return "unrecognized-shape";
  }
  return "?";
}

struct CrosscheckVerdict {
  CrosscheckStatus status = CrosscheckStatus::kUnrecognized;
  std::string shape;              // "measurement" or "general-propagation"
  std::optional<Elem> initial;    // a, or x
  std::vector<Elem> measured;     // b1, b2, ... in application order
  std::string map;                // α for general propagation
  ActualitySet logic_branches;    // read off the conclusion
  ActualitySet algebra_branches;  // computed by the propagation maps
  std::string detail;

  bool agrees() const { return status == CrosscheckStatus::kAgree; }
};

namespace detail {

inline std::optional<Elem> constant_of(const Formula& f, Formula::Kind kind) {
  if (f.kind() != kind || !f.term().is_constant()) return std::nullopt;
  return f.term().element();
}

// Collects the leaves of a ⊕ tree. Returns false on a leaf `leaf` rejects.
template <typename Leaf>
bool collect_branches(const Formula& f, ActualitySet& out, Leaf leaf) {
  if (f.kind() == Formula::Kind::kPlus)
    return collect_branches(f.left(), out, leaf) && collect_branches(f.right(), out, leaf);
  auto e = leaf(f);
  if (!e) return false;
  out.insert(*e);
  return true;
}

inline std::optional<Elem> confirmed_leaf(const Formula& f) {
  if (f.kind() != Formula::Kind::kTensor) return std::nullopt;
  auto p = constant_of(f.left(), Formula::Kind::kIn);
  auto q = constant_of(f.right(), Formula::Kind::kReach);
  if (!p || !q || !(*p == *q)) return std::nullopt;
  return p;
}

}  // namespace detail

/// Reads the shape of a sequent and compares branch sets; does not look at
/// how the sequent was derived.
inline CrosscheckVerdict crosscheck_sequent(const Theory& th, const Sequent& s) {
  CrosscheckVerdict v;
  Formula lhs = s.conclusion;
  Formula rhs = s.conclusion;
  if (s.context.size() == 1) {
    lhs = s.context.front();
  } else if (s.context.empty() && s.conclusion.kind() == Formula::Kind::kLolli) {
    lhs = s.conclusion.left();
    rhs = s.conclusion.right();
  } else {
    v.detail = "expected one hypothesis or a closed implication";
    return v;
  }

  // IND(α) ⊗ In(x)
  if (lhs.kind() == Formula::Kind::kTensor && lhs.left().kind() == Formula::Kind::kInduce) {
    auto x = detail::constant_of(lhs.right(), Formula::Kind::kIn);
    if (!x) {
      v.detail = "IND must be followed by In of a constant";
      return v;
    }
    if (!th.has_map(lhs.left().map_name())) {
      v.detail = "unknown map '" + lhs.left().map_name() + "'";
      return v;
    }
    v.shape = "general-propagation";
    v.initial = x;
    v.map = lhs.left().map_name();
    if (!detail::collect_branches(rhs, v.logic_branches,
                                  [](const Formula& f) { return detail::constant_of(f, Formula::Kind::kIn); })) {
      v.detail = "conclusion is not a sum of In atoms";
      return v;
    }
    v.algebra_branches = th.map(v.map).apply(ElemSet{*x});
  } else {
    Formula cur = lhs;
    std::vector<Elem> outer_first;
    while (cur.kind() == Formula::Kind::kTensor && cur.left().kind() == Formula::Kind::kMeasure) {
      auto b = detail::constant_of(cur.left(), Formula::Kind::kMeasure);
      if (!b) {
        v.detail = "measured property is not a constant";
        return v;
      }
      outer_first.push_back(*b);
      cur = cur.right();
    }
    auto a = detail::confirmed_leaf(cur);
    if (!a || outer_first.empty()) {
      v.detail = "hypothesis is not M(b) ⊗ ... ⊗ (In(a) ⊗ R(a))";
      return v;
    }
    v.shape = "measurement";
    v.initial = a;
    v.measured.assign(outer_first.rbegin(), outer_first.rend());
    if (!detail::collect_branches(rhs, v.logic_branches, detail::confirmed_leaf)) {
      v.detail = "conclusion is not a sum of In(p) ⊗ R(p) branches";
      return v;
    }
    PowersetMap chain = PowersetMap::identity(th.lattice);
    for (Elem b : v.measured) chain = compose(PowersetMap::perfect_measurement(th.lattice, b), chain);
    v.algebra_branches = chain.apply(ElemSet{*a});
  }

  v.status = v.logic_branches == v.algebra_branches ? CrosscheckStatus::kAgree : CrosscheckStatus::kDisagree;
  if (!v.agrees()) v.detail = "branch sets differ";
  return v;
}

/// Requires a kernel-valid derivation, then compares its conclusion.
inline CrosscheckVerdict semantic_crosscheck(const Theory& th, const Derivation& d) {
  KernelVerdict k = check_derivation(th, d);
  if (!k.valid()) {
    CrosscheckVerdict v;
    v.status = CrosscheckStatus::kInvalidDerivation;
    v.detail = "derivation rejected at " + k.failure->path_string() + ": " + k.failure->reason;
    return v;
  }
  return crosscheck_sequent(th, d.conclusion());
}

}  // namespace qprop

#endif  // QPROP_CROSSCHECK_HPP_
