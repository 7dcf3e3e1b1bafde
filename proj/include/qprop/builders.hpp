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

#ifndef QPROP_BUILDERS_HPP_
#define QPROP_BUILDERS_HPP_

#include <string>
#include <utility>
#include <vector>

#include "qprop/axioms.hpp"
#include "qprop/derivation.hpp"
#include "qprop/formula.hpp"

// Forward constructors for derivations. Each helper computes its node's
// conclusion from the premises, so a tree built only from these helpers
// is correct by construction as long as the premises fit (positions in
// range, shapes as documented). The kernel re-checks everything.

namespace qprop::build {

using Ctx = std::vector<Formula>;

inline Derivation id(const Formula& a) { return Derivation::by_rule(Rule::kId, Sequent{{a}, a}); }

inline Derivation axiom(const Theory& th, Schema schema, Bindings b, AxiomForm form = AxiomForm::kNatural) {
  Sequent s = instantiate_axiom(th, schema, b, form);
  return Derivation::by_axiom(schema, std::move(b), std::move(s));
}

/// left: Γ ⊢ A; right: Γ1, A, Γ2 ⊢ Δ with A at `pos`.
inline Derivation cut(Derivation left, Derivation right, std::size_t pos) {
  const Ctx& r = right.conclusion().context;
  if (pos >= r.size() || !(r[pos] == left.conclusion().conclusion)) throw Error("cut: formula mismatch at position");
  Ctx ctx(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(pos));
  ctx.insert(ctx.end(), left.conclusion().context.begin(), left.conclusion().context.end());
  ctx.insert(ctx.end(), r.begin() + static_cast<std::ptrdiff_t>(pos) + 1, r.end());
  Formula goal = right.conclusion().conclusion;
  return Derivation::by_rule(Rule::kCut, Sequent{std::move(ctx), std::move(goal)}, {std::move(left), std::move(right)});
}

inline Derivation tensor_r(Derivation l, Derivation r) {
  Ctx ctx = l.conclusion().context;
  ctx.insert(ctx.end(), r.conclusion().context.begin(), r.conclusion().context.end());
  Formula goal = Formula::tensor(l.conclusion().conclusion, r.conclusion().conclusion);
  return Derivation::by_rule(Rule::kTensorR, Sequent{std::move(ctx), std::move(goal)}, {std::move(l), std::move(r)});
}

/// Premise has A, B at pos, pos+1; the conclusion has A ⊗ B there.
inline Derivation tensor_l(Derivation d, std::size_t pos) {
  Ctx ctx = d.conclusion().context;
  if (pos + 1 >= ctx.size()) throw Error("tensorL: position out of range");
  Formula t = Formula::tensor(ctx[pos], ctx[pos + 1]);
  ctx.erase(ctx.begin() + static_cast<std::ptrdiff_t>(pos) + 1);
  ctx[pos] = std::move(t);
  Formula goal = d.conclusion().conclusion;
  return Derivation::by_rule(Rule::kTensorL, Sequent{std::move(ctx), std::move(goal)}, {std::move(d)});
}

inline Derivation plus_r1(Derivation d, const Formula& right) {
  Sequent s{d.conclusion().context, Formula::plus(d.conclusion().conclusion, right)};
  return Derivation::by_rule(Rule::kPlusR1, std::move(s), {std::move(d)});
}

inline Derivation plus_r2(const Formula& left, Derivation d) {
  Sequent s{d.conclusion().context, Formula::plus(left, d.conclusion().conclusion)};
  return Derivation::by_rule(Rule::kPlusR2, std::move(s), {std::move(d)});
}

/// d1 has A at pos, d2 has B at pos; the conclusion has A ⊕ B there.
inline Derivation plus_l(Derivation d1, Derivation d2, std::size_t pos) {
  Ctx ctx = d1.conclusion().context;
  if (pos >= ctx.size() || pos >= d2.conclusion().context.size()) throw Error("plusL: position out of range");
  ctx[pos] = Formula::plus(ctx[pos], d2.conclusion().context[pos]);
  Formula goal = d1.conclusion().conclusion;
  return Derivation::by_rule(Rule::kPlusL, Sequent{std::move(ctx), std::move(goal)}, {std::move(d1), std::move(d2)});
}

/// Premise A, Γ ⊢ B; conclusion Γ ⊢ A ⊸ B.
inline Derivation lolli_r(Derivation d) {
  const Ctx& p = d.conclusion().context;
  if (p.empty()) throw Error("lolliR: empty premise context");
  Ctx ctx(p.begin() + 1, p.end());
  Formula goal = Formula::lolli(p.front(), d.conclusion().conclusion);
  return Derivation::by_rule(Rule::kLolliR, Sequent{std::move(ctx), std::move(goal)}, {std::move(d)});
}

/// arg: Γ ⊢ A; rest: Γ1, B, Γ2 ⊢ Δ with B at pos.
/// Conclusion: Γ1, Γ, A ⊸ B, Γ2 ⊢ Δ.
inline Derivation lolli_l(Derivation arg, Derivation rest, std::size_t pos) {
  const Ctx& r = rest.conclusion().context;
  if (pos >= r.size()) throw Error("lolliL: position out of range");
  Ctx ctx(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(pos));
  ctx.insert(ctx.end(), arg.conclusion().context.begin(), arg.conclusion().context.end());
  ctx.push_back(Formula::lolli(arg.conclusion().conclusion, r[pos]));
  ctx.insert(ctx.end(), r.begin() + static_cast<std::ptrdiff_t>(pos) + 1, r.end());
  Formula goal = rest.conclusion().conclusion;
  return Derivation::by_rule(Rule::kLolliL, Sequent{std::move(ctx), std::move(goal)}, {std::move(arg), std::move(rest)});
}

inline Derivation forall_r(Derivation d, std::string var, Guard guard = {}) {
  Sequent s{d.conclusion().context, Formula::forall(std::move(var), std::move(guard), d.conclusion().conclusion)};
  return Derivation::by_rule(Rule::kForallR, std::move(s), {std::move(d)});
}

/// Replaces the instance at pos by `quantified`, recording the witness.
inline Derivation forall_l(Derivation d, std::size_t pos, const Formula& quantified, Term witness) {
  Ctx ctx = d.conclusion().context;
  if (pos >= ctx.size()) throw Error("forallL: position out of range");
  ctx[pos] = quantified;
  Formula goal = d.conclusion().conclusion;
  return Derivation::by_rule(Rule::kForallL, Sequent{std::move(ctx), std::move(goal)}, {std::move(d)},
                             std::move(witness));
}

/// A, A ⊸ B ⊢ B.
inline Derivation modus_ponens(const Formula& a, const Formula& b) { return lolli_l(id(a), id(b), 0); }

/// From ⊢ A ⊸ B to A ⊢ B.
inline Derivation apply_implication(Derivation imp) {
  const Formula& f = imp.conclusion().conclusion;
  if (f.kind() != Formula::Kind::kLolli || !imp.conclusion().context.empty())
    throw Error("apply_implication: expected a closed implication");
  Derivation mp = modus_ponens(f.left(), f.right());
  return cut(std::move(imp), std::move(mp), 1);
}

/// z ⊗ (x ⊕ y) ⊢ (z ⊗ x) ⊕ (z ⊗ y).
inline Derivation distributivity(const Formula& z, const Formula& x, const Formula& y) {
  const Formula zx = Formula::tensor(z, x);
  const Formula zy = Formula::tensor(z, y);
  Derivation left = plus_r1(tensor_r(id(z), id(x)), zy);
  Derivation right = plus_r2(zx, tensor_r(id(z), id(y)));
  return tensor_l(plus_l(std::move(left), std::move(right), 1), 0);
}

/// In(a) ⊗ R(a): the state after an actual property a has been confirmed.
inline Formula confirmed(Elem a) { return Formula::tensor(In(a), R(a)); }

/// M(b) ⊗ (In(a) ⊗ R(a)) ⊢ W, where W is In(a) ⊗ R(a) when a ≤ b or
/// a ≤ b⊥ and otherwise the two-branch sum over φ_b(a) and φ_{b⊥}(a).
inline Derivation measurement(const Theory& th, Elem a, Elem b) {
  const OrthoLattice& L = th.L();
  if (a == L.bottom() || b == L.bottom()) throw Error("measurement: properties must be nonzero");
  const Elem bo = L.ortho(b);
  if (L.leq(a, b) || L.leq(a, bo))
    return apply_implication(axiom(th, Schema::kAdjust2, {{"x", b}, {"y", a}}, AxiomForm::kImplication));

  // M(b) ⊗ (In(a) ⊗ R(a)) ⊢ In(a) ⊗ (R(b) ⊕ R(b⊥))
  Derivation adjust = apply_implication(axiom(th, Schema::kAdjust1, {{"x", b}, {"y", a}}, AxiomForm::kImplication));
  // ... ⊢ (In(a) ⊗ R(b)) ⊕ (In(a) ⊗ R(b⊥))
  Derivation split = cut(std::move(adjust), distributivity(In(a), R(b), R(bo)), 0);

  Derivation via_b = apply_implication(axiom(th, Schema::kTrans, {{"y", a}, {"z", b}}, AxiomForm::kImplication));
  Derivation via_bo = apply_implication(axiom(th, Schema::kTrans, {{"y", a}, {"z", bo}}, AxiomForm::kImplication));
  const Formula wb = via_b.conclusion().conclusion;
  const Formula wbo = via_bo.conclusion().conclusion;
  Derivation branches = plus_l(plus_r1(std::move(via_b), wbo), plus_r2(wb, std::move(via_bo)), 0);
  return cut(std::move(split), std::move(branches), 0);
}

namespace detail {

// M(c) ⊗ W ⊢ V, measuring c on every In(p) ⊗ R(p) leaf of the sum W.
inline Derivation measure_branches(const Theory& th, Elem c, const Formula& w) {
  if (w.kind() == Formula::Kind::kPlus) {
    const Formula mc = M(c);
    Derivation d1 = measure_branches(th, c, w.left());
    Derivation d2 = measure_branches(th, c, w.right());
    const Formula v1 = d1.conclusion().conclusion;
    const Formula v2 = d2.conclusion().conclusion;
    Derivation both = plus_l(plus_r1(std::move(d1), v2), plus_r2(v1, std::move(d2)), 0);
    return cut(distributivity(mc, w.left(), w.right()), std::move(both), 0);
  }
  if (w.kind() != Formula::Kind::kTensor || w.left().kind() != Formula::Kind::kIn || !w.left().term().is_constant())
    throw Error("measure_branches: unexpected branch shape");
  return measurement(th, w.left().term().element(), c);
}

}  // namespace detail

/// M(bn) ⊗ (... ⊗ (M(b1) ⊗ (In(a) ⊗ R(a)))) ⊢ V: the measurements b1, then
/// b2, ..., applied in order to the confirmed property a.
inline Derivation measurement_chain(const Theory& th, Elem a, const std::vector<Elem>& measured) {
  if (measured.empty()) return id(confirmed(a));
  Derivation d = measurement(th, a, measured.front());
  for (std::size_t i = 1; i < measured.size(); ++i) {
    const Elem c = measured[i];
    const Formula w = d.conclusion().conclusion;
    // M(c) ⊗ X ⊢ M(c) ⊗ W
    Derivation lifted = tensor_l(tensor_r(id(M(c)), std::move(d)), 0);
    d = cut(std::move(lifted), detail::measure_branches(th, c, w), 0);
  }
  return d;
}

/// Measure b, then c, starting from the confirmed property a.
inline Derivation composed(const Theory& th, Elem a, Elem b, Elem c) { return measurement_chain(th, a, {b, c}); }

/// IND(α) ⊗ In(x) ⊢ ⊕_{z∈α({x})} In(z).
inline Derivation general_propagation(const Theory& th, const std::string& alpha, Elem x) {
  return apply_implication(
      axiom(th, Schema::kGeneralPropagation, {{"alpha", alpha}, {"x", x}}, AxiomForm::kImplication));
}

/// In(x) ⊢ In(x∨y∨z) by cutting two OQL-Join instances.
inline Derivation join_chain(const Theory& th, Elem x, Elem y, Elem z) {
  Derivation first = axiom(th, Schema::kOqlJoin, {{"x", x}, {"y", y}});
  Derivation second = axiom(th, Schema::kOqlJoin, {{"x", th.L().join(x, y)}, {"y", z}});
  return cut(std::move(first), std::move(second), 0);
}

/// ∀x{g}.B ⊢ ∀x{g}.B through ∀L with the eigenvariable as witness and ∀R.
/// The kernel only admits open witnesses under empty guards.
inline Derivation forall_identity(const std::string& var, const Formula& body) {
  const Formula q = Formula::forall(var, {}, body);
  return forall_r(forall_l(id(body), 0, q, Term::variable(var)), var);
}

}  // namespace qprop::build

#endif  // QPROP_BUILDERS_HPP_
