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

#ifndef QPROP_AXIOMS_HPP_
#define QPROP_AXIOMS_HPP_

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qprop/formula.hpp"

// Axiom schemas of the propagation logic. A schema is instantiated with
// closed bindings; its guard is evaluated in the bound lattice and every
// lattice-valued subterm is reduced to a constant.
//
//   OQL-Meet            X        ⊗_{x∈X} In(x) ⊢ In(∧X)             ∧X ≠ 0
//   OQL-Join            x y      In(x) ⊢ In(x∨y)
//   Trans               y z      ⊢ In(y)⊗R(z) ⊸ In(φ_z(y))⊗R(φ_z(y))  y ≰ z⊥
//   Adjust1             x y      ⊢ M(x)⊗(In(y)⊗R(y)) ⊸ In(y)⊗(R(x)⊕R(x⊥))
//                                                                   y ≰ x, y ≰ x⊥
//   Adjust2             x y      ⊢ M(x)⊗(In(y)⊗R(y)) ⊸ In(y)⊗R(y)    y ≤ x or y ≤ x⊥
//   GeneralPropagation  alpha x  ⊢ IND(α)⊗In(x) ⊸ ⊕_{z∈α({x})} In(z)  x ∉ K_α

namespace qprop {

enum class Schema { kOqlMeet, kOqlJoin, kTrans, kAdjust1, kAdjust2, kGeneralPropagation };

inline std::string_view schema_name(Schema s) {
  switch (s) {
    case Schema::kOqlMeet:
      return "OQL-Meet";
    case Schema::kOqlJoin:
      return "OQL-Join";
    case Schema::kTrans:
      return "Trans";
    case Schema::kAdjust1:
      return "Adjust1";
    case Schema::kAdjust2:
      return "Adjust2";
    case Schema::kGeneralPropagation:
      return "GeneralPropagation";
  }
  return "?";
}

inline std::optional<Schema> parse_schema(std::string_view s) {
  for (Schema k : {Schema::kOqlMeet, Schema::kOqlJoin, Schema::kTrans, Schema::kAdjust1, Schema::kAdjust2,
                   Schema::kGeneralPropagation})
    if (schema_name(k) == s) return k;
  return std::nullopt;
}

inline std::vector<std::string> schema_parameters(Schema s) {
  switch (s) {
    case Schema::kOqlMeet:
      return {"X"};
    case Schema::kOqlJoin:
    case Schema::kAdjust1:
    case Schema::kAdjust2:
      return {"x", "y"};
    case Schema::kTrans:
      return {"y", "z"};
    case Schema::kGeneralPropagation:
      return {"alpha", "x"};
  }
  return {};
}

/// A binding is an element, a finite set of elements (OQL-Meet's X), or
/// the name of a registered propagation map (GeneralPropagation's alpha).
using BindingValue = std::variant<Elem, ElemSet, std::string>;
using Bindings = std::map<std::string, BindingValue>;

enum class AxiomForm {
  kNatural,      // sequent form for OQL axioms, implication form otherwise
  kSequent,      // A ⊢ B
  kImplication,  // ⊢ A ⊸ B
};

struct AxiomInstance {
  std::vector<Formula> antecedents;
  Formula consequent;

  Sequent as_sequent() const { return {antecedents, consequent}; }

  /// ⊢ A ⊸ B, where A is the single antecedent. Absent when there is no
  /// antecedent.
  std::optional<Sequent> as_implication() const {
    if (antecedents.size() != 1) return std::nullopt;
    return Sequent{{}, Formula::lolli(antecedents.front(), consequent)};
  }

  bool accepts(const Sequent& s) const {
    if (s == as_sequent()) return true;
    auto imp = as_implication();
    return imp && s == *imp;
  }
};

/// Right-nested chain: x1 ⊗ (x2 ⊗ (... ⊗ xn)).
inline Formula tensor_chain(const std::vector<Formula>& fs) {
  Formula acc = fs.back();
  for (std::size_t i = fs.size() - 1; i-- > 0;) acc = Formula::tensor(fs[i], acc);
  return acc;
}

/// Right-nested chain: x1 ⊕ (x2 ⊕ (... ⊕ xn)).
inline Formula plus_chain(const std::vector<Formula>& fs) {
  Formula acc = fs.back();
  for (std::size_t i = fs.size() - 1; i-- > 0;) acc = Formula::plus(fs[i], acc);
  return acc;
}

namespace detail {

struct BoundArgs {
  const Theory& th;
  Schema schema;
  const Bindings& b;

  const BindingValue& raw(const std::string& name) const {
    auto it = b.find(name);
    if (it == b.end()) throw UnboundVariable(name);
    return it->second;
  }

  Elem elem(const std::string& name) const {
    const auto* e = std::get_if<Elem>(&raw(name));
    if (!e) throw BadBinding("parameter '" + name + "' of " + std::string(schema_name(schema)) + " takes an element");
    if (!th.L().contains(*e)) throw BadBinding("binding for '" + name + "' lies outside the lattice");
    if (*e == th.L().bottom()) throw BadBinding("property terms range over nonzero elements ('" + name + "' = 0)");
    return *e;
  }

  ElemSet set(const std::string& name) const {
    const auto* s = std::get_if<ElemSet>(&raw(name));
    if (!s) throw BadBinding("parameter '" + name + "' of " + std::string(schema_name(schema)) + " takes a set");
    if (!s->subset_of(th.L().all())) throw BadBinding("binding for '" + name + "' lies outside the lattice");
    if (s->contains(th.L().bottom())) throw BadBinding("property terms range over nonzero elements");
    return *s;
  }

  const PowersetMap& map(const std::string& name) const {
    const auto* s = std::get_if<std::string>(&raw(name));
    if (!s) throw BadBinding("parameter '" + name + "' of " + std::string(schema_name(schema)) + " takes a map name");
    return th.map(*s);
  }

  void no_extras() const {
    auto params = schema_parameters(schema);
    for (const auto& [k, v] : b)
      if (std::find(params.begin(), params.end(), k) == params.end())
        throw BadBinding("unexpected binding '" + k + "' for " + std::string(schema_name(schema)));
  }
};

}  // namespace detail

/// The failed guard conjunct, rendered with element names, if any.
inline std::optional<std::string> guard_failure(const Theory& th, Schema schema, const Bindings& bindings) {
  detail::BoundArgs args{th, schema, bindings};
  const OrthoLattice& L = th.L();
  auto nm = [&](Elem e) { return L.name_of(e); };
  switch (schema) {
    case Schema::kOqlMeet: {
      ElemSet X = args.set("X");
      if (L.meet_all(X) == L.bottom()) return std::string("meet(X) != 0");
      return std::nullopt;
    }
    case Schema::kOqlJoin:
      args.elem("x");
      args.elem("y");
      return std::nullopt;
    case Schema::kTrans: {
      Elem y = args.elem("y"), z = args.elem("z");
      if (L.leq(y, L.ortho(z))) return nm(y) + " !<= ortho(" + nm(z) + ")";
      return std::nullopt;
    }
    case Schema::kAdjust1: {
      Elem x = args.elem("x"), y = args.elem("y");
      if (L.leq(y, x)) return nm(y) + " !<= " + nm(x);
      if (L.leq(y, L.ortho(x))) return nm(y) + " !<= ortho(" + nm(x) + ")";
      return std::nullopt;
    }
    case Schema::kAdjust2: {
      Elem x = args.elem("x"), y = args.elem("y");
      if (!L.leq(y, x) && !L.leq(y, L.ortho(x))) return nm(y) + " <= " + nm(x) + " or " + nm(y) + " <= ortho(" + nm(x) + ")";
      return std::nullopt;
    }
    case Schema::kGeneralPropagation: {
      const PowersetMap& alpha = args.map("alpha");
      Elem x = args.elem("x");
      if (alpha.kill_set().contains(x)) return nm(x) + " !in K(" + std::get<std::string>(args.raw("alpha")) + ")";
      return std::nullopt;
    }
  }
  return std::nullopt;
}

/// Builds the instance without evaluating the guard. Unbound, ill-typed or
/// zero-valued bindings still throw.
inline AxiomInstance instantiate_unchecked(const Theory& th, Schema schema, const Bindings& bindings) {
  detail::BoundArgs args{th, schema, bindings};
  args.no_extras();
  const OrthoLattice& L = th.L();
  switch (schema) {
    case Schema::kOqlMeet: {
      ElemSet X = args.set("X");
      std::vector<Formula> ins;
      for (Elem x : X) ins.push_back(In(x));
      const Formula goal = In(L.meet_all(X));
      if (ins.empty()) return {{}, goal};
      return {{tensor_chain(ins)}, goal};
    }
    case Schema::kOqlJoin: {
      Elem x = args.elem("x"), y = args.elem("y");
      return {{In(x)}, In(L.join(x, y))};
    }
    case Schema::kTrans: {
      Elem y = args.elem("y"), z = args.elem("z");
      Elem p = L.sasaki(z, y);
      return {{Formula::tensor(In(y), R(z))}, Formula::tensor(In(p), R(p))};
    }
    case Schema::kAdjust1: {
      Elem x = args.elem("x"), y = args.elem("y");
      return {{Formula::tensor(M(x), Formula::tensor(In(y), R(y)))},
              Formula::tensor(In(y), Formula::plus(R(x), R(L.ortho(x))))};
    }
    case Schema::kAdjust2: {
      Elem x = args.elem("x"), y = args.elem("y");
      return {{Formula::tensor(M(x), Formula::tensor(In(y), R(y)))}, Formula::tensor(In(y), R(y))};
    }
    case Schema::kGeneralPropagation: {
      const PowersetMap& alpha = args.map("alpha");
      Elem x = args.elem("x");
      std::vector<Formula> outs;
      for (Elem z : alpha.image(x)) outs.push_back(In(z));
      // An empty image only arises when the guard fails; render it as In(0)
      // so the unchecked instance is still a formula.
      if (outs.empty()) outs.push_back(In(L.bottom()));
      return {{Formula::tensor(Formula::induce(std::get<std::string>(args.raw("alpha"))), In(x))}, plus_chain(outs)};
    }
  }
  throw Error("unknown schema");
}

inline AxiomInstance instantiate_instance(const Theory& th, Schema schema, const Bindings& bindings) {
  AxiomInstance inst = instantiate_unchecked(th, schema, bindings);
  if (auto failed = guard_failure(th, schema, bindings)) throw GuardViolation(*failed);
  return inst;
}

inline AxiomForm natural_form(Schema s) {
  return s == Schema::kOqlMeet || s == Schema::kOqlJoin ? AxiomForm::kSequent : AxiomForm::kImplication;
}

inline Sequent render(const AxiomInstance& inst, AxiomForm form, Schema schema) {
  if (form == AxiomForm::kNatural) form = natural_form(schema);
  if (form == AxiomForm::kImplication)
    if (auto imp = inst.as_implication()) return *imp;
  return inst.as_sequent();
}

/// Checked instantiation: evaluates the guard in the bound lattice and
/// returns the closed sequent.
inline Sequent instantiate_axiom(const Theory& th, Schema schema, const Bindings& bindings,
                                 AxiomForm form = AxiomForm::kNatural) {
  return render(instantiate_instance(th, schema, bindings), form, schema);
}

}  // namespace qprop

#endif  // QPROP_AXIOMS_HPP_
