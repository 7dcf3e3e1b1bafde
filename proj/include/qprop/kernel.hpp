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

#ifndef QPROP_KERNEL_HPP_
#define QPROP_KERNEL_HPP_

#include <optional>
#include <string>
#include <vector>

#include "qprop/axioms.hpp"
#include "qprop/derivation.hpp"
#include "qprop/formula.hpp"

// Proof kernel for the non-commutative intuitionistic fragment with ⊗, ⊕,
// ⊸ and guarded ∀. There is no exchange, weakening or contraction: every
// context is an ordered list and each rule fixes exactly how its
// conclusion's context is assembled from its premises' contexts.
//
//   id      A ⊢ A
//   cut     Γ ⊢ A    Γ1, A, Γ2 ⊢ Δ       /  Γ1, Γ, Γ2 ⊢ Δ
//   tensorR Γ1 ⊢ A   Γ2 ⊢ B              /  Γ1, Γ2 ⊢ A ⊗ B
//   tensorL Γ1, A, B, Γ2 ⊢ Δ             /  Γ1, A ⊗ B, Γ2 ⊢ Δ
//   plusR1  Γ ⊢ A                        /  Γ ⊢ A ⊕ B
//   plusR2  Γ ⊢ B                        /  Γ ⊢ A ⊕ B
//   plusL   Γ1, A, Γ2 ⊢ Δ   Γ1, B, Γ2 ⊢ Δ /  Γ1, A ⊕ B, Γ2 ⊢ Δ
//   lolliR  A, Γ ⊢ B                     /  Γ ⊢ A ⊸ B
//   lolliL  Γ ⊢ A    Γ1, B, Γ2 ⊢ Δ       /  Γ1, Γ, A ⊸ B, Γ2 ⊢ Δ
//   forallR Γ ⊢ A                        /  Γ ⊢ ∀x{g}.A      x not free in Γ
//   forallL Γ1, A[t/x], Γ2 ⊢ B           /  Γ1, ∀x{g}.A, Γ2 ⊢ B   g(t) holds

namespace qprop {

enum class FailureKind {
  kArity,             // wrong number of premises
  kRuleMismatch,      // the conclusion's shape is not what the rule produces
  kContextSplit,      // no decomposition of the contexts fits the rule
  kGuardViolated,     // axiom or ∀L witness fails its lattice guard
  kEigenvariable,     // ∀R variable occurs free in the context
  kBadAxiom,          // missing/ill-typed bindings, unknown map
  kIllFormed,         // zero property constant, unknown IND map
};

inline const char* to_string(FailureKind k) {
  switch (k) {
    case FailureKind::kArity:
      return "arity";
    case FailureKind::kRuleMismatch:
      return "rule-mismatch";
    case FailureKind::kContextSplit:
      return "context-split";
    case FailureKind::kGuardViolated:
      return "guard-violated";
    case FailureKind::kEigenvariable:
      return "eigenvariable-captured";
    case FailureKind::kBadAxiom:
      return "bad-axiom";
    case FailureKind::kIllFormed:
      return "ill-formed";
  }
  return "?";
}

struct KernelFailure {
  std::vector<std::size_t> path;  // child indices from the root
  std::string node;               // rule or schema name
  FailureKind kind = FailureKind::kRuleMismatch;
  std::string reason;

  std::string path_string() const {
    std::string s = "root";
    for (auto i : path) s += "." + std::to_string(i);
    return s;
  }
};

struct KernelVerdict {
  std::optional<KernelFailure> failure;
  std::size_t nodes = 0;
  bool valid() const { return !failure.has_value(); }
};

namespace detail {

using Ctx = std::vector<Formula>;

inline Ctx concat(std::initializer_list<const Ctx*> parts) {
  Ctx out;
  for (const Ctx* p : parts) out.insert(out.end(), p->begin(), p->end());
  return out;
}

inline Ctx slice(const Ctx& c, std::size_t from, std::size_t to) {
  return Ctx(c.begin() + static_cast<std::ptrdiff_t>(from), c.begin() + static_cast<std::ptrdiff_t>(to));
}

struct LocalFailure {
  FailureKind kind;
  std::string reason;
};

inline std::optional<LocalFailure> ill_formed(const Theory& th, const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::kIn:
    case Formula::Kind::kReach:
    case Formula::Kind::kMeasure:
      if (f.term().is_constant() && f.term().element() == th.L().bottom())
        return LocalFailure{FailureKind::kIllFormed, "property term evaluates to 0"};
      return std::nullopt;
    case Formula::Kind::kInduce:
      if (!th.has_map(f.map_name())) return LocalFailure{FailureKind::kIllFormed, "unknown map '" + f.map_name() + "'"};
      return std::nullopt;
    case Formula::Kind::kForall:
      for (const auto& c : f.guard())
        if (c.relation == Constraint::Relation::kNotInKill && !th.has_map(c.map))
          return LocalFailure{FailureKind::kIllFormed, "unknown map '" + c.map + "'"};
      return ill_formed(th, f.body());
    default:
      if (auto e = ill_formed(th, f.left())) return e;
      return ill_formed(th, f.right());
  }
}

inline std::optional<LocalFailure> check_guard(const Theory& th, const Formula& quantified, const Term& witness) {
  const OrthoLattice& L = th.L();
  if (!witness.is_constant()) {
    if (quantified.guard().empty()) return std::nullopt;
    return LocalFailure{FailureKind::kGuardViolated, "guard cannot be evaluated for an open witness"};
  }
  const Elem w = witness.element();
  if (w == L.bottom()) return LocalFailure{FailureKind::kGuardViolated, "witness is 0"};
  for (const auto& c : quantified.guard()) {
    auto ok = constraint_holds(th, c, w);
    if (!ok) return LocalFailure{FailureKind::kGuardViolated, "guard term is not closed"};
    if (!*ok) return LocalFailure{FailureKind::kGuardViolated, "witness " + L.name_of(w) + " fails the guard"};
  }
  return std::nullopt;
}

inline std::optional<LocalFailure> check_node(const Theory& th, const Derivation& d) {
  const Sequent& c = d.conclusion();
  auto well_formed = [&]() -> std::optional<LocalFailure> {
    for (const auto& f : c.context)
      if (auto e = ill_formed(th, f)) return e;
    return ill_formed(th, c.conclusion);
  };

  // Axiom leaves report a failed guard in preference to the 0-valued
  // constants an unguarded instance may contain.
  if (d.is_axiom()) {
    if (!d.premises().empty()) return LocalFailure{FailureKind::kArity, "axiom leaves have no premises"};
    try {
      AxiomInstance inst = instantiate_unchecked(th, d.schema(), d.bindings());
      if (auto g = guard_failure(th, d.schema(), d.bindings())) return LocalFailure{FailureKind::kGuardViolated, *g};
      if (!inst.accepts(c)) return LocalFailure{FailureKind::kRuleMismatch, "sequent is not an instance of the schema"};
      return well_formed();
    } catch (const GuardViolation& e) {
      return LocalFailure{FailureKind::kGuardViolated, e.what()};
    } catch (const Error& e) {
      return LocalFailure{FailureKind::kBadAxiom, e.what()};
    }
  }
  if (auto e = well_formed()) return e;

  const auto& ps = d.premises();
  if (ps.size() != rule_arity(d.rule()))
    return LocalFailure{FailureKind::kArity, "expected " + std::to_string(rule_arity(d.rule())) + " premises"};
  auto mismatch = [](std::string why) { return LocalFailure{FailureKind::kRuleMismatch, std::move(why)}; };
  auto split = [](std::string why) { return LocalFailure{FailureKind::kContextSplit, std::move(why)}; };
  const Ctx& gamma = c.context;

  switch (d.rule()) {
    case Rule::kId:
      if (gamma.size() != 1) return split("identity needs exactly one hypothesis");
      if (!(gamma.front() == c.conclusion)) return mismatch("hypothesis and conclusion differ");
      return std::nullopt;

    case Rule::kCut: {
      const Sequent& left = ps[0].conclusion();
      const Sequent& right = ps[1].conclusion();
      if (!(c.conclusion == right.conclusion)) return mismatch("conclusion differs from the right premise");
      for (std::size_t i = 0; i < right.context.size(); ++i) {
        if (!(right.context[i] == left.conclusion)) continue;
        Ctx g1 = slice(right.context, 0, i), g2 = slice(right.context, i + 1, right.context.size());
        if (gamma == concat({&g1, &left.context, &g2})) return std::nullopt;
      }
      return split("no occurrence of the cut formula yields this context");
    }

    case Rule::kTensorR: {
      if (c.conclusion.kind() != Formula::Kind::kTensor) return mismatch("conclusion is not a tensor");
      if (!(c.conclusion.left() == ps[0].conclusion().conclusion) ||
          !(c.conclusion.right() == ps[1].conclusion().conclusion))
        return mismatch("tensor factors differ from the premises");
      if (gamma != concat({&ps[0].conclusion().context, &ps[1].conclusion().context}))
        return split("context is not the concatenation of the premise contexts");
      return std::nullopt;
    }

    case Rule::kTensorL: {
      const Sequent& p = ps[0].conclusion();
      if (!(c.conclusion == p.conclusion)) return mismatch("conclusion changed");
      for (std::size_t i = 0; i < gamma.size(); ++i) {
        if (gamma[i].kind() != Formula::Kind::kTensor) continue;
        Ctx g1 = slice(gamma, 0, i), g2 = slice(gamma, i + 1, gamma.size());
        Ctx ab{gamma[i].left(), gamma[i].right()};
        if (p.context == concat({&g1, &ab, &g2})) return std::nullopt;
      }
      return split("no tensor in the context unfolds to the premise context");
    }

    case Rule::kPlusR1:
    case Rule::kPlusR2: {
      const Sequent& p = ps[0].conclusion();
      if (c.conclusion.kind() != Formula::Kind::kPlus) return mismatch("conclusion is not a sum");
      const Formula& side = d.rule() == Rule::kPlusR1 ? c.conclusion.left() : c.conclusion.right();
      if (!(side == p.conclusion)) return mismatch("summand differs from the premise");
      if (gamma != p.context) return split("context changed");
      return std::nullopt;
    }

    case Rule::kPlusL: {
      const Sequent& p1 = ps[0].conclusion();
      const Sequent& p2 = ps[1].conclusion();
      if (!(c.conclusion == p1.conclusion) || !(c.conclusion == p2.conclusion))
        return mismatch("premise conclusions differ");
      for (std::size_t i = 0; i < gamma.size(); ++i) {
        if (gamma[i].kind() != Formula::Kind::kPlus) continue;
        Ctx g1 = slice(gamma, 0, i), g2 = slice(gamma, i + 1, gamma.size());
        Ctx a{gamma[i].left()}, b{gamma[i].right()};
        if (p1.context == concat({&g1, &a, &g2}) && p2.context == concat({&g1, &b, &g2})) return std::nullopt;
      }
      return split("no sum in the context matches both premises");
    }

    case Rule::kLolliR: {
      const Sequent& p = ps[0].conclusion();
      if (c.conclusion.kind() != Formula::Kind::kLolli) return mismatch("conclusion is not an implication");
      if (!(c.conclusion.right() == p.conclusion)) return mismatch("consequent differs from the premise");
      Ctx a{c.conclusion.left()};
      if (p.context != concat({&a, &gamma})) return split("premise context is not A, Γ");
      return std::nullopt;
    }

    case Rule::kLolliL: {
      const Sequent& arg = ps[0].conclusion();
      const Sequent& rest = ps[1].conclusion();
      if (!(c.conclusion == rest.conclusion)) return mismatch("conclusion differs from the right premise");
      for (std::size_t i = 0; i < rest.context.size(); ++i) {
        Ctx g1 = slice(rest.context, 0, i), g2 = slice(rest.context, i + 1, rest.context.size());
        Ctx imp{Formula::lolli(arg.conclusion, rest.context[i])};
        if (gamma == concat({&g1, &arg.context, &imp, &g2})) return std::nullopt;
      }
      return split("no decomposition Γ1, Γ, A ⊸ B, Γ2 fits");
    }

    case Rule::kForallR: {
      const Sequent& p = ps[0].conclusion();
      if (c.conclusion.kind() != Formula::Kind::kForall) return mismatch("conclusion is not quantified");
      if (!(c.conclusion.body() == p.conclusion)) return mismatch("quantifier body differs from the premise");
      if (gamma != p.context) return split("context changed");
      for (const auto& f : gamma)
        if (f.has_free(c.conclusion.var()))
          return LocalFailure{FailureKind::kEigenvariable, "variable " + c.conclusion.var() + " is free in the context"};
      return std::nullopt;
    }

    case Rule::kForallL: {
      const Sequent& p = ps[0].conclusion();
      if (!d.witness()) return mismatch("forallL needs an explicit witness");
      if (!(c.conclusion == p.conclusion)) return mismatch("conclusion changed");
      std::optional<LocalFailure> guard_error;
      for (std::size_t i = 0; i < gamma.size(); ++i) {
        if (gamma[i].kind() != Formula::Kind::kForall) continue;
        Ctx g1 = slice(gamma, 0, i), g2 = slice(gamma, i + 1, gamma.size());
        Ctx inst{gamma[i].body().substitute(th.L(), gamma[i].var(), *d.witness())};
        if (p.context != concat({&g1, &inst, &g2})) continue;
        auto g = check_guard(th, gamma[i], *d.witness());
        if (!g) return std::nullopt;
        guard_error = g;
      }
      if (guard_error) return guard_error;
      return split("no quantified hypothesis instantiates to the premise context");
    }
  }
  return mismatch("unknown rule");
}

inline void check_tree(const Theory& th, const Derivation& d, std::vector<std::size_t>& path, KernelVerdict& out) {
  for (std::size_t i = 0; i < d.premises().size() && !out.failure; ++i) {
    path.push_back(i);
    check_tree(th, d.premises()[i], path, out);
    path.pop_back();
  }
  if (out.failure) return;
  ++out.nodes;
  if (auto f = check_node(th, d)) {
    std::string label = d.is_axiom() ? std::string(schema_name(d.schema())) : std::string(rule_name(d.rule()));
    out.failure = KernelFailure{path, label, f->kind, f->reason};
  }
}

}  // namespace detail

/// Validates every node, children before parents, and reports the first
/// node whose conclusion its rule does not reproduce.
inline KernelVerdict check_derivation(const Theory& th, const Derivation& d) {
  KernelVerdict v;
  std::vector<std::size_t> path;
  detail::check_tree(th, d, path, v);
  return v;
}

}  // namespace qprop

#endif  // QPROP_KERNEL_HPP_
