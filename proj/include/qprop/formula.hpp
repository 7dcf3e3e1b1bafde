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

#ifndef QPROP_FORMULA_HPP_
#define QPROP_FORMULA_HPP_

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qprop/lattice.hpp"
#include "qprop/powerset_map.hpp"

namespace qprop {

/// Property term: a lattice constant, a variable, ortho(t), or the Sasaki
/// image phi(t, u) = φ_t(u). Terms built through the lattice-aware
/// constructors are kept normalized: closed terms are constants and
/// ortho(ortho(t)) collapses to t.
class Term {
 public:
  enum class Kind { kConst, kVar, kOrtho, kSasaki };

  static Term constant(Elem e) {
    Node n;
    n.kind = Kind::kConst;
    n.elem = e;
    return Term(std::move(n));
  }

  static Term variable(std::string name) {
    Node n;
    n.kind = Kind::kVar;
    n.var = std::move(name);
    return Term(std::move(n));
  }

  static Term ortho(const OrthoLattice& l, const Term& t) {
    if (t.kind() == Kind::kConst) return constant(l.ortho(t.element()));
    if (t.kind() == Kind::kOrtho) return t.arg(0);
    Node n;
    n.kind = Kind::kOrtho;
    n.args = {t};
    return Term(std::move(n));
  }

  static Term sasaki(const OrthoLattice& l, const Term& a, const Term& b) {
    if (a.kind() == Kind::kConst && b.kind() == Kind::kConst) return constant(l.sasaki(a.element(), b.element()));
    Node n;
    n.kind = Kind::kSasaki;
    n.args = {a, b};
    return Term(std::move(n));
  }

  Kind kind() const { return node_->kind; }
  Elem element() const { return node_->elem; }
  const std::string& var() const { return node_->var; }
  const Term& arg(std::size_t i) const { return node_->args.at(i); }

  bool is_constant() const { return kind() == Kind::kConst; }

  void collect_free_vars(std::set<std::string>& out) const {
    switch (kind()) {
      case Kind::kConst:
        return;
      case Kind::kVar:
        out.insert(var());
        return;
      default:
        for (const auto& a : node_->args) a.collect_free_vars(out);
    }
  }

  bool mentions(const std::string& v) const {
    std::set<std::string> fv;
    collect_free_vars(fv);
    return fv.count(v) != 0;
  }

  Term substitute(const OrthoLattice& l, const std::string& v, const Term& by) const {
    switch (kind()) {
      case Kind::kConst:
        return *this;
      case Kind::kVar:
        return var() == v ? by : *this;
      case Kind::kOrtho:
        return ortho(l, arg(0).substitute(l, v, by));
      case Kind::kSasaki:
        return sasaki(l, arg(0).substitute(l, v, by), arg(1).substitute(l, v, by));
    }
    return *this;
  }

  friend bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
      case Kind::kConst:
        return a.element() == b.element();
      case Kind::kVar:
        return a.var() == b.var();
      default:
        return a.node_->args == b.node_->args;
    }
  }

 private:
  struct Node {
    Kind kind = Kind::kConst;
    Elem elem;
    std::string var;
    std::vector<Term> args;
  };

  explicit Term(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}

  std::shared_ptr<const Node> node_;
};

/// One conjunct of a quantifier guard, constraining the bound variable.
struct Constraint {
  enum class Relation { kLeq, kNotLeq, kNotInKill };

  Relation relation = Relation::kLeq;
  Term bound = Term::variable("_");  // unused for kNotInKill
  std::string map;                   // only for kNotInKill

  static Constraint leq(Term t) { return {Relation::kLeq, std::move(t), {}}; }
  static Constraint not_leq(Term t) { return {Relation::kNotLeq, std::move(t), {}}; }
  static Constraint not_in_kill(std::string map) { return {Relation::kNotInKill, Term::variable("_"), std::move(map)}; }

  friend bool operator==(const Constraint& a, const Constraint& b) {
    if (a.relation != b.relation) return false;
    return a.relation == Relation::kNotInKill ? a.map == b.map : a.bound == b.bound;
  }
};

using Guard = std::vector<Constraint>;

/// Formulas of the propagation logic. Tensor is a plain binary node: there
/// is no associativity, (A⊗B)⊗C and A⊗(B⊗C) are different formulas.
class Formula {
 public:
  enum class Kind { kIn, kReach, kMeasure, kInduce, kTensor, kPlus, kLolli, kForall };

  static Formula in(Term t) { return atom(Kind::kIn, std::move(t)); }
  static Formula reach(Term t) { return atom(Kind::kReach, std::move(t)); }
  /// M(t), standing for the pair {t, t⊥}.
  static Formula measure(Term t) { return atom(Kind::kMeasure, std::move(t)); }
  static Formula induce(std::string map) {
    Node n;
    n.kind = Kind::kInduce;
    n.name = std::move(map);
    return Formula(std::move(n));
  }
  static Formula tensor(Formula a, Formula b) { return binary(Kind::kTensor, std::move(a), std::move(b)); }
  static Formula plus(Formula a, Formula b) { return binary(Kind::kPlus, std::move(a), std::move(b)); }
  static Formula lolli(Formula a, Formula b) { return binary(Kind::kLolli, std::move(a), std::move(b)); }
  static Formula forall(std::string var, Guard guard, Formula body) {
    Node n;
    n.kind = Kind::kForall;
    n.name = std::move(var);
    n.guard = std::move(guard);
    n.children = {std::move(body)};
    return Formula(std::move(n));
  }

  Kind kind() const { return node_->kind; }
  bool is_atom() const { return kind() <= Kind::kInduce; }
  bool is_binary() const { return kind() >= Kind::kTensor && kind() <= Kind::kLolli; }

  const Term& term() const { return node_->term; }
  const std::string& map_name() const { return node_->name; }  // IND
  const std::string& var() const { return node_->name; }       // forall
  const Guard& guard() const { return node_->guard; }
  const Formula& left() const { return node_->children.at(0); }
  const Formula& right() const { return node_->children.at(1); }
  const Formula& body() const { return node_->children.at(0); }

  void collect_free_vars(std::set<std::string>& out) const {
    switch (kind()) {
      case Kind::kIn:
      case Kind::kReach:
      case Kind::kMeasure:
        term().collect_free_vars(out);
        return;
      case Kind::kInduce:
        return;
      case Kind::kForall: {
        for (const auto& c : guard())
          if (c.relation != Constraint::Relation::kNotInKill) c.bound.collect_free_vars(out);
        std::set<std::string> inner;
        body().collect_free_vars(inner);
        inner.erase(var());
        out.insert(inner.begin(), inner.end());
        return;
      }
      default:
        left().collect_free_vars(out);
        right().collect_free_vars(out);
    }
  }

  std::set<std::string> free_vars() const {
    std::set<std::string> fv;
    collect_free_vars(fv);
    return fv;
  }

  bool has_free(const std::string& v) const { return free_vars().count(v) != 0; }

  /// Capture-avoiding substitution [by / v]. Guard terms live in the scope
  /// enclosing their quantifier.
  Formula substitute(const OrthoLattice& l, const std::string& v, const Term& by) const {
    switch (kind()) {
      case Kind::kIn:
      case Kind::kReach:
      case Kind::kMeasure:
        return atom(kind(), term().substitute(l, v, by));
      case Kind::kInduce:
        return *this;
      case Kind::kForall: {
        Guard g;
        for (const auto& c : guard()) {
          Constraint d = c;
          if (c.relation != Constraint::Relation::kNotInKill) d.bound = c.bound.substitute(l, v, by);
          g.push_back(std::move(d));
        }
        if (var() == v) return forall(var(), std::move(g), body());
        std::string bound = var();
        Formula inner = body();
        if (by.mentions(bound) && inner.has_free(v)) {
          std::string fresh = bound;
          std::set<std::string> avoid = inner.free_vars();
          by.collect_free_vars(avoid);
          for (int i = 1; avoid.count(fresh) || fresh == bound; ++i) fresh = bound + "_" + std::to_string(i);
          inner = inner.substitute(l, bound, Term::variable(fresh));
          bound = fresh;
        }
        return forall(bound, std::move(g), inner.substitute(l, v, by));
      }
      default:
        return binary(kind(), left().substitute(l, v, by), right().substitute(l, v, by));
    }
  }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
      case Kind::kIn:
      case Kind::kReach:
      case Kind::kMeasure:
        return a.term() == b.term();
      case Kind::kInduce:
        return a.map_name() == b.map_name();
      case Kind::kForall:
        return a.var() == b.var() && a.guard() == b.guard() && a.body() == b.body();
      default:
        return a.left() == b.left() && a.right() == b.right();
    }
  }

 private:
  struct Node {
    Kind kind = Kind::kIn;
    Term term = Term::variable("_");
    std::string name;
    Guard guard;
    std::vector<Formula> children;
  };

  explicit Formula(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}

  static Formula atom(Kind k, Term t) {
    Node n;
    n.kind = k;
    n.term = std::move(t);
    return Formula(std::move(n));
  }

  static Formula binary(Kind k, Formula a, Formula b) {
    Node n;
    n.kind = k;
    n.children = {std::move(a), std::move(b)};
    return Formula(std::move(n));
  }

  std::shared_ptr<const Node> node_;
};

/// Γ ⊢ C with an ordered context and a single conclusion.
struct Sequent {
  std::vector<Formula> context;
  Formula conclusion;

  friend bool operator==(const Sequent&, const Sequent&) = default;
};

/// The lattice a derivation talks about plus the propagation maps that
/// IND(α) may name.
struct Theory {
  LatticePtr lattice;
  MapRegistry maps;

  const OrthoLattice& L() const { return *lattice; }

  const PowersetMap& map(const std::string& name) const {
    auto it = maps.find(name);
    if (it == maps.end()) throw UnknownMap(name);
    return it->second;
  }

  bool has_map(const std::string& name) const { return maps.count(name) != 0; }

  void add_map(PowersetMap m) {
    if (!same_lattice(m.lattice(), lattice)) throw LatticeMismatch();
    std::string key = m.name();
    maps.insert_or_assign(std::move(key), std::move(m));
  }
};

/// Semantic check of one guard conjunct for a closed subject. Returns
/// nullopt when the bound term is not closed.
inline std::optional<bool> constraint_holds(const Theory& th, const Constraint& c, Elem subject) {
  const OrthoLattice& L = th.L();
  switch (c.relation) {
    case Constraint::Relation::kLeq:
      if (!c.bound.is_constant()) return std::nullopt;
      return L.leq(subject, c.bound.element());
    case Constraint::Relation::kNotLeq:
      if (!c.bound.is_constant()) return std::nullopt;
      return !L.leq(subject, c.bound.element());
    case Constraint::Relation::kNotInKill:
      return !th.map(c.map).kill_set().contains(subject);
  }
  return std::nullopt;
}

/// Convenience constructors for the atoms used throughout the builders.
inline Formula In(Elem e) { return Formula::in(Term::constant(e)); }
inline Formula R(Elem e) { return Formula::reach(Term::constant(e)); }
inline Formula M(Elem e) { return Formula::measure(Term::constant(e)); }

}  // namespace qprop

#endif  // QPROP_FORMULA_HPP_
