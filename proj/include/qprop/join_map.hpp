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

#ifndef QPROP_JOIN_MAP_HPP_
#define QPROP_JOIN_MAP_HPP_

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "qprop/lattice.hpp"

namespace qprop {

/// A join-preserving self-map of a finite lattice, stored as a value table.
///
/// On a finite lattice join preservation reduces to f(0) = 0 plus all binary
/// joins. from_table() enforces that; the named constructors produce maps
/// that are join-preserving on orthomodular lattices (Sasaki projections,
/// composites, pointwise joins).
class JoinMap {
 public:
  static JoinMap identity(LatticePtr l) {
    std::vector<Elem> t;
    for (Elem e : l->all()) t.push_back(e);
    return JoinMap(std::move(l), std::move(t));
  }

  /// The Sasaki projection b ↦ a ∧ (b ∨ a⊥).
  static JoinMap sasaki(LatticePtr l, Elem a) {
    std::vector<Elem> t;
    for (Elem b : l->all()) t.push_back(l->sasaki(a, b));
    return JoinMap(std::move(l), std::move(t));
  }

  /// Validating constructor; throws if the table is not join-preserving.
  static JoinMap from_table(LatticePtr l, std::vector<Elem> table) {
    if (table.size() != l->size()) throw Error("join map table has the wrong length");
    for (Elem e : table)
      if (!l->contains(e)) throw Error("join map value outside the lattice");
    JoinMap f(std::move(l), std::move(table));
    if (auto v = f.join_violation())
      throw Error("table does not preserve the join of '" + f.lattice_->name_of(v->first) + "' and '" +
                  f.lattice_->name_of(v->second) + "'");
    return f;
  }

  // Trusted construction for tables known to be join-preserving.
  static JoinMap from_table_unchecked(LatticePtr l, std::vector<Elem> table) {
    return JoinMap(std::move(l), std::move(table));
  }

  const LatticePtr& lattice() const { return lattice_; }
  const std::vector<Elem>& table() const { return table_; }
  Elem operator()(Elem x) const { return table_.at(x.index); }

  /// First (x, y) with f(x ∨ y) ≠ f(x) ∨ f(y); (0, 0) if f(0) ≠ 0.
  std::optional<std::pair<Elem, Elem>> join_violation() const {
    const auto& l = *lattice_;
    if ((*this)(l.bottom()) != l.bottom()) return std::pair{l.bottom(), l.bottom()};
    for (Elem x : l.all())
      for (Elem y : l.all()) {
        if (y < x) continue;
        if ((*this)(l.join(x, y)) != l.join((*this)(x), (*this)(y))) return std::pair{x, y};
      }
    return std::nullopt;
  }

  bool preserves_joins() const { return !join_violation(); }

  /// First argument where f(x) ≰ g(x), if any.
  std::optional<Elem> pointwise_violation(const JoinMap& g) const {
    check_same(g);
    for (Elem x : lattice_->all())
      if (!lattice_->leq((*this)(x), g(x))) return x;
    return std::nullopt;
  }

  bool pointwise_leq(const JoinMap& g) const { return !pointwise_violation(g); }

  /// (f ∘ g)(x) = f(g(x)).
  friend JoinMap compose(const JoinMap& f, const JoinMap& g) {
    f.check_same(g);
    std::vector<Elem> t;
    for (Elem x : f.lattice_->all()) t.push_back(f(g(x)));
    return JoinMap(f.lattice_, std::move(t));
  }

  friend JoinMap pointwise_join(const JoinMap& f, const JoinMap& g) {
    f.check_same(g);
    std::vector<Elem> t;
    for (Elem x : f.lattice_->all()) t.push_back(f.lattice_->join(f(x), g(x)));
    return JoinMap(f.lattice_, std::move(t));
  }

  friend bool operator==(const JoinMap& f, const JoinMap& g) {
    return f.table_ == g.table_ && same_lattice(f.lattice_, g.lattice_);
  }

 private:
  JoinMap(LatticePtr l, std::vector<Elem> t) : lattice_(std::move(l)), table_(std::move(t)) {}

  void check_same(const JoinMap& g) const {
    if (!same_lattice(lattice_, g.lattice_)) throw LatticeMismatch();
  }

  LatticePtr lattice_;
  std::vector<Elem> table_;
};

}  // namespace qprop

#endif  // QPROP_JOIN_MAP_HPP_
