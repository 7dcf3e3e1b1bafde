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

#ifndef QPROP_POWERSET_MAP_HPP_
#define QPROP_POWERSET_MAP_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qprop/join_map.hpp"
#include "qprop/lattice.hpp"

namespace qprop {

/// Subset of L∖{0}. Plain ElemSet; the alias documents intent.
using ActualitySet = ElemSet;

enum class MapKind { kPerfectMeasurement, kLifted, kGeneral };

inline const char* to_string(MapKind k) {
  switch (k) {
    case MapKind::kPerfectMeasurement:
      return "perfect-measurement";
    case MapKind::kLifted:
      return "lifted";
    case MapKind::kGeneral:
      return "general";
  }
  return "?";
}

/// Two actuality sets with the same join whose images have different joins.
struct ASharpWitness {
  ActualitySet first;
  ActualitySet second;
  Elem join;          // ∨first = ∨second
  Elem first_image;   // ∨f(first)
  Elem second_image;  // ∨f(second)
};

struct QSharpResult {
  bool member = true;
  std::optional<ASharpWitness> witness;
};

class ASharpViolation : public Error {
 public:
  explicit ASharpViolation(ASharpWitness w)
      : Error("map violates the join condition A#"), witness_(w) {}
  const ASharpWitness& witness() const { return witness_; }

 private:
  ASharpWitness witness_;
};

/// A union-preserving self-map of the powerset of L∖{0}, represented by its
/// action on singletons. B ↦ ∪_{b∈B} σ(b) preserves unions and sends ∅ to ∅
/// by construction; images never contain 0.
class PowersetMap {
 public:
  static PowersetMap identity(LatticePtr l, std::string name = "id") {
    std::vector<ActualitySet> action(l->size());
    for (Elem b : l->nonzero()) action[b.index] = ActualitySet{b};
    return PowersetMap(std::move(l), std::move(name), MapKind::kGeneral, std::nullopt, std::move(action));
  }

  /// The perfect-measurement map for the pair {a, a⊥}:
  /// σ(b) = {φ_a(b) | b ≰ a⊥} ∪ {φ_{a⊥}(b) | b ≰ a}.
  static PowersetMap perfect_measurement(LatticePtr l, Elem a, std::string name = {}) {
    if (!l->contains(a)) throw Error("measured element outside the lattice");
    const OrthoLattice& L = *l;
    const Elem ap = L.ortho(a);
    std::vector<ActualitySet> action(L.size());
    for (Elem b : L.nonzero()) {
      ActualitySet out;
      if (!L.leq(b, ap)) out.insert(L.sasaki(a, b));
      if (!L.leq(b, a)) out.insert(L.sasaki(ap, b));
      action[b.index] = out;
    }
    if (name.empty()) name = "measure_" + L.name_of(a);
    return PowersetMap(std::move(l), std::move(name), MapKind::kPerfectMeasurement, a, std::move(action));
  }

  /// Lifts a join map pointwise: σ(b) = {f(b)} ∖ {0}.
  static PowersetMap lift(const JoinMap& f, std::string name = "lift") {
    if (auto v = f.join_violation())
      throw Error("lift requires a join-preserving map");
    const LatticePtr& l = f.lattice();
    std::vector<ActualitySet> action(l->size());
    for (Elem b : l->nonzero()) {
      Elem fb = f(b);
      if (fb != l->bottom()) action[b.index] = ActualitySet{fb};
    }
    return PowersetMap(l, std::move(name), MapKind::kLifted, std::nullopt, std::move(action));
  }

  /// A general map from an explicit singleton action indexed by element.
  /// The entry for 0 must be empty and no image may contain 0.
  static PowersetMap from_action(LatticePtr l, std::vector<ActualitySet> action, std::string name = "f") {
    if (action.size() != l->size()) throw Error("singleton action has the wrong length");
    if (!action[l->bottom().index].empty()) throw InvalidActualitySet("0 is not a member of L∖{0}");
    for (const auto& img : action) {
      if (img.contains(l->bottom())) throw InvalidActualitySet("images may not contain 0");
      if (!img.subset_of(l->all())) throw InvalidActualitySet("image element outside the lattice");
    }
    return PowersetMap(std::move(l), std::move(name), MapKind::kGeneral, std::nullopt, std::move(action));
  }

  const LatticePtr& lattice() const { return lattice_; }
  const std::string& name() const { return name_; }
  MapKind kind() const { return kind_; }
  std::optional<Elem> measured() const { return measured_; }
  const std::vector<ActualitySet>& action() const { return action_; }

  PowersetMap renamed(std::string name) const {
    PowersetMap copy = *this;
    copy.name_ = std::move(name);
    return copy;
  }

  /// σ(b).
  ActualitySet image(Elem b) const {
    if (!lattice_->contains(b) || b == lattice_->bottom())
      throw InvalidActualitySet("singleton argument must be a nonzero lattice element");
    return action_[b.index];
  }

  /// ∪_{b∈B} σ(b).
  ActualitySet apply(ActualitySet B) const {
    if (!B.subset_of(lattice_->all())) throw InvalidActualitySet("set contains elements from another lattice");
    if (B.contains(lattice_->bottom())) throw InvalidActualitySet("actuality sets exclude 0");
    ActualitySet out;
    for (Elem b : B) out |= action_[b.index];
    return out;
  }

  /// Kill set K_f: elements whose singleton image is empty.
  ActualitySet kill_set() const {
    ActualitySet k;
    for (Elem b : lattice_->nonzero())
      if (action_[b.index].empty()) k.insert(b);
    return k;
  }

  /// The definite-join map a ↦ ∨σ(a), with ∨∅ = 0. No membership check.
  JoinMap definite_join() const {
    std::vector<Elem> t(lattice_->size(), lattice_->bottom());
    for (Elem b : lattice_->nonzero()) t[b.index] = lattice_->join_all(action_[b.index]);
    return JoinMap::from_table_unchecked(lattice_, std::move(t));
  }

  /// Fast membership test: f is in Q#(L) iff its definite-join map
  /// preserves joins. On failure the witness is a pair of sets of size at
  /// most two with equal joins, preferring disjoint sets.
  QSharpResult q_sharp() const {
    const OrthoLattice& L = *lattice_;
    const JoinMap g = definite_join();
    if (g.preserves_joins()) return {};
    // Candidates {x} and {x, y}, bucketed by join.
    std::vector<std::vector<ActualitySet>> buckets(L.size());
    const ElemSet nz = L.nonzero();
    for (Elem x : nz)
      for (Elem y : nz)
        if (x < y) buckets[L.join(x, y).index].push_back(ActualitySet{x, y});
    for (Elem x : nz) buckets[x.index].push_back(ActualitySet{x});
    auto image_join = [&](ActualitySet s) { return L.join_all(apply(s)); };
    for (std::uint32_t v = 0; v < L.size(); ++v) {
      const auto& bucket = buckets[v];
      if (bucket.empty()) continue;
      const ActualitySet first = bucket.front();
      const Elem first_img = image_join(first);
      std::optional<ActualitySet> chosen;
      for (const auto& s : bucket) {
        if (image_join(s) == first_img) continue;
        if (!chosen) chosen = s;
        if ((s & first).empty()) {
          chosen = s;
          break;
        }
      }
      if (chosen)
        return {false, ASharpWitness{first, *chosen, Elem{v}, first_img, image_join(*chosen)}};
    }
    // Unreachable for a non-join-preserving definite-join map.
    throw Error("internal: A# failure without a witness");
  }

  /// Brute-force oracle for A#: enumerates every subset of L∖{0}, buckets
  /// by join and compares the joins of the images. Exponential in |L|.
  QSharpResult q_sharp_bruteforce() const {
    const OrthoLattice& L = *lattice_;
    std::vector<Elem> nz;
    for (Elem b : L.nonzero()) nz.push_back(b);
    if (nz.size() > 24) throw SizeLimitExceeded("brute-force A# check limited to 25 elements");
    std::vector<std::optional<std::pair<ActualitySet, Elem>>> seen(L.size());
    const std::uint64_t count = std::uint64_t{1} << nz.size();
    for (std::uint64_t mask = 1; mask < count; ++mask) {
      ActualitySet A;
      for (std::size_t i = 0; i < nz.size(); ++i)
        if (mask & (std::uint64_t{1} << i)) A.insert(nz[i]);
      Elem j = L.join_all(A);
      ActualitySet img;
      for (Elem a : A) img |= action_[a.index];
      Elem ij = L.join_all(img);
      auto& slot = seen[j.index];
      if (!slot) {
        slot = std::pair{A, ij};
      } else if (slot->second != ij) {
        return {false, ASharpWitness{slot->first, A, j, slot->second, ij}};
      }
    }
    return {};
  }

  bool in_q_sharp() const { return q_sharp().member; }

  /// The quantale morphism f ↦ [a ↦ ∨f({a})]; requires f ∈ Q#(L).
  JoinMap sup() const {
    auto r = q_sharp();
    if (!r.member) throw ASharpViolation(*r.witness);
    return definite_join();
  }

  /// σ_{f∘g}(a) = ∪_{x∈σ_g(a)} σ_f(x).
  friend PowersetMap compose(const PowersetMap& f, const PowersetMap& g) {
    f.check_same(g);
    std::vector<ActualitySet> action(f.lattice_->size());
    for (Elem a : f.lattice_->nonzero()) action[a.index] = f.apply(g.action_[a.index]);
    return PowersetMap(f.lattice_, f.name_ + "_o_" + g.name_, MapKind::kGeneral, std::nullopt, std::move(action));
  }

  /// Pointwise union of singleton actions.
  friend PowersetMap unite(const PowersetMap& f, const PowersetMap& g) {
    f.check_same(g);
    std::vector<ActualitySet> action(f.lattice_->size());
    for (Elem a : f.lattice_->nonzero()) action[a.index] = f.action_[a.index] | g.action_[a.index];
    PowersetMap out(f.lattice_, f.name_ + "_u_" + g.name_, MapKind::kGeneral, std::nullopt, std::move(action));
    if (f.action_ == g.action_) {
      out.kind_ = f.kind_;
      out.measured_ = f.measured_;
    }
    return out;
  }

  friend PowersetMap unite(std::span<const PowersetMap> fs, LatticePtr l) {
    PowersetMap acc = from_action(l, std::vector<ActualitySet>(l->size()), "empty");
    bool first = true;
    for (const auto& f : fs) {
      acc = first ? f : unite(acc, f);
      first = false;
    }
    return acc;
  }

  /// Equality of maps as mathematical objects: same lattice, same action.
  friend bool operator==(const PowersetMap& f, const PowersetMap& g) {
    return f.action_ == g.action_ && same_lattice(f.lattice_, g.lattice_);
  }

 private:
  PowersetMap(LatticePtr l, std::string name, MapKind kind, std::optional<Elem> measured,
              std::vector<ActualitySet> action)
      : lattice_(std::move(l)),
        name_(std::move(name)),
        kind_(kind),
        measured_(measured),
        action_(std::move(action)) {}

  void check_same(const PowersetMap& g) const {
    if (!same_lattice(lattice_, g.lattice_)) throw LatticeMismatch();
  }

  LatticePtr lattice_;
  std::string name_;
  MapKind kind_;
  std::optional<Elem> measured_;
  std::vector<ActualitySet> action_;
};

/// Named maps available to IND(α) formulas and to the CLI.
using MapRegistry = std::map<std::string, PowersetMap>;

}  // namespace qprop

#endif  // QPROP_POWERSET_MAP_HPP_
