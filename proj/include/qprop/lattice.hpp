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

#ifndef QPROP_LATTICE_HPP_
#define QPROP_LATTICE_HPP_

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qprop/element_set.hpp"
#include "qprop/error.hpp"

namespace qprop {

enum class LawStatus { kPass, kFail, kSkipped };

struct LawResult {
  std::string law;
  LawStatus status = LawStatus::kPass;
  // On failure, the tuple of elements that violates the law.
  std::vector<Elem> witness;
};

/// Outcome of checking the ortholattice and orthomodularity laws.
///
/// Structural problems (an orthocomplement table that is not a total
/// function) are kept apart from law failures; when any are present the
/// laws are not evaluated and every law is reported as skipped.
struct VerificationReport {
  std::vector<std::string> structural;
  std::vector<LawResult> laws;

  bool structurally_sound() const { return structural.empty(); }

  bool passed() const {
    return structural.empty() &&
           std::all_of(laws.begin(), laws.end(),
                       [](const LawResult& r) { return r.status == LawStatus::kPass; });
  }

  const LawResult* find(std::string_view law) const {
    for (const auto& r : laws)
      if (r.law == law) return &r;
    return nullptr;
  }

  std::vector<std::string> failed_laws() const {
    std::vector<std::string> out;
    for (const auto& r : laws)
      if (r.status == LawStatus::kFail) out.push_back(r.law);
    return out;
  }
};

namespace laws {
inline constexpr std::string_view kReflexive = "reflexive";
inline constexpr std::string_view kAntisymmetric = "antisymmetric";
inline constexpr std::string_view kTransitive = "transitive";
inline constexpr std::string_view kBounds = "bounds";
inline constexpr std::string_view kMeets = "binary-meets";
inline constexpr std::string_view kJoins = "binary-joins";
inline constexpr std::string_view kAntitone = "ortho-antitone";
inline constexpr std::string_view kInvolution = "ortho-involution";
inline constexpr std::string_view kMeetComplement = "ortho-meet-complement";
inline constexpr std::string_view kJoinComplement = "ortho-join-complement";
inline constexpr std::string_view kOrthomodular = "orthomodular";
}  // namespace laws

class LatticeBuilder;

/// A finite ortholattice candidate: an explicit order, an orthocomplement
/// table, and meet/join tables computed from the order.
///
/// Instances are immutable. The verification report is computed once at
/// construction; a lattice that fails it can still be inspected, but the
/// operations that need a lattice (meet, join) throw where the order has no
/// unique bound.
class OrthoLattice {
 public:
  const std::string& name() const { return name_; }
  std::size_t size() const { return names_.size(); }
  Elem bottom() const { return bottom_; }
  Elem top() const { return top_; }

  ElemSet all() const { return ElemSet::prefix(size()); }
  ElemSet nonzero() const {
    ElemSet s = all();
    s.erase(bottom_);
    return s;
  }

  bool contains(Elem e) const { return e.index < size(); }

  const std::string& name_of(Elem e) const { return names_.at(e.index); }
  const std::vector<std::string>& names() const { return names_; }

  std::optional<Elem> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return Elem{it->second};
  }

  Elem at(std::string_view name) const {
    auto e = find(name);
    if (!e) throw UnknownElement(std::string(name));
    return *e;
  }

  bool leq(Elem x, Elem y) const { return up_[x.index].contains(y); }
  ElemSet up_set(Elem x) const { return up_[x.index]; }
  ElemSet down_set(Elem x) const { return down_[x.index]; }

  std::optional<Elem> try_meet(Elem x, Elem y) const { return decode(meet_[pair(x, y)]); }
  std::optional<Elem> try_join(Elem x, Elem y) const { return decode(join_[pair(x, y)]); }

  Elem meet(Elem x, Elem y) const {
    auto m = try_meet(x, y);
    if (!m) throw Error("no unique meet of '" + name_of(x) + "' and '" + name_of(y) + "'");
    return *m;
  }

  Elem join(Elem x, Elem y) const {
    auto j = try_join(x, y);
    if (!j) throw Error("no unique join of '" + name_of(x) + "' and '" + name_of(y) + "'");
    return *j;
  }

  /// Meet of a finite set; the empty meet is 1.
  Elem meet_all(ElemSet xs) const {
    Elem acc = top_;
    for (Elem x : xs) acc = meet(acc, x);
    return acc;
  }

  /// Join of a finite set; the empty join is 0.
  Elem join_all(ElemSet xs) const {
    Elem acc = bottom_;
    for (Elem x : xs) acc = join(acc, x);
    return acc;
  }

  bool has_ortho(Elem x) const { return ortho_[x.index] >= 0; }

  Elem ortho(Elem x) const {
    if (ortho_[x.index] < 0) throw Error("no orthocomplement recorded for '" + name_of(x) + "'");
    return Elem{static_cast<std::uint32_t>(ortho_[x.index])};
  }

  /// The Sasaki projection onto a, evaluated at b: a ∧ (b ∨ a⊥).
  Elem sasaki(Elem a, Elem b) const { return meet(a, join(b, ortho(a))); }

  /// Commutation criterion: a = (a ∧ b) ∨ (a ∧ b⊥).
  bool compatible(Elem a, Elem b) const { return join(meet(a, b), meet(a, ortho(b))) == a; }

  /// Hasse diagram edges (x covered by y), ordered by (x, y).
  std::vector<std::pair<Elem, Elem>> covers() const {
    std::vector<std::pair<Elem, Elem>> out;
    for (std::uint32_t i = 0; i < size(); ++i) {
      ElemSet strictly_above = up_[i];
      strictly_above.erase(Elem{i});
      for (Elem y : strictly_above) {
        ElemSet between = strictly_above & down_[y.index];
        between.erase(y);
        if (between.empty()) out.emplace_back(Elem{i}, y);
      }
    }
    return out;
  }

  const VerificationReport& report() const { return report_; }
  bool is_orthomodular() const { return report_.passed(); }

  friend bool operator==(const OrthoLattice& a, const OrthoLattice& b) {
    return a.name_ == b.name_ && a.names_ == b.names_ && a.up_ == b.up_ && a.ortho_ == b.ortho_;
  }

 private:
  friend class LatticeBuilder;

  OrthoLattice() = default;

  std::size_t pair(Elem x, Elem y) const { return x.index * size() + y.index; }

  static std::optional<Elem> decode(std::int32_t v) {
    if (v < 0) return std::nullopt;
    return Elem{static_cast<std::uint32_t>(v)};
  }

  void finish(std::vector<std::string> ortho_issues);
  VerificationReport compute_report(std::vector<std::string> structural) const;

  std::string name_;
  std::vector<std::string> names_;
  std::map<std::string, std::uint32_t> index_;
  std::vector<ElemSet> up_;
  std::vector<ElemSet> down_;
  std::vector<std::int32_t> ortho_;
  std::vector<std::int32_t> meet_;
  std::vector<std::int32_t> join_;
  Elem bottom_;
  Elem top_;
  VerificationReport report_;
};

using LatticePtr = std::shared_ptr<const OrthoLattice>;

inline bool same_lattice(const LatticePtr& a, const LatticePtr& b) {
  return a == b || (a && b && *a == *b);
}

/// Assembles an OrthoLattice from element names, generating order pairs and
/// orthocomplement pairs. The order is closed reflexively and transitively;
/// meets and joins are derived from it.
class LatticeBuilder {
 public:
  explicit LatticeBuilder(std::string name) : name_(std::move(name)) {}

  Elem add(const std::string& element) {
    if (index_.count(element)) throw StructuralError("duplicate element name '" + element + "'");
    if (names_.size() >= kMaxElements)
      throw SizeLimitExceeded("lattices are limited to " + std::to_string(kMaxElements) + " elements");
    Elem e{static_cast<std::uint32_t>(names_.size())};
    names_.push_back(element);
    index_.emplace(element, e.index);
    return e;
  }

  Elem at(const std::string& element) const {
    auto it = index_.find(element);
    if (it == index_.end()) throw UnknownElement(element);
    return Elem{it->second};
  }

  std::size_t size() const { return names_.size(); }

  LatticeBuilder& leq(Elem x, Elem y) {
    leq_.emplace_back(x, y);
    return *this;
  }

  LatticeBuilder& ortho(Elem x, Elem y) {
    ortho_.emplace_back(x, y);
    return *this;
  }

  OrthoLattice build() const;

 private:
  std::string name_;
  std::vector<std::string> names_;
  std::map<std::string, std::uint32_t> index_;
  std::vector<std::pair<Elem, Elem>> leq_;
  std::vector<std::pair<Elem, Elem>> ortho_;
};

inline OrthoLattice LatticeBuilder::build() const {
  auto zero = index_.find("0");
  auto one = index_.find("1");
  if (zero == index_.end() || one == index_.end())
    throw StructuralError("lattice '" + name_ + "' must declare elements 0 and 1");

  OrthoLattice l;
  l.name_ = name_;
  l.names_ = names_;
  l.index_ = index_;
  l.bottom_ = Elem{zero->second};
  l.top_ = Elem{one->second};
  const std::size_t n = names_.size();

  l.up_.assign(n, ElemSet{});
  for (std::uint32_t i = 0; i < n; ++i) l.up_[i].insert(Elem{i});
  for (auto [x, y] : leq_) l.up_[x.index].insert(y);
  // Warshall closure over rows.
  for (std::uint32_t k = 0; k < n; ++k)
    for (std::uint32_t i = 0; i < n; ++i)
      if (l.up_[i].contains(Elem{k})) l.up_[i] |= l.up_[k];
  l.down_.assign(n, ElemSet{});
  for (std::uint32_t i = 0; i < n; ++i)
    for (Elem y : l.up_[i]) l.down_[y.index].insert(Elem{i});

  std::vector<std::string> issues;
  l.ortho_.assign(n, -1);
  auto set_ortho = [&](Elem x, Elem y) {
    auto& slot = l.ortho_[x.index];
    if (slot >= 0 && slot != static_cast<std::int32_t>(y.index)) {
      issues.push_back("element '" + names_[x.index] + "' has two orthocomplements");
      return;
    }
    slot = static_cast<std::int32_t>(y.index);
  };
  for (auto [x, y] : ortho_) {
    set_ortho(x, y);
    set_ortho(y, x);
  }
  // 0 and 1 are complementary unless stated otherwise.
  if (l.ortho_[l.bottom_.index] < 0 && l.ortho_[l.top_.index] < 0) {
    l.ortho_[l.bottom_.index] = static_cast<std::int32_t>(l.top_.index);
    l.ortho_[l.top_.index] = static_cast<std::int32_t>(l.bottom_.index);
  }
  l.finish(std::move(issues));
  return l;
}

inline void OrthoLattice::finish(std::vector<std::string> issues) {
  const std::size_t n = size();
  meet_.assign(n * n, -1);
  join_.assign(n * n, -1);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      ElemSet lower = down_[i] & down_[j];
      ElemSet upper = up_[i] & up_[j];
      std::int32_t glb = -1, lub = -1;
      int glb_count = 0, lub_count = 0;
      for (Elem g : lower)
        if (down_[g.index] == lower) {
          glb = static_cast<std::int32_t>(g.index);
          ++glb_count;
        }
      for (Elem u : upper)
        if (up_[u.index] == upper) {
          lub = static_cast<std::int32_t>(u.index);
          ++lub_count;
        }
      meet_[i * n + j] = glb_count == 1 ? glb : -1;
      join_[i * n + j] = lub_count == 1 ? lub : -1;
    }
  }
  for (std::uint32_t i = 0; i < n; ++i)
    if (ortho_[i] < 0) issues.push_back("element '" + names_[i] + "' has no orthocomplement");
  report_ = compute_report(std::move(issues));
}

inline VerificationReport OrthoLattice::compute_report(std::vector<std::string> structural) const {
  VerificationReport rep;
  rep.structural = std::move(structural);
  const std::vector<std::string_view> all_laws = {
      laws::kReflexive,  laws::kAntisymmetric, laws::kTransitive,      laws::kBounds,
      laws::kMeets,      laws::kJoins,         laws::kAntitone,        laws::kInvolution,
      laws::kMeetComplement, laws::kJoinComplement, laws::kOrthomodular};
  if (!rep.structural.empty()) {
    for (auto law : all_laws) rep.laws.push_back({std::string(law), LawStatus::kSkipped, {}});
    return rep;
  }

  const std::uint32_t n = static_cast<std::uint32_t>(size());
  auto E = [](std::uint32_t i) { return Elem{i}; };
  auto fail = [](std::string_view law, std::vector<Elem> w) {
    return LawResult{std::string(law), LawStatus::kFail, std::move(w)};
  };
  auto pass = [](std::string_view law) { return LawResult{std::string(law), LawStatus::kPass, {}}; };
  auto skip = [](std::string_view law) { return LawResult{std::string(law), LawStatus::kSkipped, {}}; };

  // Poset laws.
  {
    LawResult r = pass(laws::kReflexive);
    for (std::uint32_t i = 0; i < n && r.status == LawStatus::kPass; ++i)
      if (!leq(E(i), E(i))) r = fail(laws::kReflexive, {E(i)});
    rep.laws.push_back(r);
  }
  {
    LawResult r = pass(laws::kAntisymmetric);
    for (std::uint32_t i = 0; i < n && r.status == LawStatus::kPass; ++i)
      for (std::uint32_t j = i + 1; j < n; ++j)
        if (leq(E(i), E(j)) && leq(E(j), E(i))) {
          r = fail(laws::kAntisymmetric, {E(i), E(j)});
          break;
        }
    rep.laws.push_back(r);
  }
  {
    LawResult r = pass(laws::kTransitive);
    for (std::uint32_t i = 0; i < n && r.status == LawStatus::kPass; ++i)
      for (Elem j : up_[i]) {
        if (!up_[j.index].subset_of(up_[i])) {
          for (Elem k : up_[j.index] - up_[i]) {
            r = fail(laws::kTransitive, {E(i), j, k});
            break;
          }
          break;
        }
      }
    rep.laws.push_back(r);
  }
  {
    LawResult r = pass(laws::kBounds);
    for (std::uint32_t i = 0; i < n; ++i)
      if (!leq(bottom_, E(i)) || !leq(E(i), top_)) {
        r = fail(laws::kBounds, {E(i)});
        break;
      }
    rep.laws.push_back(r);
  }
  bool lattice_ok = true;
  for (auto [law, table] : {std::pair{laws::kMeets, &meet_}, std::pair{laws::kJoins, &join_}}) {
    LawResult r = pass(law);
    for (std::uint32_t i = 0; i < n && r.status == LawStatus::kPass; ++i)
      for (std::uint32_t j = 0; j < n; ++j)
        if ((*table)[i * n + j] < 0) {
          r = fail(law, {E(i), E(j)});
          break;
        }
    lattice_ok = lattice_ok && r.status == LawStatus::kPass;
    rep.laws.push_back(r);
  }

  // Orthocomplement laws.
  {
    LawResult r = pass(laws::kAntitone);
    for (std::uint32_t i = 0; i < n && r.status == LawStatus::kPass; ++i)
      for (Elem j : up_[i])
        if (!leq(ortho(j), ortho(E(i)))) {
          r = fail(laws::kAntitone, {E(i), j});
          break;
        }
    rep.laws.push_back(r);
  }
  {
    LawResult r = pass(laws::kInvolution);
    for (std::uint32_t i = 0; i < n; ++i)
      if (ortho(ortho(E(i))) != E(i)) {
        r = fail(laws::kInvolution, {E(i)});
        break;
      }
    rep.laws.push_back(r);
  }
  if (!lattice_ok) {
    rep.laws.push_back(skip(laws::kMeetComplement));
    rep.laws.push_back(skip(laws::kJoinComplement));
    rep.laws.push_back(skip(laws::kOrthomodular));
    return rep;
  }
  {
    LawResult r = pass(laws::kMeetComplement);
    for (std::uint32_t i = 0; i < n; ++i)
      if (meet(E(i), ortho(E(i))) != bottom_) {
        r = fail(laws::kMeetComplement, {E(i)});
        break;
      }
    rep.laws.push_back(r);
  }
  {
    LawResult r = pass(laws::kJoinComplement);
    for (std::uint32_t i = 0; i < n; ++i)
      if (join(E(i), ortho(E(i))) != top_) {
        r = fail(laws::kJoinComplement, {E(i)});
        break;
      }
    rep.laws.push_back(r);
  }
  {
    // a <= b implies a v (a' ^ b) = b
    LawResult r = pass(laws::kOrthomodular);
    for (std::uint32_t i = 0; i < n && r.status == LawStatus::kPass; ++i)
      for (Elem b : up_[i])
        if (join(E(i), meet(ortho(E(i)), b)) != b) {
          r = fail(laws::kOrthomodular, {E(i), b});
          break;
        }
    rep.laws.push_back(r);
  }
  return rep;
}

inline const VerificationReport& verify(const OrthoLattice& l) { return l.report(); }

/// Independent compatibility test: closes {a, a⊥, b, b⊥} under binary meets
/// and joins and checks that the resulting sublattice is distributive.
inline bool compatible_by_distributivity(const OrthoLattice& l, Elem a, Elem b) {
  ElemSet gen{a, l.ortho(a), b, l.ortho(b)};
  for (bool grew = true; grew;) {
    grew = false;
    ElemSet next = gen;
    for (Elem x : gen)
      for (Elem y : gen) {
        next.insert(l.meet(x, y));
        next.insert(l.join(x, y));
      }
    if (next != gen) {
      gen = next;
      grew = true;
    }
  }
  for (Elem x : gen)
    for (Elem y : gen)
      for (Elem z : gen)
        if (l.meet(x, l.join(y, z)) != l.join(l.meet(x, y), l.meet(x, z))) return false;
  return true;
}

}  // namespace qprop

#endif  // QPROP_LATTICE_HPP_
