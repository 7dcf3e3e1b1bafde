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

#ifndef QPROP_MUTATION_HPP_
#define QPROP_MUTATION_HPP_

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qprop/axioms.hpp"
#include "qprop/builders.hpp"
#include "qprop/derivation.hpp"
#include "qprop/kernel.hpp"
#include "qprop/sampling.hpp"

// Single-site corruptions of valid derivations. Each one models a
// structural rule the calculus lacks, or a side condition it enforces;
// the kernel must reject every mutant.

namespace qprop {

enum class MutationKind { kExchange, kWeakening, kContraction, kGuardViolation, kEigenvariableCapture };

inline constexpr std::array<MutationKind, 5> kAllMutations = {
    MutationKind::kExchange, MutationKind::kWeakening, MutationKind::kContraction, MutationKind::kGuardViolation,
    MutationKind::kEigenvariableCapture};

inline std::string_view to_string(MutationKind k) {
  switch (k) {
    case MutationKind::kExchange:
      return "exchange";
    case MutationKind::kWeakening:
      return "weakening";
    case MutationKind::kContraction:
      return "contraction";
    case MutationKind::kGuardViolation:
      return "guard-violation";
    case MutationKind::kEigenvariableCapture:
      return "eigenvariable-capture";
  }
  return "?";
}

inline std::optional<MutationKind> parse_mutation(std::string_view s) {
  for (MutationKind k : kAllMutations)
    if (to_string(k) == s) return k;
  return std::nullopt;
}

struct Mutant {
  MutationKind kind;
  std::vector<std::size_t> site;  // path of the corrupted node
  std::string description;
  Derivation derivation;
};

namespace detail {

using Path = std::vector<std::size_t>;

inline Derivation& node_at(Derivation& root, const Path& path) {
  Derivation* d = &root;
  for (auto i : path) d = &d->mutable_premises()[i];
  return *d;
}

inline const Derivation& node_at(const Derivation& root, const Path& path) {
  const Derivation* d = &root;
  for (auto i : path) d = &d->premises()[i];
  return *d;
}

template <typename Pred>
void collect_sites(const Derivation& d, Path& path, Pred pred, std::vector<Path>& out) {
  if (pred(d)) out.push_back(path);
  for (std::size_t i = 0; i < d.premises().size(); ++i) {
    path.push_back(i);
    collect_sites(d.premises()[i], path, pred, out);
    path.pop_back();
  }
}

template <typename Pred>
std::vector<Path> sites(const Derivation& d, Pred pred) {
  std::vector<Path> out;
  Path path;
  collect_sites(d, path, pred, out);
  return out;
}

inline bool has_distinct_pair(const std::vector<Formula>& ctx) {
  for (std::size_t i = 1; i < ctx.size(); ++i)
    if (!(ctx[i] == ctx[0])) return true;
  return false;
}

inline bool is_capturable(const Derivation& d) {
  if (d.is_axiom() || d.rule() != Rule::kForallR) return false;
  const Derivation& p = d.premises().front();
  if (p.is_axiom() || p.rule() != Rule::kForallL || !p.witness()) return false;
  const Term& w = *p.witness();
  return w.kind() == Term::Kind::kVar && w.var() == d.conclusion().conclusion.var();
}

// Every binding of `schema`'s parameters over nonzero elements that fails
// its guard. Sets (OQL-Meet) are drawn from pairs.
inline std::vector<Bindings> violating_bindings(const Theory& th, Schema schema) {
  const OrthoLattice& L = th.L();
  std::vector<Bindings> out;
  auto keep = [&](Bindings b) {
    try {
      if (guard_failure(th, schema, b)) out.push_back(std::move(b));
    } catch (const Error&) {
    }
  };
  switch (schema) {
    case Schema::kOqlMeet:
      for (Elem x : L.nonzero())
        for (Elem y : L.nonzero())
          if (x < y) keep({{"X", ElemSet{x, y}}});
      break;
    case Schema::kOqlJoin:
      break;
    case Schema::kGeneralPropagation:
      for (const auto& [name, map] : th.maps)
        for (Elem x : L.nonzero()) keep({{"alpha", name}, {"x", x}});
      break;
    default: {
      auto params = schema_parameters(schema);
      for (Elem x : L.nonzero())
        for (Elem y : L.nonzero()) keep({{params[0], x}, {params[1], y}});
    }
  }
  return out;
}

inline bool is_implication_form(const Derivation& leaf) {
  return leaf.conclusion().context.empty() && leaf.conclusion().conclusion.kind() == Formula::Kind::kLolli;
}

}  // namespace detail

/// Applies one mutation of `kind` at a random eligible site of `d`, or
/// returns nullopt when `d` has no such site.
inline std::optional<Mutant> mutate(const Theory& th, const Derivation& d, MutationKind kind, Rng& rng) {
  using detail::Path;
  std::vector<Path> candidates;
  switch (kind) {
    case MutationKind::kExchange:
      candidates = detail::sites(d, [](const Derivation& n) { return detail::has_distinct_pair(n.conclusion().context); });
      break;
    case MutationKind::kWeakening:
    case MutationKind::kContraction:
      candidates = detail::sites(d, [](const Derivation& n) { return !n.conclusion().context.empty(); });
      break;
    case MutationKind::kGuardViolation:
      candidates = detail::sites(d, [&](const Derivation& n) {
        return n.is_axiom() && !detail::violating_bindings(th, n.schema()).empty();
      });
      break;
    case MutationKind::kEigenvariableCapture:
      candidates = detail::sites(d, detail::is_capturable);
      break;
  }
  if (candidates.empty()) return std::nullopt;

  Mutant m{kind, candidates[uniform_index(rng, candidates.size())], {}, d};
  Derivation& node = detail::node_at(m.derivation, m.site);
  std::vector<Formula>& ctx = node.mutable_conclusion().context;

  switch (kind) {
    case MutationKind::kExchange: {
      std::vector<std::pair<std::size_t, std::size_t>> pairs;
      for (std::size_t i = 0; i < ctx.size(); ++i)
        for (std::size_t j = i + 1; j < ctx.size(); ++j)
          if (!(ctx[i] == ctx[j])) pairs.emplace_back(i, j);
      auto [i, j] = pairs[uniform_index(rng, pairs.size())];
      std::swap(ctx[i], ctx[j]);
      m.description = "swapped hypotheses " + std::to_string(i) + " and " + std::to_string(j);
      break;
    }
    case MutationKind::kWeakening: {
      const std::size_t i = uniform_index(rng, ctx.size());
      ctx.erase(ctx.begin() + static_cast<std::ptrdiff_t>(i));
      m.description = "deleted hypothesis " + std::to_string(i);
      break;
    }
    case MutationKind::kContraction: {
      const std::size_t i = uniform_index(rng, ctx.size());
      const Formula copy = ctx[i];
      ctx.insert(ctx.begin() + static_cast<std::ptrdiff_t>(i), copy);
      m.description = "duplicated hypothesis " + std::to_string(i);
      break;
    }
    case MutationKind::kGuardViolation: {
      auto options = detail::violating_bindings(th, node.schema());
      Bindings b = options[uniform_index(rng, options.size())];
      AxiomInstance inst = instantiate_unchecked(th, node.schema(), b);
      const AxiomForm form = detail::is_implication_form(node) ? AxiomForm::kImplication : AxiomForm::kSequent;
      node = Derivation::by_axiom(node.schema(), b, render(inst, form, node.schema()));
      m.description = "rebound " + std::string(schema_name(node.schema())) + " so that its guard fails";
      break;
    }
    case MutationKind::kEigenvariableCapture: {
      // Drop the ∀L so the eigenvariable stays free in the ∀R context.
      Derivation inner = node.premises().front().premises().front();
      Sequent s{inner.conclusion().context, node.conclusion().conclusion};
      node = Derivation::by_rule(Rule::kForallR, std::move(s), {std::move(inner)});
      m.description = "removed the instantiation below forallR";
      break;
    }
  }
  return m;
}

/// Valid derivations to mutate: every measurement and two-step composed
/// measurement on `th`'s lattice plus identity lemmas for ∀.
inline std::vector<Derivation> mutation_pool(const Theory& th) {
  const OrthoLattice& L = th.L();
  std::vector<Derivation> pool;
  for (Elem a : L.nonzero())
    for (Elem b : L.nonzero()) pool.push_back(build::measurement(th, a, b));
  for (Elem a : L.nonzero())
    for (Elem b : L.nonzero())
      for (Elem c : L.nonzero()) pool.push_back(build::composed(th, a, b, c));
  const Term x = Term::variable("x");
  pool.push_back(build::forall_identity("x", Formula::tensor(Formula::in(x), Formula::reach(x))));
  pool.push_back(build::forall_identity("x", Formula::in(Term::ortho(L, x))));
  pool.push_back(build::forall_identity("x", Formula::lolli(Formula::in(x), Formula::in(x))));
  return pool;
}

struct CampaignResult {
  std::size_t attempted = 0;
  std::size_t rejected = 0;
  std::array<std::size_t, 5> attempted_by_kind{};
  std::array<std::size_t, 5> rejected_by_kind{};
  std::vector<Mutant> accepted;  // mutants the kernel let through

  bool all_rejected() const { return attempted > 0 && rejected == attempted; }
};

/// Draws `count` mutants, cycling through the five kinds, each from a
/// random pool derivation that has an eligible site.
inline CampaignResult run_mutation_campaign(const Theory& th, const std::vector<Derivation>& pool, std::size_t count,
                                            Rng& rng) {
  CampaignResult r;
  for (std::size_t i = 0; i < count; ++i) {
    const MutationKind kind = kAllMutations[i % kAllMutations.size()];
    std::optional<Mutant> m;
    for (int tries = 0; tries < 64 && !m; ++tries) m = mutate(th, pool[uniform_index(rng, pool.size())], kind, rng);
    if (!m) {
      // Fall back to a deterministic scan so that a sparse pool still
      // contributes this kind.
      for (const auto& d : pool)
        if ((m = mutate(th, d, kind, rng))) break;
    }
    if (!m) continue;
    const auto k = static_cast<std::size_t>(kind);
    ++r.attempted;
    ++r.attempted_by_kind[k];
    if (!check_derivation(th, m->derivation).valid()) {
      ++r.rejected;
      ++r.rejected_by_kind[k];
    } else {
      r.accepted.push_back(std::move(*m));
    }
  }
  return r;
}

}  // namespace qprop

#endif  // QPROP_MUTATION_HPP_
