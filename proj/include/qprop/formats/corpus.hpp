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

#ifndef QPROP_FORMATS_CORPUS_HPP_
#define QPROP_FORMATS_CORPUS_HPP_

#include <algorithm>
#include <memory>
#include <string>
#include <vector>

#include "qprop/builders.hpp"
#include "qprop/families.hpp"
#include "qprop/formats/derivation_io.hpp"
#include "qprop/formats/formula_io.hpp"
#include "qprop/formats/lattice_io.hpp"
#include "qprop/formats/map_io.hpp"
#include "qprop/sampling.hpp"

// Seeded generators of well-formed values for round-trip testing.

namespace qprop::formats {

/// A generated family with at most 16 elements, its elements renamed and
/// listed in a shuffled order (0 and 1 keep their names).
inline OrthoLattice random_lattice(Rng& rng) {
  OrthoLattice base = [&] {
    switch (uniform_index(rng, 3)) {
      case 0:
        return boolean_lattice(static_cast<int>(1 + uniform_index(rng, 4)));
      case 1:
        return mo_lattice(static_cast<int>(1 + uniform_index(rng, 7)));
      default:
        return hexagon_lattice();
    }
  }();
  std::vector<Elem> order(base.all().begin(), base.all().end());
  std::shuffle(order.begin(), order.end(), rng);
  LatticeBuilder b(base.name() + "_r" + std::to_string(uniform_index(rng, 1000)));
  std::vector<Elem> renamed(base.size());
  std::size_t counter = 0;
  for (Elem e : order) {
    std::string name = base.name_of(e);
    if (e != base.bottom() && e != base.top()) {
      name = std::string(1, static_cast<char>('a' + uniform_index(rng, 8))) + std::to_string(counter++);
      if (coin(rng, 0.3)) name += "'";
    }
    renamed[e.index] = b.add(name);
  }
  for (auto [x, y] : base.covers()) b.leq(renamed[x.index], renamed[y.index]);
  for (Elem x : base.all())
    if (x < base.ortho(x)) b.ortho(renamed[x.index], renamed[base.ortho(x).index]);
  return b.build();
}

/// Random map over `l`: a perfect measurement or a general map.
inline PowersetMap random_map(const LatticePtr& l, Rng& rng, const std::string& name) {
  if (coin(rng, 0.3)) return PowersetMap::perfect_measurement(l, uniform_element(rng, l->nonzero()), name);
  return random_mixed_map(l, rng).renamed(name);
}

/// A theory over a random lattice with two registered maps, "alpha" and
/// "beta".
inline Theory random_theory(Rng& rng) {
  Theory th{std::make_shared<const OrthoLattice>(random_lattice(rng)), {}};
  th.add_map(random_map(th.lattice, rng, "alpha"));
  th.add_map(random_map(th.lattice, rng, "beta"));
  return th;
}

namespace detail {

class FormulaGen {
 public:
  FormulaGen(const Theory& th, Rng& rng) : th_(th), rng_(rng) {}

  Formula formula(int depth) {
    if (depth <= 1 || coin(rng_, 0.25)) return atom();
    switch (uniform_index(rng_, 4)) {
      case 0:
        return Formula::tensor(formula(depth - 1), formula(depth - 1));
      case 1:
        return Formula::plus(formula(depth - 1), formula(depth - 1));
      case 2:
        return Formula::lolli(formula(depth - 1), formula(depth - 1));
      default: {
        static const char* kVars[] = {"x", "y", "z"};
        std::string v = kVars[uniform_index(rng_, 3)];
        Guard g;
        const std::size_t n = uniform_index(rng_, 3);
        for (std::size_t i = 0; i < n; ++i) g.push_back(constraint());
        scope_.push_back(v);
        Formula body = formula(depth - 1);
        scope_.pop_back();
        return Formula::forall(v, std::move(g), std::move(body));
      }
    }
  }

  Sequent sequent(int depth) {
    Sequent s{{}, formula(depth)};
    const std::size_t n = uniform_index(rng_, 4);
    for (std::size_t i = 0; i < n; ++i) s.context.push_back(formula(depth));
    return s;
  }

 private:
  Term term(int depth = 2) {
    const OrthoLattice& L = th_.L();
    const std::size_t k = uniform_index(rng_, depth > 0 ? 6 : 3);
    if (k == 0 && !scope_.empty()) return Term::variable(scope_[uniform_index(rng_, scope_.size())]);
    if (k == 1) return Term::variable(coin(rng_) ? "u" : "v");
    if (k == 3) return Term::ortho(L, term(depth - 1));
    if (k == 4) return Term::sasaki(L, term(depth - 1), term(depth - 1));
    return Term::constant(uniform_element(rng_, L.nonzero()));
  }

  Constraint constraint() {
    switch (uniform_index(rng_, 3)) {
      case 0:
        return Constraint::leq(term());
      case 1:
        return Constraint::not_leq(term());
      default:
        return Constraint::not_in_kill(coin(rng_) ? "alpha" : "beta");
    }
  }

  Formula atom() {
    switch (uniform_index(rng_, 4)) {
      case 0:
        return Formula::in(term());
      case 1:
        return Formula::reach(term());
      case 2:
        return Formula::measure(term());
      default:
        return Formula::induce(coin(rng_) ? "alpha" : "beta");
    }
  }

  const Theory& th_;
  Rng& rng_;
  std::vector<std::string> scope_;
};

}  // namespace detail

inline Formula random_formula(const Theory& th, Rng& rng, int max_depth = 6) {
  return detail::FormulaGen(th, rng).formula(max_depth);
}

inline Sequent random_sequent(const Theory& th, Rng& rng, int max_depth = 4) {
  return detail::FormulaGen(th, rng).sequent(max_depth);
}

/// One of the builder outputs on `th`'s lattice. Needs an orthomodular
/// lattice.
inline Derivation random_derivation(const Theory& th, Rng& rng) {
  const OrthoLattice& L = th.L();
  auto pick = [&] { return uniform_element(rng, L.nonzero()); };
  switch (uniform_index(rng, 5)) {
    case 0:
      return build::measurement(th, pick(), pick());
    case 1:
      return build::composed(th, pick(), pick(), pick());
    case 2:
      return build::join_chain(th, pick(), pick(), pick());
    case 3: {
      const PowersetMap& alpha = th.map("alpha");
      ElemSet alive = L.nonzero() - alpha.kill_set();
      if (!alive.empty()) return build::general_propagation(th, "alpha", uniform_element(rng, alive));
      [[fallthrough]];
    }
    default: {
      const Term x = Term::variable("x");
      return build::forall_identity("x", Formula::tensor(Formula::in(x), Formula::reach(Term::ortho(L, x))));
    }
  }
}

struct RoundTripFailure {
  std::string kind;
  std::string text;
  std::string detail;
};

struct RoundTripReport {
  std::size_t checked = 0;
  std::size_t per_kind[5] = {};
  std::vector<RoundTripFailure> failures;
  bool passed() const { return failures.empty() && checked > 0; }
};

inline constexpr const char* kRoundTripKinds[5] = {"lattice", "map", "formula", "sequent", "derivation"};

/// parse(serialize(v)) == v and serialize(parse(text)) == text for
/// `count` random values, cycling through the five parsers.
inline RoundTripReport round_trip_corpus(std::size_t count, Rng& rng) {
  RoundTripReport r;
  auto record = [&](std::size_t kind, bool ok, const std::string& text, const std::string& detail) {
    ++r.checked;
    ++r.per_kind[kind];
    if (!ok) r.failures.push_back({kRoundTripKinds[kind], text, detail});
  };
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t kind = i % 5;
    std::string text;
    try {
      Theory th = random_theory(rng);
      // Derivations need an orthomodular lattice for the builders.
      while (kind == 4 && !th.L().is_orthomodular()) th = random_theory(rng);
      const OrthoLattice& L = th.L();
      switch (kind) {
        case 0: {
          text = serialize(L);
          OrthoLattice back = parse_lattice(text);
          record(kind, back == L && serialize(back) == text, text, "lattice differs after round trip");
          break;
        }
        case 1: {
          const PowersetMap& m = th.map(coin(rng) ? "alpha" : "beta");
          text = serialize(m);
          PowersetMap back = parse_map(text, th.lattice);
          record(kind, back == m && back.name() == m.name() && serialize(back) == text, text,
                 "map differs after round trip");
          break;
        }
        case 2: {
          Formula f = random_formula(th, rng);
          text = serialize(f, L);
          Formula back = parse_formula(text, th);
          record(kind, back == f && serialize(back, L) == text, text, "formula differs after round trip");
          break;
        }
        case 3: {
          Sequent s = random_sequent(th, rng);
          text = serialize(s, L);
          Sequent back = parse_sequent(text, th);
          record(kind, back == s && serialize(back, L) == text, text, "sequent differs after round trip");
          break;
        }
        default: {
          Derivation d = random_derivation(th, rng);
          text = serialize(d, L);
          Derivation back = parse_derivation(text, th);
          record(kind, back == d && serialize(back, L) == text, text, "derivation differs after round trip");
        }
      }
    } catch (const Error& e) {
      record(kind, false, text, e.what());
    }
  }
  return r;
}

}  // namespace qprop::formats

#endif  // QPROP_FORMATS_CORPUS_HPP_
