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

#ifndef QPROP_TOOLS_CLI_HPP_
#define QPROP_TOOLS_CLI_HPP_

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qprop/formats.hpp"
#include "qprop/qprop.hpp"

// The `qprop` command-line front end. Exit codes: 0 when every check
// passes, 1 when a check fails, 2 on usage or input errors.

namespace qprop::cli {

using nlohmann::json;

inline constexpr int kOk = 0;
inline constexpr int kCheckFailed = 1;
inline constexpr int kUsage = 2;

// Bad flags, unreadable files, unparsable input.
class InputError : public Error {
 public:
  using Error::Error;
};

struct Options {
  std::uint64_t seed = 1;
  std::string json_path;
  unsigned workers = 1;
  bool ascii = false;
};

/// Collects the structured report and echoes checks to the human output.
class Report {
 public:
  Report(std::string command, std::ostream& out) : command_(std::move(command)), out_(out) {}

  void input(const std::string& key, json value) { inputs_[key] = std::move(value); }
  void result(const std::string& key, json value) { result_[key] = std::move(value); }
  void skipped(const std::string& what) { skipped_.push_back(what); }
  void error(const std::string& message) { error_ = message; }

  void check(const std::string& name, bool pass, std::vector<std::string> witness = {}, std::string detail = {},
             std::vector<std::string> shown = {}) {
    json c{{"name", name}, {"pass", pass}, {"witness", witness}};
    if (!detail.empty()) c["detail"] = detail;
    checks_.push_back(std::move(c));
    passed_ = passed_ && pass;
    if (shown.empty()) shown = witness;
    out_ << (pass ? "PASS " : "FAIL ") << name;
    if (!shown.empty()) {
      out_ << " (witness:";
      for (std::size_t i = 0; i < shown.size(); ++i) out_ << (i ? ", " : " ") << shown[i];
      out_ << ")";
    }
    if (!detail.empty()) out_ << ": " << detail;
    out_ << "\n";
  }

  bool passed() const { return passed_ && !error_; }

  json to_json() const {
    json j{{"command", command_}, {"inputs", inputs_}, {"checks", checks_}, {"passed", passed()}};
    if (!result_.empty()) j["result"] = result_;
    if (!skipped_.empty()) j["skipped"] = skipped_;
    if (error_) j["error"] = *error_;
    return j;
  }

 private:
  std::string command_;
  std::ostream& out_;
  json inputs_ = json::object();
  json result_ = json::object();
  json checks_ = json::array();
  std::vector<std::string> skipped_;
  std::optional<std::string> error_;
  bool passed_ = true;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw InputError("cannot write '" + path + "'");
}

// Runs `parse`, prefixing parse errors with the file name.
template <typename F>
auto parse_file(const std::string& path, F parse) {
  const std::string text = read_file(path);
  try {
    return parse(text);
  } catch (const formats::ParseError& e) {
    throw InputError(path + ":" + e.what());
  }
}

inline LatticePtr load_lattice(const std::string& path) {
  return std::make_shared<const OrthoLattice>(
      parse_file(path, [](const std::string& t) { return formats::parse_lattice(t); }));
}

inline Theory load_theory(const std::string& lattice_path, const std::vector<std::string>& map_paths) {
  Theory th{load_lattice(lattice_path), {}};
  for (const auto& p : map_paths)
    for (auto& m : parse_file(p, [&](const std::string& t) { return formats::parse_maps(t, th.lattice); }))
      th.add_map(std::move(m));
  return th;
}

// Accepts `a'` as well as the display spelling `a⊥`.
inline std::string canonical_name(std::string s) {
  static const std::string kBot = "⊥";
  for (auto pos = s.find(kBot); pos != std::string::npos; pos = s.find(kBot)) s.replace(pos, kBot.size(), "'");
  return s;
}

inline Elem element_arg(const OrthoLattice& L, const std::string& name, const std::string& flag) {
  auto e = L.find(canonical_name(name));
  if (!e) throw InputError(flag + ": unknown element '" + name + "'");
  return *e;
}

inline Elem nonzero_arg(const OrthoLattice& L, const std::string& name, const std::string& flag) {
  Elem e = element_arg(L, name, flag);
  if (e == L.bottom()) throw InputError(flag + ": the absurd property 0 is not allowed here");
  return e;
}

inline ActualitySet set_arg(const OrthoLattice& L, std::string text, const std::string& flag) {
  text = canonical_name(text);
  if (text.find('{') == std::string::npos) text = "{" + text + "}";
  try {
    formats::TokenStream ts(formats::tokenize(text, false));
    ActualitySet s = formats::detail::parse_element_set(ts, L);
    if (!ts.at(formats::Tok::kEnd)) throw InputError(flag + ": text after '}'");
    return s;
  } catch (const formats::ParseError& e) {
    throw InputError(flag + ": " + e.what());
  }
}

inline std::vector<std::string> names(const OrthoLattice& L, const std::vector<Elem>& es) {
  std::vector<std::string> out;
  for (Elem e : es) out.push_back(L.name_of(e));
  return out;
}

inline std::vector<std::string> names(const OrthoLattice& L, ElemSet s) {
  return names(L, std::vector<Elem>(s.begin(), s.end()));
}

inline std::vector<std::string> shown(const std::vector<std::string>& ns, bool ascii) {
  if (ascii) return ns;
  std::vector<std::string> out;
  for (const auto& n : ns) out.push_back(formats::display_name(n));
  return out;
}

inline formats::Style style(const Options& o) { return o.ascii ? formats::Style::kAscii : formats::Style::kUnicode; }

// Commands below the lattice level need an orthomodular lattice. Returns
// false (after recording the failure) otherwise.
inline bool require_oml(const OrthoLattice& L, Report& r, const Options& o) {
  if (L.is_orthomodular()) return true;
  const auto& rep = L.report();
  std::vector<std::string> w;
  std::string detail = "lattice '" + L.name() + "' is not orthomodular";
  if (!rep.structural.empty()) {
    detail += ": " + rep.structural.front();
  } else {
    for (const auto& law : rep.laws)
      if (law.status == LawStatus::kFail) {
        detail += " (" + law.law + " fails)";
        w = names(L, law.witness);
        break;
      }
  }
  r.check("orthomodular", false, w, detail, shown(w, o.ascii));
  return false;
}

inline std::string set_text(const OrthoLattice& L, ActualitySet s, const Options& o) {
  return formats::display_set(L, s, o.ascii);
}

inline std::string elem_text(const OrthoLattice& L, Elem e, const Options& o) {
  return o.ascii ? L.name_of(e) : formats::display_name(L.name_of(e));
}

inline Bindings parse_bindings(const Theory& th, const std::vector<std::string>& binds) {
  const OrthoLattice& L = th.L();
  Bindings b;
  for (const auto& kv : binds) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw InputError("--bind: expected key=value, got '" + kv + "'");
    const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
    if (b.count(key)) throw InputError("--bind: '" + key + "' bound twice");
    if (value.find('{') != std::string::npos) {
      b.emplace(key, ElemSet(set_arg(L, value, "--bind " + key)));
    } else if (key == "alpha") {
      if (!th.has_map(value)) throw InputError("--bind alpha: unknown map '" + value + "'");
      b.emplace(key, value);
    } else {
      b.emplace(key, element_arg(L, value, "--bind " + key));
    }
  }
  return b;
}

inline Derivation load_derivation(const Theory& th, const std::string& path) {
  return parse_file(path, [&](const std::string& t) { return formats::parse_derivation(t, th); });
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Commands. Each returns normally after filling the report; InputError and
// parse errors propagate to run().

struct LatticeGenArgs {
  std::string family;
  int n = 0;
  std::vector<std::string> names;
  std::string output;
};

inline void lattice_gen(const LatticeGenArgs& a, const Options&, Report& r, std::ostream& out) {
  r.input("family", a.family);
  r.input("n", a.n);
  auto family = parse_family(a.family);
  if (!family) throw InputError("--family: expected boolean, mo or hexagon, got '" + a.family + "'");
  OrthoLattice l = [&] {
    try {
      return build_family(*family, a.n, a.names);
    } catch (const Error& e) {
      throw InputError(std::string("--n: ") + e.what());
    }
  }();
  const std::string text = formats::serialize(l);
  r.result("lattice", l.name());
  r.result("elements", l.size());
  if (a.output.empty()) {
    out << text;
  } else {
    detail::write_file(a.output, text);
    out << "wrote " << l.name() << " (" << l.size() << " elements) to " << a.output << "\n";
  }
}

inline void lattice_verify(const std::string& path, const Options& o, Report& r, std::ostream& out) {
  r.input("lattice", path);
  LatticePtr lp = detail::load_lattice(path);
  const OrthoLattice& L = *lp;
  const auto& rep = L.report();
  out << "lattice " << L.name() << ": " << L.size() << " elements\n";
  r.result("lattice", L.name());
  r.result("elements", L.size());
  for (const auto& issue : rep.structural) r.check("structure", false, {}, issue);
  for (const auto& law : rep.laws) {
    if (law.status == LawStatus::kSkipped) {
      r.skipped(law.law);
      continue;
    }
    auto w = detail::names(L, law.witness);
    r.check(law.law, law.status == LawStatus::kPass, w, {}, detail::shown(w, o.ascii));
  }
  if (rep.passed()) {
    // The closed-form compatibility test against the generated-sublattice oracle.
    std::vector<std::string> w;
    for (Elem a : L.all())
      for (Elem b : L.all())
        if (w.empty() && L.compatible(a, b) != compatible_by_distributivity(L, a, b)) w = detail::names(L, std::vector<Elem>{a, b});
    r.check("compatibility-criterion", w.empty(), w, {}, detail::shown(w, o.ascii));
  }
}

struct PropagateArgs {
  std::string lattice;
  std::vector<std::string> maps;
  std::vector<std::string> measure;
  std::vector<std::string> apply;
  std::string set;
  bool invariants = false;
};

inline void propagate(const PropagateArgs& a, const Options& o, Report& r, std::ostream& out) {
  r.input("lattice", a.lattice);
  r.input("maps", a.maps);
  r.input("measure", a.measure);
  r.input("apply", a.apply);
  r.input("set", a.set);
  r.input("invariants", a.invariants);
  Theory th = detail::load_theory(a.lattice, a.maps);
  const OrthoLattice& L = th.L();
  if (!a.measure.empty() && !a.apply.empty()) throw InputError("--measure and --apply cannot be combined");
  if (a.set.empty() && !a.invariants) throw InputError("--set is required unless --invariants is given");
  if (a.set.empty() && (!a.measure.empty() || !a.apply.empty()))
    throw InputError("--set is required with --measure or --apply");
  if (!detail::require_oml(L, r, o)) return;

  if (!a.set.empty()) {
    std::vector<PowersetMap> steps;
    for (const auto& m : a.measure)
      steps.push_back(PowersetMap::perfect_measurement(th.lattice, detail::nonzero_arg(L, m, "--measure")));
    for (const auto& name : a.apply) {
      if (!th.has_map(name)) throw InputError("--apply: unknown map '" + name + "'");
      steps.push_back(th.map(name));
    }
    ActualitySet s = detail::set_arg(L, a.set, "--set");
    for (const auto& f : steps) s = f.apply(s);
    out << detail::set_text(L, s, o) << "\n";
    r.result("set", detail::names(L, s));
    r.result("definite", s.empty() ? json(nullptr) : json(L.name_of(L.join_all(s))));
  }
  if (a.invariants) {
    for (const auto& c : {check_branch_soundness(th.lattice), check_compatibility_preservation(th.lattice)})
      r.check(c.name, c.pass, c.witness, c.detail, detail::shown(c.witness, o.ascii));
  }
}

struct QuantaleArgs {
  std::string lattice;
  std::vector<std::string> maps;
  std::size_t samples = 200;
  std::size_t pairs = 100;
};

inline constexpr std::size_t kBruteForceLimit = 12;

inline void quantale_verify(const QuantaleArgs& a, const Options& o, Report& r, std::ostream&) {
  r.input("lattice", a.lattice);
  r.input("maps", a.maps);
  r.input("samples", a.samples);
  r.input("pairs", a.pairs);
  r.input("seed", o.seed);
  Theory th = detail::load_theory(a.lattice, a.maps);
  const LatticePtr& lp = th.lattice;
  const OrthoLattice& L = *lp;
  if (!detail::require_oml(L, r, o)) return;
  Rng rng(o.seed);
  const bool brute = L.size() <= kBruteForceLimit;
  std::vector<Elem> elems(L.all().begin(), L.all().end());

  auto pm = parallel_map(elems.size(), o.workers,
                         [&](std::size_t i) { return PowersetMap::perfect_measurement(lp, elems[i]); });
  {
    std::vector<std::string> fast_fail, brute_fail;
    auto verdicts = parallel_map(elems.size(), o.workers, [&](std::size_t i) {
      return std::pair{pm[i].q_sharp().member, !brute || pm[i].q_sharp_bruteforce().member};
    });
    for (std::size_t i = 0; i < elems.size(); ++i) {
      if (!verdicts[i].first && fast_fail.empty()) fast_fail.push_back(L.name_of(elems[i]));
      if (!verdicts[i].second && brute_fail.empty()) brute_fail.push_back(L.name_of(elems[i]));
    }
    r.check("measurement-maps-fast", fast_fail.empty(), fast_fail, {}, detail::shown(fast_fail, o.ascii));
    if (brute)
      r.check("measurement-maps-bruteforce", brute_fail.empty(), brute_fail, {}, detail::shown(brute_fail, o.ascii));
    else
      r.skipped("measurement-maps-bruteforce");
  }

  if (brute && a.samples > 0) {
    std::vector<PowersetMap> sample;
    for (std::size_t i = 0; i < a.samples; ++i) sample.push_back(random_mixed_map(lp, rng));
    auto agree = parallel_map(sample.size(), o.workers, [&](std::size_t i) {
      const bool fast = sample[i].q_sharp().member;
      return std::pair{fast == sample[i].q_sharp_bruteforce().member, fast};
    });
    std::size_t members = 0;
    std::vector<std::string> w;
    for (std::size_t i = 0; i < agree.size(); ++i) {
      members += agree[i].second;
      if (!agree[i].first && w.empty()) w.push_back("sample " + std::to_string(i));
    }
    r.check("fast-matches-bruteforce", w.empty(), w,
            std::to_string(sample.size()) + " maps, " + std::to_string(members) + " in Q#");
  } else if (!brute) {
    r.skipped("fast-matches-bruteforce");
  }

  {
    const std::size_t n = elems.size();
    auto rows = parallel_map(n, o.workers, [&](std::size_t i) -> std::optional<std::vector<std::string>> {
      for (std::size_t j = 0; j < n; ++j)
        if (auto why = sup_morphism_failure(pm[i], pm[j]))
          return std::vector<std::string>{L.name_of(elems[i]), L.name_of(elems[j]), *why};
      return std::nullopt;
    });
    std::vector<std::string> w;
    for (const auto& row : rows)
      if (row && w.empty()) w = *row;
    r.check("sup-morphism-measurements", w.empty(), w, std::to_string(n * n) + " pairs", detail::shown(w, o.ascii));
  }

  if (a.pairs > 0) {
    std::vector<std::pair<PowersetMap, PowersetMap>> ps;
    for (std::size_t i = 0; i < a.pairs; ++i) {
      PowersetMap f = random_q_sharp_map(lp, rng);
      ps.emplace_back(std::move(f), random_q_sharp_map(lp, rng));
    }
    auto res = parallel_map(ps.size(), o.workers, [&](std::size_t i) -> std::pair<std::string, std::string> {
      const auto& [f, g] = ps[i];
      std::string closure;
      if (!f.in_q_sharp() || !g.in_q_sharp())
        closure = "sample outside Q#";
      else if (!compose(f, g).in_q_sharp())
        closure = "composition";
      else if (!unite(f, g).in_q_sharp())
        closure = "union";
      return {sup_morphism_failure(f, g).value_or(""), closure};
    });
    std::vector<std::string> wm, wc;
    for (std::size_t i = 0; i < res.size(); ++i) {
      if (!res[i].first.empty() && wm.empty()) wm = {"pair " + std::to_string(i), res[i].first};
      if (!res[i].second.empty() && wc.empty()) wc = {"pair " + std::to_string(i), res[i].second};
    }
    r.check("sup-morphism-random", wm.empty(), wm, std::to_string(ps.size()) + " pairs");
    r.check("q-sharp-closure", wc.empty(), wc, std::to_string(ps.size()) + " pairs");

    std::vector<JoinMap> gs;
    for (std::size_t i = 0; i < a.pairs; ++i) gs.push_back(random_join_map(lp, rng));
    auto ok = parallel_map(gs.size(), o.workers, [&](std::size_t i) {
      const PowersetMap lifted = PowersetMap::lift(gs[i]);
      return lifted.in_q_sharp() && lifted.sup() == gs[i];
    });
    std::vector<std::string> ws;
    for (std::size_t i = 0; i < ok.size(); ++i)
      if (!ok[i] && ws.empty()) ws.push_back("map " + std::to_string(i));
    r.check("surjectivity", ws.empty(), ws, std::to_string(gs.size()) + " join maps");
  }

  for (const auto& [name, f] : th.maps) {
    const QSharpResult q = f.q_sharp();
    std::vector<std::string> w, shown;
    std::string d;
    if (q.witness) {
      w = {formats::serialize_set(L, q.witness->first), formats::serialize_set(L, q.witness->second)};
      shown = {detail::set_text(L, q.witness->first, o), detail::set_text(L, q.witness->second, o)};
      d = "equal joins " + detail::elem_text(L, q.witness->join, o) + " map to " +
          detail::elem_text(L, q.witness->first_image, o) + " and " + detail::elem_text(L, q.witness->second_image, o);
    }
    r.check("member:" + name, q.member, w, d, shown);
  }
}

inline void counterexample_order(const std::string& lattice, const Options& o, Report& r, std::ostream& out) {
  r.input("lattice", lattice);
  LatticePtr lp = detail::load_lattice(lattice);
  const OrthoLattice& L = *lp;
  if (!detail::require_oml(L, r, o)) return;
  auto w = find_order_counterexample(lp);
  if (!w) {
    out << "no counterexample in " << L.name() << "\n";
    r.result("witness", nullptr);
    return;
  }
  auto t = [&](Elem e) { return detail::elem_text(L, e, o); };
  const Elem j = L.join(w->a, w->a_prime);
  const char* join = o.ascii ? " v " : " ∨ ";
  const char* phi = o.ascii ? "phi_" : "φ_";
  out << "a = " << t(w->a) << ", a' = " << t(w->a_prime) << ", a" << join << "a' = " << t(j) << "\n";
  out << phi << t(w->a) << "(" << t(w->argument) << ") = " << t(w->lhs_image) << (o.ascii ? " !<= " : " ≰ ")
      << phi << t(j) << "(" << t(w->argument) << ") = " << t(w->rhs_image) << "\n";
  r.result("witness", json{{"a", L.name_of(w->a)},
                           {"a_prime", L.name_of(w->a_prime)},
                           {"argument", L.name_of(w->argument)},
                           {"lhs_image", L.name_of(w->lhs_image)},
                           {"rhs_image", L.name_of(w->rhs_image)}});
  auto ws = detail::names(L, std::vector<Elem>{w->a, w->a_prime, w->argument});
  r.check("recheck", recheck(lp, *w), ws, {}, detail::shown(ws, o.ascii));
}

inline void prop1(const std::string& lattice, const Options& o, Report& r, std::ostream&) {
  r.input("lattice", lattice);
  LatticePtr lp = detail::load_lattice(lattice);
  if (!detail::require_oml(*lp, r, o)) return;
  for (const auto& c : check_measurement_pairing(lp, o.workers))
    r.check(c.name, c.pass, c.witness, c.detail, detail::shown(c.witness, o.ascii));
}

struct ProveArgs {
  std::string lattice;
  std::vector<std::string> maps;
  std::string actual;
  std::vector<std::string> measure;  // measurement: one; composed: measure then --then
  std::string alpha;
  std::string output;
};

inline void emit_derivation(const Theory& th, const Derivation& d, const std::string& output, const Options& o,
                            Report& r, std::ostream& out) {
  const OrthoLattice& L = th.L();
  const KernelVerdict v = check_derivation(th, d);
  r.result("conclusion", formats::serialize(d.conclusion(), L));
  r.result("nodes", d.node_count());
  r.check("kernel", v.valid(), {}, v.valid() ? "" : v.failure->reason);
  const std::string text = formats::serialize(d, L);
  if (output.empty()) {
    out << text;
  } else {
    detail::write_file(output, text);
    out << formats::serialize(d.conclusion(), L, detail::style(o)) << "\n";
    out << "wrote " << d.node_count() << " nodes to " << output << "\n";
  }
}

inline void prove_chain(const ProveArgs& a, const Options& o, Report& r, std::ostream& out) {
  r.input("lattice", a.lattice);
  r.input("actual", a.actual);
  r.input("measure", a.measure);
  Theory th = detail::load_theory(a.lattice, a.maps);
  const OrthoLattice& L = th.L();
  const Elem x = detail::nonzero_arg(L, a.actual, "--actual");
  std::vector<Elem> bs;
  for (const auto& m : a.measure) bs.push_back(detail::nonzero_arg(L, m, "--measure"));
  if (!detail::require_oml(L, r, o)) return;
  emit_derivation(th, build::measurement_chain(th, x, bs), a.output, o, r, out);
}

inline void prove_general(const ProveArgs& a, const Options& o, Report& r, std::ostream& out) {
  r.input("lattice", a.lattice);
  r.input("maps", a.maps);
  r.input("actual", a.actual);
  r.input("alpha", a.alpha);
  Theory th = detail::load_theory(a.lattice, a.maps);
  const OrthoLattice& L = th.L();
  const Elem x = detail::nonzero_arg(L, a.actual, "--actual");
  if (!th.has_map(a.alpha)) throw InputError("--alpha: unknown map '" + a.alpha + "'");
  if (!detail::require_oml(L, r, o)) return;
  if (th.map(a.alpha).kill_set().contains(x)) {
    r.check("guard", false, {a.alpha, L.name_of(x)}, "x lies in the kill set of " + a.alpha);
    return;
  }
  emit_derivation(th, build::general_propagation(th, a.alpha, x), a.output, o, r, out);
}

/// Every measurement (a, b) and composed (a, b, c) derivation, one file each.
inline void prove_all(const std::string& lattice, const std::string& dir, const Options& o, Report& r,
                      std::ostream& out) {
  r.input("lattice", lattice);
  Theory th{detail::load_lattice(lattice), {}};
  const OrthoLattice& L = th.L();
  if (!detail::require_oml(L, r, o)) return;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError("--dir: cannot create '" + dir + "'");

  std::vector<std::vector<Elem>> tuples;
  for (Elem a : L.nonzero())
    for (Elem b : L.nonzero()) {
      tuples.push_back({a, b});
      for (Elem c : L.nonzero()) tuples.push_back({a, b, c});
    }
  std::sort(tuples.begin(), tuples.end(), [](const auto& x, const auto& y) {
    if (x.size() != y.size()) return x.size() < y.size();
    return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
  });
  auto built = parallel_map(tuples.size(), o.workers, [&](std::size_t i) {
    const auto& t = tuples[i];
    Derivation d = build::measurement_chain(th, t[0], {t.begin() + 1, t.end()});
    std::string file = t.size() == 2 ? "measurement" : "composed";
    for (Elem e : t) file += "_" + std::to_string(e.index);
    return std::tuple{file + ".drv", formats::serialize(d, L), check_derivation(th, d).valid()};
  });
  std::vector<std::string> bad;
  for (const auto& [file, text, valid] : built) {
    detail::write_file((std::filesystem::path(dir) / file).string(), text);
    if (!valid && bad.empty()) bad.push_back(file);
  }
  out << "wrote " << built.size() << " derivations to " << dir << "\n";
  r.result("derivations", built.size());
  r.check("kernel", bad.empty(), bad, std::to_string(built.size()) + " derivations");
}

struct FilesArgs {
  std::string lattice;
  std::vector<std::string> maps;
  std::vector<std::string> files;
};

inline void check_files(const FilesArgs& a, const Options& o, Report& r, std::ostream& out) {
  r.input("lattice", a.lattice);
  r.input("maps", a.maps);
  r.input("files", a.files);
  Theory th = detail::load_theory(a.lattice, a.maps);
  if (!detail::require_oml(th.L(), r, o)) return;
  std::vector<Derivation> ds;
  for (const auto& f : a.files) ds.push_back(detail::load_derivation(th, f));
  auto verdicts = parallel_map(ds.size(), o.workers, [&](std::size_t i) { return check_derivation(th, ds[i]); });
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const KernelVerdict& v = verdicts[i];
    if (v.valid()) {
      r.check(a.files[i], true, {}, std::to_string(v.nodes) + " nodes checked");
      continue;
    }
    const KernelFailure& f = *v.failure;
    const std::string& node = f.node;
    r.check(a.files[i], false, {f.path_string(), node, to_string(f.kind)},
            "at " + f.path_string() + " (" + node + "): " + to_string(f.kind) + ": " + f.reason);
  }
  out << (r.passed() ? "valid" : "invalid") << "\n";
}

inline void crosscheck_files(const FilesArgs& a, const Options& o, Report& r, std::ostream&) {
  r.input("lattice", a.lattice);
  r.input("maps", a.maps);
  r.input("files", a.files);
  Theory th = detail::load_theory(a.lattice, a.maps);
  const OrthoLattice& L = th.L();
  if (!detail::require_oml(L, r, o)) return;
  std::vector<Derivation> ds;
  for (const auto& f : a.files) ds.push_back(detail::load_derivation(th, f));
  auto verdicts = parallel_map(ds.size(), o.workers, [&](std::size_t i) { return semantic_crosscheck(th, ds[i]); });
  json rows = json::array();
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const CrosscheckVerdict& v = verdicts[i];
    std::string d = v.detail;
    if (v.status == CrosscheckStatus::kAgree || v.status == CrosscheckStatus::kDisagree) {
      std::string what = v.shape == "measurement" ? "measuring" : "applying " + v.map + " to";
      if (v.shape == "measurement") {
        what += " " + detail::elem_text(L, *v.initial, o) + " by";
        for (Elem b : v.measured) what += " " + detail::elem_text(L, b, o);
      } else {
        what += " " + detail::elem_text(L, *v.initial, o);
      }
      d = what + ": logic " + detail::set_text(L, v.logic_branches, o) + ", algebra " +
          detail::set_text(L, v.algebra_branches, o) + (d.empty() ? "" : "; " + d);
      json measured = json::array();
      for (Elem b : v.measured) measured.push_back(L.name_of(b));
      rows.push_back({{"file", a.files[i]},
                      {"shape", v.shape},
                      {"initial", L.name_of(*v.initial)},
                      {"measured", measured},
                      {"map", v.map},
                      {"logic", detail::names(L, v.logic_branches)},
                      {"algebra", detail::names(L, v.algebra_branches)}});
    }
    r.check(a.files[i], v.agrees(), v.agrees() ? std::vector<std::string>{} : std::vector<std::string>{to_string(v.status)},
            d);
  }
  r.result("branches", rows);
}

struct AxiomArgs {
  std::string lattice;
  std::vector<std::string> maps;
  std::string schema;
  std::vector<std::string> binds;
  std::string form = "natural";
};

inline void axiom_instantiate(const AxiomArgs& a, const Options& o, Report& r, std::ostream& out) {
  r.input("lattice", a.lattice);
  r.input("maps", a.maps);
  r.input("schema", a.schema);
  r.input("bind", a.binds);
  r.input("form", a.form);
  Theory th = detail::load_theory(a.lattice, a.maps);
  auto schema = parse_schema(a.schema);
  if (!schema) throw InputError("--schema: unknown schema '" + a.schema + "'");
  AxiomForm form;
  if (a.form == "natural")
    form = AxiomForm::kNatural;
  else if (a.form == "sequent")
    form = AxiomForm::kSequent;
  else if (a.form == "implication")
    form = AxiomForm::kImplication;
  else
    throw InputError("--form: expected natural, sequent or implication, got '" + a.form + "'");
  Bindings b = detail::parse_bindings(th, a.binds);
  if (!detail::require_oml(th.L(), r, o)) return;
  try {
    Sequent s = instantiate_axiom(th, *schema, b, form);
    out << formats::serialize(s, th.L(), detail::style(o)) << "\n";
    r.result("sequent", formats::serialize(s, th.L()));
    r.check("guard", true);
  } catch (const GuardViolation& e) {
    r.check("guard", false, {e.constraint()}, e.what());
  } catch (const UnboundVariable& e) {
    throw InputError(std::string("--bind: ") + e.what());
  } catch (const UnknownMap& e) {
    throw InputError(std::string("--bind: ") + e.what());
  } catch (const BadBinding& e) {
    throw InputError(std::string("--bind: ") + e.what());
  }
}

inline void formats_roundtrip(std::size_t count, const Options& o, Report& r, std::ostream&) {
  r.input("count", count);
  r.input("seed", o.seed);
  Rng rng(o.seed);
  const formats::RoundTripReport rep = formats::round_trip_corpus(count, rng);
  std::string d = std::to_string(rep.checked) + " values (";
  for (std::size_t k = 0; k < 5; ++k)
    d += std::string(k ? ", " : "") + formats::kRoundTripKinds[k] + " " + std::to_string(rep.per_kind[k]);
  d += ")";
  std::vector<std::string> w;
  if (!rep.failures.empty()) w = {rep.failures.front().kind, rep.failures.front().text, rep.failures.front().detail};
  r.check("round-trip", rep.passed(), w, d);
  r.result("failures", rep.failures.size());
}

struct ParseArgs {
  std::string kind;
  std::string lattice;
  std::vector<std::string> maps;
  std::string file;
};

inline void formats_parse(const ParseArgs& a, const Options&, Report& r, std::ostream& out) {
  r.input("kind", a.kind);
  r.input("file", a.file);
  if (a.kind == "lattice") {
    out << formats::serialize(*detail::load_lattice(a.file));
    return;
  }
  if (a.lattice.empty()) throw InputError("--lattice is required for --kind " + a.kind);
  r.input("lattice", a.lattice);
  Theory th = detail::load_theory(a.lattice, a.maps);
  const OrthoLattice& L = th.L();
  if (a.kind == "map") {
    for (const auto& m : detail::parse_file(a.file, [&](const std::string& t) { return formats::parse_maps(t, th.lattice); }))
      out << formats::serialize(m);
  } else if (a.kind == "formula") {
    out << formats::serialize(detail::parse_file(a.file, [&](const std::string& t) { return formats::parse_formula(t, th); }), L)
        << "\n";
  } else if (a.kind == "sequent") {
    out << formats::serialize(detail::parse_file(a.file, [&](const std::string& t) { return formats::parse_sequent(t, th); }), L)
        << "\n";
  } else if (a.kind == "derivation") {
    out << formats::serialize(detail::load_derivation(th, a.file), L);
  } else {
    throw InputError("--kind: expected lattice, map, formula, sequent or derivation, got '" + a.kind + "'");
  }
}

inline void mutate(const std::string& lattice, std::size_t count, const Options& o, Report& r, std::ostream&) {
  r.input("lattice", lattice);
  r.input("count", count);
  r.input("seed", o.seed);
  Theory th{detail::load_lattice(lattice), {}};
  if (!detail::require_oml(th.L(), r, o)) return;
  const std::vector<Derivation> pool = mutation_pool(th);
  auto valid = parallel_map(pool.size(), o.workers, [&](std::size_t i) { return check_derivation(th, pool[i]).valid(); });
  const std::size_t n_valid = static_cast<std::size_t>(std::count(valid.begin(), valid.end(), true));
  r.check("pool-valid", n_valid == pool.size(), {},
          std::to_string(n_valid) + " of " + std::to_string(pool.size()) + " derivations");
  Rng rng(o.seed);
  const CampaignResult c = run_mutation_campaign(th, pool, count, rng);
  std::string d = std::to_string(c.rejected) + " of " + std::to_string(c.attempted) + " rejected (";
  json by_kind = json::object();
  for (std::size_t k = 0; k < kAllMutations.size(); ++k) {
    const std::string kind(to_string(kAllMutations[k]));
    d += (k ? ", " : "") + kind + " " + std::to_string(c.rejected_by_kind[k]) + "/" +
         std::to_string(c.attempted_by_kind[k]);
    by_kind[kind] = {{"attempted", c.attempted_by_kind[k]}, {"rejected", c.rejected_by_kind[k]}};
  }
  d += ")";
  std::vector<std::string> w;
  if (!c.accepted.empty()) w = {std::string(to_string(c.accepted.front().kind)), c.accepted.front().description};
  r.check("mutants-rejected", c.all_rejected() && c.attempted == count, w, d);
  r.result("by_kind", by_kind);
}

// ---------------------------------------------------------------------------

inline int finish(const Report& r, const Options& o, int code, std::ostream& err) {
  if (!o.json_path.empty()) {
    try {
      detail::write_file(o.json_path, r.to_json().dump(2) + "\n");
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return kUsage;
    }
  }
  return code;
}

/// Parses `args` (without the program name) and runs one command.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Property lattices, propagation maps and a measurement proof kernel.", "qprop"};
  app.fallthrough();
  app.require_subcommand(1);
  Options o;
  app.add_option("--seed", o.seed, "seed for randomized sampling")->capture_default_str();
  app.add_option("--json", o.json_path, "write the structured report to this file");
  app.add_option("--workers", o.workers, "threads for exhaustive sweeps")->check(CLI::Range(1U, 256U));
  app.add_flag("--ascii", o.ascii, "ASCII output instead of Unicode");

  std::string command;
  std::function<void(Report&)> action;
  auto on = [&](CLI::App* sub, std::string name, std::function<void(Report&)> f) {
    sub->callback([&command, &action, name = std::move(name), f = std::move(f)] {
      command = name;
      action = f;
    });
  };

  auto* lattice = app.add_subcommand("lattice", "generate or verify lattices")->require_subcommand(1);
  LatticeGenArgs gen;
  auto* gen_cmd = lattice->add_subcommand("gen", "write a generated family member");
  gen_cmd->add_option("--family", gen.family, "boolean, mo or hexagon")->required();
  gen_cmd->add_option("--n", gen.n, "atoms (boolean) or orthogonal pairs (mo)");
  gen_cmd->add_option("--names", gen.names, "atom names")->delimiter(',');
  gen_cmd->add_option("-o,--output", gen.output, "output file (default: standard output)");
  on(gen_cmd, "lattice gen", [&](Report& r) { lattice_gen(gen, o, r, out); });
  std::string verify_path;
  auto* verify_cmd = lattice->add_subcommand("verify", "check the ortholattice and orthomodular laws");
  verify_cmd->add_option("file", verify_path)->required();
  on(verify_cmd, "lattice verify", [&](Report& r) { lattice_verify(verify_path, o, r, out); });

  PropagateArgs prop;
  auto* prop_cmd = app.add_subcommand("propagate", "apply measurements or maps to an actuality set");
  prop_cmd->add_option("--lattice", prop.lattice)->required();
  prop_cmd->add_option("--maps", prop.maps, "map file (repeatable)")->allow_extra_args(false);
  prop_cmd->add_option("--measure", prop.measure, "measured properties, in order");
  prop_cmd->add_option("--apply", prop.apply, "map names, in order");
  prop_cmd->add_option("--set", prop.set, "actuality set, e.g. \"{b}\"");
  prop_cmd->add_flag("--invariants", prop.invariants, "check the perfect-measurement invariants");
  on(prop_cmd, "propagate", [&](Report& r) { propagate(prop, o, r, out); });

  QuantaleArgs quant;
  auto* quant_cmd = app.add_subcommand("quantale", "propagation-map algebra")->require_subcommand(1);
  auto* qv_cmd = quant_cmd->add_subcommand("verify", "membership and the quantale morphism");
  qv_cmd->add_option("--lattice", quant.lattice)->required();
  qv_cmd->add_option("--maps", quant.maps, "map file whose members are checked (repeatable)")->allow_extra_args(false);
  qv_cmd->add_option("--samples", quant.samples, "random maps for the fast/brute-force comparison")
      ->capture_default_str();
  qv_cmd->add_option("--pairs", quant.pairs, "random Q# pairs and join maps")->capture_default_str();
  on(qv_cmd, "quantale verify", [&](Report& r) { quantale_verify(quant, o, r, out); });

  std::string ce_lattice;
  auto* ce_cmd = app.add_subcommand("counterexample", "search for counterexamples")->require_subcommand(1);
  auto* order_cmd = ce_cmd->add_subcommand("order", "Sasaki preorder versus pointwise order");
  order_cmd->add_option("--lattice", ce_lattice)->required();
  on(order_cmd, "counterexample order", [&](Report& r) { counterexample_order(ce_lattice, o, r, out); });

  std::string p1_lattice;
  auto* p1_cmd = app.add_subcommand("prop1", "pairing identities of measurement maps");
  p1_cmd->add_option("--lattice", p1_lattice)->required();
  on(p1_cmd, "prop1", [&](Report& r) { prop1(p1_lattice, o, r, out); });

  ProveArgs pm, pc, pg;
  std::string then;
  std::vector<std::string> thens;
  std::string all_lattice, all_dir;
  auto* prove = app.add_subcommand("prove", "build derivations")->require_subcommand(1);
  auto* pm_cmd = prove->add_subcommand("measurement", "a measurement of b on actual a");
  pm_cmd->add_option("--lattice", pm.lattice)->required();
  pm_cmd->add_option("--actual", pm.actual)->required();
  std::string pm_measure;
  pm_cmd->add_option("--measure", pm_measure)->required();
  pm_cmd->add_option("-o,--output", pm.output);
  on(pm_cmd, "prove measurement", [&](Report& r) {
    pm.measure = {pm_measure};
    prove_chain(pm, o, r, out);
  });
  auto* pc_cmd = prove->add_subcommand("composed", "successive measurements");
  pc_cmd->add_option("--lattice", pc.lattice)->required();
  pc_cmd->add_option("--actual", pc.actual)->required();
  std::string pc_measure;
  pc_cmd->add_option("--measure", pc_measure)->required();
  pc_cmd->add_option("--then", thens, "later measurements, in order")->required();
  pc_cmd->add_option("-o,--output", pc.output);
  on(pc_cmd, "prove composed", [&](Report& r) {
    pc.measure = {pc_measure};
    pc.measure.insert(pc.measure.end(), thens.begin(), thens.end());
    prove_chain(pc, o, r, out);
  });
  auto* pg_cmd = prove->add_subcommand("general", "one step of a registered propagation map");
  pg_cmd->add_option("--lattice", pg.lattice)->required();
  pg_cmd->add_option("--maps", pg.maps)->required()->allow_extra_args(false);
  pg_cmd->add_option("--alpha", pg.alpha)->required();
  pg_cmd->add_option("--actual", pg.actual)->required();
  pg_cmd->add_option("-o,--output", pg.output);
  on(pg_cmd, "prove general", [&](Report& r) { prove_general(pg, o, r, out); });
  auto* pa_cmd = prove->add_subcommand("all", "every measurement and composed derivation");
  pa_cmd->add_option("--lattice", all_lattice)->required();
  pa_cmd->add_option("--dir", all_dir)->required();
  on(pa_cmd, "prove all", [&](Report& r) { prove_all(all_lattice, all_dir, o, r, out); });

  FilesArgs chk, xc;
  auto* check_cmd = app.add_subcommand("check", "run the proof kernel on derivation files");
  check_cmd->add_option("--lattice", chk.lattice)->required();
  check_cmd->add_option("--maps", chk.maps)->allow_extra_args(false);
  check_cmd->add_option("files", chk.files)->required();
  on(check_cmd, "check", [&](Report& r) { check_files(chk, o, r, out); });
  auto* xc_cmd = app.add_subcommand("crosscheck", "compare proved branches with the algebra");
  xc_cmd->add_option("--lattice", xc.lattice)->required();
  xc_cmd->add_option("--maps", xc.maps)->allow_extra_args(false);
  xc_cmd->add_option("files", xc.files)->required();
  on(xc_cmd, "crosscheck", [&](Report& r) { crosscheck_files(xc, o, r, out); });

  AxiomArgs ax;
  auto* axiom = app.add_subcommand("axiom", "axiom schemas")->require_subcommand(1);
  auto* inst_cmd = axiom->add_subcommand("instantiate", "instantiate a schema with checked guards");
  inst_cmd->add_option("--lattice", ax.lattice)->required();
  inst_cmd->add_option("--maps", ax.maps)->allow_extra_args(false);
  inst_cmd->add_option("--schema", ax.schema)->required();
  inst_cmd->add_option("--bind", ax.binds, "key=value");
  inst_cmd->add_option("--form", ax.form, "natural, sequent or implication")->capture_default_str();
  on(inst_cmd, "axiom instantiate", [&](Report& r) { axiom_instantiate(ax, o, r, out); });

  std::size_t rt_count = 1000;
  ParseArgs pa;
  auto* fmt = app.add_subcommand("formats", "file formats")->require_subcommand(1);
  auto* rt_cmd = fmt->add_subcommand("roundtrip", "parse/serialize identity on random values");
  rt_cmd->add_option("--count", rt_count)->capture_default_str();
  on(rt_cmd, "formats roundtrip", [&](Report& r) { formats_roundtrip(rt_count, o, r, out); });
  auto* parse_cmd = fmt->add_subcommand("parse", "parse a file and print it canonically");
  parse_cmd->add_option("--kind", pa.kind, "lattice, map, formula, sequent or derivation")->required();
  parse_cmd->add_option("--lattice", pa.lattice);
  parse_cmd->add_option("--maps", pa.maps)->allow_extra_args(false);
  parse_cmd->add_option("file", pa.file)->required();
  on(parse_cmd, "formats parse", [&](Report& r) { formats_parse(pa, o, r, out); });

  std::string mut_lattice;
  std::size_t mut_count = 500;
  auto* mut_cmd = app.add_subcommand("mutate", "mutation campaign against the proof kernel");
  mut_cmd->add_option("--lattice", mut_lattice)->required();
  mut_cmd->add_option("--count", mut_count)->capture_default_str();
  on(mut_cmd, "mutate", [&](Report& r) { mutate(mut_lattice, mut_count, o, r, out); });

  std::vector<std::string> argv_store{"qprop"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  Report report(command, out);
  try {
    action(report);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    report.error(e.what());
    return finish(report, o, kUsage, err);
  } catch (const formats::ParseError& e) {
    err << "error: " << e.what() << "\n";
    report.error(e.what());
    return finish(report, o, kUsage, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    report.error(e.what());
    return finish(report, o, kUsage, err);
  }
  return finish(report, o, report.passed() ? kOk : kCheckFailed, err);
}

}  // namespace qprop::cli

#endif  // QPROP_TOOLS_CLI_HPP_
