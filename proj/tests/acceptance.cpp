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

// End-to-end acceptance run. Every criterion drives the qprop binary as a
// subprocess; structured reports are read back from --json files and, where
// a value can be recomputed, compared against the reference model in
// oracles.hpp. Prints one PASS/FAIL line per criterion.
//
// usage: qprop_acceptance WORK_DIR

#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "oracles.hpp"

extern char** environ;

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path g_work;
std::string g_workers = "4";

struct Run {
  int code = -1;
  std::string out;
  std::string err;
  json report;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

// Runs qprop with `args`; stdout and stderr go to files so large reports
// cannot fill a pipe.
Run qprop(std::vector<std::string> args) {
  static int counter = 0;
  const std::string tag = "run" + std::to_string(counter++);
  const fs::path out = g_work / (tag + ".out"), err = g_work / (tag + ".err"), rep = g_work / (tag + ".json");
  args.insert(args.begin(), {QPROP_CLI_PATH, "--workers", g_workers, "--json", rep.string()});

  posix_spawn_file_actions_t fa;
  posix_spawn_file_actions_init(&fa);
  posix_spawn_file_actions_addopen(&fa, STDOUT_FILENO, out.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  posix_spawn_file_actions_addopen(&fa, STDERR_FILENO, err.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);

  Run r;
  pid_t pid = 0;
  if (posix_spawn(&pid, argv[0], &fa, nullptr, argv.data(), environ) == 0) {
    int status = 0;
    waitpid(pid, &status, 0);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
  }
  posix_spawn_file_actions_destroy(&fa);
  r.out = slurp(out);
  r.err = slurp(err);
  const std::string text = slurp(rep);
  r.report = text.empty() ? json() : json::parse(text, nullptr, false);
  return r;
}

// Collects the first few reasons a criterion failed.
struct Verdict {
  std::vector<std::string> problems;
  std::string summary;

  void require(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }
  bool passed() const { return problems.empty(); }
};

const json* find_check(const json& report, const std::string& name) {
  if (!report.is_object() || !report.contains("checks")) return nullptr;
  for (const auto& c : report["checks"])
    if (c["name"] == name) return &c;
  return nullptr;
}

bool check_passed(const json& report, const std::string& name) {
  const json* c = find_check(report, name);
  return c && (*c)["pass"].get<bool>();
}

bool all_checks_pass(const json& report) {
  return report.is_object() && report.value("passed", false) && !report["checks"].empty();
}

struct Family {
  std::string name;
  std::string flag;
  int n;
  oracle::Lattice ref;
  fs::path file;
};

std::vector<Family> g_families;

const Family& family(const std::string& name) {
  for (const auto& f : g_families)
    if (f.name == name) return f;
  throw std::runtime_error("no family " + name);
}

Verdict generate_families() {
  Verdict v;
  for (int n = 1; n <= 4; ++n) g_families.push_back({"boolean" + std::to_string(n), "boolean", n, oracle::boolean(n), {}});
  for (int n = 1; n <= 7; ++n) g_families.push_back({"mo" + std::to_string(n), "mo", n, oracle::mo(n), {}});
  g_families.push_back({"hexagon", "hexagon", 0, oracle::hexagon(), {}});
  for (auto& f : g_families) {
    f.file = g_work / (f.name + ".lat");
    std::vector<std::string> args{"lattice", "gen", "--family", f.flag, "-o", f.file.string()};
    if (f.n > 0) args.insert(args.end(), {"--n", std::to_string(f.n)});
    const Run r = qprop(args);
    v.require(r.code == 0 && fs::exists(f.file), "lattice gen " + f.name + " exited " + std::to_string(r.code));
  }
  return v;
}

// Reference orthomodularity witness: the first (x, y) with x <= y and
// x v (x' ^ y) != y.
std::vector<std::string> oml_violation(const oracle::Lattice& L) {
  for (int x = 0; x < L.size(); ++x)
    for (int y = 0; y < L.size(); ++y)
      if (L.leq(x, y) && L.join(x, L.meet(L.ortho(x), y)) != y) return {L.name(x), L.name(y)};
  return {};
}

Verdict criterion_axioms() {
  Verdict v;
  std::size_t verified = 0;
  for (const auto& f : g_families) {
    if (f.name == "hexagon" || (f.flag == "mo" && f.n > 4)) continue;
    const Run r = qprop({"lattice", "verify", f.file.string()});
    v.require(r.code == 0 && all_checks_pass(r.report), f.name + ": lattice verify did not pass");
    v.require(r.report.is_object() && r.report["checks"].size() >= 11, f.name + ": fewer than 11 law checks");
    v.require(oml_violation(f.ref).empty(), f.name + ": reference model finds a violation");
    ++verified;
  }
  const Family& hex = family("hexagon");
  const Run r = qprop({"lattice", "verify", hex.file.string()});
  v.require(r.code == 1, "hexagon: expected exit 1, got " + std::to_string(r.code));
  std::vector<std::string> failed;
  if (r.report.is_object())
    for (const auto& c : r.report["checks"])
      if (!c["pass"].get<bool>()) failed.push_back(c["name"]);
  v.require(failed == std::vector<std::string>{"orthomodular"}, "hexagon: failing checks are not exactly {orthomodular}");
  const json* om = find_check(r.report, "orthomodular");
  const std::vector<std::string> expected{"a", "b"};
  v.require(om && (*om)["witness"] == json(expected), "hexagon: witness is not (a, b)");
  v.require(oml_violation(hex.ref) == expected, "hexagon: reference witness is not (a, b)");
  v.summary = std::to_string(verified) + " lattices pass all laws; hexagon fails orthomodular at (a, b)";
  return v;
}

Verdict criterion_pairing() {
  Verdict v;
  std::size_t n = 0;
  for (const auto& f : g_families) {
    if (f.name == "hexagon" || f.ref.size() > 16) continue;
    const Run r = qprop({"prop1", "--lattice", f.file.string()});
    v.require(r.code == 0 && check_passed(r.report, "pairing-self-dual") && check_passed(r.report, "pairing-exact"),
              f.name + ": pairing identities fail");
    // Reference: maps for a and b agree on every actuality set iff b in {a, a'}.
    if (f.ref.size() <= 8) {
      const auto sets = f.ref.actuality_sets();
      for (int a = 0; a < f.ref.size(); ++a)
        for (int b = 0; b < f.ref.size(); ++b) {
          bool same = true;
          for (const auto& s : sets) same = same && oracle::measure(f.ref, a, s) == oracle::measure(f.ref, b, s);
          v.require(same == (b == a || b == f.ref.ortho(a)), f.name + ": reference pairing differs");
        }
    }
    ++n;
  }
  v.summary = std::to_string(n) + " families";
  return v;
}

std::vector<std::pair<const Family*, Run>> g_quantale;

void run_quantale() {
  for (const auto& f : g_families) {
    if (f.name == "hexagon" || f.ref.size() > 16) continue;
    g_quantale.emplace_back(
        &f, qprop({"--seed", "2026", "quantale", "verify", "--lattice", f.file.string(), "--samples", "200", "--pairs", "100"}));
  }
}

Verdict criterion_membership() {
  Verdict v;
  std::size_t n = 0;
  for (const auto& [f, r] : g_quantale) {
    if (f->ref.size() > 12) continue;
    for (const char* c : {"measurement-maps-fast", "measurement-maps-bruteforce", "fast-matches-bruteforce"})
      v.require(check_passed(r.report, c), f->name + ": " + c);
    const json* agree = find_check(r.report, "fast-matches-bruteforce");
    v.require(agree && (*agree)["detail"].get<std::string>().rfind("200 maps", 0) == 0, f->name + ": not 200 samples");
    // Reference: every measurement map satisfies A# by enumeration.
    for (int a = 0; a < f->ref.size(); ++a)
      v.require(oracle::a_sharp(f->ref, [&](const std::set<int>& B) { return oracle::measure(f->ref, a, B); }),
                f->name + ": reference A# fails");
    ++n;
  }
  v.summary = std::to_string(n) + " lattices with |L| <= 12, 200 samples each";
  return v;
}

Verdict criterion_morphism() {
  Verdict v;
  for (const auto& [f, r] : g_quantale) {
    v.require(r.code == 0, f->name + ": quantale verify exited " + std::to_string(r.code));
    for (const char* c : {"sup-morphism-measurements", "sup-morphism-random", "q-sharp-closure", "surjectivity"})
      v.require(check_passed(r.report, c), f->name + ": " + c);
    const json* s = find_check(r.report, "surjectivity");
    v.require(s && (*s)["detail"] == "100 join maps", f->name + ": not 100 join maps");
    const json* p = find_check(r.report, "sup-morphism-random");
    v.require(p && (*p)["detail"] == "100 pairs", f->name + ": not 100 pairs");
  }
  v.summary = std::to_string(g_quantale.size()) + " families, 100 random pairs and 100 join maps each";
  return v;
}

Verdict criterion_counterexample() {
  Verdict v;
  const Family& mo2 = family("mo2");
  const Run r = qprop({"counterexample", "order", "--lattice", mo2.file.string()});
  v.require(r.code == 0 && check_passed(r.report, "recheck"), "mo2: no rechecked witness");
  if (r.report.is_object() && r.report["result"]["witness"].is_object()) {
    const json& w = r.report["result"]["witness"];
    const oracle::Lattice& L = mo2.ref;
    const int a = L.index(w["a"]), ap = L.index(w["a_prime"]), x = L.index(w["argument"]);
    const int j = L.join(a, ap);
    bool precedes = true;
    for (int y = 0; y < L.size(); ++y) precedes = precedes && L.sasaki(a, L.sasaki(j, y)) == L.sasaki(a, y);
    v.require(precedes, "mo2: reference says the Sasaki preorder fails");
    v.require(L.name(L.sasaki(a, x)) == w["lhs_image"] && L.name(L.sasaki(j, x)) == w["rhs_image"],
              "mo2: images differ from the reference");
    v.require(!L.leq(L.sasaki(a, x), L.sasaki(j, x)), "mo2: reference says the pointwise order holds");
    v.summary = "mo2 witness a=" + w["a"].get<std::string>() + ", a'=" + w["a_prime"].get<std::string>() +
                ", argument " + w["argument"].get<std::string>();
  } else {
    v.require(false, "mo2: report has no witness");
  }
  for (int n = 1; n <= 4; ++n) {
    const Run b = qprop({"counterexample", "order", "--lattice", family("boolean" + std::to_string(n)).file.string()});
    v.require(b.code == 0 && b.report.is_object() && b.report["result"]["witness"].is_null() &&
                  b.out.find("no counterexample") != std::string::npos,
              "boolean" + std::to_string(n) + ": expected no counterexample");
  }
  v.summary += "; none on boolean1-4";
  return v;
}

Verdict criterion_invariants() {
  Verdict v;
  std::size_t n = 0;
  for (const auto& f : g_families) {
    if (f.name == "hexagon") continue;
    const Run r = qprop({"propagate", "--lattice", f.file.string(), "--invariants"});
    v.require(r.code == 0 && r.report.is_object() && r.report["checks"].size() == 2 && all_checks_pass(r.report),
              f.name + ": invariants fail");
    ++n;
  }
  v.summary = std::to_string(n) + " families, branch soundness and compatibility preservation";
  return v;
}

struct ProofSet {
  const Family* family;
  std::vector<std::string> files;
};
std::vector<ProofSet> g_proofs;

Verdict criterion_kernel() {
  Verdict v;
  std::string summary;
  for (const char* name : {"mo2", "boolean3"}) {
    const Family& f = family(name);
    const fs::path dir = g_work / (f.name + "_proofs");
    fs::remove_all(dir);
    const Run built = qprop({"prove", "all", "--lattice", f.file.string(), "--dir", dir.string()});
    v.require(built.code == 0, f.name + ": prove all exited " + std::to_string(built.code));
    ProofSet ps{&f, {}};
    if (fs::exists(dir))
      for (const auto& e : fs::directory_iterator(dir)) ps.files.push_back(e.path().string());
    std::sort(ps.files.begin(), ps.files.end());
    const std::size_t k = static_cast<std::size_t>(f.ref.size() - 1);
    v.require(ps.files.size() == k * k + k * k * k, f.name + ": wrong number of derivations");

    std::vector<std::string> args{"check", "--lattice", f.file.string()};
    args.insert(args.end(), ps.files.begin(), ps.files.end());
    const Run checked = qprop(args);
    v.require(checked.code == 0 && all_checks_pass(checked.report) &&
                  checked.report["checks"].size() == ps.files.size(),
              f.name + ": check rejects a derivation");

    const Run m = qprop({"--seed", "2026", "mutate", "--lattice", f.file.string(), "--count", "500"});
    v.require(m.code == 0 && check_passed(m.report, "mutants-rejected") && check_passed(m.report, "pool-valid"),
              f.name + ": a mutant was accepted");
    std::size_t rejected = 0, kinds = 0;
    if (m.report.is_object())
      for (const auto& [kind, c] : m.report["result"]["by_kind"].items()) {
        rejected += c["rejected"].get<std::size_t>();
        ++kinds;
      }
    v.require(kinds == 5 && rejected == 500, f.name + ": expected 500 rejections over five kinds");
    summary += (summary.empty() ? "" : "; ") + f.name + " " + std::to_string(ps.files.size()) +
               " derivations valid, " + std::to_string(rejected) + "/500 mutants rejected";
    g_proofs.push_back(std::move(ps));
  }
  v.summary = summary;
  return v;
}

Verdict criterion_crosscheck() {
  Verdict v;
  std::size_t total = 0;
  v.require(!g_proofs.empty(), "no derivations from the kernel criterion");
  for (const auto& ps : g_proofs) {
    const oracle::Lattice& L = ps.family->ref;
    std::vector<std::string> args{"crosscheck", "--lattice", ps.family->file.string()};
    args.insert(args.end(), ps.files.begin(), ps.files.end());
    const Run r = qprop(args);
    v.require(r.code == 0 && all_checks_pass(r.report) && r.report["checks"].size() == ps.files.size(),
              ps.family->name + ": crosscheck disagrees");
    if (!r.report.is_object()) continue;
    const json& rows = r.report["result"]["branches"];
    v.require(rows.size() == ps.files.size(), ps.family->name + ": missing branch rows");
    // Reference: apply the literal measurement maps to {a} in order.
    for (const auto& row : rows) {
      std::set<int> s{L.index(row["initial"])};
      for (const auto& b : row["measured"]) s = oracle::measure(L, L.index(b), s);
      const oracle::Names expected = L.names_of(s);
      const oracle::Names logic(row["logic"].begin(), row["logic"].end());
      const oracle::Names algebra(row["algebra"].begin(), row["algebra"].end());
      v.require(logic == expected && algebra == expected, row["file"].get<std::string>() + ": branches differ");
      ++total;
    }
  }
  v.summary = std::to_string(total) + " derivations agree with the reference maps";
  return v;
}

Verdict criterion_formats() {
  Verdict v;
  const Run r = qprop({"--seed", "2026", "formats", "roundtrip", "--count", "1000"});
  const json* rt = find_check(r.report, "round-trip");
  v.require(r.code == 0 && rt && (*rt)["pass"].get<bool>(), "round trip failed");
  v.require(rt && (*rt)["detail"].get<std::string>().rfind("1000 values", 0) == 0, "round trip did not cover 1000");

  const std::string lat = family("mo2").file.string();
  const fs::path triple = g_work / "triple.f", nested = g_work / "nested.f";
  std::ofstream(triple) << "In(a) * In(b) * In(a)\n";
  std::ofstream(nested) << "(In(a) * In(b)) * In(a)\n";
  const Run bad = qprop({"formats", "parse", "--kind", "formula", "--lattice", lat, triple.string()});
  v.require(bad.code == 2 && bad.err.find(":1:15: grammar error") != std::string::npos,
            "triple tensor not rejected with a grammar error");
  const Run good = qprop({"formats", "parse", "--kind", "formula", "--lattice", lat, nested.string()});
  v.require(good.code == 0 && good.out == "(In(a) * In(b)) * In(a)\n", "parenthesized tensor not accepted");
  v.summary = "1000 values round-trip; triple tensor rejected at 1:15";
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: qprop_acceptance WORK_DIR\n";
    return 2;
  }
  g_work = fs::absolute(argv[1]);
  fs::remove_all(g_work);
  fs::create_directories(g_work);
  g_workers = std::to_string(std::clamp(std::thread::hardware_concurrency(), 1U, 8U));

  const auto start = std::chrono::steady_clock::now();
  const Verdict setup = generate_families();
  if (!setup.passed()) {
    for (const auto& p : setup.problems) std::cout << "setup: " << p << "\n";
    return 1;
  }
  run_quantale();

  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"lattice laws", criterion_axioms},
      {"measurement pairing", criterion_pairing},
      {"Q# membership", criterion_membership},
      {"sup morphism", criterion_morphism},
      {"order counterexample", criterion_counterexample},
      {"measurement invariants", criterion_invariants},
      {"proof kernel", criterion_kernel},
      {"logic-algebra agreement", criterion_crosscheck},
      {"formats", criterion_formats},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const Verdict v = criteria[i].second();
    std::cout << (v.passed() ? "PASS" : "FAIL") << " criterion " << i + 1 << " (" << criteria[i].first << ")";
    if (v.passed()) {
      std::cout << ": " << v.summary << "\n";
    } else {
      ++failures;
      std::cout << ": " << v.problems.front();
      if (v.problems.size() > 1) std::cout << " (+" << v.problems.size() - 1 << " more)";
      std::cout << "\n";
    }
  }
  const auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream t;
  t.precision(1);
  t << std::fixed << secs;
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed in " << t.str() << "s\n";
  return failures == 0 ? 0 : 1;
}
