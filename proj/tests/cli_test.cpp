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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() /
          ("qprop_cli_" + std::to_string(std::random_device{}()) + "_" +
           ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  std::string path(const std::string& name) const { return (dir / name).string(); }

  Outcome run(std::vector<std::string> args) const {
    std::ostringstream out, err;
    const int code = qprop::cli::run(args, out, err);
    return {code, out.str(), err.str()};
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  }

  nlohmann::json report(std::vector<std::string> args, int expected_code) const {
    const std::string json = path("report.json");
    args.insert(args.begin(), {"--json", json});
    const Outcome r = run(args);
    EXPECT_EQ(r.code, expected_code) << r.out << r.err;
    return nlohmann::json::parse(slurp(json));
  }

  std::string mo2() const {
    const std::string p = path("mo2.lat");
    if (!fs::exists(p)) {
      EXPECT_EQ(run({"lattice", "gen", "--family", "mo", "--n", "2", "-o", p}).code, 0);
    }
    return p;
  }

  fs::path dir;
};

TEST_F(Cli, GenerateThenVerify) {
  const Outcome r = run({"lattice", "verify", mo2()});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
  const auto j = report({"lattice", "verify", mo2()}, 0);
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_EQ(j["command"], "lattice verify");
  EXPECT_GE(j["checks"].size(), 11u);
}

TEST_F(Cli, HexagonFailsOnlyOrthomodularity) {
  const std::string hex = path("hex.lat");
  ASSERT_EQ(run({"lattice", "gen", "--family", "hexagon", "-o", hex}).code, 0);
  const auto j = report({"lattice", "verify", hex}, 1);
  std::vector<std::string> failed;
  for (const auto& c : j["checks"])
    if (!c["pass"].get<bool>()) {
      failed.push_back(c["name"]);
      EXPECT_EQ(c["witness"], nlohmann::json::array({"a", "b"}));
    }
  EXPECT_EQ(failed, (std::vector<std::string>{"orthomodular"}));
}

TEST_F(Cli, PropagatePrintsBothBranches) {
  const Outcome r = run({"propagate", "--lattice", mo2(), "--measure", "a", "--set", "{b}"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("{a, a⊥}"), std::string::npos) << r.out;
  const Outcome ascii = run({"--ascii", "propagate", "--lattice", mo2(), "--measure", "a", "--set", "{b}"});
  EXPECT_NE(ascii.out.find("{a, a'}"), std::string::npos) << ascii.out;
}

TEST_F(Cli, ProveCheckCrosscheckPipeline) {
  const std::string drv = path("p.drv");
  ASSERT_EQ(run({"prove", "measurement", "--lattice", mo2(), "--actual", "a", "--measure", "b", "-o", drv}).code, 0);
  const Outcome c = run({"check", "--lattice", mo2(), drv});
  EXPECT_EQ(c.code, 0) << c.out << c.err;
  const Outcome x = run({"crosscheck", "--lattice", mo2(), drv});
  EXPECT_EQ(x.code, 0) << x.out << x.err;
}

TEST_F(Cli, TamperedDerivationIsInvalid) {
  const std::string drv = path("p.drv");
  ASSERT_EQ(run({"prove", "measurement", "--lattice", mo2(), "--actual", "a", "--measure", "b", "-o", drv}).code, 0);
  std::string text = slurp(drv);
  const auto at = text.rfind("R(b')");
  ASSERT_NE(at, std::string::npos);
  text.replace(at, 5, "R(a')");
  std::ofstream(drv, std::ios::binary) << text;
  const Outcome c = run({"check", "--lattice", mo2(), drv});
  EXPECT_EQ(c.code, 1) << c.out;
  EXPECT_NE(c.out.find("invalid"), std::string::npos);
}

TEST_F(Cli, CounterexampleAndPairing) {
  const auto j = report({"counterexample", "order", "--lattice", mo2()}, 0);
  EXPECT_TRUE(j["passed"].get<bool>());
  const std::string b2 = path("b2.lat");
  ASSERT_EQ(run({"lattice", "gen", "--family", "boolean", "--n", "2", "-o", b2}).code, 0);
  const Outcome none = run({"counterexample", "order", "--lattice", b2});
  EXPECT_EQ(none.code, 0);
  EXPECT_NE(none.out.find("no counterexample"), std::string::npos);
  EXPECT_EQ(run({"prop1", "--lattice", mo2()}).code, 0);
}

TEST_F(Cli, AxiomInstantiateGuardAndUsage) {
  const Outcome ok = run({"axiom", "instantiate", "--lattice", mo2(), "--schema", "Trans", "--bind", "y=a", "--bind",
                          "z=b"});
  EXPECT_EQ(ok.code, 0) << ok.err;
  const Outcome guard = run({"axiom", "instantiate", "--lattice", mo2(), "--schema", "Trans", "--bind", "y=a",
                             "--bind", "z=a'"});
  EXPECT_EQ(guard.code, 1);
  const Outcome unbound = run({"axiom", "instantiate", "--lattice", mo2(), "--schema", "Trans", "--bind", "y=a"});
  EXPECT_EQ(unbound.code, 2);
}

TEST_F(Cli, UsageErrorsNameTheFlag) {
  const Outcome r = run({"lattice", "verify", "--frobnicate", mo2()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE((r.out + r.err).find("--frobnicate"), std::string::npos);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"--workers", "0", "prop1", "--lattice", mo2()}).code, 2);
  EXPECT_EQ(run({"lattice", "verify", path("missing.lat")}).code, 2);
}

TEST_F(Cli, ParseErrorsExitTwoWithLocation) {
  const std::string f = path("t.f");
  std::ofstream(f) << "In(a) * In(b) * In(a)\n";
  const Outcome r = run({"formats", "parse", "--kind", "formula", "--lattice", mo2(), f});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find(":1:15: grammar error"), std::string::npos) << r.err;
}

TEST_F(Cli, ReportsAreByteIdentical) {
  const std::vector<std::vector<std::string>> commands = {
      {"quantale", "verify", "--lattice", mo2(), "--samples", "40", "--pairs", "20"},
      {"propagate", "--lattice", mo2(), "--invariants"},
      {"mutate", "--lattice", mo2(), "--count", "50"},
  };
  for (const auto& cmd : commands) {
    std::vector<std::string> runs;
    for (const char* workers : {"1", "1", "4"}) {
      std::vector<std::string> args{"--seed", "17", "--workers", workers, "--json", path("r.json")};
      args.insert(args.end(), cmd.begin(), cmd.end());
      EXPECT_EQ(run(args).code, 0) << cmd[0];
      runs.push_back(slurp(path("r.json")));
    }
    EXPECT_FALSE(runs[0].empty());
    EXPECT_EQ(runs[0], runs[1]) << cmd[0];
    EXPECT_EQ(runs[0], runs[2]) << cmd[0];
  }
}

TEST_F(Cli, SameSeedSameReport) {
  auto sample = [&](const char* seed) {
    EXPECT_EQ(run({"--seed", seed, "--json", path("s.json"), "mutate", "--lattice", mo2(), "--count", "20"}).code, 0);
    return slurp(path("s.json"));
  };
  EXPECT_EQ(sample("3"), sample("3"));
}

TEST_F(Cli, SampleFiles) {
  const std::string s = QPROP_SAMPLES_DIR;
  const std::string lat = s + "/mo2.lat", maps = s + "/mo2.maps";
  const std::vector<std::string> drvs{s + "/measure_b_on_a.drv", s + "/alpha_on_a.drv"};
  for (const char* cmd : {"check", "crosscheck"}) {
    std::vector<std::string> args{cmd, "--lattice", lat, "--maps", maps};
    args.insert(args.end(), drvs.begin(), drvs.end());
    const auto j = report(args, 0);
    EXPECT_EQ(j["checks"].size(), 2u) << cmd;
  }
  // alpha sends {a, a'} and {b, b'}, both with join 1, to joins 1 and b.
  const auto q = report({"quantale", "verify", "--lattice", lat, "--maps", maps, "--samples", "10", "--pairs", "10"}, 1);
  for (const auto& c : q["checks"]) EXPECT_EQ(c["pass"].get<bool>(), c["name"] != "member:alpha") << c["name"];
  EXPECT_EQ(run({"lattice", "verify", s + "/hexagon.lat"}).code, 1);
}

}  // namespace
