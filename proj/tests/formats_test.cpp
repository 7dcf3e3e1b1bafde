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

#include <memory>
#include <string>
#include <vector>

#include "qprop/builders.hpp"
#include "qprop/families.hpp"
#include "qprop/formats.hpp"
#include "qprop/kernel.hpp"

namespace {

using namespace qprop;
using namespace qprop::formats;

constexpr const char* kMo2 =
    "# four atoms over a square\n"
    "lattice mo2\n"
    "elements 0 a a' b b' 1\n"
    "leq 0 a\nleq 0 a'\nleq 0 b\nleq 0 b'\n"
    "leq a 1\nleq a' 1\nleq b 1\nleq b' 1\n"
    "ortho a a'\northo b b'\n"
    "end\n";

template <typename Fn>
ParseError parse_error(Fn fn) {
  try {
    fn();
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no parse error";
  return ParseError(ParseErrorKind::kSemantic, {}, "none");
}

class Formats : public ::testing::Test {
 protected:
  Formats() {
    th.add_map(PowersetMap::perfect_measurement(th.lattice, th.L().at("a"), "ma"));
  }
  Theory th{std::make_shared<const OrthoLattice>(mo_lattice(2)), {}};
  const OrthoLattice& L = th.L();
};

TEST_F(Formats, LatticeTextMatchesTheGeneratedFamily) {
  const OrthoLattice parsed = parse_lattice(kMo2);
  EXPECT_EQ(parsed, mo_lattice(2));
  EXPECT_TRUE(parsed.is_orthomodular());
  EXPECT_EQ(parse_lattice(serialize(parsed)), parsed);
  EXPECT_EQ(serialize(parse_lattice(serialize(parsed))), serialize(parsed));
}

TEST_F(Formats, LatticeErrorsCarrySpans) {
  ParseError e = parse_error([] { parse_lattice("lattice x\nelements 0 1\nleq 0 z\nend\n"); });
  EXPECT_EQ(e.kind(), ParseErrorKind::kUnknownName);
  EXPECT_EQ(e.span(), (SourceSpan{3, 7, 1}));

  e = parse_error([] { parse_lattice("lattice x\nelements 0 1\nend\nmore\n"); });
  EXPECT_EQ(e.kind(), ParseErrorKind::kGrammar);
  EXPECT_EQ(e.span().line, 4u);

  e = parse_error([] { parse_lattice("lattice x\nelements 0 0 1\nend\n"); });
  EXPECT_EQ(e.kind(), ParseErrorKind::kSemantic);

  e = parse_error([] { parse_lattice("lattice x\nelements 0 1\nleq 0 1 $\nend\n"); });
  EXPECT_EQ(e.kind(), ParseErrorKind::kLexical);
  EXPECT_EQ(e.span(), (SourceSpan{3, 9, 1}));
}

TEST_F(Formats, MapsParseBothForms) {
  const auto maps = parse_maps(
      "map m over mo2\nmeasure b\nend\n\n"
      "map f over mo2\non a -> {a, b}\non 1 -> {1}\nend\n",
      th.lattice);
  ASSERT_EQ(maps.size(), 2u);
  EXPECT_EQ(maps[0], PowersetMap::perfect_measurement(th.lattice, L.at("b")));
  EXPECT_EQ(maps[1].name(), "f");
  EXPECT_EQ(maps[1].image(L.at("a")), (ElemSet{L.at("a"), L.at("b")}));
  EXPECT_TRUE(maps[1].image(L.at("b")).empty());
  EXPECT_EQ(serialize(maps[0]), "map m over mo2\nmeasure b\nend\n");
  EXPECT_EQ(parse_map(serialize(maps[1]), th.lattice), maps[1]);
}

TEST_F(Formats, MapErrors) {
  EXPECT_EQ(parse_error([&] { parse_map("map m over mo3\nmeasure a\nend\n", th.lattice); }).kind(),
            ParseErrorKind::kSemantic);
  EXPECT_EQ(parse_error([&] { parse_map("map m over mo2\non 0 -> {a}\nend\n", th.lattice); }).kind(),
            ParseErrorKind::kSemantic);
  EXPECT_EQ(parse_error([&] { parse_map("map m over mo2\non a -> {c}\nend\n", th.lattice); }).kind(),
            ParseErrorKind::kUnknownName);
  EXPECT_EQ(parse_error([&] { parse_map("map m over mo2\non a -> {a}\n", th.lattice); }).kind(),
            ParseErrorKind::kGrammar);
}

TEST_F(Formats, FormulaPrecedence) {
  const Elem a = L.at("a"), b = L.at("b");
  // '+' binds tighter than '-o', '*' tighter than '+'; '-o' nests to the right.
  EXPECT_EQ(parse_formula("In(a) * In(b) + In(a) -o In(b) -o In(a)", th),
            Formula::lolli(Formula::plus(Formula::tensor(In(a), In(b)), In(a)), Formula::lolli(In(b), In(a))));
  EXPECT_EQ(parse_formula("In(a) + In(b) + In(a)", th),
            Formula::plus(Formula::plus(In(a), In(b)), In(a)));
  EXPECT_EQ(parse_formula("M(b, ortho(b))", th), M(b));
  EXPECT_EQ(parse_formula("In(ortho(a))", th), In(L.at("a'")));
  EXPECT_EQ(parse_formula("R(phi(b, a))", th), R(b));
}

TEST_F(Formats, MeasurementGoalSequent) {
  const Elem a = L.at("a"), b = L.at("b"), bp = L.at("b'");
  const Sequent s = parse_sequent("M(b) * (In(a) * R(a)) |- (In(b)*R(b)) + (In(ortho(b))*R(ortho(b)))", th);
  EXPECT_EQ(s, (Sequent{{Formula::tensor(M(b), Formula::tensor(In(a), R(a)))},
                        Formula::plus(Formula::tensor(In(b), R(b)), Formula::tensor(In(bp), R(bp)))}));
  EXPECT_EQ(serialize(s, L), "M(b) * (In(a) * R(a)) |- In(b) * R(b) + In(b') * R(b')");
  EXPECT_EQ(parse_formula("In(a) * R(a)", th), Formula::tensor(In(a), R(a)));
}

TEST_F(Formats, TripleTensorIsAGrammarError) {
  const ParseError e = parse_error([&] { parse_formula("In(a) * In(b) * In(a)", th); });
  EXPECT_EQ(e.kind(), ParseErrorKind::kGrammar);
  EXPECT_EQ(e.span(), (SourceSpan{1, 15, 1}));
  EXPECT_NE(std::string(e.what()).find("not associative"), std::string::npos);
  EXPECT_NO_THROW(parse_formula("(In(a) * In(b)) * In(a)", th));
}

TEST_F(Formats, QuantifiersAndVariables) {
  const Formula f = parse_formula("forall x {!<= a, !in K(ma)} . In(x) -o In(phi(b, x))", th);
  ASSERT_EQ(f.kind(), Formula::Kind::kForall);
  EXPECT_EQ(f.var(), "x");
  EXPECT_EQ(f.guard().size(), 2u);
  EXPECT_EQ(serialize(f, L), "forall x {!<= a, !in K(ma)} . In(x) -o In(phi(b, x))");
  EXPECT_EQ(parse_formula("In(?y)", th), Formula::in(Term::variable("y")));
  EXPECT_EQ(serialize(parse_formula("In(?y)", th), L), "In(?y)");
}

TEST_F(Formats, FormulaErrorKinds) {
  EXPECT_EQ(parse_error([&] { parse_formula("In(c)", th); }).kind(), ParseErrorKind::kUnknownName);
  EXPECT_EQ(parse_error([&] { parse_formula("IND(nope)", th); }).kind(), ParseErrorKind::kUnknownName);
  EXPECT_EQ(parse_error([&] { parse_formula("forall a . In(a)", th); }).kind(), ParseErrorKind::kSemantic);
  EXPECT_EQ(parse_error([&] { parse_formula("M(a, b)", th); }).kind(), ParseErrorKind::kSemantic);
  EXPECT_EQ(parse_error([&] { parse_formula("forall x {a} . In(x)", th); }).kind(), ParseErrorKind::kGuardSyntax);
  EXPECT_EQ(parse_error([&] { parse_formula("forall x {!in J(ma)} . In(x)", th); }).kind(),
            ParseErrorKind::kGuardSyntax);
  EXPECT_EQ(parse_error([&] { parse_formula("In(a) & In(b)", th); }).kind(), ParseErrorKind::kLexical);
  EXPECT_EQ(parse_error([&] { parse_formula("In(a) In(b)", th); }).kind(), ParseErrorKind::kGrammar);
  const ParseError e = parse_error([&] { parse_formula("In(a) ⊗ In(b)", th); });
  EXPECT_EQ(e.kind(), ParseErrorKind::kLexical);
  EXPECT_EQ(e.span(), (SourceSpan{1, 7, 3}));
}

TEST_F(Formats, Sequents) {
  const Elem a = L.at("a"), b = L.at("b");
  EXPECT_EQ(parse_sequent("In(a), R(b) |- In(a) * R(b)", th),
            (Sequent{{In(a), R(b)}, Formula::tensor(In(a), R(b))}));
  EXPECT_EQ(parse_sequent("|- In(1)", th), (Sequent{{}, In(L.at("1"))}));
  EXPECT_EQ(serialize(Sequent{{}, In(a)}, L), "|- In(a)");
}

TEST_F(Formats, UnicodeDisplay) {
  const Elem a = L.at("a"), b = L.at("b");
  const Formula f = Formula::lolli(Formula::tensor(M(b), Formula::tensor(In(a), R(a))),
                                   Formula::plus(R(b), R(L.at("b'"))));
  EXPECT_EQ(serialize(f, L, Style::kUnicode), "M(b, b⊥) ⊗ (In(a) ⊗ R(a)) ⊸ R(b) ⊕ R(b⊥)");
  EXPECT_EQ(serialize(f, L), "M(b) * (In(a) * R(a)) -o R(b) + R(b')");
  EXPECT_EQ(serialize(Sequent{{In(a)}, In(a)}, L, Style::kUnicode), "In(a) ⊢ In(a)");
  EXPECT_EQ(display_set(L, {a, L.at("a'")}), "{a, a⊥}");
  EXPECT_EQ(display_set(L, {a, L.at("a'")}, /*ascii=*/true), "{a, a'}");
  EXPECT_EQ(display_name("x''"), "x⊥⊥");
}

TEST_F(Formats, DerivationsRoundTripAndStayValid) {
  const Elem a = L.at("a"), b = L.at("b");
  for (const Derivation& d : {build::measurement(th, a, b), build::composed(th, a, b, a)}) {
    const std::string text = serialize(d, L);
    const Derivation back = parse_derivation(text, th);
    EXPECT_EQ(back, d);
    EXPECT_EQ(serialize(back, L), text);
    EXPECT_TRUE(check_derivation(th, back).valid());
  }
}

TEST_F(Formats, DerivationErrorsPointIntoQuotedSequents) {
  // Column of the bad name inside the quoted string on line 2.
  const std::string text = "(rule id\n  (seq \"In(a) |- In(zz)\"))";
  const ParseError e = parse_error([&] { parse_derivation(text, th); });
  EXPECT_EQ(e.kind(), ParseErrorKind::kUnknownName);
  EXPECT_EQ(e.span(), (SourceSpan{2, 21, 2}));
  EXPECT_EQ(parse_error([&] { parse_derivation("(rule spin (seq \"|- In(a)\"))", th); }).kind(),
            ParseErrorKind::kUnknownName);
  EXPECT_EQ(parse_error([&] { parse_derivation("(axiom Trans (bind y=a y=b) (seq \"|- In(a)\"))", th); }).kind(),
            ParseErrorKind::kSemantic);
  EXPECT_EQ(parse_error([&] { parse_derivation("(rule id (seq \"In(a) |- In(a)\")", th); }).kind(),
            ParseErrorKind::kGrammar);
}

TEST(FormatsCorpus, ThousandRandomValuesRoundTrip) {
  Rng rng(1);
  const RoundTripReport r = round_trip_corpus(1000, rng);
  EXPECT_EQ(r.checked, 1000u);
  for (std::size_t k = 0; k < 5; ++k) EXPECT_EQ(r.per_kind[k], 200u);
  for (const auto& f : r.failures) ADD_FAILURE() << f.kind << ": " << f.detail << "\n" << f.text;
  EXPECT_TRUE(r.passed());
}

}  // namespace
