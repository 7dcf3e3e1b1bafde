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

#ifndef QPROP_FORMATS_FORMULA_IO_HPP_
#define QPROP_FORMATS_FORMULA_IO_HPP_

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include "qprop/formats/source.hpp"
#include "qprop/formula.hpp"

// Formula syntax, loosest binding first:
//
//   formula  := plus [ '-o' formula ]                 right-associative
//   plus     := tensor { '+' tensor }                 left-associative
//   tensor   := unary [ '*' unary ]                   a second '*' is an error
//   unary    := '(' formula ')' | atom
//             | 'forall' x [ '{' constraint {',' constraint} '}' ] '.' formula
//   atom     := In(t) | R(t) | M(t) | M(t, ortho(t)) | IND(name)
//   term     := element | x | ?x | ortho(term) | phi(term, term)
//   constraint := '<=' term | '!<=' term | '!in' K(name)
//   sequent  := [ formula {',' formula} ] '|-' formula
//
// A plain identifier is a bound variable if one is in scope, otherwise an
// element name. Free variables are written ?x. Guard terms are read in the
// scope outside their quantifier.

namespace qprop::formats {

enum class Style { kAscii, kUnicode };

namespace detail {

class FormulaParser {
 public:
  FormulaParser(TokenStream& ts, const Theory& th) : ts_(ts), th_(th) {}

  Term term() {
    const OrthoLattice& L = th_.L();
    if (ts_.at(Tok::kFreeVar)) {
      const Token t = ts_.next();
      if (bound(t.text))
        TokenStream::fail(ParseErrorKind::kSemantic, t, "free variable ?" + t.text + " is shadowed by a binder");
      return Term::variable(t.text);
    }
    const Token t = ts_.expect(Tok::kIdent, {"element name", "variable", "'ortho'", "'phi'"});
    if (ts_.at(Tok::kLParen) && (t.text == "ortho" || t.text == "phi")) {
      ts_.next();
      Term a = term();
      if (t.text == "ortho") {
        ts_.expect(Tok::kRParen);
        return Term::ortho(L, a);
      }
      ts_.expect(Tok::kComma, {"','"});
      Term b = term();
      ts_.expect(Tok::kRParen);
      return Term::sasaki(L, a, b);
    }
    if (bound(t.text)) return Term::variable(t.text);
    if (auto e = L.find(t.text)) return Term::constant(*e);
    TokenStream::fail(ParseErrorKind::kUnknownName, t, "'" + t.text + "' is neither a bound variable nor an element");
  }

  Formula formula() {
    Formula left = plus();
    if (ts_.accept(Tok::kLolli)) return Formula::lolli(left, formula());
    return left;
  }

  Sequent sequent() {
    Sequent s{{}, Formula::in(Term::variable("_"))};
    if (!ts_.accept(Tok::kTurnstile)) {
      while (true) {
        s.context.push_back(formula());
        if (ts_.accept(Tok::kTurnstile)) break;
        ts_.expect(Tok::kComma, {"','", "'|-'"});
      }
    }
    s.conclusion = formula();
    return s;
  }

 private:
  bool bound(const std::string& v) const { return std::find(scope_.begin(), scope_.end(), v) != scope_.end(); }

  Formula plus() {
    Formula left = tensor();
    while (ts_.accept(Tok::kPlus)) left = Formula::plus(left, tensor());
    return left;
  }

  Formula tensor() {
    Formula left = unary();
    if (!ts_.accept(Tok::kStar)) return left;
    Formula right = unary();
    if (ts_.at(Tok::kStar))
      TokenStream::fail(ParseErrorKind::kGrammar, ts_.peek(),
                        "'*' is not associative; parenthesize one of the tensors",
                        {"'+'", "'-o'", "')'", "','", "'|-'", "end of input"});
    return Formula::tensor(left, right);
  }

  Formula unary() {
    if (ts_.accept(Tok::kLParen)) {
      Formula f = formula();
      ts_.expect(Tok::kRParen, {"')'"});
      return f;
    }
    static const std::vector<std::string> kStarts = {"'In'", "'R'", "'M'", "'IND'", "'forall'", "'('"};
    if (!ts_.at(Tok::kIdent))
      TokenStream::fail(ParseErrorKind::kGrammar, ts_.peek(), "unexpected " + TokenStream::token_text(ts_.peek()),
                        kStarts);
    const Token head = ts_.peek();
    if (head.text == "forall") return quantifier();
    if (head.text != "In" && head.text != "R" && head.text != "M" && head.text != "IND")
      TokenStream::fail(ParseErrorKind::kGrammar, head, "unexpected '" + head.text + "'", kStarts);
    ts_.next();
    ts_.expect(Tok::kLParen);
    if (head.text == "IND") {
      const Token name = ts_.expect(Tok::kIdent, {"map name"});
      if (!th_.has_map(name.text))
        TokenStream::fail(ParseErrorKind::kUnknownName, name, "unknown map '" + name.text + "'");
      ts_.expect(Tok::kRParen);
      return Formula::induce(name.text);
    }
    Term t = term();
    if (head.text == "M" && ts_.at(Tok::kComma)) {
      ts_.next();
      const Token at = ts_.peek();
      Term u = term();
      if (!(u == Term::ortho(th_.L(), t)))
        TokenStream::fail(ParseErrorKind::kSemantic, at, "second argument of M must be the ortho of the first");
    }
    ts_.expect(Tok::kRParen, head.text == "M" ? std::vector<std::string>{"','", "')'"} : std::vector<std::string>{});
    if (head.text == "In") return Formula::in(t);
    if (head.text == "R") return Formula::reach(t);
    return Formula::measure(t);
  }

  Formula quantifier() {
    ts_.next();  // forall
    const Token var = ts_.expect(Tok::kIdent, {"variable name"});
    if (th_.L().find(var.text))
      TokenStream::fail(ParseErrorKind::kSemantic, var, "bound variable '" + var.text + "' shadows an element name");
    Guard guard;
    if (ts_.accept(Tok::kLBrace)) {
      if (!ts_.accept(Tok::kRBrace)) {
        while (true) {
          guard.push_back(constraint());
          if (ts_.accept(Tok::kRBrace)) break;
          if (!ts_.at(Tok::kComma))
            TokenStream::fail(ParseErrorKind::kGuardSyntax, ts_.peek(),
                              "unexpected " + TokenStream::token_text(ts_.peek()) + " in guard", {"','", "'}'"});
          ts_.next();
        }
      }
    }
    ts_.expect(Tok::kDot, {"'.'", "'{'"});
    scope_.push_back(var.text);
    Formula body = formula();
    scope_.pop_back();
    return Formula::forall(var.text, std::move(guard), std::move(body));
  }

  Constraint constraint() {
    if (ts_.accept(Tok::kLeq)) return Constraint::leq(term());
    if (ts_.accept(Tok::kNotLeq)) return Constraint::not_leq(term());
    if (ts_.accept(Tok::kNotIn)) {
      if (!ts_.at_ident("K"))
        TokenStream::fail(ParseErrorKind::kGuardSyntax, ts_.peek(), "'!in' must be followed by K(map)", {"'K'"});
      ts_.next();
      if (!ts_.at(Tok::kLParen))
        TokenStream::fail(ParseErrorKind::kGuardSyntax, ts_.peek(), "'K' must be followed by '('", {"'('"});
      ts_.next();
      const Token name = ts_.expect(Tok::kIdent, {"map name"});
      if (!th_.has_map(name.text))
        TokenStream::fail(ParseErrorKind::kUnknownName, name, "unknown map '" + name.text + "'");
      ts_.expect(Tok::kRParen);
      return Constraint::not_in_kill(name.text);
    }
    TokenStream::fail(ParseErrorKind::kGuardSyntax, ts_.peek(),
                      "a guard constraint starts with '<=', '!<=' or '!in'", {"'<='", "'!<='", "'!in'"});
  }

  TokenStream& ts_;
  const Theory& th_;
  std::vector<std::string> scope_;
};

template <typename Fn>
auto parse_all(std::string_view text, const Theory& th, Origin origin, Fn fn) {
  TokenStream ts(tokenize(text, /*newlines=*/false, origin));
  FormulaParser p(ts, th);
  auto out = fn(p);
  if (!ts.at(Tok::kEnd))
    TokenStream::fail(ParseErrorKind::kGrammar, ts.peek(), "unexpected " + TokenStream::token_text(ts.peek()),
                      {"end of input"});
  return out;
}

}  // namespace detail

inline Formula parse_formula(std::string_view text, const Theory& th, Origin origin = {}) {
  return detail::parse_all(text, th, origin, [](detail::FormulaParser& p) { return p.formula(); });
}

inline Sequent parse_sequent(std::string_view text, const Theory& th, Origin origin = {}) {
  return detail::parse_all(text, th, origin, [](detail::FormulaParser& p) { return p.sequent(); });
}

inline Term parse_term(std::string_view text, const Theory& th, Origin origin = {}) {
  return detail::parse_all(text, th, origin, [](detail::FormulaParser& p) { return p.term(); });
}

namespace detail {

class Printer {
 public:
  Printer(const OrthoLattice& l, Style style) : l_(l), unicode_(style == Style::kUnicode) {}

  std::string term(const Term& t) const {
    switch (t.kind()) {
      case Term::Kind::kConst:
        return name(l_.name_of(t.element()));
      case Term::Kind::kVar:
        return std::find(scope_.begin(), scope_.end(), t.var()) != scope_.end() ? t.var() : "?" + t.var();
      case Term::Kind::kOrtho:
        if (unicode_ && t.arg(0).kind() == Term::Kind::kVar) return term(t.arg(0)) + "⊥";
        return "ortho(" + term(t.arg(0)) + ")";
      case Term::Kind::kSasaki:
        return (unicode_ ? "φ(" : "phi(") + term(t.arg(0)) + ", " + term(t.arg(1)) + ")";
    }
    return "?";
  }

  std::string formula(const Formula& f) {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::kIn:
        return "In(" + term(f.term()) + ")";
      case K::kReach:
        return "R(" + term(f.term()) + ")";
      case K::kMeasure:
        if (unicode_) return "M(" + term(f.term()) + ", " + term(Term::ortho(l_, f.term())) + ")";
        return "M(" + term(f.term()) + ")";
      case K::kInduce:
        return "IND(" + f.map_name() + ")";
      case K::kTensor:
        return operand(f.left(), {K::kTensor, K::kPlus, K::kLolli}) + (unicode_ ? " ⊗ " : " * ") +
               operand(f.right(), {K::kTensor, K::kPlus, K::kLolli});
      case K::kPlus:
        return operand(f.left(), {K::kLolli}) + (unicode_ ? " ⊕ " : " + ") + operand(f.right(), {K::kPlus, K::kLolli});
      case K::kLolli:
        return operand(f.left(), {K::kLolli}) + (unicode_ ? " ⊸ " : " -o ") + operand(f.right(), {});
      case K::kForall: {
        if (l_.find(f.var())) throw Error("bound variable '" + f.var() + "' shadows an element name");
        std::string s = (unicode_ ? "∀" : "forall ") + f.var();
        if (!f.guard().empty()) {
          s += unicode_ ? "{" : " {";
          for (std::size_t i = 0; i < f.guard().size(); ++i) s += (i ? ", " : "") + constraint(f.guard()[i]);
          s += "}";
        }
        scope_.push_back(f.var());
        s += (unicode_ ? ". " : " . ") + formula(f.body());
        scope_.pop_back();
        return s;
      }
    }
    return "?";
  }

  std::string sequent(const Sequent& s) {
    std::string out;
    for (std::size_t i = 0; i < s.context.size(); ++i) out += (i ? ", " : "") + formula(s.context[i]);
    out += out.empty() ? "" : " ";
    return out + (unicode_ ? "⊢ " : "|- ") + formula(s.conclusion);
  }

 private:
  std::string name(const std::string& n) const { return unicode_ ? display_name(n) : n; }

  // Quantifiers are always parenthesized as operands.
  std::string operand(const Formula& f, std::initializer_list<Formula::Kind> wrap) {
    bool paren = f.kind() == Formula::Kind::kForall;
    for (auto k : wrap) paren = paren || f.kind() == k;
    std::string s = formula(f);
    return paren ? "(" + s + ")" : s;
  }

  std::string constraint(const Constraint& c) const {
    switch (c.relation) {
      case Constraint::Relation::kLeq:
        return (unicode_ ? "≤ " : "<= ") + term(c.bound);
      case Constraint::Relation::kNotLeq:
        return (unicode_ ? "≰ " : "!<= ") + term(c.bound);
      case Constraint::Relation::kNotInKill:
        return (unicode_ ? "∉ K(" : "!in K(") + c.map + ")";
    }
    return "?";
  }

  const OrthoLattice& l_;
  bool unicode_;
  std::vector<std::string> scope_;
};

}  // namespace detail

inline std::string serialize(const Term& t, const OrthoLattice& l, Style style = Style::kAscii) {
  return detail::Printer(l, style).term(t);
}

inline std::string serialize(const Formula& f, const OrthoLattice& l, Style style = Style::kAscii) {
  return detail::Printer(l, style).formula(f);
}

inline std::string serialize(const Sequent& s, const OrthoLattice& l, Style style = Style::kAscii) {
  return detail::Printer(l, style).sequent(s);
}

}  // namespace qprop::formats

#endif  // QPROP_FORMATS_FORMULA_IO_HPP_
