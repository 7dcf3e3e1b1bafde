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

#ifndef QPROP_FORMATS_DERIVATION_IO_HPP_
#define QPROP_FORMATS_DERIVATION_IO_HPP_

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qprop/axioms.hpp"
#include "qprop/derivation.hpp"
#include "qprop/formats/formula_io.hpp"
#include "qprop/formats/map_io.hpp"
#include "qprop/formats/source.hpp"

// Derivation files are nested records, one node per line when written:
//
//   (rule cut (seq "M(b) * (In(a) * R(a)) |- In(a) * R(a)")
//     (axiom Adjust2 (bind x=b y=a) (seq "|- M(b) * (In(a) * R(a)) -o In(a) * R(a)"))
//     (rule lolliL (seq "...")
//       (rule id (seq "..."))
//       (rule id (seq "..."))))
//
// forallL nodes carry (witness "<term>") before the sequent. Binding values
// are element names, element sets {a, b} (for X) or map names (for alpha).

namespace qprop::formats {

namespace detail {

inline Origin inside(const Token& string_token) {
  return {string_token.span.line, string_token.span.column + 1};
}

inline Sequent parse_seq_record(TokenStream& ts, const Theory& th) {
  ts.expect(Tok::kLParen, {"'(seq'"});
  ts.expect_keyword("seq");
  const Token s = ts.expect(Tok::kString, {"quoted sequent"});
  ts.expect(Tok::kRParen);
  return parse_sequent(s.text, th, inside(s));
}

inline BindingValue parse_binding_value(TokenStream& ts, const Theory& th, const std::string& key) {
  const OrthoLattice& L = th.L();
  if (ts.at(Tok::kLBrace)) {
    ts.next();
    ElemSet out;
    if (ts.accept(Tok::kRBrace)) return out;
    while (true) {
      out.insert(element_token(L, ts.expect(Tok::kIdent, {"element name"})));
      if (ts.accept(Tok::kRBrace)) return out;
      ts.expect(Tok::kComma, {"','", "'}'"});
    }
  }
  const Token t = ts.expect(Tok::kIdent, {"element name", "'{'", "map name"});
  if (key == "alpha") {
    if (!th.has_map(t.text)) TokenStream::fail(ParseErrorKind::kUnknownName, t, "unknown map '" + t.text + "'");
    return t.text;
  }
  return element_token(L, t);
}

inline Derivation parse_node(TokenStream& ts, const Theory& th) {
  ts.expect(Tok::kLParen, {"'('"});
  const Token kind = ts.expect(Tok::kIdent, {"'rule'", "'axiom'"});
  if (kind.text == "axiom") {
    const Token name = ts.expect(Tok::kIdent, {"schema name"});
    auto schema = parse_schema(name.text);
    if (!schema) TokenStream::fail(ParseErrorKind::kUnknownName, name, "unknown axiom schema '" + name.text + "'");
    ts.expect(Tok::kLParen, {"'(bind'"});
    ts.expect_keyword("bind");
    Bindings b;
    while (ts.at(Tok::kIdent)) {
      const Token key = ts.next();
      ts.expect(Tok::kEquals);
      if (b.count(key.text)) TokenStream::fail(ParseErrorKind::kSemantic, key, "'" + key.text + "' bound twice");
      b.emplace(key.text, parse_binding_value(ts, th, key.text));
    }
    ts.expect(Tok::kRParen, {"binding", "')'"});
    Sequent s = parse_seq_record(ts, th);
    ts.expect(Tok::kRParen, {"')'"});
    return Derivation::by_axiom(*schema, std::move(b), std::move(s));
  }
  if (kind.text != "rule")
    TokenStream::fail(ParseErrorKind::kGrammar, kind, "unexpected '" + kind.text + "'", {"'rule'", "'axiom'"});

  const Token name = ts.expect(Tok::kIdent, {"rule name"});
  auto rule = parse_rule(name.text);
  if (!rule) TokenStream::fail(ParseErrorKind::kUnknownName, name, "unknown rule '" + name.text + "'");
  std::optional<Term> witness;
  if (ts.at(Tok::kLParen) && ts.peek(1).kind == Tok::kIdent && ts.peek(1).text == "witness") {
    ts.next();
    ts.next();
    const Token w = ts.expect(Tok::kString, {"quoted term"});
    ts.expect(Tok::kRParen);
    witness = parse_term(w.text, th, inside(w));
  }
  Sequent s = parse_seq_record(ts, th);
  std::vector<Derivation> premises;
  while (ts.at(Tok::kLParen)) premises.push_back(parse_node(ts, th));
  ts.expect(Tok::kRParen, {"'('", "')'"});
  return Derivation::by_rule(*rule, std::move(s), std::move(premises), std::move(witness));
}

inline std::string binding_text(const OrthoLattice& l, const BindingValue& v) {
  if (const auto* e = std::get_if<Elem>(&v)) return l.name_of(*e);
  if (const auto* s = std::get_if<ElemSet>(&v)) return serialize_set(l, *s);
  return std::get<std::string>(v);
}

inline void write_node(const Derivation& d, const OrthoLattice& l, std::size_t depth, std::string& out) {
  out += std::string(2 * depth, ' ');
  if (d.is_axiom()) {
    out += "(axiom " + std::string(schema_name(d.schema())) + " (bind";
    for (const auto& [k, v] : d.bindings()) out += " " + k + "=" + binding_text(l, v);
    out += ") (seq \"" + serialize(d.conclusion(), l) + "\"))";
    return;
  }
  out += "(rule " + std::string(rule_name(d.rule()));
  if (d.witness()) out += " (witness \"" + serialize(*d.witness(), l) + "\")";
  out += " (seq \"" + serialize(d.conclusion(), l) + "\")";
  for (const auto& p : d.premises()) {
    out += "\n";
    write_node(p, l, depth + 1, out);
  }
  out += ")";
}

}  // namespace detail

inline Derivation parse_derivation(std::string_view text, const Theory& th) {
  TokenStream ts(tokenize(text, /*newlines=*/false));
  Derivation d = detail::parse_node(ts, th);
  if (!ts.at(Tok::kEnd))
    TokenStream::fail(ParseErrorKind::kGrammar, ts.peek(), "unexpected " + TokenStream::token_text(ts.peek()),
                      {"end of input"});
  return d;
}

inline std::string serialize(const Derivation& d, const OrthoLattice& l) {
  std::string out;
  detail::write_node(d, l, 0, out);
  return out + "\n";
}

}  // namespace qprop::formats

#endif  // QPROP_FORMATS_DERIVATION_IO_HPP_
