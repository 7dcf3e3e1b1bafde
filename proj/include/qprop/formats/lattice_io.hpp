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

#ifndef QPROP_FORMATS_LATTICE_IO_HPP_
#define QPROP_FORMATS_LATTICE_IO_HPP_

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qprop/formats/source.hpp"
#include "qprop/lattice.hpp"

// Lattice files:
//
//   lattice mo2
//   elements 0 a a' b b' 1
//   leq 0 a
//   ...
//   ortho a a'
//   end
//
// Order pairs generate the order; nothing is implied except reflexivity and
// transitivity. `ortho 0 1` is implied when neither 0 nor 1 has a partner.

namespace qprop::formats {

inline OrthoLattice parse_lattice(std::string_view text) {
  TokenStream ts(tokenize(text, /*newlines=*/true));
  ts.skip_newlines();
  ts.expect_keyword("lattice");
  const Token name = ts.expect(Tok::kIdent, {"lattice name"});
  LatticeBuilder b(name.text);
  bool have_elements = false;

  auto end_of_line = [&] {
    if (!ts.at(Tok::kNewline) && !ts.at(Tok::kEnd))
      TokenStream::fail(ParseErrorKind::kGrammar, ts.peek(), "unexpected " + TokenStream::token_text(ts.peek()),
                        {"end of line"});
    ts.skip_newlines();
  };
  auto element = [&](const Token& t) {
    try {
      return b.at(t.text);
    } catch (const UnknownElement&) {
      TokenStream::fail(ParseErrorKind::kUnknownName, t, "unknown element '" + t.text + "'");
    }
  };
  auto pair = [&] {
    const Token x = ts.expect(Tok::kIdent, {"element name"});
    const Token y = ts.expect(Tok::kIdent, {"element name"});
    return std::pair{element(x), element(y)};
  };

  end_of_line();
  while (true) {
    if (ts.at(Tok::kEnd))
      TokenStream::fail(ParseErrorKind::kGrammar, ts.peek(), "missing 'end'", {"'end'"});
    const Token kw = ts.expect(Tok::kIdent, {"'elements'", "'leq'", "'ortho'", "'end'"});
    if (kw.text == "end") {
      ts.skip_newlines();
      if (!ts.at(Tok::kEnd))
        TokenStream::fail(ParseErrorKind::kGrammar, ts.peek(), "text after 'end'", {"end of input"});
      break;
    }
    if (kw.text == "elements") {
      if (!ts.at(Tok::kIdent))
        TokenStream::fail(ParseErrorKind::kGrammar, ts.peek(), "empty element list", {"element name"});
      while (ts.at(Tok::kIdent)) {
        const Token e = ts.next();
        try {
          b.add(e.text);
        } catch (const Error& err) {
          TokenStream::fail(ParseErrorKind::kSemantic, e, err.what());
        }
      }
      have_elements = true;
    } else if (kw.text == "leq" || kw.text == "ortho") {
      if (!have_elements)
        TokenStream::fail(ParseErrorKind::kSemantic, kw, "'" + kw.text + "' before any 'elements' line");
      auto [x, y] = pair();
      if (kw.text == "leq")
        b.leq(x, y);
      else
        b.ortho(x, y);
    } else {
      TokenStream::fail(ParseErrorKind::kGrammar, kw, "unknown directive '" + kw.text + "'",
                        {"'elements'", "'leq'", "'ortho'", "'end'"});
    }
    end_of_line();
  }
  try {
    return b.build();
  } catch (const Error& err) {
    TokenStream::fail(ParseErrorKind::kSemantic, name, err.what());
  }
}

/// Canonical text: cover pairs in index order, ortho pairs with the smaller
/// index first, the implied 0/1 pair omitted.
inline std::string serialize(const OrthoLattice& l) {
  std::string out = "lattice " + l.name() + "\nelements";
  for (const auto& n : l.names()) out += " " + n;
  out += "\n";
  const auto* anti = l.report().find(laws::kAntisymmetric);
  std::vector<std::pair<Elem, Elem>> order;
  if (anti && anti->status == LawStatus::kPass) {
    order = l.covers();
  } else {
    // Without antisymmetry covers lose information; emit every strict pair.
    for (Elem x : l.all())
      for (Elem y : l.up_set(x))
        if (!(x == y)) order.emplace_back(x, y);
  }
  for (auto [x, y] : order) out += "leq " + l.name_of(x) + " " + l.name_of(y) + "\n";
  for (Elem x : l.all()) {
    if (!l.has_ortho(x)) continue;
    const Elem y = l.ortho(x);
    if (y < x) continue;
    if ((x == l.bottom() && y == l.top()) || (x == l.top() && y == l.bottom())) continue;
    out += "ortho " + l.name_of(x) + " " + l.name_of(y) + "\n";
  }
  out += "end\n";
  return out;
}

}  // namespace qprop::formats

#endif  // QPROP_FORMATS_LATTICE_IO_HPP_
