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

#ifndef QPROP_FORMATS_MAP_IO_HPP_
#define QPROP_FORMATS_MAP_IO_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "qprop/formats/source.hpp"
#include "qprop/lattice.hpp"
#include "qprop/powerset_map.hpp"

// Map files hold one or more blocks:
//
//   map f over mo2          map m over mo2
//   on a -> {a}             measure a
//   on b -> {a, a'}         end
//   end
//
// Elements without an `on` line have the empty image.

namespace qprop::formats {

namespace detail {

inline Elem element_token(const OrthoLattice& l, const Token& t) {
  auto e = l.find(t.text);
  if (!e) TokenStream::fail(ParseErrorKind::kUnknownName, t, "unknown element '" + t.text + "'");
  return *e;
}

// `{a, b, ...}` of nonzero elements.
inline ActualitySet parse_element_set(TokenStream& ts, const OrthoLattice& l) {
  ts.expect(Tok::kLBrace);
  ActualitySet out;
  if (ts.accept(Tok::kRBrace)) return out;
  while (true) {
    const Token t = ts.expect(Tok::kIdent, {"element name"});
    const Elem e = element_token(l, t);
    if (e == l.bottom()) TokenStream::fail(ParseErrorKind::kSemantic, t, "actuality sets exclude 0");
    if (out.contains(e)) TokenStream::fail(ParseErrorKind::kSemantic, t, "element '" + t.text + "' listed twice");
    out.insert(e);
    if (ts.accept(Tok::kRBrace)) return out;
    ts.expect(Tok::kComma, {"','", "'}'"});
  }
}

inline PowersetMap parse_map_block(TokenStream& ts, const LatticePtr& l) {
  const OrthoLattice& L = *l;
  auto end_of_line = [&] {
    if (!ts.at(Tok::kNewline) && !ts.at(Tok::kEnd))
      TokenStream::fail(ParseErrorKind::kGrammar, ts.peek(), "unexpected " + TokenStream::token_text(ts.peek()),
                        {"end of line"});
    ts.skip_newlines();
  };
  ts.expect_keyword("map");
  const std::string name = ts.expect(Tok::kIdent, {"map name"}).text;
  ts.expect_keyword("over");
  const Token over = ts.expect(Tok::kIdent, {"lattice name"});
  if (over.text != L.name())
    TokenStream::fail(ParseErrorKind::kSemantic, over,
                      "map is declared over '" + over.text + "' but the lattice is '" + L.name() + "'");
  end_of_line();

  if (ts.at_ident("measure")) {
    ts.next();
    const Elem a = element_token(L, ts.expect(Tok::kIdent, {"element name"}));
    end_of_line();
    ts.expect_keyword("end");
    return PowersetMap::perfect_measurement(l, a, name);
  }

  std::vector<ActualitySet> action(L.size());
  std::vector<bool> seen(L.size(), false);
  while (!ts.at_ident("end")) {
    if (ts.at(Tok::kEnd)) TokenStream::fail(ParseErrorKind::kGrammar, ts.peek(), "missing 'end'", {"'end'"});
    if (!ts.at_ident("on"))
      TokenStream::fail(ParseErrorKind::kGrammar, ts.peek(), "unexpected " + TokenStream::token_text(ts.peek()),
                        {"'on'", "'measure'", "'end'"});
    ts.next();
    const Token t = ts.expect(Tok::kIdent, {"element name"});
    const Elem x = element_token(L, t);
    if (x == L.bottom()) TokenStream::fail(ParseErrorKind::kSemantic, t, "maps act on nonzero elements only");
    if (seen[x.index]) TokenStream::fail(ParseErrorKind::kSemantic, t, "second 'on' line for '" + t.text + "'");
    seen[x.index] = true;
    ts.expect(Tok::kArrow);
    action[x.index] = parse_element_set(ts, L);
    end_of_line();
  }
  ts.next();
  return PowersetMap::from_action(l, std::move(action), name);
}

}  // namespace detail

/// All map blocks in `text`, in file order.
inline std::vector<PowersetMap> parse_maps(std::string_view text, const LatticePtr& l) {
  TokenStream ts(tokenize(text, /*newlines=*/true));
  std::vector<PowersetMap> out;
  ts.skip_newlines();
  while (!ts.at(Tok::kEnd)) {
    out.push_back(detail::parse_map_block(ts, l));
    if (!ts.at(Tok::kNewline) && !ts.at(Tok::kEnd))
      TokenStream::fail(ParseErrorKind::kGrammar, ts.peek(), "text after 'end'", {"end of line"});
    ts.skip_newlines();
  }
  return out;
}

/// Exactly one map block.
inline PowersetMap parse_map(std::string_view text, const LatticePtr& l) {
  TokenStream ts(tokenize(text, /*newlines=*/true));
  ts.skip_newlines();
  PowersetMap m = detail::parse_map_block(ts, l);
  ts.skip_newlines();
  if (!ts.at(Tok::kEnd)) TokenStream::fail(ParseErrorKind::kGrammar, ts.peek(), "text after 'end'", {"end of input"});
  return m;
}

inline std::string serialize_set(const OrthoLattice& l, ActualitySet s) {
  std::string out = "{";
  bool first = true;
  for (Elem e : s) {
    out += (first ? "" : ", ") + l.name_of(e);
    first = false;
  }
  return out + "}";
}

/// Unicode rendering for humans, e.g. {a, a⊥}.
inline std::string display_set(const OrthoLattice& l, ActualitySet s, bool ascii = false) {
  if (ascii) return serialize_set(l, s);
  std::string out = "{";
  bool first = true;
  for (Elem e : s) {
    out += (first ? "" : ", ") + display_name(l.name_of(e));
    first = false;
  }
  return out + "}";
}

inline std::string serialize(const PowersetMap& m) {
  const OrthoLattice& L = *m.lattice();
  std::string out = "map " + m.name() + " over " + L.name() + "\n";
  if (m.kind() == MapKind::kPerfectMeasurement && m.measured()) {
    out += "measure " + L.name_of(*m.measured()) + "\n";
  } else {
    for (Elem x : L.nonzero()) out += "on " + L.name_of(x) + " -> " + serialize_set(L, m.action()[x.index]) + "\n";
  }
  return out + "end\n";
}

}  // namespace qprop::formats

#endif  // QPROP_FORMATS_MAP_IO_HPP_
