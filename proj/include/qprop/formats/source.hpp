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

#ifndef QPROP_FORMATS_SOURCE_HPP_
#define QPROP_FORMATS_SOURCE_HPP_

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qprop/error.hpp"

namespace qprop::formats {

/// 1-based position of a token in its input; columns count bytes.
struct SourceSpan {
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t length = 1;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

enum class ParseErrorKind { kLexical, kGrammar, kUnknownName, kGuardSyntax, kSemantic };

inline const char* to_string(ParseErrorKind k) {
  switch (k) {
    case ParseErrorKind::kLexical:
      return "lexical error";
    case ParseErrorKind::kGrammar:
      return "grammar error";
    case ParseErrorKind::kUnknownName:
      return "unknown name";
    case ParseErrorKind::kGuardSyntax:
      return "guard syntax error";
    case ParseErrorKind::kSemantic:
      return "semantic error";
  }
  return "error";
}

class ParseError : public Error {
 public:
  ParseError(ParseErrorKind kind, SourceSpan span, std::string message, std::vector<std::string> expected = {})
      : Error(render(kind, span, message, expected)),
        kind_(kind),
        span_(span),
        message_(std::move(message)),
        expected_(std::move(expected)) {}

  ParseErrorKind kind() const { return kind_; }
  const SourceSpan& span() const { return span_; }
  const std::string& message() const { return message_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  static std::string render(ParseErrorKind kind, SourceSpan span, const std::string& message,
                            const std::vector<std::string>& expected) {
    std::string s = std::to_string(span.line) + ":" + std::to_string(span.column) + ": " + to_string(kind) + ": " + message;
    if (!expected.empty()) {
      s += " (expected ";
      for (std::size_t i = 0; i < expected.size(); ++i) s += (i ? ", " : "") + expected[i];
      s += ")";
    }
    return s;
  }

  ParseErrorKind kind_;
  SourceSpan span_;
  std::string message_;
  std::vector<std::string> expected_;
};

enum class Tok {
  kIdent,      // [A-Za-z0-9_][A-Za-z0-9_']*, plus -X inside schema names
  kFreeVar,    // ?ident
  kString,     // "..." on one line, no escapes
  kLParen,
  kRParen,
  kLBrace,
  kRBrace,
  kComma,
  kDot,
  kStar,
  kPlus,
  kLolli,      // -o
  kTurnstile,  // |-
  kLeq,        // <=
  kNotLeq,     // !<=
  kNotIn,      // !in
  kEquals,
  kArrow,      // ->
  kNewline,
  kEnd,
};

inline const char* describe(Tok t) {
  switch (t) {
    case Tok::kIdent:
      return "identifier";
    case Tok::kFreeVar:
      return "free variable";
    case Tok::kString:
      return "string";
    case Tok::kLParen:
      return "'('";
    case Tok::kRParen:
      return "')'";
    case Tok::kLBrace:
      return "'{'";
    case Tok::kRBrace:
      return "'}'";
    case Tok::kComma:
      return "','";
    case Tok::kDot:
      return "'.'";
    case Tok::kStar:
      return "'*'";
    case Tok::kPlus:
      return "'+'";
    case Tok::kLolli:
      return "'-o'";
    case Tok::kTurnstile:
      return "'|-'";
    case Tok::kLeq:
      return "'<='";
    case Tok::kNotLeq:
      return "'!<='";
    case Tok::kNotIn:
      return "'!in'";
    case Tok::kEquals:
      return "'='";
    case Tok::kArrow:
      return "'->'";
    case Tok::kNewline:
      return "end of line";
    case Tok::kEnd:
      return "end of input";
  }
  return "token";
}

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;  // identifier or string contents
  SourceSpan span;
};

/// Where a piece of text starts inside a larger file. Used when a formula
/// is parsed out of a quoted string so errors point into the file.
struct Origin {
  std::size_t line = 1;
  std::size_t column = 1;
};

inline bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

/// Tokenizes the whole input. `#` starts a comment running to the end of
/// the line. Newline tokens are produced only when `newlines` is set.
inline std::vector<Token> tokenize(std::string_view text, bool newlines, Origin origin = {}) {
  std::vector<Token> out;
  std::size_t line = origin.line, col = origin.column;
  std::size_t i = 0;
  auto span = [&](std::size_t len) { return SourceSpan{line, col, len == 0 ? 1 : len}; };
  auto advance = [&](std::size_t n) {
    i += n;
    col += n;
  };
  auto push = [&](Tok k, std::size_t len, std::string s = {}) {
    out.push_back({k, std::move(s), span(len)});
    advance(len);
  };
  auto lexical = [&](std::size_t len, const std::string& msg) {
    throw ParseError(ParseErrorKind::kLexical, span(len), msg);
  };

  while (i < text.size()) {
    const char c = text[i];
    const char n = i + 1 < text.size() ? text[i + 1] : '\0';
    if (c == '\n') {
      if (newlines) out.push_back({Tok::kNewline, {}, span(1)});
      ++i;
      ++line;
      col = 1;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (is_ident_char(c)) {
      std::size_t j = i;
      // A dash followed by an uppercase letter continues the identifier
      // (schema names such as OQL-Meet); '-o' never qualifies.
      while (j < text.size() &&
             (is_ident_char(text[j]) || text[j] == '\'' ||
              (text[j] == '-' && j + 1 < text.size() && std::isupper(static_cast<unsigned char>(text[j + 1])))))
        ++j;
      push(Tok::kIdent, j - i, std::string(text.substr(i, j - i)));
      continue;
    }
    switch (c) {
      case '?': {
        std::size_t j = i + 1;
        while (j < text.size() && is_ident_char(text[j])) ++j;
        if (j == i + 1) lexical(1, "'?' must be followed by a variable name");
        while (j < text.size() && (is_ident_char(text[j]) || text[j] == '\'')) ++j;
        push(Tok::kFreeVar, j - i, std::string(text.substr(i + 1, j - i - 1)));
        continue;
      }
      case '"': {
        std::size_t j = i + 1;
        while (j < text.size() && text[j] != '"' && text[j] != '\n') ++j;
        if (j >= text.size() || text[j] != '"') lexical(j - i, "unterminated string");
        push(Tok::kString, j + 1 - i, std::string(text.substr(i + 1, j - i - 1)));
        continue;
      }
      case '(':
        push(Tok::kLParen, 1);
        continue;
      case ')':
        push(Tok::kRParen, 1);
        continue;
      case '{':
        push(Tok::kLBrace, 1);
        continue;
      case '}':
        push(Tok::kRBrace, 1);
        continue;
      case ',':
        push(Tok::kComma, 1);
        continue;
      case '.':
        push(Tok::kDot, 1);
        continue;
      case '*':
        push(Tok::kStar, 1);
        continue;
      case '+':
        push(Tok::kPlus, 1);
        continue;
      case '=':
        push(Tok::kEquals, 1);
        continue;
      case '-':
        if (n == 'o') {
          push(Tok::kLolli, 2);
          continue;
        }
        if (n == '>') {
          push(Tok::kArrow, 2);
          continue;
        }
        lexical(1, "'-' must start '-o' or '->'");
        break;
      case '|':
        if (n == '-') {
          push(Tok::kTurnstile, 2);
          continue;
        }
        lexical(1, "'|' must start '|-'");
        break;
      case '<':
        if (n == '=') {
          push(Tok::kLeq, 2);
          continue;
        }
        lexical(1, "'<' must start '<='");
        break;
      case '!':
        if (text.substr(i, 3) == "!<=") {
          push(Tok::kNotLeq, 3);
          continue;
        }
        if (text.substr(i, 3) == "!in" && (i + 3 >= text.size() || !is_ident_char(text[i + 3]))) {
          push(Tok::kNotIn, 3);
          continue;
        }
        lexical(1, "'!' must start '!<=' or '!in'");
        break;
      default: {
        // Report a whole UTF-8 sequence as one character.
        std::size_t len = 1;
        while (i + len < text.size() && (static_cast<unsigned char>(text[i + len]) & 0xC0) == 0x80) ++len;
        lexical(len, "unexpected character '" + std::string(text.substr(i, len)) + "'");
      }
    }
  }

  // The end token sits on the last character so its span stays inside the
  // input; for empty input it sits at the origin.
  SourceSpan end{origin.line, origin.column, 1};
  if (!text.empty()) {
    std::size_t l = origin.line, c0 = origin.column;
    for (std::size_t k = 0; k + 1 < text.size(); ++k) {
      if (text[k] == '\n') {
        ++l;
        c0 = 1;
      } else {
        ++c0;
      }
    }
    end = {l, c0, 1};
  }
  out.push_back({Tok::kEnd, {}, end});
  return out;
}

/// Recursive-descent helper shared by all parsers.
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t k = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[k];
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_ident(std::string_view text) const { return at(Tok::kIdent) && peek().text == text; }

  Token next() {
    Token t = peek();
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }

  bool accept(Tok k) {
    if (!at(k)) return false;
    next();
    return true;
  }

  Token expect(Tok k, std::vector<std::string> expected = {}) {
    if (!at(k)) {
      if (expected.empty()) expected.push_back(describe(k));
      fail(ParseErrorKind::kGrammar, peek(), std::string("unexpected ") + token_text(peek()), std::move(expected));
    }
    return next();
  }

  Token expect_keyword(std::string_view word) {
    if (!at_ident(word))
      fail(ParseErrorKind::kGrammar, peek(), std::string("unexpected ") + token_text(peek()),
           {"'" + std::string(word) + "'"});
    return next();
  }

  void skip_newlines() {
    while (at(Tok::kNewline)) next();
  }

  [[noreturn]] static void fail(ParseErrorKind kind, const Token& at, std::string message,
                                std::vector<std::string> expected = {}) {
    throw ParseError(kind, at.span, std::move(message), std::move(expected));
  }

  static std::string token_text(const Token& t) {
    switch (t.kind) {
      case Tok::kIdent:
        return "'" + t.text + "'";
      case Tok::kFreeVar:
        return "'?" + t.text + "'";
      case Tok::kString:
        return "string";
      default:
        return describe(t.kind);
    }
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

/// Renders a trailing apostrophe as ⊥ for display.
inline std::string display_name(const std::string& name) {
  std::size_t primes = 0;
  while (primes < name.size() && name[name.size() - 1 - primes] == '\'') ++primes;
  if (primes == 0) return name;
  std::string out = name.substr(0, name.size() - primes);
  for (std::size_t i = 0; i < primes; ++i) out += "⊥";
  return out;
}

}  // namespace qprop::formats

#endif  // QPROP_FORMATS_SOURCE_HPP_
