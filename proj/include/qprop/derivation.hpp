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

#ifndef QPROP_DERIVATION_HPP_
#define QPROP_DERIVATION_HPP_

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "qprop/axioms.hpp"
#include "qprop/formula.hpp"

namespace qprop {

enum class Rule { kId, kCut, kTensorR, kTensorL, kPlusR1, kPlusR2, kPlusL, kLolliR, kLolliL, kForallR, kForallL };

inline constexpr Rule kAllRules[] = {Rule::kId,     Rule::kCut,    Rule::kTensorR, Rule::kTensorL,
                                     Rule::kPlusR1, Rule::kPlusR2, Rule::kPlusL,   Rule::kLolliR,
                                     Rule::kLolliL, Rule::kForallR, Rule::kForallL};

inline std::string_view rule_name(Rule r) {
  switch (r) {
    case Rule::kId:
      return "id";
    case Rule::kCut:
      return "cut";
    case Rule::kTensorR:
      return "tensorR";
    case Rule::kTensorL:
      return "tensorL";
    case Rule::kPlusR1:
      return "plusR1";
    case Rule::kPlusR2:
      return "plusR2";
    case Rule::kPlusL:
      return "plusL";
    case Rule::kLolliR:
      return "lolliR";
    case Rule::kLolliL:
      return "lolliL";
    case Rule::kForallR:
      return "forallR";
    case Rule::kForallL:
      return "forallL";
  }
  return "?";
}

inline std::optional<Rule> parse_rule(std::string_view s) {
  for (Rule r : kAllRules)
    if (rule_name(r) == s) return r;
  return std::nullopt;
}

inline std::size_t rule_arity(Rule r) {
  switch (r) {
    case Rule::kId:
      return 0;
    case Rule::kCut:
    case Rule::kTensorR:
    case Rule::kPlusL:
    case Rule::kLolliL:
      return 2;
    default:
      return 1;
  }
}

/// A derivation tree. Inner nodes name a sequent rule; leaves are either
/// (id) or closed axiom instances with their bindings. Every node records
/// the sequent it concludes; the kernel re-derives each one.
class Derivation {
 public:
  static Derivation by_rule(Rule rule, Sequent conclusion, std::vector<Derivation> premises = {},
                            std::optional<Term> witness = std::nullopt) {
    Derivation d(std::move(conclusion));
    d.rule_ = rule;
    d.premises_ = std::move(premises);
    d.witness_ = std::move(witness);
    return d;
  }

  static Derivation by_axiom(Schema schema, Bindings bindings, Sequent conclusion) {
    Derivation d(std::move(conclusion));
    d.schema_ = schema;
    d.bindings_ = std::move(bindings);
    return d;
  }

  bool is_axiom() const { return schema_.has_value(); }
  Rule rule() const { return rule_; }
  Schema schema() const { return *schema_; }
  const Bindings& bindings() const { return bindings_; }
  const Sequent& conclusion() const { return conclusion_; }
  const std::vector<Derivation>& premises() const { return premises_; }
  const std::optional<Term>& witness() const { return witness_; }

  // Mutable access for tools that rewrite trees (mutation testing).
  Sequent& mutable_conclusion() { return conclusion_; }
  std::vector<Derivation>& mutable_premises() { return premises_; }
  Bindings& mutable_bindings() { return bindings_; }

  std::size_t node_count() const {
    std::size_t n = 1;
    for (const auto& p : premises_) n += p.node_count();
    return n;
  }

  friend bool operator==(const Derivation& a, const Derivation& b) {
    return a.schema_ == b.schema_ && a.rule_ == b.rule_ && a.bindings_ == b.bindings_ &&
           a.conclusion_ == b.conclusion_ && a.witness_ == b.witness_ && a.premises_ == b.premises_;
  }

 private:
  explicit Derivation(Sequent conclusion) : conclusion_(std::move(conclusion)) {}

  Rule rule_ = Rule::kId;
  std::optional<Schema> schema_;
  Bindings bindings_;
  Sequent conclusion_;
  std::vector<Derivation> premises_;
  std::optional<Term> witness_;
};

}  // namespace qprop

#endif  // QPROP_DERIVATION_HPP_
