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

#ifndef QPROP_FAMILIES_HPP_
#define QPROP_FAMILIES_HPP_

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qprop/lattice.hpp"

// Generated lattice families used as fixtures: Boolean algebras, the
// modular ortholattices MO(n), and the six-element benzene ring (an
// ortholattice that is not orthomodular).

namespace qprop {

enum class Family { kBoolean, kMo, kHexagon };

inline constexpr int kMaxBooleanAtoms = 6;
inline constexpr int kMaxMoPairs = 8;

inline std::optional<Family> parse_family(std::string_view s) {
  if (s == "boolean") return Family::kBoolean;
  if (s == "mo") return Family::kMo;
  if (s == "hexagon") return Family::kHexagon;
  return std::nullopt;
}

namespace detail {

inline std::vector<std::string> atom_names(std::size_t count, const std::vector<std::string>& given) {
  if (!given.empty()) {
    if (given.size() != count)
      throw Error("expected " + std::to_string(count) + " names, got " + std::to_string(given.size()));
    return given;
  }
  std::vector<std::string> out;
  for (std::size_t i = 0; i < count; ++i) out.emplace_back(1, static_cast<char>('a' + i));
  return out;
}

}  // namespace detail

/// Powerset of n atoms. Element i is the subset with bitmask i; subsets
/// are named by concatenating atom names (joined with '_' when any atom
/// name is longer than one character).
inline OrthoLattice boolean_lattice(int n, const std::vector<std::string>& names = {}) {
  if (n < 1 || n > kMaxBooleanAtoms)
    throw SizeLimitExceeded("boolean(n) requires 1 <= n <= " + std::to_string(kMaxBooleanAtoms));
  auto atoms = detail::atom_names(static_cast<std::size_t>(n), names);
  bool short_names = std::all_of(atoms.begin(), atoms.end(), [](const auto& s) { return s.size() == 1; });
  const std::uint32_t count = 1U << n;
  const std::uint32_t full = count - 1;

  LatticeBuilder b("boolean" + std::to_string(n));
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    if (mask == 0) {
      b.add("0");
    } else if (mask == full) {
      b.add("1");
    } else {
      std::string label;
      for (int i = 0; i < n; ++i)
        if (mask & (1U << i)) {
          if (!label.empty() && !short_names) label += '_';
          label += atoms[static_cast<std::size_t>(i)];
        }
      b.add(label);
    }
  }
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    for (int i = 0; i < n; ++i)
      if (!(mask & (1U << i))) b.leq(Elem{mask}, Elem{mask | (1U << i)});
    if (mask < (full ^ mask)) b.ortho(Elem{mask}, Elem{full ^ mask});
  }
  return b.build();
}

/// MO(n): 0, 1 and n complementary pairs of pairwise incomparable atoms.
/// Complements are named with a trailing apostrophe (a, a', b, b', ...).
inline OrthoLattice mo_lattice(int n, const std::vector<std::string>& names = {}) {
  if (n < 1 || n > kMaxMoPairs)
    throw SizeLimitExceeded("mo(n) requires 1 <= n <= " + std::to_string(kMaxMoPairs));
  auto atoms = detail::atom_names(static_cast<std::size_t>(n), names);
  LatticeBuilder b("mo" + std::to_string(n));
  Elem zero = b.add("0");
  std::vector<std::pair<Elem, Elem>> pairs;
  for (const auto& atom : atoms) {
    Elem x = b.add(atom);
    Elem y = b.add(atom + "'");
    pairs.emplace_back(x, y);
  }
  Elem one = b.add("1");
  for (auto [x, y] : pairs) {
    b.leq(zero, x).leq(zero, y).leq(x, one).leq(y, one);
    b.ortho(x, y);
  }
  return b.build();
}

/// The benzene ring: 0 < a < b < 1 and 0 < b' < a' < 1.
inline OrthoLattice hexagon_lattice(const std::vector<std::string>& names = {}) {
  auto atoms = detail::atom_names(2, names);
  LatticeBuilder b("hexagon");
  Elem zero = b.add("0");
  Elem a = b.add(atoms[0]);
  Elem bb = b.add(atoms[1]);
  Elem bp = b.add(atoms[1] + "'");
  Elem ap = b.add(atoms[0] + "'");
  Elem one = b.add("1");
  b.leq(zero, a).leq(a, bb).leq(bb, one);
  b.leq(zero, bp).leq(bp, ap).leq(ap, one);
  b.ortho(a, ap).ortho(bb, bp);
  return b.build();
}

inline OrthoLattice build_family(Family family, int n, const std::vector<std::string>& names = {}) {
  switch (family) {
    case Family::kBoolean:
      return boolean_lattice(n, names);
    case Family::kMo:
      return mo_lattice(n, names);
    case Family::kHexagon:
      return hexagon_lattice(names);
  }
  throw Error("unknown family");
}

/// Every generated family member with at most max_elements elements.
inline std::vector<OrthoLattice> generated_families(std::size_t max_elements, bool include_hexagon = false) {
  std::vector<OrthoLattice> out;
  for (int n = 1; n <= kMaxBooleanAtoms && (std::size_t{1} << n) <= max_elements; ++n)
    out.push_back(boolean_lattice(n));
  for (int n = 1; n <= kMaxMoPairs && static_cast<std::size_t>(2 * n + 2) <= max_elements; ++n)
    out.push_back(mo_lattice(n));
  if (include_hexagon && max_elements >= 6) out.push_back(hexagon_lattice());
  return out;
}

}  // namespace qprop

#endif  // QPROP_FAMILIES_HPP_
