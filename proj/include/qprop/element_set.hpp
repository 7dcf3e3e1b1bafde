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

#ifndef QPROP_ELEMENT_SET_HPP_
#define QPROP_ELEMENT_SET_HPP_

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iterator>

namespace qprop {

// Lattices are capped at 64 elements so that every subset fits one word.
inline constexpr std::size_t kMaxElements = 64;

/// Index of an element inside one particular lattice.
struct Elem {
  std::uint32_t index = 0;

  friend constexpr auto operator<=>(Elem, Elem) = default;
};

/// A subset of a lattice's elements, stored as a 64-bit mask.
class ElemSet {
 public:
  class iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = Elem;
    using difference_type = std::ptrdiff_t;
    using pointer = const Elem*;
    using reference = Elem;

    constexpr iterator() = default;
    constexpr explicit iterator(std::uint64_t rest) : rest_(rest) {}

    constexpr Elem operator*() const {
      return Elem{static_cast<std::uint32_t>(std::countr_zero(rest_))};
    }
    constexpr iterator& operator++() {
      rest_ &= rest_ - 1;
      return *this;
    }
    constexpr iterator operator++(int) {
      iterator old = *this;
      ++*this;
      return old;
    }
    friend constexpr bool operator==(iterator, iterator) = default;

   private:
    std::uint64_t rest_ = 0;
  };

  constexpr ElemSet() = default;
  constexpr ElemSet(std::initializer_list<Elem> elems) {
    for (Elem e : elems) insert(e);
  }

  static constexpr ElemSet from_bits(std::uint64_t bits) {
    ElemSet s;
    s.bits_ = bits;
    return s;
  }
  // The first n indices.
  static constexpr ElemSet prefix(std::size_t n) {
    return from_bits(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }

  constexpr bool contains(Elem e) const { return e.index < 64 && ((bits_ >> e.index) & 1U) != 0; }
  constexpr void insert(Elem e) { bits_ |= std::uint64_t{1} << e.index; }
  constexpr void erase(Elem e) { bits_ &= ~(std::uint64_t{1} << e.index); }

  constexpr bool subset_of(ElemSet other) const { return (bits_ & ~other.bits_) == 0; }

  constexpr iterator begin() const { return iterator(bits_); }
  constexpr iterator end() const { return iterator(0); }

  friend constexpr ElemSet operator|(ElemSet a, ElemSet b) { return from_bits(a.bits_ | b.bits_); }
  friend constexpr ElemSet operator&(ElemSet a, ElemSet b) { return from_bits(a.bits_ & b.bits_); }
  friend constexpr ElemSet operator-(ElemSet a, ElemSet b) { return from_bits(a.bits_ & ~b.bits_); }
  constexpr ElemSet& operator|=(ElemSet o) {
    bits_ |= o.bits_;
    return *this;
  }
  constexpr ElemSet& operator&=(ElemSet o) {
    bits_ &= o.bits_;
    return *this;
  }

  friend constexpr bool operator==(ElemSet, ElemSet) = default;

 private:
  std::uint64_t bits_ = 0;
};

}  // namespace qprop

#endif  // QPROP_ELEMENT_SET_HPP_
