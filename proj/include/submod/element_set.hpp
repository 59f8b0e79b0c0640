// Copyright 2026 The submodkit Authors.
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

#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "submod/error.hpp"

namespace submod {

// Dense index of an element of the ground set, in [0, n).
using Element = std::uint32_t;

// A subset of the ground set {0, ..., universe-1}, stored as a bitset.
// Ground sets of up to 64 elements occupy a single word.
class ElementSet {
 public:
  ElementSet() = default;
  explicit ElementSet(std::size_t universe)
      : universe_(universe), words_((universe + 63) / 64, 0) {}

  static ElementSet of(std::size_t universe,
                       std::initializer_list<Element> members) {
    ElementSet s(universe);
    for (Element v : members) s.insert(v);
    return s;
  }

  static ElementSet of(std::size_t universe, std::span<const Element> members) {
    ElementSet s(universe);
    for (Element v : members) s.insert(v);
    return s;
  }

  // Set with members given by the low bits of `mask`; requires universe <= 64.
  static ElementSet from_mask(std::size_t universe, std::uint64_t mask) {
    ElementSet s(universe);
    if (universe > 0) s.words_[0] = mask & low_mask(universe);
    return s;
  }

  static ElementSet full(std::size_t universe) {
    ElementSet s(universe);
    for (auto& w : s.words_) w = ~std::uint64_t{0};
    s.trim();
    return s;
  }

  std::size_t universe() const { return universe_; }

  std::size_t size() const {
    std::size_t count = 0;
    for (auto w : words_) count += static_cast<std::size_t>(std::popcount(w));
    return count;
  }

  bool empty() const {
    return std::all_of(words_.begin(), words_.end(),
                       [](std::uint64_t w) { return w == 0; });
  }

  bool contains(Element v) const {
    return v < universe_ && ((words_[v >> 6] >> (v & 63)) & 1u) != 0;
  }

  void insert(Element v) {
    check(v);
    words_[v >> 6] |= std::uint64_t{1} << (v & 63);
  }

  void erase(Element v) {
    check(v);
    words_[v >> 6] &= ~(std::uint64_t{1} << (v & 63));
  }

  ElementSet with(Element v) const {
    ElementSet s = *this;
    s.insert(v);
    return s;
  }

  ElementSet without(Element v) const {
    ElementSet s = *this;
    s.erase(v);
    return s;
  }

  ElementSet& operator|=(const ElementSet& other) {
    same_universe(other);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
    return *this;
  }

  ElementSet& operator-=(const ElementSet& other) {
    same_universe(other);
    for (std::size_t i = 0; i < words_.size(); ++i)
      words_[i] &= ~other.words_[i];
    return *this;
  }

  friend ElementSet operator|(ElementSet a, const ElementSet& b) {
    return a |= b;
  }
  friend ElementSet operator-(ElementSet a, const ElementSet& b) {
    return a -= b;
  }

  bool is_subset_of(const ElementSet& other) const {
    same_universe(other);
    for (std::size_t i = 0; i < words_.size(); ++i)
      if ((words_[i] & ~other.words_[i]) != 0) return false;
    return true;
  }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w != 0) {
        const int bit = std::countr_zero(w);
        fn(static_cast<Element>(i * 64 + static_cast<std::size_t>(bit)));
        w &= w - 1;
      }
    }
  }

  // Members in increasing order.
  std::vector<Element> members() const {
    std::vector<Element> out;
    out.reserve(size());
    for_each([&](Element v) { out.push_back(v); });
    return out;
  }

  std::span<const std::uint64_t> words() const { return words_; }

  friend bool operator==(const ElementSet& a, const ElementSet& b) {
    return a.universe_ == b.universe_ && a.words_ == b.words_;
  }

  // Lexicographic order on the increasing member sequences; a proper prefix
  // sorts first.
  friend bool lexicographically_less(const ElementSet& a, const ElementSet& b) {
    const auto ma = a.members();
    const auto mb = b.members();
    return std::lexicographical_compare(ma.begin(), ma.end(), mb.begin(),
                                        mb.end());
  }

 private:
  static std::uint64_t low_mask(std::size_t bits) {
    return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
  }

  void trim() {
    if (universe_ % 64 != 0 && !words_.empty())
      words_.back() &= low_mask(universe_ % 64);
  }

  void check(Element v) const {
    if (v >= universe_)
      throw MalformedSolution("element " + std::to_string(v) +
                              " outside ground set of size " +
                              std::to_string(universe_));
  }

  void same_universe(const ElementSet& other) const {
    if (other.universe_ != universe_)
      throw MisuseError("element sets over different ground sets");
  }

  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace submod
