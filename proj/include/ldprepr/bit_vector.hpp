// Copyright 2026 The ldprepr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LDPREPR_BIT_VECTOR_HPP_
#define LDPREPR_BIT_VECTOR_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ldprepr {

// Fixed-length sequence of bits packed into 64-bit words, least significant
// bit of word 0 first. Bits past size() in the last word are always zero.
class PackedBits {
 public:
  PackedBits() = default;
  explicit PackedBits(std::size_t size, bool value = false);

  // Parses a string of '0'/'1' characters. Throws kParse on anything else.
  static PackedBits FromString(std::string_view text);

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  bool get(std::size_t i) const noexcept {
    return (words_[i >> 6] >> (i & 63)) & 1U;
  }
  void set(std::size_t i, bool value) noexcept {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }

  void push_back(bool value);
  void append(const PackedBits& other);

  // Copy of bits [offset, offset + count).
  PackedBits slice(std::size_t offset, std::size_t count) const;

  std::size_t count() const noexcept;
  // Number of set bits at even (0, 2, 4, ...) / odd positions.
  std::size_t count_even() const noexcept;
  std::size_t count_odd() const noexcept { return count() - count_even(); }

  std::string to_string() const;

  const std::vector<std::uint64_t>& words() const noexcept { return words_; }

  friend bool operator==(const PackedBits&, const PackedBits&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

// One user's encoded (or randomized) representation: the unit of
// perturbation and transmission.
struct BitVector {
  int label = 0;
  PackedBits bits;

  friend bool operator==(const BitVector&, const BitVector&) = default;
};

}  // namespace ldprepr

#endif  // LDPREPR_BIT_VECTOR_HPP_
