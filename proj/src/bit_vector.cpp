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

#include "ldprepr/bit_vector.hpp"

#include <bit>

#include "ldprepr/error.hpp"

namespace ldprepr {
namespace {

constexpr std::uint64_t kEvenMask = 0x5555555555555555ULL;

std::size_t WordsFor(std::size_t bits) { return (bits + 63) / 64; }

}  // namespace

PackedBits::PackedBits(std::size_t size, bool value)
    : size_(size), words_(WordsFor(size), value ? ~std::uint64_t{0} : 0) {
  if (value && (size_ & 63) != 0) {
    words_.back() &= (std::uint64_t{1} << (size_ & 63)) - 1;
  }
}

PackedBits PackedBits::FromString(std::string_view text) {
  PackedBits bits(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '1') {
      bits.set(i, true);
    } else if (c != '0') {
      Fail(ErrorCode::kParse, "bit string contains a character other than "
                              "'0' or '1' at offset " + std::to_string(i));
    }
  }
  return bits;
}

void PackedBits::push_back(bool value) {
  if ((size_ & 63) == 0) words_.push_back(0);
  ++size_;
  set(size_ - 1, value);
}

void PackedBits::append(const PackedBits& other) {
  if ((size_ & 63) == 0) {
    words_.insert(words_.end(), other.words_.begin(), other.words_.end());
    size_ += other.size_;
    return;
  }
  words_.reserve(WordsFor(size_ + other.size_));
  for (std::size_t i = 0; i < other.size_; ++i) push_back(other.get(i));
}

PackedBits PackedBits::slice(std::size_t offset, std::size_t count) const {
  if (offset + count > size_) {
    Fail(ErrorCode::kShape, "PackedBits::slice out of range");
  }
  PackedBits out(count);
  for (std::size_t i = 0; i < count; ++i) out.set(i, get(offset + i));
  return out;
}

std::size_t PackedBits::count() const noexcept {
  std::size_t total = 0;
  for (const std::uint64_t w : words_) total += std::popcount(w);
  return total;
}

std::size_t PackedBits::count_even() const noexcept {
  // Word boundaries are multiples of 64, so bit parity within a word equals
  // global parity.
  std::size_t total = 0;
  for (const std::uint64_t w : words_) total += std::popcount(w & kEvenMask);
  return total;
}

std::string PackedBits::to_string() const {
  std::string out(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if (get(i)) out[i] = '1';
  }
  return out;
}

}  // namespace ldprepr
