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

#ifndef LDPREPR_CODEC_HPP_
#define LDPREPR_CODEC_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "ldprepr/bit_vector.hpp"

namespace ldprepr {

// One user's real-valued representation of length r plus its class index.
struct EmbeddingVector {
  int label = 0;
  std::vector<double> values;
};

// Fixed-point layout of one embedding element: a sign bit, `integer_bits`
// bits of integer part and `fraction_bits` bits of fraction, for a vector of
// `elements` coordinates.
class CodecLayout {
 public:
  // Throws kParameter unless integer_bits >= 1, fraction_bits >= 1,
  // integer_bits + fraction_bits <= 52 and elements * bits_per_element() is
  // even and non-zero.
  CodecLayout(int integer_bits, int fraction_bits, std::size_t elements);

  int integer_bits() const noexcept { return integer_bits_; }
  int fraction_bits() const noexcept { return fraction_bits_; }
  std::size_t elements() const noexcept { return elements_; }
  std::size_t bits_per_element() const noexcept {
    return 1 + static_cast<std::size_t>(integer_bits_ + fraction_bits_);
  }
  std::size_t total_bits() const noexcept {
    return elements_ * bits_per_element();
  }

  // Largest representable magnitude, 2^m - 2^-n.
  double max_magnitude() const noexcept;
  // Resolution of the fraction part, 2^-n.
  double resolution() const noexcept;
  // Saturates x to [-max_magnitude(), max_magnitude()].
  double Clamp(double x) const noexcept;

  friend bool operator==(const CodecLayout&, const CodecLayout&) = default;

 private:
  int integer_bits_;
  int fraction_bits_;
  std::size_t elements_;
};

// Shifts and scales `values` to mean 0 and population standard deviation 1.
// A constant vector maps to all zeros. Throws kDegenerateInput for fewer than
// two values and kInvalidValue for NaN or infinity.
std::vector<double> ZScoreNormalize(std::span<const double> values);

// Sign bit (1 for negative; -0.0 counts as non-negative), then the integer
// part and the truncated fraction of |x|, each big-endian. Magnitudes past
// max_magnitude() saturate.
PackedBits EncodeValue(double x, const CodecLayout& layout);

// Inverse of EncodeValue on quantized, in-range values. Throws kShape if
// bits.size() != bits_per_element().
double DecodeValue(const PackedBits& bits, const CodecLayout& layout);

// Concatenated element codes of `values` as given (no normalization).
PackedBits EncodeNormalized(std::span<const double> values,
                            const CodecLayout& layout);

// Z-score normalizes the vector and concatenates the element codes.
BitVector EncodeVector(const EmbeddingVector& vec, const CodecLayout& layout);

// Decodes each l-bit slice of a merged vector.
std::vector<double> DecodeVector(const PackedBits& bits,
                                 const CodecLayout& layout);

}  // namespace ldprepr

#endif  // LDPREPR_CODEC_HPP_
