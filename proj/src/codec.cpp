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

#include "ldprepr/codec.hpp"

#include <cmath>
#include <cstdint>
#include <string>

#include "ldprepr/error.hpp"

namespace ldprepr {

CodecLayout::CodecLayout(int integer_bits, int fraction_bits,
                         std::size_t elements)
    : integer_bits_(integer_bits),
      fraction_bits_(fraction_bits),
      elements_(elements) {
  if (integer_bits < 1 || fraction_bits < 1) {
    Fail(ErrorCode::kParameter,
         "codec layout needs at least one integer and one fraction bit");
  }
  if (integer_bits + fraction_bits > 52) {
    Fail(ErrorCode::kParameter,
         "codec layout supports at most 52 magnitude bits");
  }
  if (elements == 0 || total_bits() % 2 != 0) {
    Fail(ErrorCode::kParameter,
         "r*l must be even and positive (r=" + std::to_string(elements) +
             ", l=" + std::to_string(bits_per_element()) + ")");
  }
}

double CodecLayout::max_magnitude() const noexcept {
  return std::ldexp(1.0, integer_bits_) - resolution();
}

double CodecLayout::resolution() const noexcept {
  return std::ldexp(1.0, -fraction_bits_);
}

double CodecLayout::Clamp(double x) const noexcept {
  const double bound = max_magnitude();
  if (x > bound) return bound;
  if (x < -bound) return -bound;
  return x;
}

std::vector<double> ZScoreNormalize(std::span<const double> values) {
  if (values.size() < 2) {
    Fail(ErrorCode::kDegenerateInput,
         "z-score normalization needs at least two values");
  }
  double sum = 0.0;
  for (const double v : values) {
    if (!std::isfinite(v)) {
      Fail(ErrorCode::kInvalidValue, "z-score input contains a non-finite value");
    }
    sum += v;
  }
  const double n = static_cast<double>(values.size());
  const double mean = sum / n;
  double squares = 0.0;
  for (const double v : values) squares += (v - mean) * (v - mean);
  const double stddev = std::sqrt(squares / n);

  std::vector<double> out(values.size(), 0.0);
  if (stddev == 0.0) return out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = (values[i] - mean) / stddev;
  }
  return out;
}

PackedBits EncodeValue(double x, const CodecLayout& layout) {
  if (!std::isfinite(x)) {
    Fail(ErrorCode::kInvalidValue, "cannot encode a non-finite value");
  }
  const int m = layout.integer_bits();
  const int n = layout.fraction_bits();
  const double magnitude = std::fmin(std::fabs(x), layout.max_magnitude());
  // Scaling by 2^n is exact, so floor() is a pure truncation of the fraction.
  const auto fixed =
      static_cast<std::uint64_t>(std::floor(std::ldexp(magnitude, n)));

  PackedBits bits(layout.bits_per_element());
  bits.set(0, x < 0.0);
  const int width = m + n;
  for (int i = 0; i < width; ++i) {
    bits.set(1 + i, (fixed >> (width - 1 - i)) & 1U);
  }
  return bits;
}

double DecodeValue(const PackedBits& bits, const CodecLayout& layout) {
  if (bits.size() != layout.bits_per_element()) {
    Fail(ErrorCode::kShape, "element code has " + std::to_string(bits.size()) +
                                " bits, layout expects " +
                                std::to_string(layout.bits_per_element()));
  }
  const int width = layout.integer_bits() + layout.fraction_bits();
  std::uint64_t fixed = 0;
  for (int i = 0; i < width; ++i) {
    fixed = (fixed << 1) | static_cast<std::uint64_t>(bits.get(1 + i));
  }
  const double magnitude =
      std::ldexp(static_cast<double>(fixed), -layout.fraction_bits());
  return bits.get(0) ? -magnitude : magnitude;
}

PackedBits EncodeNormalized(std::span<const double> values,
                            const CodecLayout& layout) {
  if (values.size() != layout.elements()) {
    Fail(ErrorCode::kShape, "vector has " + std::to_string(values.size()) +
                                " values, layout expects " +
                                std::to_string(layout.elements()));
  }
  PackedBits merged;
  for (const double v : values) merged.append(EncodeValue(v, layout));
  return merged;
}

BitVector EncodeVector(const EmbeddingVector& vec, const CodecLayout& layout) {
  if (vec.values.size() != layout.elements()) {
    Fail(ErrorCode::kShape, "vector has " + std::to_string(vec.values.size()) +
                                " values, layout expects " +
                                std::to_string(layout.elements()));
  }
  const std::vector<double> normalized = ZScoreNormalize(vec.values);
  return BitVector{vec.label, EncodeNormalized(normalized, layout)};
}

std::vector<double> DecodeVector(const PackedBits& bits,
                                 const CodecLayout& layout) {
  if (bits.size() != layout.total_bits()) {
    Fail(ErrorCode::kShape, "merged code has " + std::to_string(bits.size()) +
                                " bits, layout expects " +
                                std::to_string(layout.total_bits()));
  }
  const std::size_t l = layout.bits_per_element();
  std::vector<double> out;
  out.reserve(layout.elements());
  for (std::size_t i = 0; i < layout.elements(); ++i) {
    out.push_back(DecodeValue(bits.slice(i * l, l), layout));
  }
  return out;
}

}  // namespace ldprepr
