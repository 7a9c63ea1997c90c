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

#ifndef LDPREPR_RNG_HPP_
#define LDPREPR_RNG_HPP_

#include <cstdint>
#include <random>

namespace ldprepr {

// Identifies one independent random stream: a global seed plus the index of
// the record (or run, or purpose) the stream belongs to.
struct RngSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  friend bool operator==(const RngSeed&, const RngSeed&) = default;
};

// SplitMix64 finalizer. Bijective on 64-bit words.
std::uint64_t Mix64(std::uint64_t x);

// Hash of (seed, index) used to derive child seeds, e.g. the per-run seed
// from the base seed and the per-record stream from the run seed.
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t index);

// Random source for one stream. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard; the conversions below are written out
// by hand so results are bit-identical across standard library vendors.
class Rng {
 public:
  explicit Rng(RngSeed seed);

  std::uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of resolution.
  double Uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  bool Bernoulli(double probability) { return Uniform01() < probability; }

  // Uniform on [lo, hi).
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform01(); }

  // Uniform integer in [0, bound) by rejection; bound must be > 0.
  std::uint64_t Below(std::uint64_t bound);

  // Standard normal via Box-Muller.
  double Normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace ldprepr

#endif  // LDPREPR_RNG_HPP_
