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

#ifndef LDPREPR_LDP_HPP_
#define LDPREPR_LDP_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "ldprepr/bit_vector.hpp"
#include "ldprepr/rng.hpp"

namespace ldprepr {

enum class Protocol { kOme, kSue, kOue };

std::string_view ProtocolName(Protocol protocol);
// Accepts "ome", "sue", "oue" (any case). Throws kParameter otherwise.
Protocol ParseProtocol(std::string_view name);

// Optimized multiple encoding. A 1 at an even (0-based) position survives
// with probability p1 = lambda/(1+lambda), a 1 at an odd position with
// p2 = 1/(1+lambda^3), and a 0 anywhere becomes 1 with probability
// q = 1/(1 + lambda*exp(epsilon/sensitivity)).
struct OmeParams {
  double epsilon = 0.0;
  double lambda = 0.0;
  std::size_t sensitivity = 0;
  double p1 = 0.0;
  double p2 = 0.0;
  double q = 0.0;

  double KeepOneProbability(std::size_t position) const noexcept {
    return position % 2 == 0 ? p1 : p2;
  }
};

// Throws kParameter unless epsilon > 0, lambda >= 1, sensitivity is even and
// positive, and every resulting probability lies strictly inside (0, 1).
OmeParams ComputeOmeParams(double epsilon, double lambda,
                           std::size_t sensitivity);
inline OmeParams ComputeOmeParams(double epsilon, double lambda,
                                  std::size_t elements,
                                  std::size_t bits_per_element) {
  return ComputeOmeParams(epsilon, lambda, elements * bits_per_element);
}

// Unary-encoding baselines. `sensitivity` is the per-user Delta f; the
// pipeline uses 2r.
struct UeParams {
  Protocol variant = Protocol::kSue;
  double epsilon = 0.0;
  std::size_t sensitivity = 0;
  double p = 0.0;
  double q = 0.0;
};

// p = e^(eps/df)/(1+e^(eps/df)), q = 1/(1+e^(eps/df)); p + q == 1.
UeParams ComputeSueParams(double epsilon, std::size_t delta_f);
// p = 1/2, q = 1/(1+e^(eps/df)).
UeParams ComputeOueParams(double epsilon, std::size_t delta_f);

// Resamples every bit independently. One Uniform01 draw is consumed per
// position, in order, from Rng(seed). Throws kShape unless
// bits.bits.size() == params.sensitivity.
BitVector PerturbOme(const BitVector& bits, const OmeParams& params,
                     RngSeed seed);

// As PerturbOme with a single 1->1 probability for all positions. Any
// non-empty length is accepted since Delta f is not tied to the bit count.
BitVector PerturbUe(const BitVector& bits, const UeParams& params,
                    RngSeed seed);

// The privacy budget implied by the stored probabilities under the paired
// product bound: sensitivity/2 * [ln(p1(1-q)/((1-p1)q)) +
// ln(p2(1-q)/((1-p2)q))], evaluated in log space.
double PairedProductEpsilon(const OmeParams& params);

// Sum over positions of max(|ln(p_i/q)|, |ln((1-q)/(1-p_i))|): the largest
// log-likelihood ratio reachable when two inputs differ at every position.
// Throws kParameter if any probability is outside (0, 1).
double AuditMaxLogRatio(std::span<const double> keep_one_probability,
                        double q);
double AuditMaxLogRatio(const OmeParams& params);
double AuditMaxLogRatio(const UeParams& params);

struct RateEstimate {
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;

  double value() const noexcept {
    return trials == 0 ? 0.0
                       : static_cast<double>(successes) /
                             static_cast<double>(trials);
  }
  double standard_error() const noexcept;
};

// Monte Carlo estimates of each transition probability, obtained by pushing
// all-ones and all-zeros vectors through the perturbation routine.
struct FlipRates {
  RateEstimate keep_one_even;  // 1 -> 1 at even positions
  RateEstimate keep_one_odd;   // 1 -> 1 at odd positions
  RateEstimate zero_to_one;    // 0 -> 1 at any position
};

inline constexpr std::uint64_t kMinFlipTrials = 10'000;

// Each estimate uses exactly `trials` Bernoulli trials. Throws kParameter if
// trials < kMinFlipTrials.
FlipRates EmpiricalFlipRates(const OmeParams& params, std::uint64_t trials,
                             RngSeed seed);
FlipRates EmpiricalFlipRates(const UeParams& params, std::uint64_t trials,
                             RngSeed seed);

}  // namespace ldprepr

#endif  // LDPREPR_LDP_HPP_
