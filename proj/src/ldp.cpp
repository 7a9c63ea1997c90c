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

#include "ldprepr/ldp.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "ldprepr/error.hpp"

namespace ldprepr {
namespace {

bool OpenUnit(double p) { return p > 0.0 && p < 1.0; }

// ln(p / (1 - p)) without forming the ratio.
double LogOdds(double p) { return std::log(p) - std::log1p(-p); }

void CheckEpsilon(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    Fail(ErrorCode::kParameter, "epsilon must be positive and finite");
  }
}

UeParams UeBase(Protocol variant, double epsilon, std::size_t delta_f) {
  CheckEpsilon(epsilon);
  if (delta_f == 0) Fail(ErrorCode::kParameter, "delta_f must be positive");
  UeParams params;
  params.variant = variant;
  params.epsilon = epsilon;
  params.sensitivity = delta_f;
  params.q = 1.0 / (1.0 + std::exp(epsilon / static_cast<double>(delta_f)));
  return params;
}

template <typename KeepOne>
BitVector Perturb(const BitVector& in, KeepOne keep_one, double q,
                  RngSeed seed) {
  Rng rng(seed);
  const std::size_t size = in.bits.size();
  BitVector out{in.label, PackedBits(size)};
  for (std::size_t i = 0; i < size; ++i) {
    const double u = rng.Uniform01();
    out.bits.set(i, in.bits.get(i) ? u < keep_one(i) : u < q);
  }
  return out;
}

// Runs `perturb` over chunks of constant input until `trials` outcomes have
// been tallied for each tracked position class.
template <typename PerturbFn>
FlipRates Tally(std::size_t chunk, std::uint64_t trials, RngSeed seed,
                PerturbFn perturb) {
  if (trials < kMinFlipTrials) {
    Fail(ErrorCode::kParameter,
         "empirical flip rates need at least " +
             std::to_string(kMinFlipTrials) + " trials");
  }
  FlipRates rates;
  const BitVector ones{0, PackedBits(chunk, true)};
  const BitVector zeros{0, PackedBits(chunk, false)};

  std::uint64_t stream = 0;
  while (rates.keep_one_even.trials < trials ||
         rates.keep_one_odd.trials < trials) {
    const BitVector out =
        perturb(ones, RngSeed{seed.seed, DeriveSeed(seed.stream, stream++)});
    for (std::size_t i = 0; i < chunk; ++i) {
      RateEstimate& slot =
          i % 2 == 0 ? rates.keep_one_even : rates.keep_one_odd;
      if (slot.trials == trials) continue;
      ++slot.trials;
      slot.successes += out.bits.get(i);
    }
  }
  while (rates.zero_to_one.trials < trials) {
    const BitVector out =
        perturb(zeros, RngSeed{seed.seed, DeriveSeed(seed.stream, stream++)});
    const std::uint64_t take =
        std::min<std::uint64_t>(chunk, trials - rates.zero_to_one.trials);
    for (std::size_t i = 0; i < take; ++i) {
      rates.zero_to_one.successes += out.bits.get(i);
    }
    rates.zero_to_one.trials += take;
  }
  return rates;
}

}  // namespace

std::string_view ProtocolName(Protocol protocol) {
  switch (protocol) {
    case Protocol::kOme:
      return "ome";
    case Protocol::kSue:
      return "sue";
    case Protocol::kOue:
      return "oue";
  }
  return "?";
}

Protocol ParseProtocol(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "ome") return Protocol::kOme;
  if (lower == "sue") return Protocol::kSue;
  if (lower == "oue") return Protocol::kOue;
  Fail(ErrorCode::kParameter, "unknown protocol '" + std::string(name) +
                                  "' (expected ome, sue or oue)");
}

OmeParams ComputeOmeParams(double epsilon, double lambda,
                           std::size_t sensitivity) {
  CheckEpsilon(epsilon);
  if (!(lambda >= 1.0) || !std::isfinite(lambda)) {
    Fail(ErrorCode::kParameter, "lambda must be finite and >= 1");
  }
  if (sensitivity == 0 || sensitivity % 2 != 0) {
    Fail(ErrorCode::kParameter, "sensitivity r*l must be even and positive");
  }
  OmeParams params;
  params.epsilon = epsilon;
  params.lambda = lambda;
  params.sensitivity = sensitivity;
  params.p1 = lambda / (1.0 + lambda);
  params.p2 = 1.0 / (1.0 + lambda * lambda * lambda);
  params.q = 1.0 / (1.0 + lambda * std::exp(epsilon /
                                            static_cast<double>(sensitivity)));
  if (!OpenUnit(params.p1) || !OpenUnit(params.p2) || !OpenUnit(params.q)) {
    Fail(ErrorCode::kParameter,
         "lambda too large: randomization probabilities leave (0, 1)");
  }
  return params;
}

UeParams ComputeSueParams(double epsilon, std::size_t delta_f) {
  UeParams params = UeBase(Protocol::kSue, epsilon, delta_f);
  params.p = 1.0 - params.q;
  return params;
}

UeParams ComputeOueParams(double epsilon, std::size_t delta_f) {
  UeParams params = UeBase(Protocol::kOue, epsilon, delta_f);
  params.p = 0.5;
  return params;
}

BitVector PerturbOme(const BitVector& bits, const OmeParams& params,
                     RngSeed seed) {
  if (bits.bits.size() != params.sensitivity) {
    Fail(ErrorCode::kShape, "bit vector has " +
                                std::to_string(bits.bits.size()) +
                                " bits, OME parameters expect " +
                                std::to_string(params.sensitivity));
  }
  return Perturb(
      bits, [&params](std::size_t i) { return params.KeepOneProbability(i); },
      params.q, seed);
}

BitVector PerturbUe(const BitVector& bits, const UeParams& params,
                    RngSeed seed) {
  if (bits.bits.empty()) Fail(ErrorCode::kShape, "cannot perturb empty bits");
  const double p = params.p;
  return Perturb(bits, [p](std::size_t) { return p; }, params.q, seed);
}

double PairedProductEpsilon(const OmeParams& params) {
  const double zero_term = -LogOdds(params.q);  // ln((1-q)/q)
  const double even = LogOdds(params.p1) + zero_term;
  const double odd = LogOdds(params.p2) + zero_term;
  return 0.5 * static_cast<double>(params.sensitivity) * (even + odd);
}

double AuditMaxLogRatio(std::span<const double> keep_one_probability,
                        double q) {
  if (!OpenUnit(q)) Fail(ErrorCode::kParameter, "q must lie in (0, 1)");
  const double log_q = std::log(q);
  const double log_not_q = std::log1p(-q);
  double total = 0.0;
  for (const double p : keep_one_probability) {
    if (!OpenUnit(p)) Fail(ErrorCode::kParameter, "p must lie in (0, 1)");
    const double one_ratio = std::fabs(std::log(p) - log_q);
    const double zero_ratio = std::fabs(log_not_q - std::log1p(-p));
    total += std::max(one_ratio, zero_ratio);
  }
  return total;
}

double AuditMaxLogRatio(const OmeParams& params) {
  std::vector<double> keep(params.sensitivity);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    keep[i] = params.KeepOneProbability(i);
  }
  return AuditMaxLogRatio(keep, params.q);
}

double AuditMaxLogRatio(const UeParams& params) {
  const std::vector<double> keep(params.sensitivity, params.p);
  return AuditMaxLogRatio(keep, params.q);
}

double RateEstimate::standard_error() const noexcept {
  if (trials == 0) return 0.0;
  const double p = value();
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

FlipRates EmpiricalFlipRates(const OmeParams& params, std::uint64_t trials,
                             RngSeed seed) {
  return Tally(params.sensitivity, trials, seed,
               [&params](const BitVector& in, RngSeed s) {
                 return PerturbOme(in, params, s);
               });
}

FlipRates EmpiricalFlipRates(const UeParams& params, std::uint64_t trials,
                             RngSeed seed) {
  constexpr std::size_t kChunk = 1024;
  return Tally(kChunk, trials, seed, [&params](const BitVector& in, RngSeed s) {
    return PerturbUe(in, params, s);
  });
}

}  // namespace ldprepr
