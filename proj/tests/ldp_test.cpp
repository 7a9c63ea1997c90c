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
#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "ldprepr/error.hpp"

namespace ldprepr {
namespace {

ErrorCode CodeOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an ldprepr::Error";
  return ErrorCode::kIo;
}

// Binomial 3-sigma band around n*p.
void ExpectWithinThreeSigma(std::uint64_t successes, std::uint64_t n,
                            double p) {
  const double mean = static_cast<double>(n) * p;
  const double sigma = std::sqrt(static_cast<double>(n) * p * (1.0 - p));
  EXPECT_LE(std::fabs(static_cast<double>(successes) - mean), 3.0 * sigma)
      << "successes=" << successes << " expected=" << mean;
}

// Plotted probability series for r*l = 550.
TEST(OmeParamsTest, MatchesPlottedSeries) {
  const OmeParams a = ComputeOmeParams(1.0, 100.0, 50, 11);
  EXPECT_NEAR(a.p1, 0.99009900990099, 1e-12);
  EXPECT_NEAR(a.p2, 9.99999000001e-7, 1e-12);
  EXPECT_NEAR(a.q, 0.00988318240762078, 1e-12);

  const OmeParams b = ComputeOmeParams(1.0, 1.0, 550);
  EXPECT_EQ(b.p1, 0.5);
  EXPECT_EQ(b.p2, 0.5);
  EXPECT_NEAR(b.q, 0.499545454670674, 1e-12);

  const OmeParams c = ComputeOmeParams(1.0, 10.0, 550);
  EXPECT_NEAR(c.p1, 0.909090909090909, 1e-12);
  EXPECT_NEAR(c.p2, 0.000999000999000999, 1e-12);
  EXPECT_NEAR(c.q, 0.0907589396730121, 1e-12);

  EXPECT_NEAR(ComputeOmeParams(10.0, 100.0, 550).q, 0.00972433348803029,
              1e-12);
}

TEST(OmeParamsTest, Errors) {
  EXPECT_EQ(CodeOf([] { ComputeOmeParams(0.0, 10.0, 500); }),
            ErrorCode::kParameter);
  EXPECT_EQ(CodeOf([] { ComputeOmeParams(-1.0, 10.0, 500); }),
            ErrorCode::kParameter);
  EXPECT_EQ(CodeOf([] { ComputeOmeParams(1.0, 0.5, 500); }),
            ErrorCode::kParameter);
  EXPECT_EQ(CodeOf([] { ComputeOmeParams(1.0, 10.0, 501); }),
            ErrorCode::kParameter);
  EXPECT_EQ(CodeOf([] { ComputeOmeParams(1.0, 10.0, 0); }),
            ErrorCode::kParameter);
  // lambda^3 overflows: p2 would be exactly 0.
  EXPECT_EQ(CodeOf([] { ComputeOmeParams(1.0, 1e200, 500); }),
            ErrorCode::kParameter);
}

TEST(OmeParamsTest, MonotoneInLambdaAndEpsilon) {
  const std::vector<double> lambdas{1, 2, 5, 10, 50, 100, 1000};
  const std::vector<double> epsilons{0.1, 0.5, 1, 5, 10, 50};
  for (const std::size_t rl : {500u, 550u, 1000u}) {
    for (const double eps : epsilons) {
      for (std::size_t i = 1; i < lambdas.size(); ++i) {
        const OmeParams lo = ComputeOmeParams(eps, lambdas[i - 1], rl);
        const OmeParams hi = ComputeOmeParams(eps, lambdas[i], rl);
        EXPECT_LT(hi.q, lo.q);
        EXPECT_GT(hi.p1, lo.p1);
        EXPECT_LT(hi.p2, lo.p2);
      }
    }
    for (const double lambda : lambdas) {
      for (std::size_t i = 1; i < epsilons.size(); ++i) {
        EXPECT_LT(ComputeOmeParams(epsilons[i], lambda, rl).q,
                  ComputeOmeParams(epsilons[i - 1], lambda, rl).q);
      }
      const OmeParams p = ComputeOmeParams(1.0, lambda, rl);
      EXPECT_GT(p.p1, 0.0);
      EXPECT_LT(p.p1, 1.0);
      EXPECT_GT(p.p2, 0.0);
      EXPECT_LT(p.p2, 1.0);
      EXPECT_GT(p.q, 0.0);
      EXPECT_LT(p.q, 1.0);
    }
  }
}

TEST(UeParamsTest, SueMatchesPlottedSeries) {
  EXPECT_NEAR(ComputeSueParams(1.0, 100).q, 0.497500020833125, 1e-12);
  EXPECT_NEAR(ComputeSueParams(0.5, 100).q, 0.49875000260416, 1e-12);
  for (const double eps : {0.01, 0.5, 1.0, 5.0, 10.0, 100.0}) {
    for (const std::size_t df : {1u, 2u, 100u, 1536u}) {
      const UeParams p = ComputeSueParams(eps, df);
      EXPECT_EQ(p.p + p.q, 1.0);
      EXPECT_EQ(p.variant, Protocol::kSue);
    }
  }
}

TEST(UeParamsTest, SueNoPrivacyLimit) {
  const UeParams p = ComputeSueParams(200.0, 1);
  EXPECT_EQ(p.p, 1.0);
  EXPECT_LT(p.q, 1e-80);
}

TEST(UeParamsTest, Oue) {
  const UeParams a = ComputeOueParams(1.0, 100);
  EXPECT_EQ(a.p, 0.5);
  // Closed form with the exponent evaluated separately.
  EXPECT_NEAR(a.q, 1.0 / (1.0 + std::exp(0.01)), 1e-15);
  EXPECT_NEAR(a.q, 0.497500020833125, 1e-12);
  EXPECT_NEAR(ComputeOueParams(10.0, 100).q, 0.47502081252106, 1e-12);
  EXPECT_NEAR(ComputeOueParams(1e-9, 100).q, 0.5, 1e-10);
}

TEST(UeParamsTest, Errors) {
  EXPECT_EQ(CodeOf([] { ComputeSueParams(0.0, 100); }), ErrorCode::kParameter);
  EXPECT_EQ(CodeOf([] { ComputeSueParams(1.0, 0); }), ErrorCode::kParameter);
  EXPECT_EQ(CodeOf([] { ComputeOueParams(-2.0, 100); }), ErrorCode::kParameter);
}

TEST(PairedProductEpsilonTest, RecoversEpsilon) {
  EXPECT_NEAR(PairedProductEpsilon(ComputeOmeParams(1, 100, 550)), 1.0, 1e-9);
  EXPECT_NEAR(PairedProductEpsilon(ComputeOmeParams(0.5, 100, 550)), 0.5, 1e-9);
  EXPECT_NEAR(PairedProductEpsilon(ComputeOmeParams(5, 50, 500)), 5.0, 1e-9);
  for (const double eps : {0.5, 1.0, 5.0, 10.0}) {
    for (const double lambda : {1.0, 10.0, 50.0, 100.0}) {
      for (const std::size_t rl : {500u, 550u, 1000u}) {
        EXPECT_NEAR(PairedProductEpsilon(ComputeOmeParams(eps, lambda, rl)),
                    eps, 1e-9)
            << eps << " " << lambda << " " << rl;
      }
    }
  }
}

// Largest |log ratio| over the four single-bit transitions of one position.
double SingleBitWorstCase(double keep_one, double q) {
  const double ratios[] = {keep_one / q, q / keep_one,
                           (1 - keep_one) / (1 - q), (1 - q) / (1 - keep_one)};
  double worst = 0.0;
  for (const double r : ratios) worst = std::max(worst, std::fabs(std::log(r)));
  return worst;
}

TEST(AuditTest, Examples) {
  const std::vector<double> same(10, 0.3);
  EXPECT_EQ(AuditMaxLogRatio(same, 0.3), 0.0);

  const double e = std::exp(1.0);
  const std::vector<double> one{e / (1 + e)};
  EXPECT_NEAR(AuditMaxLogRatio(one, 1 / (1 + e)), 1.0, 1e-12);

  const OmeParams p = ComputeOmeParams(1, 100, 550);
  const double oracle =
      275 * SingleBitWorstCase(p.p1, p.q) + 275 * SingleBitWorstCase(p.p2, p.q);
  EXPECT_NEAR(AuditMaxLogRatio(p), oracle, 1e-9 * oracle);
  EXPECT_NEAR(AuditMaxLogRatio(p), 3796.5, 0.5);
  // The per-bit worst case is far above the budget at these settings.
  EXPECT_GT(AuditMaxLogRatio(p), PairedProductEpsilon(p));
}

TEST(AuditTest, UeMatchesEnumeration) {
  const UeParams p = ComputeSueParams(1.0, 100);
  EXPECT_NEAR(AuditMaxLogRatio(p), 100 * SingleBitWorstCase(p.p, p.q), 1e-12);
  EXPECT_NEAR(AuditMaxLogRatio(p), 1.0, 1e-12);
}

TEST(AuditTest, RejectsProbabilitiesOutsideUnitInterval) {
  EXPECT_EQ(CodeOf([] { AuditMaxLogRatio(std::vector<double>{1.0}, 0.5); }),
            ErrorCode::kParameter);
  EXPECT_EQ(CodeOf([] { AuditMaxLogRatio(std::vector<double>{0.5}, 0.0); }),
            ErrorCode::kParameter);
}

TEST(PerturbOmeTest, DegenerateProbabilities) {
  OmeParams p;
  p.sensitivity = 16;
  p.p1 = 1.0;
  p.p2 = 0.0;
  p.q = 0.0;
  const BitVector in{3, PackedBits::FromString("1111111100000000")};
  const BitVector out = PerturbOme(in, p, RngSeed{1, 2});
  EXPECT_EQ(out.bits.to_string(), "1010101000000000");
  EXPECT_EQ(out.label, 3);
}

TEST(PerturbOmeTest, ZeroFlipRateOnAMillionBits) {
  OmeParams p = ComputeOmeParams(1, 100, 550);
  p.sensitivity = 1'000'000;
  const BitVector in{0, PackedBits(1'000'000)};
  const BitVector out = PerturbOme(in, p, RngSeed{2024, 0});
  EXPECT_EQ(out.bits.size(), 1'000'000u);
  ExpectWithinThreeSigma(out.bits.count(), 1'000'000, 0.00988318240762078);
}

TEST(PerturbOmeTest, FrozenReferenceOutput) {
  const OmeParams p = ComputeOmeParams(1.0, 10.0, 64);
  const BitVector in{1, PackedBits::FromString(
                            "1111000011110000111100001111000011110000111100001"
                            "111000011110000")};
  const BitVector out = PerturbOme(in, p, RngSeed{42, 0});
  EXPECT_EQ(out.bits.to_string(),
            "1010000000101000101001001010000010100000101000001010000010100000");
  EXPECT_EQ(out, PerturbOme(in, p, RngSeed{42, 0}));
  EXPECT_NE(out, PerturbOme(in, p, RngSeed{42, 1}));
}

TEST(PerturbOmeTest, LengthMismatchIsShapeError) {
  const OmeParams p = ComputeOmeParams(1.0, 10.0, 64);
  const BitVector in{0, PackedBits(62)};
  EXPECT_EQ(CodeOf([&] { PerturbOme(in, p, RngSeed{}); }), ErrorCode::kShape);
}

TEST(PerturbUeTest, DegenerateProbabilities) {
  const BitVector in{1, PackedBits::FromString("1100101000111")};
  UeParams identity;
  identity.p = 1.0;
  identity.q = 0.0;
  EXPECT_EQ(PerturbUe(in, identity, RngSeed{1, 0}), in);

  UeParams complement;
  complement.p = 0.0;
  complement.q = 1.0;
  EXPECT_EQ(PerturbUe(in, complement, RngSeed{1, 0}).bits.to_string(),
            "0011010111000");
}

TEST(PerturbUeTest, KeepRateOnAMillionOnes) {
  const UeParams p = ComputeSueParams(1.0, 100);
  EXPECT_NEAR(p.p, 0.5025, 1e-4);
  const BitVector in{0, PackedBits(1'000'000, true)};
  const BitVector out = PerturbUe(in, p, RngSeed{77, 0});
  ExpectWithinThreeSigma(out.bits.count(), 1'000'000, p.p);
}

TEST(PerturbUeTest, FrozenReferenceOutput) {
  const UeParams p = ComputeSueParams(1.0, 100);
  const BitVector in{1, PackedBits::FromString(
                            "1111000011110000111100001111000011110000111100001"
                            "111000011110000")};
  EXPECT_EQ(PerturbUe(in, p, RngSeed{42, 0}).bits.to_string(),
            "0110101001011110010111101101010010101101010000110110000111011001");
}

TEST(EmpiricalFlipRatesTest, OmeWithinThreeSigma) {
  const OmeParams p = ComputeOmeParams(1, 100, 550);
  const FlipRates rates = EmpiricalFlipRates(p, 1'000'000, RngSeed{9, 0});
  EXPECT_EQ(rates.keep_one_even.trials, 1'000'000u);
  EXPECT_EQ(rates.keep_one_odd.trials, 1'000'000u);
  EXPECT_EQ(rates.zero_to_one.trials, 1'000'000u);
  ExpectWithinThreeSigma(rates.keep_one_even.successes, 1'000'000, p.p1);
  ExpectWithinThreeSigma(rates.keep_one_odd.successes, 1'000'000, p.p2);
  ExpectWithinThreeSigma(rates.zero_to_one.successes, 1'000'000, p.q);
  EXPECT_NEAR(rates.keep_one_even.value(), 0.990099, 3 * 1e-4);
}

TEST(EmpiricalFlipRatesTest, SueWithinThreeSigmaAndDeterministic) {
  const UeParams p = ComputeSueParams(1, 100);
  const FlipRates a = EmpiricalFlipRates(p, 1'000'000, RngSeed{10, 0});
  ExpectWithinThreeSigma(a.zero_to_one.successes, 1'000'000, 0.4975);
  ExpectWithinThreeSigma(a.keep_one_even.successes, 1'000'000, p.p);
  const FlipRates b = EmpiricalFlipRates(p, 1'000'000, RngSeed{10, 0});
  EXPECT_EQ(a.zero_to_one.successes, b.zero_to_one.successes);
  EXPECT_EQ(a.keep_one_even.successes, b.keep_one_even.successes);
  EXPECT_GT(a.zero_to_one.standard_error(), 0.0);
}

TEST(EmpiricalFlipRatesTest, TooFewTrials) {
  const UeParams p = ComputeOueParams(1, 100);
  EXPECT_EQ(CodeOf([&] { EmpiricalFlipRates(p, 9999, RngSeed{}); }),
            ErrorCode::kParameter);
}

TEST(ProtocolTest, NamesRoundTrip) {
  for (const Protocol p : {Protocol::kOme, Protocol::kSue, Protocol::kOue}) {
    EXPECT_EQ(ParseProtocol(ProtocolName(p)), p);
  }
  EXPECT_EQ(ParseProtocol("OME"), Protocol::kOme);
  EXPECT_THROW(ParseProtocol("rappor"), Error);
}

}  // namespace
}  // namespace ldprepr
