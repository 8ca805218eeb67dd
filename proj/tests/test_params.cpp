/* Copyright 2026 The dsieve Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include "dsieve/error.hpp"
#include "dsieve/params.hpp"
#include "dsieve/sequence.hpp"
#include "oracle.hpp"

namespace dsieve {
namespace {

const GrowthSequence& square() {
  static const GrowthSequence s = make_polynomial({1, 0, 0});
  return s;
}

double to_d(const oracle::Float& x) { return x.convert_to<double>(); }

TEST(C, MatchesOracleForGammaOneAndTwo) {
  const Enclosure c2 = c_of_gamma(2), c1 = c_of_gamma(1);
  EXPECT_NEAR(c2.approx(), to_d(oracle::c_of(2, 1)), 1e-12);
  EXPECT_NEAR(c1.approx(), to_d(oracle::c_of(1, 1)), 1e-12);
  EXPECT_NEAR(c2.approx(), 54.97744391, 1e-8);
  EXPECT_NEAR(c1.approx(), 65.91673732, 1e-8);
  EXPECT_LT(c2.hi, c1.lo);
  EXPECT_LT(c2.width(), pow2q(-100));
}

TEST(C, RejectsNonPositiveGamma) {
  EXPECT_THROW(c_of_gamma(0), DomainError);
  EXPECT_THROW(c_of_gamma(-1), DomainError);
}

TEST(Delta, MatchesOracle) {
  const SieveParams p = SieveParams::paper(2);
  const oracle::Float c = oracle::c_of(2, 1);
  for (const Index n : {2, 3, 100, 10'000, 123'457}) {
    const Enclosure d = delta(p, n);
    EXPECT_NEAR(d.approx() / to_d(oracle::delta(c, n)), 1.0, 1e-14) << n;
    EXPECT_LE(d.width(), d.hi * pow2q(-64)) << n;
  }
  EXPECT_NEAR(delta(p, 100).approx(), 3.950e-5, 1e-8);
  EXPECT_NEAR(delta(p, 10'000).approx(), 1.975e-7, 1e-10);
  EXPECT_THROW(delta(p, 1), DomainError);
}

TEST(Delta, StrictlyDecreasingAndScaleIdentity) {
  const SieveParams p = SieveParams::paper(2);
  const Enclosure inv_c = reciprocal(p.c);
  Enclosure prev = delta(p, 3);
  for (Index n = 4; n < 3000; ++n) {
    const Enclosure d = delta(p, n);
    ASSERT_LT(d.hi, prev.lo) << n;
    // n ln n delta_n = 1/c up to enclosure width
    const Enclosure k = d * n_log_n(n, p.precision);
    ASSERT_LE(k.lo, inv_c.hi);
    ASSERT_GE(k.hi, inv_c.lo);
    prev = d;
  }
}

TEST(HPaper, KnownValues) {
  const SieveParams p2 = SieveParams::paper(2), p1 = SieveParams::paper(1);
  EXPECT_EQ(h_paper(p2, 100), 4606);
  EXPECT_EQ(h_paper(p1, 2), 3);  // ceil(1.92) = 2, forced to n + 1
  EXPECT_EQ(h_paper(p2, 4606), oracle::h_paper(2, 1, 4606));
  for (const Index n : {2, 3, 17, 250, 9999}) {
    EXPECT_EQ(h_paper(p2, n), oracle::h_paper(2, 1, n)) << n;
    EXPECT_EQ(h_paper(p1, n), oracle::h_paper(1, 1, n)) << n;
    EXPECT_EQ(h_paper(SieveParams::paper(Rational(3, 2)), n), oracle::h_paper(3, 2, n)) << n;
  }
  EXPECT_THROW(h_paper(p2, 1), DomainError);
}

TEST(HEffective, SmallCaseByScan) {
  const SieveParams p = SieveParams::paper(2);
  EXPECT_EQ(h_effective(p, square(), 2), 18);
  EXPECT_EQ(h_effective(p, square(), 32), oracle::h_eff_square(oracle::c_of(2, 1), 32));
  EXPECT_EQ(h_effective(p, square(), 32), 2499);
}

TEST(HEffective, MinimalAndAgreesWithOracle) {
  const SieveParams p = SieveParams::paper(2);
  const oracle::Float c = oracle::c_of(2, 1);
  for (Index n = 2; n <= 400; n += 7) {
    const Index m = h_effective(p, square(), n);
    ASSERT_GT(m, n);
    ASSERT_EQ(m, oracle::h_eff_square(c, n)) << n;
    ASSERT_TRUE(depth_gap_holds(p, square(), n, m)) << n;
    ASSERT_FALSE(depth_gap_holds(p, square(), n, m - 1)) << n;
  }
}

TEST(HEffective, IndexCapIsCapacityError) {
  SieveParams p = SieveParams::paper(2);
  p.index_cap = 1000;
  EXPECT_THROW(h_effective(p, square(), 32), CapacityError);
}

TEST(Level, KnownValues) {
  const SieveParams p = SieveParams::paper(2);
  EXPECT_EQ(dyadic_level(p, square(), 100), 28);
  EXPECT_EQ(dyadic_level(p, square(), 10'000), 49);
  EXPECT_EQ(dyadic_level(p, square(), 32), 23);
  EXPECT_THROW(dyadic_level(p, square(), 1), DomainError);
}

TEST(Level, AgreesWithOracleAndIsMonotone) {
  const SieveParams p = SieveParams::paper(2);
  const oracle::Float c = oracle::c_of(2, 1);
  int prev = 0;
  for (Index n = 2; n <= 5000; n += 3) {
    const int l = dyadic_level(p, square(), n);
    ASSERT_EQ(l, oracle::level_square(c, n)) << n;
    ASSERT_GE(l, prev) << n;
    prev = l;
  }
}

TEST(Level, BracketsTheArgument) {
  const SieveParams p = SieveParams::paper(2);
  for (Index n = 2; n <= 2000; ++n) {
    const int l = dyadic_level(p, square(), n);
    const Enclosure arg = level_argument(p, square(), n, 192);
    ASSERT_GE(arg.lo, pow2q(l)) << n;
    ASSERT_LT(arg.hi, pow2q(l + 1)) << n;
  }
}

TEST(Ladder, PaperAndEffectiveExamples) {
  SieveParams p = SieveParams::paper(2);
  p.h_mode = HMode::paper;
  const Ladder a = build_ladder(p, square(), 100, 2);
  ASSERT_EQ(a.size(), 3u);
  EXPECT_EQ(a[0], 100);
  EXPECT_EQ(a[1], 4606);
  EXPECT_EQ(a[2], oracle::h_paper(2, 1, 4606));

  p.h_mode = HMode::effective;
  const Ladder b = build_ladder(p, square(), 2, 1);
  EXPECT_EQ(b.entries, (std::vector<Index>{2, 18}));

  const Ladder c = build_ladder(p, square(), 32, 0);
  EXPECT_EQ(c.entries, (std::vector<Index>{32}));

  const Ladder d = build_ladder(p, square(), 32, 3);
  EXPECT_EQ(d.entries, (std::vector<Index>{32, 2499, 2590874, 118827042138}));
}

TEST(Ladder, CapNamesTheOffendingStep) {
  SieveParams p = SieveParams::paper(2);
  p.index_cap = 10'000'000;
  try {
    (void)build_ladder(p, square(), 32, 3);
    FAIL() << "expected a capacity error";
  } catch (const CapacityError& e) {
    EXPECT_NE(std::string(e.what()).find("k=3"), std::string::npos) << e.what();
  }
}

TEST(CheckLadder, EffectiveAlwaysPassesDepthGap) {
  const SieveParams p = SieveParams::paper(2);
  const LadderReport r = check_ladder(p, square(), build_ladder(p, square(), 32, 3));
  EXPECT_TRUE(r.depth_gap_pass);
  ASSERT_EQ(r.steps.size(), 3u);
  for (const auto& s : r.steps) EXPECT_GT(s.log_ratio, 1.0);
}

TEST(CheckLadder, PaperStepFailsDepthGap) {
  // (4606/100)^2 = 2121.5 < 1/delta_100 = 25318
  SieveParams p = SieveParams::paper(2);
  p.h_mode = HMode::paper;
  const LadderReport r = check_ladder(p, square(), build_ladder(p, square(), 100, 1));
  ASSERT_EQ(r.steps.size(), 1u);
  EXPECT_FALSE(r.steps[0].depth_gap);
  EXPECT_FALSE(r.depth_gap_pass);
  EXPECT_TRUE(r.steps[0].growth_lower);
}

TEST(CheckLadder, SingleEntryIsVacuous) {
  const SieveParams p = SieveParams::paper(2);
  const LadderReport r = check_ladder(p, square(), Ladder{{32}, HMode::effective});
  EXPECT_TRUE(r.steps.empty());
  EXPECT_TRUE(r.growth_pass);
  EXPECT_TRUE(r.depth_gap_pass);
}

TEST(Omega, Examples) {
  EXPECT_EQ(omega(2, Rational(3, 5), Rational(1, 100)), Rational(-141, 500));
  EXPECT_EQ(omega(2, Rational(2, 3), Rational(1, 100)), Rational(1, 50));
  EXPECT_EQ(omega(1, Rational(1, 2), 0), 0);
}

TEST(Omega, SignAtZeroEps2MatchesThreshold) {
  for (const Rational gamma : {Rational(1), Rational(2), Rational(7, 3)}) {
    const Rational threshold = gamma / (gamma + 1);
    for (int k = 1; k < 40; ++k) {
      const Rational v(k, 40);
      EXPECT_EQ(omega(gamma, v, 0) < 0, v < threshold) << v.get_str();
    }
    EXPECT_EQ(v_position(gamma, threshold), VPosition::boundary);
    EXPECT_EQ(v_position(gamma, threshold / 2), VPosition::below);
  }
}

TEST(Series, ReportShapeAndVerdict) {
  const SieveParams p = SieveParams::paper(2);
  const Ladder l = build_ladder(p, square(), 32, 3);
  const SeriesReport r = series_report(p, square(), l, Rational(3, 5));
  EXPECT_EQ(r.omega, Rational(-141, 500));
  ASSERT_EQ(r.terms.size(), 2u);
  EXPECT_EQ(r.terms[0].k, 2);
  EXPECT_TRUE(r.verdict == "convergent-trend" || r.verdict == "not-convergent");
  EXPECT_THROW(series_report(p, square(), l, Rational(1)), DomainError);
}

}  // namespace
}  // namespace dsieve
