#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "apsr/balls_bins.hpp"
#include "apsr/error.hpp"
#include "oracles.hpp"

namespace apsr::bb {
namespace {

TEST(SigmaTest, AllBinsAvailable) { EXPECT_DOUBLE_EQ(sigma(100, 100, 1), 1.0); }

TEST(SigmaTest, NoBinAvailable) { EXPECT_DOUBLE_EQ(sigma(100, 0, 5), 0.0); }

TEST(SigmaTest, HalfAvailableTwoSamplesMatchesEnumeration) {
  // All 100^2 sample pairs enumerated.
  EXPECT_NEAR(oracle::enumerate_sigma(100, 50, 2), 0.75, 1e-12);
  EXPECT_NEAR(sigma(100, 50, 2), 0.75, 1e-15);
}

TEST(SigmaTest, RangeViolationsThrow) {
  EXPECT_THROW((void)sigma(0, 0, 1), ArgumentError);
  EXPECT_THROW((void)sigma(10, 11, 1), ArgumentError);
  EXPECT_THROW((void)sigma(10, 5, -1), ArgumentError);
}

TEST(BinomPmfTest, DegenerateProbabilities) {
  EXPECT_DOUBLE_EQ(binom_pmf(0, 7, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(binom_pmf(7, 7, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(binom_pmf(3, 7, 0.0), 0.0);
}

TEST(BinomPmfTest, OneSuccessOfTwoFairTrials) {
  // Outcomes HH, HT, TH, TT: exactly one success in 2 of 4.
  int hits = 0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) hits += (a + b == 1);
  }
  EXPECT_DOUBLE_EQ(hits / 4.0, 0.5);
  EXPECT_NEAR(binom_pmf(1, 2, 0.5), 0.5, 1e-15);
}

TEST(BinomPmfTest, FExceedingSIsArgumentError) { EXPECT_THROW((void)binom_pmf(3, 2, 0.5), ArgumentError); }

TEST(BinomPmfTest, StableAndNormalizedForLargeS) {
  for (const double p : {1e-4, 0.3, 0.999}) {
    double total = 0.0;
    for (std::int64_t f = 0; f <= 10000; ++f) {
      const double v = binom_pmf(f, 10000, p);
      ASSERT_TRUE(std::isfinite(v));
      total += v;
    }
    EXPECT_NEAR(total, 1.0, 1e-9) << "p=" << p;
  }
}

TEST(ExpectedHappyGivenFTest, Examples) {
  EXPECT_DOUBLE_EQ(expected_happy_given_f(5, 0), 0.0);
  EXPECT_DOUBLE_EQ(expected_happy_given_f(1, 3), 1.0);
  // Two agents, two bins: assignments (0,0),(0,1),(1,0),(1,1) occupy 1,2,2,1 bins.
  const double enumerated = (1 + 2 + 2 + 1) / 4.0;
  EXPECT_DOUBLE_EQ(enumerated, 1.5);
  EXPECT_NEAR(expected_happy_given_f(2, 2), 1.5, 1e-15);
}

TEST(ExpectedHappyTest, Examples) {
  EXPECT_DOUBLE_EQ(expected_happy({10, 0, 4, 3}), 0.0);
  EXPECT_NEAR(expected_happy({10, 10, 1, 1}), 1.0, 1e-15);
  EXPECT_NEAR(oracle::enumerate_expected_happy(4, 2, 2, 1), 0.875, 1e-15);
  EXPECT_NEAR(expected_happy({4, 2, 2, 1}), 0.875, 1e-15);
}

TEST(ExpectedHappyTest, ZeroSamplesGiveZero) { EXPECT_DOUBLE_EQ(expected_happy({10, 5, 3, 0}), 0.0); }

TEST(ExpectedHappyTest, MatchesEnumerationOnSmallGrid) {
  for (int n = 1; n <= 6; ++n) {
    for (int k = 0; k <= n; ++k) {
      for (int d = 0; d <= 3; ++d) {
        for (int s = 1; s <= 3; ++s) {
          EXPECT_NEAR(expected_happy({n, k, s, d}), oracle::enumerate_expected_happy(n, k, s, d), 1e-12)
              << "n=" << n << " k=" << k << " s=" << s << " d=" << d;
        }
      }
    }
  }
}

TEST(ExpectedHappyTest, AgreesWithGeneratingFunctionRoute) {
  for (std::int64_t n : {7, 50, 837}) {
    for (std::int64_t k : {1L, n / 3, n}) {
      for (std::int64_t s : {1, 9, 60}) {
        for (std::int64_t d : {1, 4, 13}) {
          EXPECT_NEAR(expected_happy({n, k, s, d}), oracle::closed_form_expected_happy(n, k, s, d), 1e-9);
        }
      }
    }
  }
}

TEST(ExpectedHappyProperty, BoundedByAgentsAndBins) {
  for (std::int64_t n : {1, 5, 40}) {
    for (std::int64_t k = 0; k <= n; ++k) {
      for (std::int64_t s : {1, 2, 7, 30}) {
        for (std::int64_t d : {0, 1, 3, 10}) {
          const double e = expected_happy({n, k, s, d});
          EXPECT_GE(e, 0.0);
          EXPECT_LE(e, static_cast<double>(std::min(s, k)) + 1e-12);
        }
      }
    }
  }
}

TEST(ExpectedHappyProperty, NonDecreasingInAvailableBins) {
  for (std::int64_t n : {3, 10, 60}) {
    for (std::int64_t d : {1, 2, 5}) {
      for (std::int64_t s : {1, 3, 12, 40}) {
        for (std::int64_t k = 0; k < n; ++k) {
          EXPECT_GE(expected_happy({n, k + 1, s, d}), expected_happy({n, k, s, d}) - 1e-12)
              << "n=" << n << " k=" << k << " s=" << s << " d=" << d;
        }
      }
    }
  }
}

TEST(ExpectedHappyProperty, NonDecreasingInSamples) {
  for (std::int64_t n : {4, 25, 200}) {
    for (std::int64_t k : {1L, n / 2, n}) {
      for (std::int64_t s : {1, 5, 20}) {
        for (std::int64_t d = 0; d < 12; ++d) {
          EXPECT_GE(expected_happy({n, k, s, d + 1}), expected_happy({n, k, s, d}) - 1e-12);
        }
      }
    }
  }
}

TEST(SatisfySlaTest, FullAvailabilitySingleAgent) {
  for (double dh : {0.0, 0.05, 1.0}) EXPECT_TRUE(satisfy_sla(50, dh, 50, 1, 1));
}

TEST(SatisfySlaTest, NothingAvailable) { EXPECT_FALSE(satisfy_sla(100, 0.05, 0, 1, 10)); }

TEST(SatisfySlaTest, AgreesWithMonteCarloHappyFraction) {
  const Params p{100, 50, 10, 10};
  const auto mc = simulate(p, 100'000, 2024);
  const double analytic = expected_happy(p);
  EXPECT_NEAR(mc.mean_happy, analytic, 3 * mc.se_happy);
  const bool mc_meets = mc.mean_happy / p.s >= 1.0 - 0.05;
  EXPECT_EQ(satisfy_sla(p.n, 0.05, p.k, p.s, p.d), mc_meets);
}

TEST(MaxParalTest, NoAvailableHostsKeepsOneScheduler) {
  EXPECT_EQ(max_paral(100, 0.05, 100, 0), (Config{1, 100}));
}

TEST(MaxParalTest, VacuousSlaIsCappedByBudget) { EXPECT_EQ(max_paral(100, 1.0, 100, 1), (Config{100, 1})); }

TEST(MaxParalTest, FullNfvStudyFleetMatchesScanOracle) {
  const auto scan = oracle::scan_max_paral(279, 0.05, 279, 279);
  const auto got = max_paral(279, 0.05, 279, 279);
  EXPECT_EQ(got.s, scan.s);
  EXPECT_EQ(got.d, scan.d);
  EXPECT_GT(got.s, 1);
}

TEST(MaxParalTest, RandomInstancesKeepBudgetSlaAndMaximality) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const std::int64_t n = std::uniform_int_distribution<std::int64_t>(1, 300)(rng);
    const std::int64_t budget = std::uniform_int_distribution<std::int64_t>(1, n)(rng);
    const std::int64_t k = std::uniform_int_distribution<std::int64_t>(0, n)(rng);
    const double dh = std::uniform_real_distribution<double>(0.0, 0.2)(rng);
    const auto c = max_paral(n, dh, budget, k);
    EXPECT_LE(c.s * c.d, budget);
    if (c.s > 1) EXPECT_TRUE(satisfy_sla(n, dh, k, c.s, c.d));
    const std::int64_t next = c.s + 1;
    EXPECT_TRUE(next > budget || !satisfy_sla(n, dh, k, next, budget / next));
  }
}

TEST(MaxParalTest, RejectsBadArguments) {
  EXPECT_THROW((void)max_paral(10, 0.05, 0, 5), ArgumentError);
  EXPECT_THROW((void)max_paral(10, 1.5, 10, 5), ArgumentError);
  EXPECT_THROW((void)max_paral(10, 0.05, 10, 11), ArgumentError);
}

TEST(SimulateTest, NoAvailableBins) {
  const auto r = simulate({10, 0, 4, 3}, 1000, 1);
  EXPECT_EQ(r.mean_happy, 0.0);
  EXPECT_EQ(r.mean_potentially_happy, 0.0);
}

TEST(SimulateTest, LoneAgentAlwaysHappy) {
  const auto r = simulate({10, 10, 1, 1}, 1000, 1);
  EXPECT_EQ(r.mean_happy, 1.0);
  EXPECT_EQ(r.se_happy, 0.0);
}

TEST(SimulateTest, TwoAgentsFourBinsConvergesToAnalytic) {
  const auto r = simulate({4, 2, 2, 1}, 1'000'000, 99);
  EXPECT_NEAR(r.mean_happy, 0.875, 3 * r.se_happy);
}

TEST(SimulateTest, SameSeedSameResult) {
  const auto a = simulate({30, 9, 5, 3}, 5000, 11);
  const auto b = simulate({30, 9, 5, 3}, 5000, 11);
  EXPECT_EQ(a.mean_happy, b.mean_happy);
  EXPECT_EQ(a.selections, b.selections);
}

TEST(SimulateTest, PotentiallyHappyAgentsPickEachAvailableBinUniformly) {
  const Params p{50, 5, 4, 2};
  const auto r = simulate(p, 200'000, 5);
  const double total = static_cast<double>(r.potentially_happy_total);
  const double expect = 1.0 / static_cast<double>(p.k);
  const double se = std::sqrt(expect * (1 - expect) / total);
  for (std::size_t j = 0; j < r.selections.size(); ++j) {
    EXPECT_NEAR(static_cast<double>(r.selections[j]) / total, expect, 4 * se) << "bin " << j;
  }
  EXPECT_NEAR(r.mean_potentially_happy / p.s, sigma(p.n, p.k, p.d), 4 * r.se_potentially_happy / p.s);
}

}  // namespace
}  // namespace apsr::bb
