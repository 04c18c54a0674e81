// SPDX-License-Identifier: Apache-2.0
#include "tagsplit/analytic.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "tagsplit/errors.hpp"

namespace tagsplit {
namespace {

TEST(DeriveGeometry, OneMegabyteEightWay40Bit) {
  const TagGeometry g = derive_geometry({40, 1u << 20, 64, 8});
  EXPECT_EQ(g.sets, 2048u);
  EXPECT_EQ(g.index_bits, 11u);
  EXPECT_EQ(g.offset_bits, 6u);
  EXPECT_EQ(g.tag_bits, 23u);
}

TEST(DeriveGeometry, MatchesDivisionOracle) {
  for (unsigned addr : {32u, 40u, 48u, 64u}) {
    for (std::uint64_t size = 256u << 10; size <= (128u << 20); size *= 2) {
      for (std::uint64_t assoc = 1; assoc <= 512; assoc *= 2) {
        const CacheConfig c{addr, size, 64, assoc};
        const std::uint64_t sets = size / (64 * assoc);
        const unsigned tag = addr - oracle::log2_by_division(sets) - oracle::log2_by_division(64);
        const TagGeometry g = derive_geometry(c);
        EXPECT_EQ(g.sets, sets);
        EXPECT_EQ(g.tag_bits, tag) << c.cache_size << "/" << c.associativity << "/" << c.address_bits;
      }
    }
  }
}

TEST(DeriveGeometry, QuarterMegabyteFourWay32Bit) {
  EXPECT_EQ(derive_geometry({32, 256u << 10, 64, 4}).tag_bits, 16u);
}

TEST(DeriveGeometry, RejectsAddressTooShortForGeometry) {
  try {
    derive_geometry({16, 1u << 20, 64, 2});
    FAIL() << "expected InvalidInput";
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("tag length not positive"), std::string::npos);
  }
}

TEST(DeriveGeometry, RejectsMalformedShapes) {
  EXPECT_THROW(derive_geometry({40, 3u << 20, 64, 8}), InvalidInput);
  EXPECT_THROW(derive_geometry({40, 1u << 20, 48, 8}), InvalidInput);
  EXPECT_THROW(derive_geometry({40, 1u << 20, 64, 6}), InvalidInput);
  EXPECT_THROW(derive_geometry({40, 1u << 20, 64, 0}), InvalidInput);
  EXPECT_THROW(derive_geometry({40, 4096, 64, 128}), InvalidInput);
  EXPECT_THROW(derive_geometry({15, 1u << 20, 64, 8}), InvalidInput);
  EXPECT_THROW(derive_geometry({129, 1u << 20, 64, 8}), InvalidInput);
  // Fully associative is fine: one set, no index bits.
  EXPECT_EQ(derive_geometry({40, 4096, 64, 64}).index_bits, 0u);
}

TEST(BaselineBits, Products) {
  EXPECT_EQ(baseline_bits(23, 8), 184.0);
  EXPECT_EQ(baseline_bits(48, 4), 192.0);
  EXPECT_EQ(baseline_bits(1, 1), 1.0);
  EXPECT_THROW(baseline_bits(0, 4), InvalidInput);
}

TEST(MatchProbability, PowersOfTwo) {
  EXPECT_EQ(match_probability(0), 1.0);
  EXPECT_EQ(match_probability(4), 0.0625);
  EXPECT_EQ(match_probability(10), 1.0 / 1024);
}

TEST(ExpectedMatchedWays, BinomialMean) {
  EXPECT_NEAR(expected_matched_ways(8, 4), 0.5, 1e-15);
  EXPECT_NEAR(expected_matched_ways(4, 1), 2.0, 1e-15);
  for (std::uint64_t x : {1u, 2u, 7u, 512u}) EXPECT_EQ(expected_matched_ways(x, 0), double(x));
}

TEST(ExpectedMatchedWays, AgreesWithLgammaOracleAndStaysInRange) {
  for (std::uint64_t x : {1u, 2u, 3u, 8u, 13u, 64u, 200u, 512u}) {
    for (unsigned k = 0; k <= 40; ++k) {
      const double got = expected_matched_ways(x, k);
      EXPECT_GE(got, 0.0);
      EXPECT_LE(got, double(x));
      const double want = static_cast<double>(oracle::binomial_mean(x, k));
      EXPECT_NEAR(got, want, 1e-10 * double(x)) << "x=" << x << " k=" << k;
    }
  }
  EXPECT_LT(expected_matched_ways(512, 60), 1e-15);
}

TEST(ExpectedReads, TwentyThreeBitTagEightWayK4) {
  const SplitEval e = expected_reads(23, 8, 4);
  EXPECT_EQ(e.k, 4u);
  EXPECT_DOUBLE_EQ(e.first_step_bits, 32.0);
  EXPECT_NEAR(e.expected_second_step_bits, 9.5, 1e-12);
  EXPECT_NEAR(e.total_bits, 41.5, 1e-12);
  EXPECT_NEAR(e.reduction_ratio, 41.5 / 184.0, 1e-12);
  EXPECT_NEAR(e.reduction_ratio, 0.2255, 1e-4);
}

TEST(ExpectedReads, MonteCarloOracle) {
  // Uniformly random k-bit prefixes: request vs. 8 resident tags.
  constexpr unsigned n = 23, k = 4, x = 8;
  constexpr int trials = 1'000'000;
  std::mt19937_64 rng(20240601);
  double sum = 0.0, sum_sq = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto req = rng() & 0xf;
    int matches = 0;
    for (unsigned w = 0; w < x; ++w) matches += (rng() & 0xf) == req;
    const double bits = k * x + double(n - k) * matches;
    sum += bits;
    sum_sq += bits * bits;
  }
  const double mean = sum / trials;
  const double se = std::sqrt((sum_sq / trials - mean * mean) / trials);
  EXPECT_NEAR(expected_reads(n, x, k).total_bits, mean, 3.0 * se);
}

TEST(ExpectedReads, DegenerateSplitsEqualBaseline) {
  for (unsigned n : {1u, 2u, 23u, 64u}) {
    for (std::uint64_t x : {1u, 8u, 512u}) {
      EXPECT_NEAR(expected_reads(n, x, 0).total_bits, double(n * x), 1e-9);
      EXPECT_EQ(expected_reads(n, x, n).total_bits, double(n * x));
      EXPECT_EQ(expected_reads(n, x, n).reduction_ratio, 1.0);
    }
  }
}

TEST(ExpectedReads, RejectsSplitBeyondTag) { EXPECT_THROW(expected_reads(23, 8, 24), InvalidInput); }

TEST(ExpectedReads, InteriorSplitsBeatBaseline) {
  for (unsigned n = 2; n <= 64; ++n) {
    for (unsigned k = 1; k < n; ++k) {
      EXPECT_LT(expected_reads(n, 4, k).total_bits, double(n * 4)) << n << ' ' << k;
    }
  }
}

TEST(ExpectedReads, AssociativityFactorsOut) {
  for (unsigned n : {8u, 23u, 48u}) {
    for (unsigned k = 0; k <= n; ++k) {
      const double unit = expected_total_closed_form(n, 1, k);
      for (std::uint64_t x = 2; x <= 512; x *= 2) {
        // Scaling by a power of two is exact in binary floating point.
        EXPECT_EQ(expected_total_closed_form(n, x, k), double(x) * unit);
        EXPECT_NEAR(expected_reads(n, x, k).total_bits, double(x) * unit, 1e-12 * double(n * x));
      }
    }
  }
}

TEST(Derivatives, FrozenFiniteDifferenceValues) {
  // mpmath numerical differentiation of the real-k relaxation.
  EXPECT_NEAR(first_derivative(23, 8, 4.0), 0.91510178468051956, 1e-12);
  EXPECT_NEAR(first_derivative(23, 8, 3.0), -6.8629436111989062, 1e-12);
  EXPECT_NEAR(second_derivative(40, 16, 5.0), 9.1010749241284702, 1e-12);
  EXPECT_NEAR(second_derivative(23, 8, 1.0), 47.825042669281288, 1e-11);
  EXPECT_NEAR(second_derivative(23, 8, 22.9), 1.466071306746782698e-6, 1e-18);
  EXPECT_GT(second_derivative(23, 8, 22.9), 0.0);
}

TEST(Derivatives, MatchCentralDifferences) {
  for (unsigned n : {8u, 23u, 40u, 64u}) {
    for (std::uint64_t x : {1u, 8u, 512u}) {
      for (double k = 0.5; k < n - 0.5; k += 0.75) {
        auto f = [&](double kk) { return oracle::total(n, double(x), kk); };
        const double fd1 = oracle::central_difference(f, k, 1e-5);
        const double d1 = first_derivative(n, x, k);
        EXPECT_NEAR(d1, fd1, 1e-6 * std::max(1.0, std::abs(d1))) << n << ' ' << x << ' ' << k;

        auto g = [&](double kk) { return first_derivative(n, x, kk); };
        const double fd2 = oracle::central_difference(g, k, 1e-5);
        const double d2 = second_derivative(n, x, k);
        EXPECT_NEAR(d2, fd2, 1e-6 * std::max(1.0, std::abs(d2))) << n << ' ' << x << ' ' << k;
      }
    }
  }
}

TEST(Derivatives, SignAroundOptimumAndDomain) {
  EXPECT_LT(first_derivative(23, 8, 3.0), 0.0);
  EXPECT_GT(first_derivative(23, 8, 4.0), 0.0);
  EXPECT_THROW(first_derivative(23, 8, 0.0), InvalidInput);
  EXPECT_THROW(second_derivative(23, 8, 23.0), InvalidInput);
}

}  // namespace
}  // namespace tagsplit
