// SPDX-License-Identifier: Apache-2.0
#include "tagsplit/cost_models.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "tagsplit/analytic.hpp"
#include "tagsplit/errors.hpp"

namespace tagsplit {
namespace {

CostParams bit_only(double p = 1e-12) {
  CostParams c;
  c.energy = {1e-15, 0.0, 0.0, 1.0};
  c.reliability = {p, 1.0};
  return c;
}

TEST(CostParamsFile, ParsesAllKeys) {
  std::istringstream in(R"({"energy_per_bit_read": 2.5e-15, "fixed_energy_per_access": 1e-12,
                            "leakage_power": 0.004, "execution_time": 0.5,
                            "p_read_disturb": 1E-9})");
  const CostParams p = parse_cost_params(in);
  EXPECT_EQ(p.energy.energy_per_bit_read, 2.5e-15);
  EXPECT_EQ(p.energy.fixed_energy_per_access, 1e-12);
  EXPECT_EQ(p.energy.leakage_power, 0.004);
  EXPECT_EQ(p.energy.execution_time, 0.5);
  EXPECT_EQ(p.reliability.execution_time, 0.5);
  EXPECT_EQ(p.reliability.p_read_disturb, 1e-9);
}

TEST(CostParamsFile, RejectsBadDocuments) {
  auto parse = [](const char* text) {
    std::istringstream in(text);
    return parse_cost_params(in);
  };
  const char* full_prefix = R"("energy_per_bit_read": 1, "fixed_energy_per_access": 0,
                              "leakage_power": 0, "execution_time": 1)";
  EXPECT_THROW(parse("{"), InvalidInput);
  EXPECT_THROW(parse("[1,2]"), InvalidInput);
  EXPECT_THROW(parse((std::string("{") + full_prefix + "}").c_str()), InvalidInput);  // missing p
  EXPECT_THROW(parse((std::string("{") + full_prefix + R"(, "p_read_disturb": 1})").c_str()),
               InvalidInput);
  EXPECT_THROW(parse((std::string("{") + full_prefix + R"(, "p_read_disturb": "x"})").c_str()),
               InvalidInput);
  EXPECT_THROW(
      parse((std::string("{") + full_prefix + R"(, "p_read_disturb": 0, "typo": 1})").c_str()),
      InvalidInput);
  EXPECT_THROW(parse(R"({"energy_per_bit_read": -1, "fixed_energy_per_access": 0,
                         "leakage_power": 0, "execution_time": 1, "p_read_disturb": 0})"),
               InvalidInput);
  EXPECT_THROW(load_cost_params("/nonexistent/params.json"), IoError);
}

TEST(TagEnergy, ProportionalToBitsWithoutFixedTerms) {
  const EnergyParams e{3e-15, 0.0, 0.0, 1.0};
  EXPECT_DOUBLE_EQ(tag_energy(41.5, 1, e) / tag_energy(184, 1, e), 41.5 / 184);
}

TEST(TagEnergy, ZeroBitsLeavesFixedAndLeakage) {
  const EnergyParams e{3e-15, 2e-12, 0.01, 0.5};
  EXPECT_DOUBLE_EQ(tag_energy(0, 1000, e), 1000 * 2e-12 + 0.01 * 0.5);
  EXPECT_THROW(tag_energy(-1, 1, e), InvalidInput);
  EXPECT_THROW(tag_energy(1, -1, e), InvalidInput);
}

TEST(TagEnergy, StrictlyIncreasingInBits) {
  const EnergyParams e{1e-15, 0.0, 0.0, 1.0};
  for (double b = 0; b < 1e6; b = b * 3 + 1) EXPECT_LT(tag_energy(b, 1, e), tag_energy(b + 1, 1, e));
}

TEST(TagEnergy, SixtyFourBitQuarterMegabyteReduction) {
  // n = 48, x = 4, k = 5: 1 - (5 + 43/32) / 48.
  const unsigned n = derive_geometry({64, 256u << 10, 64, 4}).tag_bits;
  ASSERT_EQ(n, 48u);
  const NormalizedMetrics m = normalized_metrics(n, 4, 5, bit_only(), 1e6);
  EXPECT_NEAR(1.0 - m.energy_ratio, 1.0 - (5.0 + 43.0 / 32.0) / 48.0, 1e-12);
  EXPECT_NEAR(1.0 - m.energy_ratio, 0.868, 1e-3);
}

TEST(Reliability, Boundaries) {
  EXPECT_EQ(reliability(0, {1e-3, 1}), 1.0);
  EXPECT_EQ(reliability(1e12, {0.0, 1}), 1.0);
  EXPECT_THROW(reliability(1, {1.0, 1}), InvalidInput);
  EXPECT_THROW(reliability(-1, {0.1, 1}), InvalidInput);
}

TEST(Reliability, LogDomainMatchesHighPrecisionOracle) {
  // mpmath: (1 - 1e-9)^(1e9).
  EXPECT_NEAR(reliability(1e9, {1e-9, 1}), 0.36787944098750260, 1e-14);
}

TEST(Reliability, LogDomainMatchesNaivePower) {
  for (double p : {1e-12, 1e-6, 1e-3, 0.01, 0.3}) {
    for (int bits = 0; bits <= 10000; bits += 137) {
      const double naive = std::pow(1.0 - p, bits);
      EXPECT_NEAR(reliability(bits, {p, 1}), naive, 1e-12 * naive) << p << ' ' << bits;
    }
  }
}

TEST(Mttf, InverseOfRate) {
  EXPECT_NEAR(mttf(std::exp(-1.0), 1.0), 1.0, 1e-15);
  EXPECT_NEAR(mttf(std::exp(-2.0), 1.0), 0.5, 1e-15);
  EXPECT_NEAR(mttf(std::exp(-2.0), 4.0), 2.0, 1e-14);
  EXPECT_EQ(mttf(1.0, 1.0), std::numeric_limits<double>::infinity());
  EXPECT_THROW(mttf(0.0, 1.0), InvalidInput);
  EXPECT_THROW(mttf(-0.5, 1.0), InvalidInput);
  EXPECT_THROW(mttf(1.5, 1.0), InvalidInput);
}

TEST(Mttf, StrictlyDecreasingInBits) {
  const ReliabilityParams r{1e-6, 1.0};
  double prev = std::numeric_limits<double>::infinity();
  for (double b = 1; b < 1e5; b *= 2) {
    const double m = mttf(reliability(b, r), r.execution_time);
    EXPECT_LT(m, prev);
    prev = m;
  }
}

TEST(NormalizedMetrics, BaselineSplitIsUnity) {
  CostParams c = bit_only();
  c.energy.fixed_energy_per_access = 1e-12;
  c.energy.leakage_power = 0.1;
  const NormalizedMetrics m = normalized_metrics(23, 8, 23, c, 1e6);
  EXPECT_EQ(m.energy_ratio, 1.0);
  EXPECT_EQ(m.mttf_ratio, 1.0);
}

TEST(NormalizedMetrics, DualityWithoutFixedEnergy) {
  for (unsigned k = 1; k < 23; ++k) {
    const NormalizedMetrics m = normalized_metrics(23, 8, k, bit_only(), 1e6);
    EXPECT_NEAR(m.energy_ratio * m.mttf_ratio, 1.0, 1e-9) << k;
  }
}

TEST(NormalizedMetrics, ThirtyTwoBitFourWay) {
  const NormalizedMetrics m = normalized_metrics(16, 4, 3, bit_only(), 1e6);
  EXPECT_NEAR(m.energy_ratio, (3.0 + 13.0 / 8.0) / 16.0, 1e-12);
  EXPECT_NEAR(m.energy_ratio, 0.289, 1e-3);
  EXPECT_NEAR(m.mttf_ratio, 3.46, 1e-2);
}

TEST(NormalizedMetrics, MttfGainAtReferenceOptimum) {
  // Exact ratio 184 / 41.5 at p = 1e-12.
  const NormalizedMetrics m = normalized_metrics(23, 8, 4, bit_only(1e-12), 1e6);
  EXPECT_NEAR(m.mttf_ratio, 4.4337349397590361, 1e-9);
}

TEST(NormalizedMetrics, FixedEnergyDilutesSaving) {
  CostParams c = bit_only();
  c.energy.fixed_energy_per_access = 50e-15;
  const NormalizedMetrics m = normalized_metrics(23, 8, 4, c, 1e6);
  EXPECT_GT(m.energy_ratio, 41.5 / 184);
  EXPECT_LT(m.energy_ratio, 1.0);
}

TEST(NormalizedMetrics, NoDisturbanceMeansEqualMttf) {
  const NormalizedMetrics m = normalized_metrics(23, 8, 4, bit_only(0.0), 1e6);
  EXPECT_EQ(m.mttf_ratio, 1.0);
}

}  // namespace
}  // namespace tagsplit
