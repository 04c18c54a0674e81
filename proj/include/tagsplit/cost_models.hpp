// SPDX-License-Identifier: Apache-2.0
#pragma once

// Tag-array dynamic energy and read-disturbance MTTF as functions of the
// number of tag bits read. Parameters are supplied by the user; nothing
// technology-specific is built in.
//
// Reliability treats every bit read as an independent Bernoulli disturbance
// trial. Retention and write failures are not modelled.

#include <cstdint>
#include <filesystem>
#include <iosfwd>

namespace tagsplit {

struct EnergyParams {
  double energy_per_bit_read = 0.0;      // J/bit
  double fixed_energy_per_access = 0.0;  // J/access, decode and indexing
  double leakage_power = 0.0;            // W
  double execution_time = 0.0;           // s
};

struct ReliabilityParams {
  double p_read_disturb = 0.0;  // per bit read
  double execution_time = 1.0;  // s
};

struct CostParams {
  EnergyParams energy;
  ReliabilityParams reliability;
};

/// Reads a flat JSON object with the keys energy_per_bit_read,
/// fixed_energy_per_access, leakage_power, execution_time and p_read_disturb.
CostParams parse_cost_params(std::istream& in);
CostParams load_cost_params(const std::filesystem::path& path);

void validate(const EnergyParams& params);
void validate(const ReliabilityParams& params);

/// bits_read * e_bit + accesses * e_fixed + P_leak * T.
double tag_energy(double bits_read, double accesses, const EnergyParams& params);

/// Probability that `bits_read` reads all complete without disturbance:
/// (1 - p)^bits_read, evaluated as exp(bits_read * log1p(-p)).
double reliability(double bits_read, const ReliabilityParams& params);

/// 1 / lambda with lambda = -ln(R) / T. R == 1 gives +infinity.
double mttf(double reliability, double execution_time);

struct NormalizedMetrics {
  double energy_ratio = 1.0;  ///< E(k) / E(baseline)
  double mttf_ratio = 1.0;    ///< MTTF(k) / MTTF(baseline)
};

/// Ratios of partitioned to baseline tag energy and MTTF over `accesses`
/// lookups, using the analytic expected bit reads. When both MTTFs are
/// unbounded (p = 0) the ratio is reported as 1.
NormalizedMetrics normalized_metrics(unsigned n, std::uint64_t x, unsigned k,
                                     const CostParams& params, double accesses);

/// Same ratios from observed bit-read totals.
NormalizedMetrics normalized_metrics_from_counts(double partitioned_bits, double baseline_bits,
                                                 double accesses, const CostParams& params);

}  // namespace tagsplit
