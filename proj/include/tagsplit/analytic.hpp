// SPDX-License-Identifier: Apache-2.0
#pragma once

// Closed-form model of tag-bit reads for two-step (partitioned) tag
// comparison. In the first step the k low-order bits of all x tags in the
// indexed set are compared; only the ways whose prefix matched have their
// remaining n - k bits read in the second step.

#include <cstdint>

namespace tagsplit {

struct CacheConfig {
  unsigned address_bits = 40;
  std::uint64_t cache_size = 1u << 20;  // bytes
  std::uint64_t block_size = 64;        // bytes
  std::uint64_t associativity = 8;      // ways

  friend bool operator==(const CacheConfig&, const CacheConfig&) = default;
};

struct TagGeometry {
  std::uint64_t sets = 0;
  unsigned index_bits = 0;
  unsigned offset_bits = 0;
  unsigned tag_bits = 0;

  friend bool operator==(const TagGeometry&, const TagGeometry&) = default;
};

/// Expected per-access read cost at one splitting point.
struct SplitEval {
  unsigned k = 0;
  double first_step_bits = 0.0;
  double expected_second_step_bits = 0.0;
  double total_bits = 0.0;
  /// total_bits / (n * x); 1.0 means no saving over the baseline.
  double reduction_ratio = 1.0;
};

/// Validates `config` and splits the address into offset, index and tag.
/// Throws InvalidInput naming the violated constraint.
TagGeometry derive_geometry(const CacheConfig& config);

double baseline_bits(unsigned n, std::uint64_t x);

/// Probability that a uniformly random k-bit prefix matches a given one.
double match_probability(unsigned k);

/// Binomial mean of step-1 survivors, evaluated as the literal sum
/// sum_i i * C(x,i) p^i (1-p)^(x-i) with p = 2^-k.
double expected_matched_ways(std::uint64_t x, unsigned k);

/// k*x + (n-k)*x/2^k.
double expected_total_closed_form(unsigned n, std::uint64_t x, unsigned k);

/// Evaluates the binomial-sum form and cross-checks it against the closed
/// form (throws InvariantViolation on disagreement beyond 1e-9 * n * x).
/// Requires 0 <= k <= n.
SplitEval expected_reads(unsigned n, std::uint64_t x, unsigned k);

/// d/dk of the expected total for real k in (0, n).
double first_derivative(unsigned n, std::uint64_t x, double k);

/// d^2/dk^2 of the expected total for real k in (0, n). Positive everywhere
/// on that interval.
double second_derivative(unsigned n, std::uint64_t x, double k);

}  // namespace tagsplit
