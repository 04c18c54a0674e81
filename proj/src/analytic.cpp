// SPDX-License-Identifier: Apache-2.0
#include "tagsplit/analytic.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "tagsplit/errors.hpp"

namespace tagsplit {

namespace {

constexpr double kLn2 = std::numbers::ln2;

void require_power_of_two(std::uint64_t value, const char* name) {
  if (value == 0 || !std::has_single_bit(value)) {
    throw InvalidInput(std::string(name) + " must be a positive power of two (got " +
                       std::to_string(value) + ")");
  }
}

void require_interior(unsigned n, double k) {
  if (!(k > 0.0 && k < static_cast<double>(n))) {
    throw InvalidInput("splitting point must lie strictly inside (0, n) (k=" +
                       std::to_string(k) + ", n=" + std::to_string(n) + ")");
  }
}

}  // namespace

TagGeometry derive_geometry(const CacheConfig& config) {
  if (config.address_bits < 16 || config.address_bits > 128) {
    throw InvalidInput("address_bits must lie in [16, 128] (got " +
                       std::to_string(config.address_bits) + ")");
  }
  require_power_of_two(config.cache_size, "cache_size");
  require_power_of_two(config.block_size, "block_size");
  require_power_of_two(config.associativity, "associativity");
  // Both factors are powers of two, so compare exponents to avoid overflow.
  if (std::countr_zero(config.block_size) + std::countr_zero(config.associativity) >
      std::countr_zero(config.cache_size)) {
    throw InvalidInput("block_size * associativity exceeds cache_size");
  }

  TagGeometry g;
  g.sets = config.cache_size / (config.block_size * config.associativity);
  g.index_bits = static_cast<unsigned>(std::countr_zero(g.sets));
  g.offset_bits = static_cast<unsigned>(std::countr_zero(config.block_size));
  const int tag = static_cast<int>(config.address_bits) - static_cast<int>(g.index_bits) -
                  static_cast<int>(g.offset_bits);
  if (tag <= 0) {
    throw InvalidInput("tag length not positive: " + std::to_string(config.address_bits) +
                       " address bits - " + std::to_string(g.index_bits) + " index bits - " +
                       std::to_string(g.offset_bits) + " offset bits = " + std::to_string(tag));
  }
  g.tag_bits = static_cast<unsigned>(tag);
  return g;
}

double baseline_bits(unsigned n, std::uint64_t x) {
  if (n < 1 || x < 1) throw InvalidInput("baseline_bits requires n >= 1 and x >= 1");
  return static_cast<double>(n) * static_cast<double>(x);
}

double match_probability(unsigned k) { return std::ldexp(1.0, -static_cast<int>(k)); }

double expected_matched_ways(std::uint64_t x, unsigned k) {
  if (x < 1) throw InvalidInput("associativity must be >= 1");
  const double p = match_probability(k);
  if (p == 1.0) {
    // Only the i = x term survives: every way matches an empty prefix.
    return static_cast<double>(x);
  }
  // term_i = C(x,i) p^i (1-p)^(x-i), built by the ratio recurrence
  // term_{i+1} = term_i * (x-i)/(i+1) * p/(1-p). The starting term is
  // (1-p)^x >= 2^-x, which stays a normal double for every x this model uses.
  const double q = 1.0 - p;
  const double odds = p / q;
  const auto xd = static_cast<double>(x);
  double term = std::pow(q, xd);
  double sum = 0.0;
  for (std::uint64_t i = 0; i < x; ++i) {
    term *= (xd - static_cast<double>(i)) / static_cast<double>(i + 1) * odds;
    sum += static_cast<double>(i + 1) * term;
  }
  return sum;
}

double expected_total_closed_form(unsigned n, std::uint64_t x, unsigned k) {
  const auto xd = static_cast<double>(x);
  return static_cast<double>(k) * xd + static_cast<double>(n - k) * xd * match_probability(k);
}

SplitEval expected_reads(unsigned n, std::uint64_t x, unsigned k) {
  if (k > n) {
    throw InvalidInput("splitting point k=" + std::to_string(k) + " exceeds tag length n=" +
                       std::to_string(n));
  }
  const double baseline = baseline_bits(n, x);

  SplitEval e;
  e.k = k;
  e.first_step_bits = static_cast<double>(k) * static_cast<double>(x);
  e.expected_second_step_bits = static_cast<double>(n - k) * expected_matched_ways(x, k);
  e.total_bits = e.first_step_bits + e.expected_second_step_bits;
  e.reduction_ratio = e.total_bits / baseline;

  const double closed = expected_total_closed_form(n, x, k);
  if (std::abs(e.total_bits - closed) > 1e-9 * baseline) {
    throw InvariantViolation("binomial sum " + std::to_string(e.total_bits) +
                             " disagrees with closed form " + std::to_string(closed));
  }
  return e;
}

double first_derivative(unsigned n, std::uint64_t x, double k) {
  require_interior(n, k);
  const double pow2k = std::exp2(k);
  return static_cast<double>(x) / pow2k * (kLn2 * (k - static_cast<double>(n)) + pow2k - 1.0);
}

double second_derivative(unsigned n, std::uint64_t x, double k) {
  require_interior(n, k);
  return static_cast<double>(x) / std::exp2(k) * kLn2 *
         (2.0 + (static_cast<double>(n) - k) * kLn2);
}

}  // namespace tagsplit
