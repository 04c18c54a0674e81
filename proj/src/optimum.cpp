// SPDX-License-Identifier: Apache-2.0
#include "tagsplit/optimum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "tagsplit/analytic.hpp"
#include "tagsplit/errors.hpp"

namespace tagsplit {

namespace {

// Scans the closed form: for power-of-two x every term is a dyadic rational
// that doubles represent exactly, so ties (n = 2^(k+1) + k - 1) stay ties.
unsigned argmin_k(unsigned n, std::uint64_t x) {
  unsigned best_k = 0;
  double best = expected_total_closed_form(n, x, 0);
  for (unsigned k = 1; k <= n; ++k) {
    const double t = expected_total_closed_form(n, x, k);
    if (t < best) {  // strict: ties keep the smaller k
      best = t;
      best_k = k;
    }
  }
  return best_k;
}

}  // namespace

double lambert_w_log(double ln_z) {
  if (!(ln_z >= 1.0)) {
    throw InvalidInput("lambert_w_log requires ln(z) >= 1 (got " + std::to_string(ln_z) + ")");
  }
  // Newton on f(w) = w + ln w - ln_z, f'(w) = 1 + 1/w, from the asymptotic seed.
  double w = ln_z - std::log(std::max(ln_z, 1.0));
  if (w <= 0.0) w = 1.0;
  for (int iter = 0; iter < 100; ++iter) {
    const double f = w + std::log(w) - ln_z;
    const double step = f / (1.0 + 1.0 / w);
    w -= step;
    if (std::abs(step) <= 1e-13 * w) break;
  }
  return w;
}

double k_optimal_continuous(unsigned n) {
  if (n < 2) throw InvalidInput("k_optimal_continuous requires n >= 2");
  return std::log2(lambert_w_log(static_cast<double>(n) * std::numbers::ln2 + 1.0));
}

OptimumResult k_min_integer(unsigned n, std::uint64_t x) {
  if (n < 2) throw InvalidInput("k_min_integer requires n >= 2");
  if (x < 1) throw InvalidInput("k_min_integer requires x >= 1");

  OptimumResult r;
  r.k_optimal = k_optimal_continuous(n);
  r.k_min = argmin_k(n, x);
  r.total_at_k_min = expected_reads(n, x, r.k_min).total_bits;
  r.residual = first_derivative(n, x, r.k_optimal);

  // x scales the objective uniformly, so the argmin must match x = 1.
  if (x != 1 && argmin_k(n, 1) != r.k_min) {
    throw InvariantViolation("integer optimum depends on associativity for n=" +
                             std::to_string(n));
  }
  const auto lo = static_cast<unsigned>(std::floor(r.k_optimal));
  const auto hi = static_cast<unsigned>(std::ceil(r.k_optimal));
  if (r.k_min != lo && r.k_min != hi) {
    throw InvariantViolation("integer optimum " + std::to_string(r.k_min) +
                             " does not bracket continuous optimum " +
                             std::to_string(r.k_optimal));
  }
  return r;
}

bool convexity_certificate(unsigned n, std::uint64_t x, unsigned samples) {
  if (samples < 3) throw InvalidInput("convexity_certificate requires samples >= 3");
  const double step = static_cast<double>(n) / static_cast<double>(samples + 1);
  for (unsigned i = 1; i <= samples; ++i) {
    if (!(second_derivative(n, x, step * i) > 0.0)) return false;
  }
  return true;
}

}  // namespace tagsplit
