// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace tagsplit {

struct OptimumResult {
  double k_optimal = 0.0;  ///< continuous stationary point
  unsigned k_min = 0;      ///< integer minimiser of the expected total
  double total_at_k_min = 0.0;
  double residual = 0.0;   ///< first derivative evaluated at k_optimal
};

/// Principal-branch Lambert W of z, given ln(z) >= 1. Solves w + ln(w) = ln_z
/// so that z = 2^n * e never has to be formed for long tags.
double lambert_w_log(double ln_z);

/// log2(W(2^n * e)): the unique root of 2^k - 1 = (n - k) ln 2. Depends on the
/// tag length only. Requires n >= 2.
double k_optimal_continuous(unsigned n);

/// Exhaustive integer argmin of the expected total over k in [0, n], ties
/// toward the smaller k. Throws InvariantViolation if the argmin falls
/// outside {floor, ceil} of the continuous optimum or changes with x.
OptimumResult k_min_integer(unsigned n, std::uint64_t x);

/// True iff the second derivative is strictly positive at `samples` evenly
/// spaced interior points of (0, n).
bool convexity_certificate(unsigned n, std::uint64_t x, unsigned samples);

}  // namespace tagsplit
