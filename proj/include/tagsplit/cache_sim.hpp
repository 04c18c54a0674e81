// SPDX-License-Identifier: Apache-2.0
#pragma once

// Trace-driven set-associative LRU cache whose tag lookup uses two-step
// comparison, counting every tag bit it reads.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tagsplit/analytic.hpp"

namespace tagsplit {

struct TraceRecord {
  std::uint64_t address = 0;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct SimStats {
  unsigned tag_bits = 0;
  unsigned k = 0;
  std::uint64_t ways = 0;

  std::uint64_t accesses = 0;
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t step1_bit_reads = 0;
  std::uint64_t step2_bit_reads = 0;
  std::uint64_t baseline_bit_reads = 0;
  /// Index s counts accesses where s valid ways survived step 1.
  std::vector<std::uint64_t> matched_way_histogram;

  SimStats() = default;
  SimStats(unsigned n, unsigned split, std::uint64_t x);

  std::uint64_t total_bit_reads() const { return step1_bit_reads + step2_bit_reads; }
  double bits_per_access() const;
  double mean_survivors() const;
  /// Partitioned reads over baseline reads for the same accesses.
  double normalized_reads() const;

  /// Throws InvariantViolation unless the counter identities hold.
  void check() const;
};

struct AccessOutcome {
  bool hit = false;
  std::uint32_t survivors = 0;  ///< valid ways whose k-bit prefix matched
};

#ifdef NDEBUG
inline constexpr bool kVerifySingleStepDefault = false;
#else
inline constexpr bool kVerifySingleStepDefault = true;
#endif

class TagSplitCache {
 public:
  /// `split` is the splitting point k in [0, n]; std::nullopt selects the
  /// conventional single-step comparison, which is accounted as k = n.
  /// With `verify_single_step`, every two-step lookup is replayed as a full
  /// comparison and the stats identities are rechecked after each access.
  TagSplitCache(const CacheConfig& config, std::optional<unsigned> split,
                bool verify_single_step = kVerifySingleStepDefault);

  AccessOutcome access(const TraceRecord& record, SimStats& stats);

  SimStats make_stats() const { return SimStats(geometry_.tag_bits, k_, ways_); }

  const CacheConfig& config() const { return config_; }
  const TagGeometry& geometry() const { return geometry_; }
  unsigned k() const { return k_; }
  bool is_baseline() const { return single_step_; }
  /// True once every way of every set holds a valid tag.
  bool fully_valid() const { return valid_count_ == valid_.size(); }
  /// LRU ranks of one set, way order; 0 is most recently used.
  std::span<const std::uint32_t> lru_ranks(std::uint64_t set) const {
    return std::span(lru_rank_).subspan(set * ways_, ways_);
  }

 private:
  std::optional<std::size_t> lookup_two_step(std::size_t base, std::uint64_t tag,
                                             std::uint32_t& survivors) const;
  std::optional<std::size_t> lookup_single_step(std::size_t base, std::uint64_t tag) const;
  void touch(std::size_t base, std::size_t way);

  CacheConfig config_;
  TagGeometry geometry_;
  std::uint64_t ways_;
  unsigned k_;
  bool single_step_;
  bool verify_;
  std::uint64_t prefix_mask_;

  // Flat [set * ways + way] arrays. lru_rank 0 is most recently used.
  std::vector<std::uint64_t> tags_;
  std::vector<std::uint8_t> valid_;
  std::vector<std::uint32_t> lru_rank_;
  std::size_t valid_count_ = 0;
};

enum class WarmupPolicy {
  none,   ///< measure from the first access
  count,  ///< discard a fixed number of leading accesses
  fill,   ///< discard accesses until every way is valid
};

struct RunOptions {
  WarmupPolicy warmup = WarmupPolicy::none;
  std::uint64_t warmup_accesses = 0;  ///< used by WarmupPolicy::count
};

/// Folds `access` over the trace. Accesses consumed by warm-up update the
/// cache but not the returned stats. Throws InvalidInput on an empty trace
/// or when warm-up leaves nothing to measure.
SimStats run_trace(TagSplitCache& cache, std::span<const TraceRecord> trace,
                   const RunOptions& options = {});

/// Per-access hit flags for the whole trace on a fresh cache.
std::vector<bool> hit_sequence(const CacheConfig& config, std::optional<unsigned> split,
                               std::span<const TraceRecord> trace);

/// Replays the trace once for each k and once with single-step comparison.
/// True iff every run produces the same per-access hit/miss sequence.
bool invariance_check(const CacheConfig& config, std::span<const TraceRecord> trace,
                      std::span<const unsigned> k_values);

}  // namespace tagsplit
