// SPDX-License-Identifier: Apache-2.0
#include "tagsplit/cache_sim.hpp"

#include <algorithm>
#include <charconv>
#include <string>

#include "tagsplit/errors.hpp"

namespace tagsplit {

namespace {

std::string hex_address(std::uint64_t addr) {
  char buf[16];
  const auto res = std::to_chars(buf, buf + sizeof buf, addr, 16);
  return "0x" + std::string(buf, res.ptr);
}

}  // namespace

SimStats::SimStats(unsigned n, unsigned split, std::uint64_t x)
    : tag_bits(n), k(split), ways(x), matched_way_histogram(x + 1, 0) {}

double SimStats::bits_per_access() const {
  return accesses == 0 ? 0.0
                       : static_cast<double>(total_bit_reads()) / static_cast<double>(accesses);
}

double SimStats::mean_survivors() const {
  if (accesses == 0) return 0.0;
  double weighted = 0.0;
  for (std::size_t s = 0; s < matched_way_histogram.size(); ++s) {
    weighted += static_cast<double>(s) * static_cast<double>(matched_way_histogram[s]);
  }
  return weighted / static_cast<double>(accesses);
}

double SimStats::normalized_reads() const {
  return baseline_bit_reads == 0 ? 0.0
                                 : static_cast<double>(total_bit_reads()) /
                                       static_cast<double>(baseline_bit_reads);
}

void SimStats::check() const {
  auto fail = [](const std::string& what) { throw InvariantViolation("SimStats: " + what); };
  if (hits + misses != accesses) fail("hits + misses != accesses");
  if (step1_bit_reads != accesses * k * ways) fail("step1_bit_reads != accesses * k * x");
  if (baseline_bit_reads != accesses * tag_bits * ways) {
    fail("baseline_bit_reads != accesses * n * x");
  }
  if (matched_way_histogram.size() != ways + 1) fail("histogram size != x + 1");
  std::uint64_t counted = 0;
  std::uint64_t survivors = 0;
  for (std::size_t s = 0; s < matched_way_histogram.size(); ++s) {
    counted += matched_way_histogram[s];
    survivors += s * matched_way_histogram[s];
  }
  if (counted != accesses) fail("histogram total != accesses");
  if (step2_bit_reads != (tag_bits - k) * survivors) {
    fail("step2_bit_reads != (n - k) * sum(s * histogram[s])");
  }
}

TagSplitCache::TagSplitCache(const CacheConfig& config, std::optional<unsigned> split,
                             bool verify_single_step)
    : config_(config),
      geometry_(derive_geometry(config)),
      ways_(config.associativity),
      k_(split.value_or(geometry_.tag_bits)),
      single_step_(!split.has_value()),
      verify_(verify_single_step) {
  if (config.address_bits > 64) {
    throw InvalidInput("simulation supports address_bits <= 64 (got " +
                       std::to_string(config.address_bits) + ")");
  }
  if (k_ > geometry_.tag_bits) {
    throw InvalidInput("splitting point k=" + std::to_string(k_) + " outside [0, n=" +
                       std::to_string(geometry_.tag_bits) + "]");
  }
  prefix_mask_ = k_ >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k_) - 1;

  const std::size_t lines = geometry_.sets * ways_;
  // Empty ways hold an all-ones pattern; they are never compared as valid.
  tags_.assign(lines, ~std::uint64_t{0});
  valid_.assign(lines, 0);
  lru_rank_.resize(lines);
  for (std::size_t i = 0; i < lines; ++i) {
    lru_rank_[i] = static_cast<std::uint32_t>(i % ways_);
  }
}

std::optional<std::size_t> TagSplitCache::lookup_two_step(std::size_t base, std::uint64_t tag,
                                                          std::uint32_t& survivors) const {
  const std::uint64_t prefix = tag & prefix_mask_;
  std::optional<std::size_t> hit;
  survivors = 0;
  for (std::size_t w = 0; w < ways_; ++w) {
    if (!valid_[base + w] || (tags_[base + w] & prefix_mask_) != prefix) continue;
    ++survivors;
    // Second step: the remaining n - k bits decide the hit.
    if (tags_[base + w] == tag) hit = w;
  }
  return hit;
}

std::optional<std::size_t> TagSplitCache::lookup_single_step(std::size_t base,
                                                             std::uint64_t tag) const {
  for (std::size_t w = 0; w < ways_; ++w) {
    if (valid_[base + w] && tags_[base + w] == tag) return w;
  }
  return std::nullopt;
}

void TagSplitCache::touch(std::size_t base, std::size_t way) {
  const std::uint32_t old = lru_rank_[base + way];
  for (std::size_t w = 0; w < ways_; ++w) {
    if (lru_rank_[base + w] < old) ++lru_rank_[base + w];
  }
  lru_rank_[base + way] = 0;
}

AccessOutcome TagSplitCache::access(const TraceRecord& record, SimStats& stats) {
  const std::uint64_t addr = record.address;
  if (config_.address_bits < 64 && (addr >> config_.address_bits) != 0) {
    throw InvalidInput("address " + hex_address(addr) + " outside the " +
                       std::to_string(config_.address_bits) + "-bit address space");
  }
  const unsigned shift = geometry_.offset_bits + geometry_.index_bits;
  const std::uint64_t tag = shift >= 64 ? 0 : addr >> shift;
  const std::uint64_t set = (addr >> geometry_.offset_bits) & (geometry_.sets - 1);
  const std::size_t base = set * ways_;
  const unsigned n = geometry_.tag_bits;

  AccessOutcome out;
  std::optional<std::size_t> way;
  if (single_step_) {
    way = lookup_single_step(base, tag);
    out.survivors = way ? 1 : 0;
    stats.step1_bit_reads += std::uint64_t{n} * ways_;
  } else {
    way = lookup_two_step(base, tag, out.survivors);
    stats.step1_bit_reads += std::uint64_t{k_} * ways_;
    stats.step2_bit_reads += std::uint64_t{n - k_} * out.survivors;
    if (verify_ && lookup_single_step(base, tag) != way) {
      throw InvariantViolation("two-step lookup disagrees with full tag comparison");
    }
  }
  stats.baseline_bit_reads += std::uint64_t{n} * ways_;
  ++stats.matched_way_histogram[out.survivors];
  ++stats.accesses;

  out.hit = way.has_value();
  if (out.hit) {
    ++stats.hits;
    touch(base, *way);
  } else {
    ++stats.misses;
    const auto first = lru_rank_.begin() + static_cast<std::ptrdiff_t>(base);
    const auto victim =
        static_cast<std::size_t>(std::max_element(first, first + static_cast<std::ptrdiff_t>(ways_)) - first);
    if (!valid_[base + victim]) {
      valid_[base + victim] = 1;
      ++valid_count_;
    }
    tags_[base + victim] = tag;
    touch(base, victim);
  }
  if (verify_) stats.check();
  return out;
}

SimStats run_trace(TagSplitCache& cache, std::span<const TraceRecord> trace,
                   const RunOptions& options) {
  if (trace.empty()) throw InvalidInput("trace is empty");

  std::size_t start = 0;
  if (options.warmup != WarmupPolicy::none) {
    SimStats discard = cache.make_stats();
    while (start < trace.size()) {
      if (options.warmup == WarmupPolicy::fill && cache.fully_valid()) break;
      if (options.warmup == WarmupPolicy::count && start >= options.warmup_accesses) break;
      cache.access(trace[start++], discard);
    }
  }
  if (start == trace.size()) {
    throw InvalidInput("trace of " + std::to_string(trace.size()) +
                       " accesses ended during cache warm-up");
  }

  SimStats stats = cache.make_stats();
  for (std::size_t i = start; i < trace.size(); ++i) cache.access(trace[i], stats);
  stats.check();
  return stats;
}

std::vector<bool> hit_sequence(const CacheConfig& config, std::optional<unsigned> split,
                               std::span<const TraceRecord> trace) {
  TagSplitCache cache(config, split);
  SimStats stats = cache.make_stats();
  std::vector<bool> hits;
  hits.reserve(trace.size());
  for (const auto& r : trace) hits.push_back(cache.access(r, stats).hit);
  return hits;
}

bool invariance_check(const CacheConfig& config, std::span<const TraceRecord> trace,
                      std::span<const unsigned> k_values) {
  const unsigned n = derive_geometry(config).tag_bits;
  for (unsigned k : k_values) {
    if (k < 1 || k > n) {
      throw InvalidInput("invariance_check requires k in [1, n=" + std::to_string(n) + "]");
    }
  }
  const std::vector<bool> reference = hit_sequence(config, std::nullopt, trace);
  return std::all_of(k_values.begin(), k_values.end(), [&](unsigned k) {
    return hit_sequence(config, k, trace) == reference;
  });
}

}  // namespace tagsplit
