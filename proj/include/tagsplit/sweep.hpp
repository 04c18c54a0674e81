// SPDX-License-Identifier: Apache-2.0
#pragma once

// Design-space sweeps over cache geometries and splitting points, plus the
// per-step read curves. Rows serialise to CSV (fixed header, 17 significant
// digits) or JSON lines.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tagsplit/analytic.hpp"
#include "tagsplit/cache_sim.hpp"
#include "tagsplit/cost_models.hpp"
#include "tagsplit/trace.hpp"

namespace tagsplit {

enum class OutputFormat { csv, json_lines };

OutputFormat parse_output_format(std::string_view name);

struct KRange {
  unsigned first = 1;
  unsigned last = 10;
};

struct SweepSpec {
  std::vector<std::uint64_t> cache_sizes;
  std::vector<std::uint64_t> associativities;
  std::vector<unsigned> address_bits;
  std::uint64_t block_size = 64;
  KRange k_range;

  bool include_simulation = false;
  TraceKind trace_kind = TraceKind::uniform;
  std::uint64_t trace_length = 100'000;
  std::uint64_t seed = 1;
  TraceParams trace_params;  // address_bits is overridden per grid point
  RunOptions run_options;

  std::optional<CostParams> cost_params;
  double accesses = 1e6;  ///< lookups assumed by the energy/MTTF ratios

  unsigned threads = 0;  ///< 0 selects std::thread::hardware_concurrency()
};

/// 256 KB..8 MB, 4..64 ways, 32..64-bit addresses in steps of 4, 64 B blocks.
SweepSpec conventional_grid();
/// 256 KB..128 MB, 2..512 ways, 32..64-bit addresses in steps of 4, 64 B blocks.
SweepSpec extended_grid();

struct SweepRow {
  std::uint64_t cache_size = 0;
  std::uint64_t associativity = 0;
  unsigned address_bits = 0;
  std::uint64_t block_size = 0;
  unsigned tag_bits = 0;
  unsigned k = 0;
  double first_step_bits = 0.0;
  double second_step_bits = 0.0;
  double total_bits = 0.0;
  double baseline_bits = 0.0;
  double reduction_ratio = 0.0;
  double k_optimal = 0.0;
  unsigned k_min = 0;
  bool is_round_of_continuous = false;
  std::optional<double> sim_bits_per_access;
  std::optional<double> sim_rel_error;
  std::optional<double> energy_ratio;
  std::optional<double> mttf_ratio;
};

/// Evaluates every grid point for k in [k_range.first, min(k_range.last, n)].
/// Grid points may be evaluated concurrently; the result is always sorted by
/// (cache_size, associativity, address_bits, k). Invalid grid points are all
/// listed in a single InvalidInput.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

inline constexpr const char* kSweepCsvHeader =
    "cache_size,associativity,address_bits,block_size,tag_bits,k,first_step_bits,"
    "second_step_bits,total_bits,baseline_bits,reduction_ratio,k_optimal,k_min,"
    "is_round_of_continuous,sim_bits_per_access,sim_rel_error,energy_ratio,mttf_ratio";

void write_sweep(std::ostream& out, const std::vector<SweepRow>& rows, OutputFormat format);

/// Parses sweep CSV and re-validates each row against the analytic model;
/// malformed text throws InvalidInput, inconsistent values InvariantViolation.
std::vector<SweepRow> read_sweep_csv(std::istream& in);

struct CurveRow {
  std::string config_id;
  unsigned k = 0;
  double step1_normalized = 0.0;
  double step2_normalized = 0.0;
  double total_normalized = 0.0;
};

/// Per-step expected reads normalised by n * x, one block of rows per config
/// in the order given, k ascending within [k_range.first, min(k_range.last, n)].
std::vector<CurveRow> run_curves(const std::vector<CacheConfig>& configs, KRange k_range);

inline constexpr const char* kCurvesCsvHeader =
    "config_id,k,step1_normalized,step2_normalized,total_normalized";

void write_curves(std::ostream& out, const std::vector<CurveRow>& rows, OutputFormat format);

/// "1M_8way_40bit_64B" style identifier.
std::string config_id(const CacheConfig& config);

/// 17 significant digits, "." separator regardless of locale; +infinity
/// prints as "inf".
std::string format_real(double value);

}  // namespace tagsplit
