// SPDX-License-Identifier: Apache-2.0
#pragma once

// Synthetic address-trace generators and the on-disk trace formats.
//
// Text traces hold one hexadecimal byte address per line with an optional
// 0x prefix; lines starting with '#' and blank lines are skipped. Binary
// traces are a headerless sequence of little-endian 64-bit addresses.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "tagsplit/cache_sim.hpp"

namespace tagsplit {

enum class TraceKind { uniform, stride, zipf_block };

TraceKind parse_trace_kind(std::string_view name);
std::string_view to_string(TraceKind kind);

struct TraceParams {
  unsigned address_bits = 40;  ///< generated addresses stay below 2^address_bits
  std::uint64_t base = 0;
  std::uint64_t stride = 64;        ///< bytes, stride traces
  double zipf_exponent = 1.2;       ///< zipf-block traces
  std::uint64_t zipf_blocks = 1u << 16;  ///< distinct blocks ranked by popularity
  std::uint64_t block_size = 64;
};

/// Deterministic for a given (kind, length, seed, params).
///  - uniform: i.i.d. addresses over the whole address space.
///  - stride: base, base + stride, base + 2 * stride, ... (mod 2^address_bits).
///  - zipf_block: block ranks drawn with P(r) proportional to r^-s; rank r
///    maps to address base + (r - 1) * block_size, so hot blocks are adjacent.
std::vector<TraceRecord> generate_trace(TraceKind kind, std::uint64_t length, std::uint64_t seed,
                                        const TraceParams& params = {});

std::vector<TraceRecord> read_text_trace(std::istream& in);
std::vector<TraceRecord> read_binary_trace(std::istream& in);
void write_text_trace(std::ostream& out, const std::vector<TraceRecord>& trace);
void write_binary_trace(std::ostream& out, const std::vector<TraceRecord>& trace);

/// `.bin` files are binary, everything else is parsed as text.
std::vector<TraceRecord> load_trace(const std::filesystem::path& path);
/// `.trace` writes text and `.bin` writes binary; other extensions are rejected.
void save_trace(const std::filesystem::path& path, const std::vector<TraceRecord>& trace);

}  // namespace tagsplit
