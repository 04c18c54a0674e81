// SPDX-License-Identifier: Apache-2.0
#include "tagsplit/trace.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <string>

#include "tagsplit/errors.hpp"

namespace tagsplit {

namespace {

std::uint64_t address_mask(unsigned bits) {
  return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

// 53-bit uniform double in [0, 1). Built from raw engine output so the
// sequence does not depend on the standard library's distribution code.
double unit_interval(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<double> zipf_cdf(std::uint64_t blocks, double exponent) {
  std::vector<double> cdf(blocks);
  double acc = 0.0;
  for (std::uint64_t r = 0; r < blocks; ++r) {
    acc += std::pow(static_cast<double>(r + 1), -exponent);
    cdf[r] = acc;
  }
  for (double& c : cdf) c /= acc;
  cdf.back() = 1.0;
  return cdf;
}

}  // namespace

TraceKind parse_trace_kind(std::string_view name) {
  if (name == "uniform") return TraceKind::uniform;
  if (name == "stride") return TraceKind::stride;
  if (name == "zipf-block" || name == "zipf_block") return TraceKind::zipf_block;
  throw InvalidInput("unknown trace kind '" + std::string(name) +
                     "' (expected uniform, stride or zipf-block)");
}

std::string_view to_string(TraceKind kind) {
  switch (kind) {
    case TraceKind::uniform: return "uniform";
    case TraceKind::stride: return "stride";
    case TraceKind::zipf_block: return "zipf-block";
  }
  return "?";
}

std::vector<TraceRecord> generate_trace(TraceKind kind, std::uint64_t length, std::uint64_t seed,
                                        const TraceParams& params) {
  if (length == 0) throw InvalidInput("trace length must be >= 1");
  if (params.address_bits < 1 || params.address_bits > 64) {
    throw InvalidInput("trace address_bits must lie in [1, 64]");
  }
  const std::uint64_t mask = address_mask(params.address_bits);
  std::vector<TraceRecord> trace;
  trace.reserve(length);
  std::mt19937_64 rng(seed);

  switch (kind) {
    case TraceKind::uniform:
      for (std::uint64_t i = 0; i < length; ++i) trace.push_back({rng() & mask});
      break;
    case TraceKind::stride:
      for (std::uint64_t i = 0; i < length; ++i) {
        trace.push_back({(params.base + i * params.stride) & mask});
      }
      break;
    case TraceKind::zipf_block: {
      if (!(params.zipf_exponent > 0.0)) {
        throw InvalidInput("zipf exponent must be > 0");
      }
      if (params.zipf_blocks == 0) throw InvalidInput("zipf_blocks must be >= 1");
      const std::vector<double> cdf = zipf_cdf(params.zipf_blocks, params.zipf_exponent);
      for (std::uint64_t i = 0; i < length; ++i) {
        const double u = unit_interval(rng);
        const auto rank = static_cast<std::uint64_t>(
            std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        const std::uint64_t block = std::min(rank, params.zipf_blocks - 1);
        trace.push_back({(params.base + block * params.block_size) & mask});
      }
      break;
    }
  }
  return trace;
}

std::vector<TraceRecord> read_text_trace(std::istream& in) {
  std::vector<TraceRecord> trace;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view v(line);
    while (!v.empty() && (v.back() == '\r' || v.back() == ' ' || v.back() == '\t')) {
      v.remove_suffix(1);
    }
    while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) v.remove_prefix(1);
    if (v.empty() || v.front() == '#') continue;
    if (v.starts_with("0x") || v.starts_with("0X")) v.remove_prefix(2);

    std::uint64_t addr = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), addr, 16);
    if (v.empty() || res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
      throw InvalidInput("trace line " + std::to_string(line_no) + ": invalid hexadecimal address '" +
                    line + "'");
    }
    trace.push_back({addr});
  }
  return trace;
}

std::vector<TraceRecord> read_binary_trace(std::istream& in) {
  std::vector<TraceRecord> trace;
  std::array<unsigned char, 8> buf{};
  std::uint64_t offset = 0;
  while (true) {
    in.read(reinterpret_cast<char*>(buf.data()), buf.size());
    const auto got = static_cast<std::size_t>(in.gcount());
    if (got == 0) break;
    if (got != buf.size()) {
      throw InvalidInput("binary trace truncated at byte offset " + std::to_string(offset) +
                    ": size is not a multiple of 8");
    }
    std::uint64_t addr = 0;
    for (std::size_t i = 0; i < 8; ++i) addr |= std::uint64_t{buf[i]} << (8 * i);
    trace.push_back({addr});
    offset += 8;
  }
  return trace;
}

void write_text_trace(std::ostream& out, const std::vector<TraceRecord>& trace) {
  char buf[20] = {'0', 'x'};
  for (const auto& r : trace) {
    const auto res = std::to_chars(buf + 2, buf + sizeof buf - 1, r.address, 16);
    *res.ptr = '\n';
    out.write(buf, res.ptr + 1 - buf);
  }
}

void write_binary_trace(std::ostream& out, const std::vector<TraceRecord>& trace) {
  std::array<char, 8> buf{};
  for (const auto& r : trace) {
    for (std::size_t i = 0; i < 8; ++i) buf[i] = static_cast<char>((r.address >> (8 * i)) & 0xff);
    out.write(buf.data(), buf.size());
  }
}

std::vector<TraceRecord> load_trace(const std::filesystem::path& path) {
  const bool binary = path.extension() == ".bin";
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw IoError("cannot open trace file " + path.string());
  return binary ? read_binary_trace(in) : read_text_trace(in);
}

void save_trace(const std::filesystem::path& path, const std::vector<TraceRecord>& trace) {
  const auto ext = path.extension();
  if (ext != ".trace" && ext != ".bin") {
    throw InvalidInput("trace output must end in .trace (text) or .bin (binary): " +
                       path.string());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  if (ext == ".bin") {
    write_binary_trace(out, trace);
  } else {
    write_text_trace(out, trace);
  }
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace tagsplit
