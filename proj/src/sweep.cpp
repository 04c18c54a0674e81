// SPDX-License-Identifier: Apache-2.0
#include "tagsplit/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <exception>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "tagsplit/errors.hpp"
#include "tagsplit/optimum.hpp"

namespace tagsplit {

namespace {

struct GridPoint {
  CacheConfig config;
  TagGeometry geometry;
};

std::vector<std::uint64_t> doubling(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> v;
  for (std::uint64_t s = lo; s <= hi; s *= 2) v.push_back(s);
  return v;
}

std::vector<unsigned> stepping(unsigned lo, unsigned hi, unsigned step) {
  std::vector<unsigned> v;
  for (unsigned a = lo; a <= hi; a += step) v.push_back(a);
  return v;
}

std::vector<SweepRow> evaluate_point(const GridPoint& point, const SweepSpec& spec) {
  const unsigned n = point.geometry.tag_bits;
  const std::uint64_t x = point.config.associativity;
  const OptimumResult opt = k_min_integer(n, x);
  const bool is_round = static_cast<long>(opt.k_min) == std::lround(opt.k_optimal);

  std::vector<TraceRecord> trace;
  if (spec.include_simulation) {
    TraceParams tp = spec.trace_params;
    tp.address_bits = point.config.address_bits;
    tp.block_size = point.config.block_size;
    trace = generate_trace(spec.trace_kind, spec.trace_length, spec.seed, tp);
  }

  std::vector<SweepRow> rows;
  const unsigned last = std::min(spec.k_range.last, n);
  for (unsigned k = spec.k_range.first; k <= last; ++k) {
    const SplitEval e = expected_reads(n, x, k);
    SweepRow row;
    row.cache_size = point.config.cache_size;
    row.associativity = x;
    row.address_bits = point.config.address_bits;
    row.block_size = point.config.block_size;
    row.tag_bits = n;
    row.k = k;
    row.first_step_bits = e.first_step_bits;
    row.second_step_bits = e.expected_second_step_bits;
    row.total_bits = e.total_bits;
    row.baseline_bits = baseline_bits(n, x);
    row.reduction_ratio = e.reduction_ratio;
    row.k_optimal = opt.k_optimal;
    row.k_min = opt.k_min;
    row.is_round_of_continuous = is_round;
    if (spec.include_simulation) {
      TagSplitCache cache(point.config, k);
      const SimStats stats = run_trace(cache, trace, spec.run_options);
      row.sim_bits_per_access = stats.bits_per_access();
      row.sim_rel_error = (stats.bits_per_access() - e.total_bits) / e.total_bits;
    }
    if (spec.cost_params) {
      const NormalizedMetrics m = normalized_metrics(n, x, k, *spec.cost_params, spec.accesses);
      row.energy_ratio = m.energy_ratio;
      row.mttf_ratio = m.mttf_ratio;
    }
    rows.push_back(row);
  }
  return rows;
}

std::string format_optional(const std::optional<double>& v) {
  return v ? format_real(*v) : std::string();
}

nlohmann::json json_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

nlohmann::json json_optional(const std::optional<double>& v) {
  return v ? json_real(*v) : nlohmann::json(nullptr);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

template <typename T>
T parse_field(std::string_view text, std::size_t line_no, const char* column) {
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw InvalidInput("sweep CSV line " + std::to_string(line_no) + ": bad " + column +
                       " value '" + std::string(text) + "'");
  }
  return value;
}

std::optional<double> parse_optional(std::string_view text, std::size_t line_no,
                                     const char* column) {
  if (text.empty()) return std::nullopt;
  return parse_field<double>(text, line_no, column);
}

bool close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

void validate_row(const SweepRow& row, std::size_t line_no) {
  auto fail = [&](const std::string& what) {
    throw InvariantViolation("sweep CSV line " + std::to_string(line_no) + ": " + what);
  };
  CacheConfig config{row.address_bits, row.cache_size, row.block_size, row.associativity};
  TagGeometry g;
  try {
    g = derive_geometry(config);
  } catch (const InvalidInput& e) {
    fail(e.what());
  }
  if (g.tag_bits != row.tag_bits) fail("tag_bits does not match the cache geometry");
  if (row.k > row.tag_bits) fail("k exceeds tag_bits");
  const SplitEval e = expected_reads(row.tag_bits, row.associativity, row.k);
  constexpr double tol = 1e-12;
  if (!close(row.first_step_bits, e.first_step_bits, tol)) fail("first_step_bits mismatch");
  if (!close(row.second_step_bits, e.expected_second_step_bits, tol)) {
    fail("second_step_bits mismatch");
  }
  if (!close(row.total_bits, row.first_step_bits + row.second_step_bits, tol)) {
    fail("total_bits != first_step_bits + second_step_bits");
  }
  if (!close(row.baseline_bits, baseline_bits(row.tag_bits, row.associativity), tol)) {
    fail("baseline_bits != n * x");
  }
  if (!close(row.reduction_ratio, row.total_bits / row.baseline_bits, tol)) {
    fail("reduction_ratio != total_bits / baseline_bits");
  }
  const OptimumResult opt = k_min_integer(row.tag_bits, row.associativity);
  if (!close(row.k_optimal, opt.k_optimal, tol)) fail("k_optimal mismatch");
  if (row.k_min != opt.k_min) fail("k_min mismatch");
  if (row.is_round_of_continuous != (static_cast<long>(row.k_min) == std::lround(row.k_optimal))) {
    fail("is_round_of_continuous mismatch");
  }
}

}  // namespace

OutputFormat parse_output_format(std::string_view name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json-lines" || name == "jsonl") return OutputFormat::json_lines;
  throw InvalidInput("unknown output format '" + std::string(name) +
                     "' (expected csv or json-lines)");
}

SweepSpec conventional_grid() {
  SweepSpec s;
  s.cache_sizes = doubling(256u << 10, 8u << 20);
  s.associativities = doubling(4, 64);
  s.address_bits = stepping(32, 64, 4);
  return s;
}

SweepSpec extended_grid() {
  SweepSpec s;
  s.cache_sizes = doubling(256u << 10, std::uint64_t{128} << 20);
  s.associativities = doubling(2, 512);
  s.address_bits = stepping(32, 64, 4);
  return s;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  if (spec.cache_sizes.empty() || spec.associativities.empty() || spec.address_bits.empty()) {
    throw InvalidInput("sweep grid lists must be non-empty");
  }
  if (spec.k_range.first > spec.k_range.last) {
    throw InvalidInput("k range is empty (" + std::to_string(spec.k_range.first) + " > " +
                       std::to_string(spec.k_range.last) + ")");
  }
  if (spec.include_simulation && spec.trace_length == 0) {
    throw InvalidInput("trace length must be >= 1");
  }
  if (spec.cost_params) {
    validate(spec.cost_params->energy);
    validate(spec.cost_params->reliability);
  }

  std::vector<GridPoint> points;
  std::vector<std::string> invalid;
  unsigned max_tag = 0;
  for (auto size : spec.cache_sizes) {
    for (auto assoc : spec.associativities) {
      for (auto addr : spec.address_bits) {
        CacheConfig c{addr, size, spec.block_size, assoc};
        try {
          const TagGeometry g = derive_geometry(c);
          if (g.tag_bits < 2) throw InvalidInput("tag length below 2 bits has no interior split");
          if (spec.include_simulation && addr > 64) {
            throw InvalidInput("simulation supports address_bits <= 64");
          }
          max_tag = std::max(max_tag, g.tag_bits);
          points.push_back({c, g});
        } catch (const InvalidInput& e) {
          invalid.push_back(config_id(c) + ": " + e.what());
        }
      }
    }
  }
  if (!invalid.empty()) {
    std::string msg = std::to_string(invalid.size()) + " invalid grid point(s):";
    for (const auto& s : invalid) msg += "\n  " + s;
    throw InvalidInput(msg);
  }
  if (spec.k_range.last > max_tag) {
    throw InvalidInput("k range upper bound " + std::to_string(spec.k_range.last) +
                       " exceeds the longest tag in the grid (" + std::to_string(max_tag) + ")");
  }

  std::vector<std::vector<SweepRow>> results(points.size());
  std::vector<std::exception_ptr> errors(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        results[i] = evaluate_point(points[i], spec);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, points.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<SweepRow> rows;
  for (auto& r : results) rows.insert(rows.end(), r.begin(), r.end());
  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.cache_size, a.associativity, a.address_bits, a.k) <
           std::tie(b.cache_size, b.associativity, b.address_bits, b.k);
  });
  return rows;
}

void write_sweep(std::ostream& out, const std::vector<SweepRow>& rows, OutputFormat format) {
  if (format == OutputFormat::csv) {
    out << kSweepCsvHeader << '\n';
    for (const auto& r : rows) {
      out << r.cache_size << ',' << r.associativity << ',' << r.address_bits << ','
          << r.block_size << ',' << r.tag_bits << ',' << r.k << ','
          << format_real(r.first_step_bits) << ',' << format_real(r.second_step_bits) << ','
          << format_real(r.total_bits) << ',' << format_real(r.baseline_bits) << ','
          << format_real(r.reduction_ratio) << ',' << format_real(r.k_optimal) << ','
          << r.k_min << ',' << (r.is_round_of_continuous ? 1 : 0) << ','
          << format_optional(r.sim_bits_per_access) << ',' << format_optional(r.sim_rel_error)
          << ',' << format_optional(r.energy_ratio) << ',' << format_optional(r.mttf_ratio)
          << '\n';
    }
    return;
  }
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["cache_size"] = r.cache_size;
    j["associativity"] = r.associativity;
    j["address_bits"] = r.address_bits;
    j["block_size"] = r.block_size;
    j["tag_bits"] = r.tag_bits;
    j["k"] = r.k;
    j["first_step_bits"] = r.first_step_bits;
    j["second_step_bits"] = r.second_step_bits;
    j["total_bits"] = r.total_bits;
    j["baseline_bits"] = r.baseline_bits;
    j["reduction_ratio"] = r.reduction_ratio;
    j["k_optimal"] = r.k_optimal;
    j["k_min"] = r.k_min;
    j["is_round_of_continuous"] = r.is_round_of_continuous;
    j["sim_bits_per_access"] = json_optional(r.sim_bits_per_access);
    j["sim_rel_error"] = json_optional(r.sim_rel_error);
    j["energy_ratio"] = json_optional(r.energy_ratio);
    j["mttf_ratio"] = json_optional(r.mttf_ratio);
    out << j.dump() << '\n';
  }
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("sweep CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kSweepCsvHeader) throw InvalidInput("sweep CSV header does not match");

  std::vector<SweepRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != 18) {
      throw InvalidInput("sweep CSV line " + std::to_string(line_no) + ": expected 18 fields, got " +
                         std::to_string(f.size()));
    }
    SweepRow r;
    r.cache_size = parse_field<std::uint64_t>(f[0], line_no, "cache_size");
    r.associativity = parse_field<std::uint64_t>(f[1], line_no, "associativity");
    r.address_bits = parse_field<unsigned>(f[2], line_no, "address_bits");
    r.block_size = parse_field<std::uint64_t>(f[3], line_no, "block_size");
    r.tag_bits = parse_field<unsigned>(f[4], line_no, "tag_bits");
    r.k = parse_field<unsigned>(f[5], line_no, "k");
    r.first_step_bits = parse_field<double>(f[6], line_no, "first_step_bits");
    r.second_step_bits = parse_field<double>(f[7], line_no, "second_step_bits");
    r.total_bits = parse_field<double>(f[8], line_no, "total_bits");
    r.baseline_bits = parse_field<double>(f[9], line_no, "baseline_bits");
    r.reduction_ratio = parse_field<double>(f[10], line_no, "reduction_ratio");
    r.k_optimal = parse_field<double>(f[11], line_no, "k_optimal");
    r.k_min = parse_field<unsigned>(f[12], line_no, "k_min");
    const auto round_flag = parse_field<unsigned>(f[13], line_no, "is_round_of_continuous");
    if (round_flag > 1) {
      throw InvalidInput("sweep CSV line " + std::to_string(line_no) +
                         ": is_round_of_continuous must be 0 or 1");
    }
    r.is_round_of_continuous = round_flag == 1;
    r.sim_bits_per_access = parse_optional(f[14], line_no, "sim_bits_per_access");
    r.sim_rel_error = parse_optional(f[15], line_no, "sim_rel_error");
    r.energy_ratio = parse_optional(f[16], line_no, "energy_ratio");
    r.mttf_ratio = parse_optional(f[17], line_no, "mttf_ratio");
    validate_row(r, line_no);
    rows.push_back(r);
  }
  return rows;
}

std::vector<CurveRow> run_curves(const std::vector<CacheConfig>& configs, KRange k_range) {
  if (configs.empty()) throw InvalidInput("curves need at least one cache configuration");
  if (k_range.first > k_range.last) throw InvalidInput("k range is empty");
  std::vector<CurveRow> rows;
  for (const auto& c : configs) {
    const TagGeometry g = derive_geometry(c);
    const double baseline = baseline_bits(g.tag_bits, c.associativity);
    const std::string id = config_id(c);
    const unsigned last = std::min(k_range.last, g.tag_bits);
    for (unsigned k = k_range.first; k <= last; ++k) {
      const SplitEval e = expected_reads(g.tag_bits, c.associativity, k);
      rows.push_back({id, k, e.first_step_bits / baseline, e.expected_second_step_bits / baseline,
                      e.total_bits / baseline});
    }
  }
  return rows;
}

void write_curves(std::ostream& out, const std::vector<CurveRow>& rows, OutputFormat format) {
  if (format == OutputFormat::csv) out << kCurvesCsvHeader << '\n';
  for (const auto& r : rows) {
    if (format == OutputFormat::csv) {
      out << r.config_id << ',' << r.k << ',' << format_real(r.step1_normalized) << ','
          << format_real(r.step2_normalized) << ',' << format_real(r.total_normalized) << '\n';
    } else {
      nlohmann::ordered_json j;
      j["config_id"] = r.config_id;
      j["k"] = r.k;
      j["step1_normalized"] = r.step1_normalized;
      j["step2_normalized"] = r.step2_normalized;
      j["total_normalized"] = r.total_normalized;
      out << j.dump() << '\n';
    }
  }
}

std::string config_id(const CacheConfig& config) {
  std::uint64_t size = config.cache_size;
  const char* unit = "";
  for (const char* u : {"K", "M", "G"}) {
    if (size < 1024 || size % 1024 != 0) break;
    size /= 1024;
    unit = u;
  }
  std::ostringstream os;
  os << size << unit << '_' << config.associativity << "way_" << config.address_bits << "bit_"
     << config.block_size << 'B';
  return os.str();
}

std::string format_real(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

}  // namespace tagsplit
