// SPDX-License-Identifier: Apache-2.0
#include "tagsplit/cli.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "tagsplit/analytic.hpp"
#include "tagsplit/cache_sim.hpp"
#include "tagsplit/cost_models.hpp"
#include "tagsplit/errors.hpp"
#include "tagsplit/optimum.hpp"
#include "tagsplit/sweep.hpp"
#include "tagsplit/trace.hpp"

namespace tagsplit {

namespace {

template <typename T>
T parse_number(const std::string& text, const char* what) {
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw InvalidInput(std::string("invalid ") + what + " '" + text + "'");
  }
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

// "lo:hi" expands by doubling; plain items are taken as-is.
std::vector<std::uint64_t> expand_pow2_list(const std::vector<std::string>& items,
                                            const std::function<std::uint64_t(const std::string&)>& parse,
                                            const char* what) {
  std::vector<std::uint64_t> out;
  for (const auto& item : items) {
    const auto parts = split(item, ':');
    if (parts.size() == 1) {
      out.push_back(parse(parts[0]));
    } else if (parts.size() == 2) {
      const std::uint64_t lo = parse(parts[0]);
      const std::uint64_t hi = parse(parts[1]);
      if (lo == 0 || lo > hi) throw InvalidInput(std::string("invalid ") + what + " range '" + item + "'");
      for (std::uint64_t v = lo; v <= hi; v *= 2) out.push_back(v);
    } else {
      throw InvalidInput(std::string("invalid ") + what + " '" + item + "'");
    }
  }
  return out;
}

// "lo:hi[:step]" expands arithmetically.
std::vector<unsigned> expand_linear_list(const std::vector<std::string>& items, const char* what) {
  std::vector<unsigned> out;
  for (const auto& item : items) {
    const auto parts = split(item, ':');
    if (parts.size() == 1) {
      out.push_back(parse_number<unsigned>(parts[0], what));
      continue;
    }
    if (parts.size() > 3) throw InvalidInput(std::string("invalid ") + what + " '" + item + "'");
    const auto lo = parse_number<unsigned>(parts[0], what);
    const auto hi = parse_number<unsigned>(parts[1], what);
    const unsigned step = parts.size() == 3 ? parse_number<unsigned>(parts[2], what) : 1;
    if (step == 0 || lo > hi) throw InvalidInput(std::string("invalid ") + what + " range '" + item + "'");
    for (unsigned v = lo; v <= hi; v += step) out.push_back(v);
  }
  return out;
}

KRange parse_k_range(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() == 1) {
    const auto k = parse_number<unsigned>(parts[0], "k range");
    return {k, k};
  }
  if (parts.size() != 2) throw InvalidInput("invalid k range '" + text + "' (expected lo:hi)");
  KRange r{parse_number<unsigned>(parts[0], "k range"), parse_number<unsigned>(parts[1], "k range")};
  if (r.first > r.last) throw InvalidInput("k range '" + text + "' is empty");
  return r;
}

RunOptions parse_warmup(const std::string& text) {
  if (text == "none") return {};
  if (text == "fill") return {WarmupPolicy::fill, 0};
  return {WarmupPolicy::count, parse_number<std::uint64_t>(text, "warm-up count")};
}

std::uint64_t parse_assoc(const std::string& text) {
  return parse_number<std::uint64_t>(text, "associativity");
}

void write_output(const std::string& path, std::ostream& fallback,
                  const std::function<void(std::ostream&)>& emit) {
  if (path.empty()) {
    emit(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open " + path + " for writing");
  emit(file);
  file.flush();
  if (!file) throw IoError("failed writing " + path);
}

std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", fraction * 100.0);
  return buf;
}

// Options shared by the single-configuration commands.
struct ConfigOptions {
  std::string size = "1M";
  std::uint64_t assoc = 8;
  unsigned addr_bits = 40;
  std::string block = "64";

  void attach(CLI::App& app) {
    app.add_option("--size", size, "Cache size in bytes, K/M/G suffixes allowed")
        ->capture_default_str();
    app.add_option("--assoc", assoc, "Associativity (ways)")->capture_default_str();
    app.add_option("--addr-bits", addr_bits, "Address length in bits")->capture_default_str();
    app.add_option("--block", block, "Block size in bytes")->capture_default_str();
  }

  CacheConfig config() const { return {addr_bits, parse_size(size), parse_size(block), assoc}; }
};

// Options of commands that take lists of configurations.
struct GridOptions {
  std::vector<std::string> sizes;
  std::vector<std::string> assocs;
  std::vector<std::string> addr_bits;
  std::string block = "64";
  std::string k_range = "1:10";

  void attach(CLI::App& app) {
    app.add_option("--size", sizes, "Cache sizes: list, or lo:hi doubling range")->delimiter(',');
    app.add_option("--assoc", assocs, "Associativities: list, or lo:hi doubling range")
        ->delimiter(',');
    app.add_option("--addr-bits", addr_bits, "Address lengths: list, or lo:hi[:step] range")
        ->delimiter(',');
    app.add_option("--block", block, "Block size in bytes")->capture_default_str();
    app.add_option("--k-range", k_range, "Splitting points lo:hi")->capture_default_str();
  }
};

struct TraceOptions {
  std::string kind = "uniform";
  std::uint64_t length = 1'000'000;
  std::uint64_t seed = 1;
  std::uint64_t stride = 64;
  std::uint64_t base = 0;
  double zipf_s = 1.2;
  std::uint64_t zipf_blocks = 1u << 16;

  void attach(CLI::App& app, const char* kind_flag) {
    app.add_option(kind_flag, kind, "Trace generator: uniform, stride or zipf-block")
        ->capture_default_str();
    app.add_option("--length", length, "Number of generated addresses")->capture_default_str();
    app.add_option("--seed", seed, "Generator seed")->capture_default_str();
    app.add_option("--stride", stride, "Stride in bytes (stride traces)")->capture_default_str();
    app.add_option("--base", base, "Base address (stride and zipf-block traces)")
        ->capture_default_str();
    app.add_option("--zipf-s", zipf_s, "Zipf exponent (zipf-block traces)")->capture_default_str();
    app.add_option("--zipf-blocks", zipf_blocks, "Distinct blocks (zipf-block traces)")
        ->capture_default_str();
  }

  TraceParams params(unsigned address_bits, std::uint64_t block_size) const {
    TraceParams p;
    p.address_bits = address_bits;
    p.base = base;
    p.stride = stride;
    p.zipf_exponent = zipf_s;
    p.zipf_blocks = zipf_blocks;
    p.block_size = block_size;
    return p;
  }
};

// ---------------------------------------------------------------------------

int cmd_analyze(const ConfigOptions& co, const CLI::Option* k_opt, unsigned k_arg,
                const std::string& params_path, double accesses, const std::string& format,
                std::ostream& out) {
  const CacheConfig config = co.config();
  const TagGeometry g = derive_geometry(config);
  const OptimumResult opt = k_min_integer(g.tag_bits, config.associativity);
  const unsigned k = k_opt->count() ? k_arg : opt.k_min;
  if (k > g.tag_bits) {
    throw InvalidInput("k=" + std::to_string(k) + " outside [0, n=" + std::to_string(g.tag_bits) + "]");
  }

  SweepSpec spec;
  spec.cache_sizes = {config.cache_size};
  spec.associativities = {config.associativity};
  spec.address_bits = {config.address_bits};
  spec.block_size = config.block_size;
  spec.k_range = {k, k};
  spec.accesses = accesses;
  if (!params_path.empty()) spec.cost_params = load_cost_params(params_path);
  const std::vector<SweepRow> rows = run_sweep(spec);
  const SweepRow& row = rows.front();

  if (!format.empty()) {
    write_sweep(out, rows, parse_output_format(format));
    return kExitOk;
  }
  out << "cache: " << config_id(config) << '\n'
      << "sets: " << g.sets << '\n'
      << "index_bits: " << g.index_bits << '\n'
      << "offset_bits: " << g.offset_bits << '\n'
      << "tag_bits: " << g.tag_bits << '\n'
      << "baseline_bits: " << format_real(row.baseline_bits) << '\n'
      << "k_optimal: " << format_real(opt.k_optimal) << '\n'
      << "k_min: " << opt.k_min << '\n'
      << "k_min_is_round_of_k_optimal: " << (row.is_round_of_continuous ? "yes" : "no") << '\n'
      << "k: " << k << '\n'
      << "first_step_bits: " << format_real(row.first_step_bits) << '\n'
      << "second_step_bits: " << format_real(row.second_step_bits) << '\n'
      << "total_bits: " << format_real(row.total_bits) << '\n'
      << "reduction_ratio: " << format_real(row.reduction_ratio) << '\n'
      << "read_reduction: " << percent(1.0 - row.reduction_ratio) << '\n';
  if (row.energy_ratio) {
    out << "energy_ratio: " << format_real(*row.energy_ratio) << '\n'
        << "mttf_ratio: " << format_real(*row.mttf_ratio) << '\n'
        << "note: ratios assume " << format_real(accesses)
        << " accesses; MTTF counts read disturbance only, each bit read an independent trial\n";
  }
  return kExitOk;
}

struct SweepCliOptions {
  GridOptions grid;
  std::string preset;
  std::vector<unsigned> k;
  bool simulate = false;
  TraceOptions trace;
  std::string warmup = "none";
  std::string params;
  double accesses = 1e6;
  std::string out;
  std::string format = "csv";
  unsigned threads = 0;
};

int cmd_sweep(const SweepCliOptions& o, std::ostream& out, std::ostream& err) {
  SweepSpec spec;
  std::optional<std::pair<unsigned, unsigned>> asserted;
  if (o.preset == "conventional") {
    spec = conventional_grid();
    asserted = {3, 5};
  } else if (o.preset == "extended") {
    spec = extended_grid();
    asserted = {2, 6};
  } else if (!o.preset.empty()) {
    throw InvalidInput("unknown grid preset '" + o.preset + "' (expected conventional or extended)");
  }
  if (!o.grid.sizes.empty()) spec.cache_sizes = expand_pow2_list(o.grid.sizes, parse_size, "cache size");
  if (!o.grid.assocs.empty()) {
    spec.associativities = expand_pow2_list(o.grid.assocs, parse_assoc, "associativity");
  }
  if (!o.grid.addr_bits.empty()) spec.address_bits = expand_linear_list(o.grid.addr_bits, "address bits");
  spec.block_size = parse_size(o.grid.block);
  spec.k_range = parse_k_range(o.grid.k_range);
  if (!o.k.empty()) spec.k_range = {o.k.front(), o.k.front()};
  spec.include_simulation = o.simulate;
  spec.trace_kind = parse_trace_kind(o.trace.kind);
  spec.trace_length = o.trace.length;
  spec.seed = o.trace.seed;
  spec.trace_params = o.trace.params(40, spec.block_size);
  spec.run_options = parse_warmup(o.warmup);
  if (!o.params.empty()) spec.cost_params = load_cost_params(o.params);
  spec.accesses = o.accesses;
  spec.threads = o.threads;
  const OutputFormat format = parse_output_format(o.format);

  const std::vector<SweepRow> rows = run_sweep(spec);
  write_output(o.out, out, [&](std::ostream& os) { write_sweep(os, rows, format); });

  unsigned lo = ~0u, hi = 0;
  std::set<unsigned> deviations;
  std::map<unsigned, std::set<unsigned>> kmin_by_tag;
  for (const auto& r : rows) {
    lo = std::min(lo, r.k_min);
    hi = std::max(hi, r.k_min);
    if (!r.is_round_of_continuous) deviations.insert(r.tag_bits);
    kmin_by_tag[r.tag_bits].insert(r.k_min);
  }
  err << "rows: " << rows.size() << '\n' << "k_min span: [" << lo << ", " << hi << "]\n";
  err << "k_min != round(k_optimal) for tag lengths:";
  if (deviations.empty()) err << " none";
  for (unsigned n : deviations) err << ' ' << n;
  err << '\n';
  for (const auto& [n, ks] : kmin_by_tag) {
    if (ks.size() != 1) throw InvariantViolation("k_min varies across associativity at n=" + std::to_string(n));
  }
  err << "note: k_min is a function of tag length alone; associativity acts only through n\n";
  if (asserted && (lo < asserted->first || hi > asserted->second)) {
    err << "error: k_min span [" << lo << ", " << hi << "] leaves the expected range ["
        << asserted->first << ", " << asserted->second << "] for the " << o.preset << " grid\n";
    return kExitInternal;
  }
  return kExitOk;
}

struct SimulateCliOptions {
  ConfigOptions config;
  std::optional<unsigned> k;
  std::string trace_path;
  TraceOptions trace;
  std::string warmup = "none";
  std::string params;
  std::string out;
  std::string format = "csv";
};

int cmd_simulate(const SimulateCliOptions& o, std::ostream& out) {
  const CacheConfig config = o.config.config();
  const TagGeometry g = derive_geometry(config);
  const unsigned n = g.tag_bits;
  unsigned k = 0;
  if (o.k) {
    k = *o.k;
  } else {
    if (n < 2) throw InvalidInput("--k is required when the tag is shorter than 2 bits");
    k = k_min_integer(n, config.associativity).k_min;
  }
  if (k > n) throw InvalidInput("k=" + std::to_string(k) + " outside [0, n=" + std::to_string(n) + "]");
  const OutputFormat format = parse_output_format(o.format);
  std::optional<CostParams> cost;
  if (!o.params.empty()) cost = load_cost_params(o.params);

  std::vector<TraceRecord> trace;
  std::string source;
  if (!o.trace_path.empty()) {
    trace = load_trace(o.trace_path);
    source = o.trace_path;
  } else {
    const TraceKind kind = parse_trace_kind(o.trace.kind);
    trace = generate_trace(kind, o.trace.length, o.trace.seed,
                           o.trace.params(config.address_bits, config.block_size));
    source = std::string(to_string(kind)) + " generator, seed " + std::to_string(o.trace.seed);
  }

  TagSplitCache cache(config, k);
  const SimStats stats = run_trace(cache, trace, parse_warmup(o.warmup));
  const SplitEval analytic = expected_reads(n, config.associativity, k);
  const double rel_error = (stats.bits_per_access() - analytic.total_bits) / analytic.total_bits;
  std::optional<NormalizedMetrics> metrics;
  if (cost) {
    metrics = normalized_metrics_from_counts(static_cast<double>(stats.total_bit_reads()),
                                             static_cast<double>(stats.baseline_bit_reads),
                                             static_cast<double>(stats.accesses), *cost);
  }

  out << "cache: " << config_id(config) << '\n'
      << "tag_bits: " << n << '\n'
      << "k: " << k << '\n'
      << "trace: " << source << ", " << trace.size() << " records\n"
      << "warmup_discarded: " << trace.size() - stats.accesses << '\n'
      << "accesses: " << stats.accesses << '\n'
      << "hits: " << stats.hits << '\n'
      << "misses: " << stats.misses << '\n'
      << "step1_bit_reads: " << stats.step1_bit_reads << '\n'
      << "step2_bit_reads: " << stats.step2_bit_reads << '\n'
      << "baseline_bit_reads: " << stats.baseline_bit_reads << '\n'
      << "bits_per_access: " << format_real(stats.bits_per_access()) << '\n'
      << "analytic_bits_per_access: " << format_real(analytic.total_bits) << '\n'
      << "rel_error: " << format_real(rel_error) << '\n'
      << "mean_survivors: " << format_real(stats.mean_survivors()) << '\n'
      << "analytic_mean_survivors: " << format_real(expected_matched_ways(config.associativity, k))
      << '\n'
      << "normalized_reads: " << format_real(stats.normalized_reads()) << '\n';
  if (metrics) {
    out << "energy_ratio: " << format_real(metrics->energy_ratio) << '\n'
        << "mttf_ratio: " << format_real(metrics->mttf_ratio) << '\n'
        << "note: MTTF counts read disturbance only, each bit read an independent trial\n";
  }
  out << "note: normalization baseline is this trace under single-step comparison (n*x bits per "
         "access)\n";

  if (!o.out.empty()) {
    write_output(o.out, out, [&](std::ostream& os) {
      auto opt_real = [](const std::optional<NormalizedMetrics>& m, double NormalizedMetrics::*f) {
        return m ? format_real((*m).*f) : std::string();
      };
      if (format == OutputFormat::csv) {
        os << "cache_size,associativity,address_bits,block_size,tag_bits,k,accesses,hits,misses,"
              "step1_bit_reads,step2_bit_reads,baseline_bit_reads,bits_per_access,"
              "analytic_bits_per_access,rel_error,normalized_reads,mean_survivors,energy_ratio,"
              "mttf_ratio\n"
           << config.cache_size << ',' << config.associativity << ',' << config.address_bits << ','
           << config.block_size << ',' << n << ',' << k << ',' << stats.accesses << ','
           << stats.hits << ',' << stats.misses << ',' << stats.step1_bit_reads << ','
           << stats.step2_bit_reads << ',' << stats.baseline_bit_reads << ','
           << format_real(stats.bits_per_access()) << ',' << format_real(analytic.total_bits)
           << ',' << format_real(rel_error) << ',' << format_real(stats.normalized_reads()) << ','
           << format_real(stats.mean_survivors()) << ','
           << opt_real(metrics, &NormalizedMetrics::energy_ratio) << ','
           << opt_real(metrics, &NormalizedMetrics::mttf_ratio) << '\n';
      } else {
        nlohmann::ordered_json j;
        j["cache_size"] = config.cache_size;
        j["associativity"] = config.associativity;
        j["address_bits"] = config.address_bits;
        j["block_size"] = config.block_size;
        j["tag_bits"] = n;
        j["k"] = k;
        j["accesses"] = stats.accesses;
        j["hits"] = stats.hits;
        j["misses"] = stats.misses;
        j["step1_bit_reads"] = stats.step1_bit_reads;
        j["step2_bit_reads"] = stats.step2_bit_reads;
        j["baseline_bit_reads"] = stats.baseline_bit_reads;
        j["bits_per_access"] = stats.bits_per_access();
        j["analytic_bits_per_access"] = analytic.total_bits;
        j["rel_error"] = rel_error;
        j["normalized_reads"] = stats.normalized_reads();
        j["mean_survivors"] = stats.mean_survivors();
        j["energy_ratio"] = metrics ? nlohmann::json(metrics->energy_ratio) : nlohmann::json();
        j["mttf_ratio"] = metrics ? (std::isinf(metrics->mttf_ratio) ? nlohmann::json("inf")
                                                                     : nlohmann::json(metrics->mttf_ratio))
                                  : nlohmann::json();
        os << j.dump() << '\n';
      }
    });
  }
  return kExitOk;
}

int cmd_gen_trace(const TraceOptions& t, unsigned addr_bits, const std::string& block,
                  const std::string& path, std::ostream& out) {
  const TraceKind kind = parse_trace_kind(t.kind);
  const std::vector<TraceRecord> trace =
      generate_trace(kind, t.length, t.seed, t.params(addr_bits, parse_size(block)));
  save_trace(path, trace);
  out << "wrote " << trace.size() << ' ' << to_string(kind) << " addresses to " << path << '\n';
  return kExitOk;
}

int cmd_curves(const GridOptions& o, const std::string& path, const std::string& format,
               std::ostream& out) {
  if (o.sizes.empty() || o.assocs.empty() || o.addr_bits.empty()) {
    throw InvalidInput("curves need --size, --assoc and --addr-bits");
  }
  const auto sizes = expand_pow2_list(o.sizes, parse_size, "cache size");
  const auto assocs = expand_pow2_list(o.assocs, parse_assoc, "associativity");
  const auto addrs = expand_linear_list(o.addr_bits, "address bits");
  const std::uint64_t block = parse_size(o.block);
  std::vector<CacheConfig> configs;
  std::vector<std::string> invalid;
  for (auto s : sizes) {
    for (auto a : assocs) {
      for (auto ad : addrs) {
        CacheConfig c{ad, s, block, a};
        try {
          derive_geometry(c);
          configs.push_back(c);
        } catch (const InvalidInput& e) {
          invalid.push_back(config_id(c) + ": " + e.what());
        }
      }
    }
  }
  if (!invalid.empty()) {
    std::string msg = std::to_string(invalid.size()) + " invalid configuration(s):";
    for (const auto& s : invalid) msg += "\n  " + s;
    throw InvalidInput(msg);
  }
  const OutputFormat fmt = parse_output_format(format);
  const auto rows = run_curves(configs, parse_k_range(o.k_range));
  write_output(path, out, [&](std::ostream& os) { write_curves(os, rows, fmt); });
  return kExitOk;
}

}  // namespace

std::uint64_t parse_size(const std::string& text) {
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::toupper(c); });
  if (t.ends_with("IB")) {
    t.resize(t.size() - 2);
  } else if (t.ends_with("B")) {
    t.resize(t.size() - 1);
  }
  std::uint64_t scale = 1;
  if (!t.empty()) {
    switch (t.back()) {
      case 'K': scale = std::uint64_t{1} << 10; break;
      case 'M': scale = std::uint64_t{1} << 20; break;
      case 'G': scale = std::uint64_t{1} << 30; break;
      default: break;
    }
    if (scale != 1) t.pop_back();
  }
  const auto value = parse_number<std::uint64_t>(t, "size");
  if (value > (~std::uint64_t{0}) / scale) throw InvalidInput("size '" + text + "' overflows");
  return value * scale;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tag-partitioning design-space explorer", "tagsplit"};
  app.require_subcommand(1);

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Geometry, optimum and expected reads for one cache");
  ConfigOptions analyze_cfg;
  analyze_cfg.attach(*analyze);
  unsigned analyze_k = 0;
  auto* analyze_k_opt = analyze->add_option("--k", analyze_k, "Splitting point (default k_min)");
  std::string analyze_params;
  analyze->add_option("--params", analyze_params, "Energy/reliability parameter file (JSON)");
  double analyze_accesses = 1e6;
  analyze->add_option("--accesses", analyze_accesses, "Accesses assumed by energy/MTTF ratios")
      ->capture_default_str();
  std::string analyze_format;
  analyze->add_option("--format", analyze_format, "Emit a csv or json-lines row instead of a report");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Design-space sweep over geometries and splitting points");
  SweepCliOptions sw;
  sw.grid.attach(*sweep);
  sweep->add_option("--grid", sw.preset, "Preset grid: conventional or extended");
  sweep->add_option("--k", sw.k, "Single splitting point (overrides --k-range)")->expected(1);
  sweep->add_flag("--simulate", sw.simulate, "Also run the trace-driven simulator per row");
  sw.trace.length = 100'000;
  sw.trace.attach(*sweep, "--trace-kind");
  sweep->add_option("--warmup", sw.warmup, "none, fill, or a number of accesses")->capture_default_str();
  sweep->add_option("--params", sw.params, "Energy/reliability parameter file (JSON)");
  sweep->add_option("--accesses", sw.accesses, "Accesses assumed by energy/MTTF ratios")
      ->capture_default_str();
  sweep->add_option("--out", sw.out, "Output path (default stdout)");
  sweep->add_option("--format", sw.format, "csv or json-lines")->capture_default_str();
  sweep->add_option("--threads", sw.threads, "Worker threads (0 = all cores)")->capture_default_str();

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Trace-driven simulation at one splitting point");
  SimulateCliOptions sim;
  sim.config.attach(*simulate);
  unsigned sim_k = 0;
  auto* sim_k_opt = simulate->add_option("--k", sim_k, "Splitting point (default k_min)");
  simulate->add_option("--trace", sim.trace_path, "Trace file (.bin binary, otherwise text)");
  sim.trace.attach(*simulate, "--trace-kind");
  simulate->add_option("--warmup", sim.warmup, "none, fill, or a number of accesses")
      ->capture_default_str();
  simulate->add_option("--params", sim.params, "Energy/reliability parameter file (JSON)");
  simulate->add_option("--out", sim.out, "Write the result row to this path");
  simulate->add_option("--format", sim.format, "csv or json-lines")->capture_default_str();

  // gen-trace
  auto* gen = app.add_subcommand("gen-trace", "Write a synthetic address trace");
  TraceOptions gen_trace;
  gen_trace.attach(*gen, "--kind");
  unsigned gen_addr_bits = 40;
  gen->add_option("--addr-bits", gen_addr_bits, "Address length in bits")->capture_default_str();
  std::string gen_block = "64";
  gen->add_option("--block", gen_block, "Block size for zipf-block traces")->capture_default_str();
  std::string gen_out;
  gen->add_option("--out", gen_out, "Output path: .trace (text) or .bin (binary)")->required();

  // curves
  auto* curves = app.add_subcommand("curves", "Normalised per-step expected reads versus k");
  GridOptions curves_grid;
  curves_grid.attach(*curves);
  std::string curves_out;
  curves->add_option("--out", curves_out, "Output path (default stdout)");
  std::string curves_format = "csv";
  curves->add_option("--format", curves_format, "csv or json-lines")->capture_default_str();

  std::vector<const char*> argv{"tagsplit"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  try {
    if (analyze->parsed()) {
      return cmd_analyze(analyze_cfg, analyze_k_opt, analyze_k, analyze_params, analyze_accesses,
                         analyze_format, out);
    }
    if (sweep->parsed()) return cmd_sweep(sw, out, err);
    if (simulate->parsed()) {
      if (sim_k_opt->count()) sim.k = sim_k;
      return cmd_simulate(sim, out);
    }
    if (gen->parsed()) return cmd_gen_trace(gen_trace, gen_addr_bits, gen_block, gen_out, out);
    if (curves->parsed()) return cmd_curves(curves_grid, curves_out, curves_format, out);
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIoFailure;
  } catch (const InvariantViolation& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace tagsplit
