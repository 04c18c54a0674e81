// SPDX-License-Identifier: Apache-2.0
#include "tagsplit/cost_models.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include <json.hpp>

#include "tagsplit/analytic.hpp"
#include "tagsplit/errors.hpp"

namespace tagsplit {

namespace {

constexpr std::array<const char*, 5> kParamKeys = {
    "energy_per_bit_read", "fixed_energy_per_access", "leakage_power", "execution_time",
    "p_read_disturb"};

void require_nonnegative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw InvalidInput(std::string(name) + " must be finite and >= 0");
  }
}

// lambda = -bits * ln(1 - p) / T, without the round trip through R, which
// would lose all precision once R is within a few ulps of 1.
double failure_rate(double bits_read, const ReliabilityParams& params) {
  return -bits_read * std::log1p(-params.p_read_disturb) / params.execution_time;
}

double ratio_of_mttf(double lambda_partitioned, double lambda_baseline) {
  if (lambda_partitioned == 0.0 && lambda_baseline == 0.0) return 1.0;
  if (lambda_partitioned == 0.0) return std::numeric_limits<double>::infinity();
  return lambda_baseline / lambda_partitioned;
}

}  // namespace

CostParams parse_cost_params(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(std::string("parameter file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InvalidInput("parameter file must hold a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (std::find(kParamKeys.begin(), kParamKeys.end(), key) == kParamKeys.end()) {
      throw InvalidInput("unknown parameter '" + key + "'");
    }
  }
  auto get = [&](const char* key) {
    const auto it = doc.find(key);
    if (it == doc.end()) throw InvalidInput(std::string("missing parameter '") + key + "'");
    if (!it->is_number()) throw InvalidInput(std::string("parameter '") + key + "' must be a number");
    return it->get<double>();
  };

  CostParams p;
  p.energy.energy_per_bit_read = get("energy_per_bit_read");
  p.energy.fixed_energy_per_access = get("fixed_energy_per_access");
  p.energy.leakage_power = get("leakage_power");
  p.energy.execution_time = get("execution_time");
  p.reliability.p_read_disturb = get("p_read_disturb");
  p.reliability.execution_time = p.energy.execution_time;
  validate(p.energy);
  validate(p.reliability);
  return p;
}

CostParams load_cost_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open parameter file " + path.string());
  return parse_cost_params(in);
}

void validate(const EnergyParams& params) {
  require_nonnegative(params.energy_per_bit_read, "energy_per_bit_read");
  require_nonnegative(params.fixed_energy_per_access, "fixed_energy_per_access");
  require_nonnegative(params.leakage_power, "leakage_power");
  require_nonnegative(params.execution_time, "execution_time");
}

void validate(const ReliabilityParams& params) {
  if (!(params.p_read_disturb >= 0.0 && params.p_read_disturb < 1.0)) {
    throw InvalidInput("p_read_disturb must lie in [0, 1)");
  }
  if (!(params.execution_time > 0.0) || !std::isfinite(params.execution_time)) {
    throw InvalidInput("execution_time must be finite and > 0");
  }
}

double tag_energy(double bits_read, double accesses, const EnergyParams& params) {
  require_nonnegative(bits_read, "bits_read");
  require_nonnegative(accesses, "accesses");
  validate(params);
  return bits_read * params.energy_per_bit_read + accesses * params.fixed_energy_per_access +
         params.leakage_power * params.execution_time;
}

double reliability(double bits_read, const ReliabilityParams& params) {
  require_nonnegative(bits_read, "bits_read");
  if (!(params.p_read_disturb >= 0.0 && params.p_read_disturb < 1.0)) {
    throw InvalidInput("p_read_disturb must lie in [0, 1)");
  }
  if (bits_read == 0.0) return 1.0;
  return std::exp(bits_read * std::log1p(-params.p_read_disturb));
}

double mttf(double reliability, double execution_time) {
  if (!(reliability > 0.0 && reliability <= 1.0)) {
    throw InvalidInput("reliability must lie in (0, 1]");
  }
  if (!(execution_time > 0.0)) throw InvalidInput("execution_time must be > 0");
  if (reliability == 1.0) return std::numeric_limits<double>::infinity();
  const double lambda = -std::log(reliability) / execution_time;
  return 1.0 / lambda;
}

NormalizedMetrics normalized_metrics_from_counts(double partitioned_bits, double baseline_bits,
                                                 double accesses, const CostParams& params) {
  validate(params.reliability);
  NormalizedMetrics m;
  const double e_part = tag_energy(partitioned_bits, accesses, params.energy);
  const double e_base = tag_energy(baseline_bits, accesses, params.energy);
  m.energy_ratio = e_base == 0.0 ? 1.0 : e_part / e_base;
  m.mttf_ratio = ratio_of_mttf(failure_rate(partitioned_bits, params.reliability),
                               failure_rate(baseline_bits, params.reliability));
  return m;
}

NormalizedMetrics normalized_metrics(unsigned n, std::uint64_t x, unsigned k,
                                     const CostParams& params, double accesses) {
  require_nonnegative(accesses, "accesses");
  const SplitEval e = expected_reads(n, x, k);
  return normalized_metrics_from_counts(e.total_bits * accesses, baseline_bits(n, x) * accesses,
                                        accesses, params);
}

}  // namespace tagsplit
