#pragma once

#include "polfid/capacity.hpp"
#include "polfid/channels.hpp"
#include "polfid/core.hpp"
#include "polfid/disorder.hpp"
#include "polfid/quadrature.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace polfid {

/// Coupling grid in units of gbar = g sqrt(n0) / Omega. Either an explicit
/// ascending list or `points` log-spaced values on [gbar_min, gbar_max],
/// optionally preceded by 0.
struct SweepSpec {
  double gbar_min = 1e-3;
  double gbar_max = 10.0;
  int points = 201;
  bool include_zero = true;
  std::optional<std::vector<double>> explicit_values;

  std::vector<double> values() const;
  bool operator==(const SweepSpec&) const = default;
};

struct MonteCarloConfig {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 20251015;
  bool operator==(const MonteCarloConfig&) const = default;
};

struct CapacitySweepConfig {
  int d = 4;
  double Lambda = 8.0;  ///< band limit 2 pi / Lambda for non-depolarizing channels
  CapacityConfig solver;
  SweepSpec sweep{0.1, 10.0, 13, true, std::nullopt};
  bool operator==(const CapacitySweepConfig&) const = default;
};

struct IntegralTableConfig {
  std::vector<double> lambda_over_sigma{0.0, 0.5, 1.0, 2.0};
  bool operator==(const IntegralTableConfig&) const = default;
};

struct RunConfig {
  MediumParams medium;
  WavepacketSpec wavepacket;
  std::vector<ChannelSpec> channels;
  SweepSpec sweep;
  QuadratureConfig quadrature;
  double epsilon = 1e-3;  ///< cutoff for the log-divergent I_2 integrals
  DisorderSpec disorder;
  MonteCarloConfig monte_carlo;
  CapacitySweepConfig capacity;
  IntegralTableConfig integrals;
  int threads = 0;  ///< 0 = hardware concurrency
  std::string output;  ///< empty = stdout

  void validate() const;
  bool operator==(const RunConfig&) const = default;
};

/// Defaults: c^3 n0 / Omega^3 = 1, c k0 / Omega = 1/2 along x, sigma = 0.25,
/// channels erasure(p=1), dephasing(V=1), depolarizing(p=0.5, alpha=4, Lambda=8).
RunConfig default_config();

/// Missing keys take defaults; unknown keys and out-of-range values raise
/// ValidationError naming the JSON path.
RunConfig config_from_json(const nlohmann::json& doc);

/// Parses text; syntax errors report line and column.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Canonical form: every field explicit, keys sorted.
nlohmann::json to_json(const RunConfig& config);
std::string dump_config(const RunConfig& config);

}  // namespace polfid
