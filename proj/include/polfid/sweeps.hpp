#pragma once

#include "polfid/channels.hpp"
#include "polfid/config.hpp"

#include <string>
#include <vector>

namespace polfid {

inline constexpr const char* kFidelityHeader = "gbar,channel,medium_kind,fidelity,normalized,epsilon";
inline constexpr const char* kCapacityHeader = "gbar,channel,d,capacity_bits,iterations,converged";
inline constexpr const char* kIntegralHeader = "n,sign,lambda_over_sigma,epsilon,quadrature,mc_estimate,mc_stderr";

struct FidelityRow {
  double gbar = 0.0;
  FidelityPoint point;
};

/// One row per (gbar, channel, medium kind), gbar-major, channels in config
/// order, uniform before random-diffusion. Random-diffusion rows exist for
/// erasure and dephasing only.
std::vector<FidelityRow> fidelity_sweep(const RunConfig& config);

struct CapacityRow {
  double gbar = 0.0;
  ChannelSpec channel;
  int d = 0;
  CapacityResult result;
};

/// Depolarizing channels use their own Lambda for the mode grid; the others
/// use capacity.Lambda.
std::vector<CapacityRow> capacity_sweep(const RunConfig& config);

struct IntegralRow {
  AngularIntegralSpec spec;
  double quadrature = 0.0;
  int order = 0;
  bool converged = true;
  MonteCarloEstimate monte_carlo;
};

/// n in {1, 2} x sign in {+, -} x configured lambda/sigma values. The n = 1
/// rows use no cutoff (integrable singularity); n = 2 rows use config.epsilon.
std::vector<IntegralRow> integral_table(const RunConfig& config);

std::string render_fidelity_csv(const std::vector<FidelityRow>& rows);
std::string render_capacity_csv(const std::vector<CapacityRow>& rows);
std::string render_integral_csv(const std::vector<IntegralRow>& rows);

std::string run_fidelity_sweep(const RunConfig& config);
std::string run_capacity_sweep(const RunConfig& config);
std::string run_integral_table(const RunConfig& config);

}  // namespace polfid
