#pragma once

#include "polfid/core.hpp"
#include "polfid/quadrature.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace polfid {

/// Photon transmitted with probability p, otherwise replaced by vacuum.
struct Erasure {
  double p = 1.0;
  bool operator==(const Erasure&) const = default;
};

/// Removes all coherences in the position (mode) basis. V is the system
/// volume entering the trace-preserving normalization.
struct CompletelyDephasing {
  double V = 1.0;
  bool operator==(const CompletelyDephasing&) const = default;
};

/// With probability 1 - p the state is replaced by the band-limited
/// identity of trace alpha, divided by alpha. Lambda sets the band limit
/// 2*pi/Lambda; only the capacity grid uses it.
struct Depolarizing {
  double p = 1.0;
  double alpha = 1.0;
  double Lambda = 8.0;
  bool operator==(const Depolarizing&) const = default;
};

using ChannelSpec = std::variant<Erasure, CompletelyDephasing, Depolarizing>;

void validate(const ChannelSpec& channel);

/// "erasure", "dephasing" or "depolarizing".
std::string_view channel_kind(const ChannelSpec& channel);

/// Kind plus parameters, e.g. "depolarizing[p=0.5;alpha=4;Lambda=8]".
/// Numbers use the shortest round-trip representation.
std::string channel_label(const ChannelSpec& channel);

enum class MediumKind { Uniform, RandomDiffusion };

std::string_view to_string(MediumKind kind);

struct FidelityPoint {
  double g = 0.0;
  ChannelSpec channel;
  MediumKind medium_kind = MediumKind::Uniform;
  double fidelity = 0.0;
  double normalized = 1.0;
  std::optional<double> epsilon_used;
};

// Uniform medium, closed forms ------------------------------------------------

/// F = p N(g).
double fidelity_erasure_uniform(double g, double p, const MediumParams& medium, const WavepacketSpec& wp);

/// g-independent part of the dephasing fidelity:
/// (lambda/sigma)^5 / (2 pi)^5 * e^{-4 a} / (1 - e^{-4 a})^2 * I_1^+(sqrt(2) lambda),
/// with a = lambda^2 / sigma^2. This is F_C at g = 0.
double dephasing_uniform_baseline(const WavepacketSpec& wp, double i1_plus_sqrt2);

/// The angular integral the dephasing closed form needs, I_1^+ at ratio
/// sqrt(2) lambda / sigma with the given cutoff (0 means none).
IntegralEstimate dephasing_uniform_integral(const WavepacketSpec& wp, const QuadratureConfig& quad,
                                            double cutoff_eps = 0.0);

double fidelity_dephasing_uniform(double g, const MediumParams& medium, const WavepacketSpec& wp,
                                  const QuadratureConfig& quad, double cutoff_eps = 0.0);

/// Same, with the angular integral supplied by the caller (for sweeps).
double fidelity_dephasing_uniform(double g, const MediumParams& medium, const WavepacketSpec& wp,
                                  double i1_plus_sqrt2);

/// F = p N(g) + (1 - p) / alpha.
double fidelity_depolarizing_uniform(double g, double p, double alpha, const MediumParams& medium,
                                     const WavepacketSpec& wp);

/// F(g) / F(0) with F(0) taken analytically. Erasure and CompletelyDephasing
/// give exactly N(g); Depolarizing gives
/// (p N + (1-p)/alpha) / (p + (1-p)/alpha). Throws ValidationError when the
/// baseline vanishes (erasure with p = 0).
double normalized_fidelity(const ChannelSpec& channel, double g, const MediumParams& medium,
                           const WavepacketSpec& wp);

// Discretized oracles ---------------------------------------------------------

/// |<psi(0)|psi(g)>|^2 with the wavepacket sampled on the nodes of `rule`.
/// Amplitudes at coupling g are normalized to total weight N(g); throws
/// ValidationError if the rule cannot reproduce the analytic normalization
/// to 1e-8.
double numeric_overlap_fidelity(double g, const MediumParams& medium, const WavepacketSpec& wp,
                                const SphereRule& rule);

/// (V / (2 pi)^3) int d^3x |psi(x,0)|^2 |psi(x,g)|^2, computed from the
/// autocorrelation of the shell spectrum (Parseval) rather than from the
/// angular integral I_1^+. See channels.cpp for the volume convention.
double numeric_overlap_dephasing(double g, const CompletelyDephasing& channel, const MediumParams& medium,
                                 const WavepacketSpec& wp, const SphereRule& rule);

}  // namespace polfid
