#pragma once

#include "polfid/core.hpp"
#include "polfid/quadrature.hpp"

namespace polfid {

/// White-noise density fluctuations, <eta(x) eta(y)> = C0 delta(x - y).
///
/// C0 is carried for completeness only: the diffusion-approximation
/// averages below do not depend on it.
struct DisorderSpec {
  double C0 = 0.0;

  void validate() const;
  bool operator==(const DisorderSpec&) const = default;
};

/// I_2^- at ratio lambda / sigma with cutoff eps (> 0).
IntegralEstimate diffusion_integral(const WavepacketSpec& wp, const QuadratureConfig& quad, double cutoff_eps);

/// Average erasure fidelity in the diffusion approximation:
/// p lambda^2 / (4 pi sigma^2) e^{-2a} / (1 - e^{-4a}) N(g) I_2^-(lambda).
double avg_fidelity_erasure_diffusion(double g, double p, const MediumParams& medium, const WavepacketSpec& wp,
                                      const QuadratureConfig& quad, double cutoff_eps,
                                      const DisorderSpec& disorder = {});

double avg_fidelity_erasure_diffusion(double g, double p, const MediumParams& medium, const WavepacketSpec& wp,
                                      double i2_minus, const DisorderSpec& disorder = {});

/// Average completely-dephasing fidelity in the diffusion approximation:
/// lambda^2 / (sigma^2 (2 pi)^6) e^{-2a} / (1 - e^{-4a}) N(g) I_2^-(lambda).
double avg_fidelity_dephasing_diffusion(double g, const MediumParams& medium, const WavepacketSpec& wp,
                                        const QuadratureConfig& quad, double cutoff_eps,
                                        const DisorderSpec& disorder = {});

double avg_fidelity_dephasing_diffusion(double g, const MediumParams& medium, const WavepacketSpec& wp,
                                        double i2_minus, const DisorderSpec& disorder = {});

}  // namespace polfid
