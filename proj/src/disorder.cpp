#include "polfid/disorder.hpp"

#include "polfid/error.hpp"

#include <cmath>
#include <numbers>

namespace polfid {
namespace {

constexpr double kPi = std::numbers::pi;

// lambda^2 / sigma^2 * e^{-2a} / (1 - e^{-4a}); shared by both channels.
double diffusion_shape(const WavepacketSpec& wp) {
  const double a = wp.lambda_over_sigma() * wp.lambda_over_sigma();
  return a * std::exp(-2.0 * a) / -std::expm1(-4.0 * a);
}

double carrier_weight(double g, const MediumParams& medium, const WavepacketSpec& wp) {
  medium.validate();
  wp.validate();
  if (!(medium.c * wp.k0_mag < medium.Omega)) {
    throw ValidationError("diffusion-approximation fidelities require c * k0_mag < Omega");
  }
  return weight_N(wp.k0_mag, g, medium);
}

}  // namespace

void DisorderSpec::validate() const {
  if (!(C0 >= 0.0) || !std::isfinite(C0)) throw ValidationError("disorder.C0 must be finite and >= 0");
}

IntegralEstimate diffusion_integral(const WavepacketSpec& wp, const QuadratureConfig& quad, double cutoff_eps) {
  wp.validate();
  if (!(cutoff_eps > 0.0)) throw ValidationError("diffusion fidelities need a cutoff eps > 0 (I_2^- diverges)");
  AngularIntegralSpec spec;
  spec.n = 2;
  spec.sign = Sign::Minus;
  spec.lambda_over_sigma = wp.lambda_over_sigma();
  spec.k0_hat = wp.k0_hat;
  spec.cutoff_eps = cutoff_eps;
  return integral_I_converged(spec, quad);
}

double avg_fidelity_erasure_diffusion(double g, double p, const MediumParams& medium, const WavepacketSpec& wp,
                                      double i2_minus, const DisorderSpec& disorder) {
  disorder.validate();
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("erasure.p must lie in [0, 1]");
  return p / (4.0 * kPi) * diffusion_shape(wp) * carrier_weight(g, medium, wp) * i2_minus;
}

double avg_fidelity_erasure_diffusion(double g, double p, const MediumParams& medium, const WavepacketSpec& wp,
                                      const QuadratureConfig& quad, double cutoff_eps,
                                      const DisorderSpec& disorder) {
  return avg_fidelity_erasure_diffusion(g, p, medium, wp, diffusion_integral(wp, quad, cutoff_eps).value, disorder);
}

double avg_fidelity_dephasing_diffusion(double g, const MediumParams& medium, const WavepacketSpec& wp,
                                        double i2_minus, const DisorderSpec& disorder) {
  disorder.validate();
  return diffusion_shape(wp) / std::pow(2.0 * kPi, 6) * carrier_weight(g, medium, wp) * i2_minus;
}

double avg_fidelity_dephasing_diffusion(double g, const MediumParams& medium, const WavepacketSpec& wp,
                                        const QuadratureConfig& quad, double cutoff_eps,
                                        const DisorderSpec& disorder) {
  return avg_fidelity_dephasing_diffusion(g, medium, wp, diffusion_integral(wp, quad, cutoff_eps).value, disorder);
}

}  // namespace polfid
