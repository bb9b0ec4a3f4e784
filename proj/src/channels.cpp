#include "polfid/channels.hpp"

#include "polfid/error.hpp"
#include "polfid/format.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace polfid {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream os;
    os << what << " must lie in [0, 1] (got " << p << ")";
    throw ValidationError(os.str());
  }
}

void require_validated_branch(const MediumParams& medium, const WavepacketSpec& wp) {
  medium.validate();
  wp.validate();
  if (!(medium.c * wp.k0_mag < medium.Omega)) {
    throw ValidationError("closed-form fidelities require c * k0_mag < Omega");
  }
}

double carrier_weight(double g, const MediumParams& medium, const WavepacketSpec& wp) {
  require_validated_branch(medium, wp);
  return weight_N(wp.k0_mag, g, medium);
}

// int dk exp(-2 a (1 - k.k0)) over the unit sphere = pi (1 - e^{-4a}) / a.
double shell_norm_exact(double a) {
  if (a == 0.0) return 4.0 * kPi;
  return -kPi * std::expm1(-4.0 * a) / a;
}

// Sum of |G|^2 over the rule, G(k) = exp(-a (1 - k.k0)).
double shell_norm_on_rule(double a, const Vec3& k0_hat, const SphereRule& rule) {
  double total = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    total += rule.weights[i] * std::exp(-2.0 * a * (1.0 - rule.nodes[i].dot(k0_hat)));
  }
  return total;
}

void require_rule_resolves_shell(double a, const Vec3& k0_hat, const SphereRule& rule) {
  const double exact = shell_norm_exact(a);
  const double numeric = shell_norm_on_rule(a, k0_hat, rule);
  if (std::abs(numeric - exact) > 1e-8 * exact) {
    std::ostringstream os;
    os << "sphere rule of order " << rule.order << " is too coarse for lambda/sigma = " << std::sqrt(a)
       << " (normalization off by " << std::abs(numeric / exact - 1.0) << " relative)";
    throw ValidationError(os.str());
  }
}

}  // namespace

void validate(const ChannelSpec& channel) {
  std::visit(overloaded{
                 [](const Erasure& e) { check_probability(e.p, "erasure.p"); },
                 [](const CompletelyDephasing& c) {
                   if (!(c.V > 0.0) || !std::isfinite(c.V)) throw ValidationError("dephasing.V must be > 0");
                 },
                 [](const Depolarizing& d) {
                   check_probability(d.p, "depolarizing.p");
                   if (!(d.alpha > 0.0) || !std::isfinite(d.alpha)) {
                     throw ValidationError("depolarizing.alpha must be > 0");
                   }
                   if (!(d.Lambda > 0.0) || !std::isfinite(d.Lambda)) {
                     throw ValidationError("depolarizing.Lambda must be > 0");
                   }
                 },
             },
             channel);
}

std::string_view channel_kind(const ChannelSpec& channel) {
  return std::visit(overloaded{
                        [](const Erasure&) { return std::string_view("erasure"); },
                        [](const CompletelyDephasing&) { return std::string_view("dephasing"); },
                        [](const Depolarizing&) { return std::string_view("depolarizing"); },
                    },
                    channel);
}

std::string channel_label(const ChannelSpec& channel) {
  return std::visit(overloaded{
                        [](const Erasure& e) { return "erasure[p=" + format_shortest(e.p) + "]"; },
                        [](const CompletelyDephasing& c) { return "dephasing[V=" + format_shortest(c.V) + "]"; },
                        [](const Depolarizing& d) {
                          return "depolarizing[p=" + format_shortest(d.p) + ";alpha=" + format_shortest(d.alpha) +
                                 ";Lambda=" + format_shortest(d.Lambda) + "]";
                        },
                    },
                    channel);
}

std::string_view to_string(MediumKind kind) {
  return kind == MediumKind::Uniform ? "uniform" : "random-diffusion";
}

double fidelity_erasure_uniform(double g, double p, const MediumParams& medium, const WavepacketSpec& wp) {
  check_probability(p, "erasure.p");
  return p * carrier_weight(g, medium, wp);
}

double dephasing_uniform_baseline(const WavepacketSpec& wp, double i1_plus_sqrt2) {
  wp.validate();
  const double ratio = wp.lambda_over_sigma();
  const double a = ratio * ratio;
  const double one_minus = -std::expm1(-4.0 * a);
  return std::pow(ratio / kTwoPi, 5) * std::exp(-4.0 * a) / (one_minus * one_minus) * i1_plus_sqrt2;
}

IntegralEstimate dephasing_uniform_integral(const WavepacketSpec& wp, const QuadratureConfig& quad,
                                            double cutoff_eps) {
  wp.validate();
  AngularIntegralSpec spec;
  spec.n = 1;
  spec.sign = Sign::Plus;
  spec.lambda_over_sigma = std::sqrt(2.0) * wp.lambda() / wp.sigma;
  spec.k0_hat = wp.k0_hat;
  spec.cutoff_eps = cutoff_eps;
  return integral_I_converged(spec, quad);
}

double fidelity_dephasing_uniform(double g, const MediumParams& medium, const WavepacketSpec& wp,
                                  double i1_plus_sqrt2) {
  return carrier_weight(g, medium, wp) * dephasing_uniform_baseline(wp, i1_plus_sqrt2);
}

double fidelity_dephasing_uniform(double g, const MediumParams& medium, const WavepacketSpec& wp,
                                  const QuadratureConfig& quad, double cutoff_eps) {
  require_validated_branch(medium, wp);
  return fidelity_dephasing_uniform(g, medium, wp, dephasing_uniform_integral(wp, quad, cutoff_eps).value);
}

double fidelity_depolarizing_uniform(double g, double p, double alpha, const MediumParams& medium,
                                     const WavepacketSpec& wp) {
  validate(ChannelSpec{Depolarizing{p, alpha, 1.0}});
  return p * carrier_weight(g, medium, wp) + (1.0 - p) / alpha;
}

double normalized_fidelity(const ChannelSpec& channel, double g, const MediumParams& medium,
                           const WavepacketSpec& wp) {
  validate(channel);
  const double n_weight = carrier_weight(g, medium, wp);
  return std::visit(overloaded{
                        [&](const Erasure& e) {
                          if (e.p == 0.0) throw ValidationError("erasure with p = 0 has zero baseline fidelity");
                          return n_weight;
                        },
                        [&](const CompletelyDephasing&) { return n_weight; },
                        [&](const Depolarizing& d) {
                          const double floor = (1.0 - d.p) / d.alpha;
                          return (d.p * n_weight + floor) / (d.p + floor);
                        },
                    },
                    channel);
}

double numeric_overlap_fidelity(double g, const MediumParams& medium, const WavepacketSpec& wp,
                                const SphereRule& rule) {
  const double n_weight = carrier_weight(g, medium, wp);
  const double ratio = wp.lambda_over_sigma();
  const double a = ratio * ratio;
  const double norm = shell_norm_exact(a);

  // Mode shape is g-independent in a uniform medium; only the photon share
  // of the norm changes.
  const double scale_0 = 1.0 / std::sqrt(norm);
  const double scale_g = std::sqrt(n_weight / norm);
  double overlap = 0.0;
  double weight_g = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double shape = std::exp(-a * (1.0 - rule.nodes[i].dot(wp.k0_hat)));
    const double psi_0 = scale_0 * shape;
    const double psi_g = scale_g * shape;
    overlap += rule.weights[i] * psi_0 * psi_g;
    weight_g += rule.weights[i] * psi_g * psi_g;
  }
  if (std::abs(weight_g - n_weight) > 1e-8) {
    std::ostringstream os;
    os << "sphere rule of order " << rule.order << " is too coarse: sum |psi|^2 = " << weight_g
       << " but N(g) = " << n_weight;
    throw ValidationError(os.str());
  }
  return overlap * overlap;
}

// The shell state int dS e^{ik.x} G(k) is not square integrable in infinite
// space. Its norm is regularized by replacing the radial delta at coincident
// wavenumbers with k0 * l / pi, the value for a ball of radius l, taking
// l = sqrt(V sigma). With that convention
//
//   F_C(0) = k0 pi^2 Q / ((2 pi)^6 sigma M^2),
//   M = int dk |G|^2,
//   Q = int_0^2 dq int dq_hat |C(q)|^2,  C(q) = int_circle dphi G(k) G(k - q),
//
// where the circle is {k : |k| = |k - q| = 1}. Q is the Parseval form of
// int d^3x |psi|^4 and is evaluated here without reference to I_1^+.
double numeric_overlap_dephasing(double g, const CompletelyDephasing& channel, const MediumParams& medium,
                                 const WavepacketSpec& wp, const SphereRule& rule) {
  validate(ChannelSpec{channel});
  const double n_weight = carrier_weight(g, medium, wp);
  const double ratio = wp.lambda_over_sigma();
  const double a = ratio * ratio;
  require_rule_resolves_shell(a, wp.k0_hat, rule);
  const double shell_norm = shell_norm_on_rule(a, wp.k0_hat, rule);

  // q = 2 sin(psi) removes the square-root endpoint behaviour at q = 2.
  const LineRule angle = gauss_legendre(rule.order, 0.0, kPi / 2.0);
  const int azimuths = 2 * rule.order;
  std::vector<double> cos_phi(azimuths);
  for (int j = 0; j < azimuths; ++j) cos_phi[j] = std::cos(kTwoPi * j / azimuths);

  double quartic = 0.0;
  for (std::size_t i = 0; i < angle.nodes.size(); ++i) {
    const double psi = angle.nodes[i];
    const double dq = 2.0 * std::cos(psi) * angle.weights[i];
    const double ring_radius = std::cos(psi);  // sqrt(1 - q^2/4)
    double over_directions = 0.0;
    for (std::size_t m = 0; m < rule.nodes.size(); ++m) {
      const double along = wp.k0_hat.dot(rule.nodes[m]);
      const double transverse = std::sqrt(std::max(0.0, 1.0 - along * along));
      // k + s on the circle is 2 cos(psi) times a unit vector orthogonal to
      // q_hat; only its projection on k0_hat matters.
      double circle = 0.0;
      for (int j = 0; j < azimuths; ++j) {
        circle += std::exp(2.0 * a * ring_radius * transverse * cos_phi[j]);
      }
      circle *= std::exp(-2.0 * a) * kTwoPi / azimuths;
      over_directions += rule.weights[m] * circle * circle;
    }
    quartic += dq * over_directions;
  }

  const double baseline =
      wp.k0_mag * kPi * kPi * quartic / (std::pow(kTwoPi, 6) * wp.sigma * shell_norm * shell_norm);
  return n_weight * baseline;
}

}  // namespace polfid
