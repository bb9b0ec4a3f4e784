#pragma once

#include "polfid/core.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace polfid {

/// Gauss-Legendre nodes and weights on [lo, hi].
struct LineRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

LineRule gauss_legendre(int points, double lo = -1.0, double hi = 1.0);

/// Product rule on the unit sphere: `order` Gauss-Legendre nodes in cos(theta)
/// times 2*order equispaced azimuths. Exact for spherical harmonics of degree
/// below 2*order. Weights sum to 4*pi.
struct SphereRule {
  int order = 0;
  std::vector<Vec3> nodes;
  std::vector<double> weights;
};

inline constexpr int kMinSphereOrder = 2;
inline constexpr int kMaxSphereOrder = 512;

SphereRule make_sphere_rule(int order);

enum class Sign { Plus, Minus };

std::string_view to_string(Sign s);
Sign sign_from_string(std::string_view s);

/// I_n^{+-} = int dk int ds exp(r^2 (k + s).k0) / |k +- s|^n over two unit
/// spheres, with r = lambda / sigma. Pairs closer than cutoff_eps to the
/// singular configuration are excluded from the domain.
struct AngularIntegralSpec {
  int n = 1;
  Sign sign = Sign::Plus;
  double lambda_over_sigma = 0.0;
  Vec3 k0_hat = Vec3::UnitX();
  double cutoff_eps = 0.0;

  /// n must be 1 or 2; n == 2 needs cutoff_eps > 0 (log divergence).
  void validate() const;
};

/// Full four-angle evaluation: the outer sphere is integrated with `rule`;
/// for each outer node the inner sphere uses a rule of the same order whose
/// pole sits on the singular direction, with a radial substitution that makes
/// the integrand smooth and puts the cutoff on the domain boundary.
double integral_I(const AngularIntegralSpec& spec, const SphereRule& rule);

/// Three-angle evaluation using the azimuthal symmetry about k0_hat.
double integral_I_axisymmetric(const AngularIntegralSpec& spec, int order);

enum class QuadraturePath { Full, Axisymmetric };

struct QuadratureConfig {
  int order = 32;
  int max_order = 256;
  double rel_tol = 1e-10;

  void validate() const;
  bool operator==(const QuadratureConfig&) const = default;
};

struct IntegralEstimate {
  double value = 0.0;
  int order = 0;           ///< order of the accepted (finer) evaluation
  double rel_change = 0.0; ///< relative change against the previous order
};

/// Evaluates at successively finer orders (x1.5 each step) until two
/// consecutive results agree to rel_tol. Throws ConvergenceError carrying the
/// last value when max_order is exceeded.
IntegralEstimate integral_I_converged(const AngularIntegralSpec& spec, const QuadratureConfig& config,
                                      QuadraturePath path = QuadraturePath::Full);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
};

inline constexpr std::uint64_t kMinMonteCarloSamples = 10'000;

/// Plain Monte Carlo over both spheres with uniform sampling and the same
/// cutoff. Deterministic for a fixed seed (mt19937_64, explicit bit-to-double
/// conversion).
MonteCarloEstimate integral_I_monte_carlo(const AngularIntegralSpec& spec, std::uint64_t samples,
                                          std::uint64_t seed);

}  // namespace polfid
