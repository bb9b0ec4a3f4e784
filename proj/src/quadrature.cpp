#include "polfid/quadrature.hpp"

#include "polfid/error.hpp"

#include <Eigen/Geometry>
#include <boost/math/special_functions/legendre.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

namespace polfid {
namespace {

constexpr double kPi = std::numbers::pi;

// Orthonormal pair spanning the plane perpendicular to the unit vector `axis`.
std::pair<Vec3, Vec3> perpendicular_frame(const Vec3& axis) {
  Vec3 helper = std::abs(axis.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  Vec3 e1 = (helper - helper.dot(axis) * axis).normalized();
  Vec3 e2 = axis.cross(e1);
  return {e1, e2};
}

// Inner rule in the frame centred on the singular direction. Stores, per
// radial node, w = 1 - cos(theta') and sqrt(w (2 - w)), with the Jacobian of
// the substitution and |s - s*|^-n already folded into the weight.
struct InnerRule {
  std::vector<double> w;
  std::vector<double> sin_theta;
  std::vector<double> radial_weight;
  std::vector<double> cos_phi;
  std::vector<double> sin_phi;
  double azimuth_weight = 0.0;
};

InnerRule make_inner_rule(int n, double eps, int order) {
  InnerRule rule;
  LineRule radial;
  double jacobian = 0.0;
  if (n == 1) {
    // w = t^2:  (2w)^{-1/2} dw = sqrt(2) dt
    radial = gauss_legendre(order, eps / std::sqrt(2.0), std::sqrt(2.0));
    jacobian = std::sqrt(2.0);
  } else {
    // w = e^v:  (2w)^{-1} dw = dv / 2
    radial = gauss_legendre(order, std::log(eps * eps / 2.0), std::log(2.0));
    jacobian = 0.5;
  }
  for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
    const double x = radial.nodes[i];
    const double w = n == 1 ? x * x : std::exp(x);
    rule.w.push_back(w);
    rule.sin_theta.push_back(std::sqrt(std::max(0.0, w * (2.0 - w))));
    rule.radial_weight.push_back(radial.weights[i] * jacobian);
  }
  const int azimuths = 2 * order;
  for (int j = 0; j < azimuths; ++j) {
    const double phi = 2.0 * kPi * j / azimuths;
    rule.cos_phi.push_back(std::cos(phi));
    rule.sin_phi.push_back(std::sin(phi));
  }
  rule.azimuth_weight = 2.0 * kPi / azimuths;
  return rule;
}

// Integral over s for a fixed outer direction k.
double inner_integral(const AngularIntegralSpec& spec, const InnerRule& rule, const Vec3& k) {
  const double r2 = spec.lambda_over_sigma * spec.lambda_over_sigma;
  const Vec3 pole = spec.sign == Sign::Plus ? Vec3(-k) : k;
  const auto [e1, e2] = perpendicular_frame(pole);
  const double k_dot = k.dot(spec.k0_hat);
  const double pole_dot = pole.dot(spec.k0_hat);
  const double e1_dot = e1.dot(spec.k0_hat);
  const double e2_dot = e2.dot(spec.k0_hat);

  double total = 0.0;
  for (std::size_t i = 0; i < rule.w.size(); ++i) {
    const double axial = k_dot + (1.0 - rule.w[i]) * pole_dot;
    const double st = rule.sin_theta[i];
    double ring = 0.0;
    for (std::size_t j = 0; j < rule.cos_phi.size(); ++j) {
      const double transverse = st * (rule.cos_phi[j] * e1_dot + rule.sin_phi[j] * e2_dot);
      ring += std::exp(r2 * (axial + transverse));
    }
    total += rule.radial_weight[i] * ring;
  }
  return total * rule.azimuth_weight;
}

int next_order(int order) { return order + std::max(1, order / 2); }

double uniform_01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Vec3 uniform_sphere(std::mt19937_64& rng) {
  const double z = 2.0 * uniform_01(rng) - 1.0;
  const double phi = 2.0 * kPi * uniform_01(rng);
  const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {rho * std::cos(phi), rho * std::sin(phi), z};
}

}  // namespace

LineRule gauss_legendre(int points, double lo, double hi) {
  if (points < 1) throw ValidationError("Gauss-Legendre rule needs at least one point");
  if (!(hi > lo)) throw ValidationError("Gauss-Legendre interval must satisfy lo < hi");
  const std::vector<double> zeros = boost::math::legendre_p_zeros<double>(points);
  std::vector<double> x;
  std::vector<double> w;
  for (double z : zeros) {
    const double dp = boost::math::legendre_p_prime(points, z);
    const double weight = 2.0 / ((1.0 - z * z) * dp * dp);
    if (z == 0.0) {
      x.push_back(0.0);
      w.push_back(weight);
    } else {
      x.push_back(z);
      w.push_back(weight);
      x.push_back(-z);
      w.push_back(weight);
    }
  }
  LineRule rule;
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  for (std::size_t i = 0; i < x.size(); ++i) {
    rule.nodes.push_back(mid + half * x[i]);
    rule.weights.push_back(half * w[i]);
  }
  return rule;
}

SphereRule make_sphere_rule(int order) {
  if (order < kMinSphereOrder || order > kMaxSphereOrder) {
    std::ostringstream os;
    os << "sphere rule order " << order << " unsupported (expected " << kMinSphereOrder << ".."
       << kMaxSphereOrder << ")";
    throw ValidationError(os.str());
  }
  const LineRule polar = gauss_legendre(order);
  const int azimuths = 2 * order;
  SphereRule rule;
  rule.order = order;
  rule.nodes.reserve(polar.nodes.size() * azimuths);
  rule.weights.reserve(polar.nodes.size() * azimuths);
  for (std::size_t i = 0; i < polar.nodes.size(); ++i) {
    const double z = polar.nodes[i];
    const double rho = std::sqrt(1.0 - z * z);
    for (int j = 0; j < azimuths; ++j) {
      const double phi = 2.0 * kPi * j / azimuths;
      rule.nodes.emplace_back(rho * std::cos(phi), rho * std::sin(phi), z);
      rule.weights.push_back(polar.weights[i] * 2.0 * kPi / azimuths);
    }
  }
  return rule;
}

std::string_view to_string(Sign s) { return s == Sign::Plus ? "+" : "-"; }

Sign sign_from_string(std::string_view s) {
  if (s == "+" || s == "plus") return Sign::Plus;
  if (s == "-" || s == "minus") return Sign::Minus;
  throw ValidationError("sign must be '+' or '-' (got '" + std::string(s) + "')");
}

void AngularIntegralSpec::validate() const {
  if (n != 1 && n != 2) throw ValidationError("angular integral exponent n must be 1 or 2");
  if (!std::isfinite(lambda_over_sigma) || lambda_over_sigma < 0.0) {
    throw ValidationError("lambda_over_sigma must be finite and >= 0");
  }
  if (!k0_hat.allFinite() || std::abs(k0_hat.norm() - 1.0) > 1e-12) {
    throw ValidationError("k0_hat must be a unit vector");
  }
  if (!std::isfinite(cutoff_eps) || cutoff_eps < 0.0 || cutoff_eps >= 2.0) {
    throw ValidationError("cutoff_eps must lie in [0, 2)");
  }
  if (n == 2 && cutoff_eps == 0.0) {
    throw ValidationError("n = 2 integrand is log-divergent: cutoff_eps must be > 0");
  }
}

double integral_I(const AngularIntegralSpec& spec, const SphereRule& rule) {
  spec.validate();
  if (rule.nodes.empty() || rule.nodes.size() != rule.weights.size()) {
    throw ValidationError("sphere rule is empty or inconsistent");
  }
  const InnerRule inner = make_inner_rule(spec.n, spec.cutoff_eps, rule.order);
  double total = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    total += rule.weights[i] * inner_integral(spec, inner, rule.nodes[i]);
  }
  return total;
}

double integral_I_axisymmetric(const AngularIntegralSpec& spec, int order) {
  spec.validate();
  if (order < kMinSphereOrder || order > kMaxSphereOrder) throw ValidationError("unsupported quadrature order");
  const InnerRule inner = make_inner_rule(spec.n, spec.cutoff_eps, order);
  const Vec3 transverse = perpendicular_frame(spec.k0_hat).first;
  const LineRule polar = gauss_legendre(order);
  double total = 0.0;
  for (std::size_t i = 0; i < polar.nodes.size(); ++i) {
    const double c = polar.nodes[i];
    const Vec3 k = c * spec.k0_hat + std::sqrt(1.0 - c * c) * transverse;
    total += polar.weights[i] * inner_integral(spec, inner, k);
  }
  return 2.0 * kPi * total;
}

void QuadratureConfig::validate() const {
  if (order < kMinSphereOrder || order > kMaxSphereOrder) throw ValidationError("quadrature.order out of range");
  if (max_order < order || max_order > kMaxSphereOrder) {
    throw ValidationError("quadrature.max_order must lie in [order, 512]");
  }
  if (!(rel_tol > 0.0) || !std::isfinite(rel_tol)) throw ValidationError("quadrature.rel_tol must be > 0");
}

IntegralEstimate integral_I_converged(const AngularIntegralSpec& spec, const QuadratureConfig& config,
                                      QuadraturePath path) {
  config.validate();
  auto evaluate = [&](int order) {
    return path == QuadraturePath::Full ? integral_I(spec, make_sphere_rule(order))
                                        : integral_I_axisymmetric(spec, order);
  };
  int order = config.order;
  double previous = evaluate(order);
  for (;;) {
    const int finer = next_order(order);
    if (finer > config.max_order) {
      std::ostringstream os;
      os << "angular integral I_" << spec.n << to_string(spec.sign) << "(lambda/sigma=" << spec.lambda_over_sigma
         << ") did not converge to rel_tol " << config.rel_tol << " by order " << order;
      throw ConvergenceError(os.str(), previous);
    }
    const double current = evaluate(finer);
    const double change = std::abs(current - previous) / std::abs(current);
    if (change <= config.rel_tol) return {current, finer, change};
    previous = current;
    order = finer;
  }
}

MonteCarloEstimate integral_I_monte_carlo(const AngularIntegralSpec& spec, std::uint64_t samples,
                                          std::uint64_t seed) {
  spec.validate();
  if (samples < kMinMonteCarloSamples) throw ValidationError("Monte Carlo needs at least 10^4 samples");
  std::mt19937_64 rng(seed);
  const double r2 = spec.lambda_over_sigma * spec.lambda_over_sigma;
  const double plus_minus = spec.sign == Sign::Plus ? 1.0 : -1.0;

  // Welford running moments.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    const Vec3 k = uniform_sphere(rng);
    const Vec3 s = uniform_sphere(rng);
    const double dist = (k + plus_minus * s).norm();
    double f = 0.0;
    if (dist >= spec.cutoff_eps && dist > 0.0) {
      f = std::exp(r2 * (k + s).dot(spec.k0_hat)) / (spec.n == 1 ? dist : dist * dist);
    }
    const double delta = f - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (f - mean);
  }
  const double volume = 16.0 * kPi * kPi;
  const double variance = m2 / static_cast<double>(samples - 1);
  return {volume * mean, volume * std::sqrt(variance / static_cast<double>(samples)), samples};
}

}  // namespace polfid
