#include "polfid/core.hpp"

#include "polfid/error.hpp"

#include <cmath>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>

namespace polfid {
namespace {

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

WarningSink& sink_slot() {
  static WarningSink sink = [](std::string_view msg) { std::cerr << "polfid: warning: " << msg << '\n'; };
  return sink;
}

void warn(const std::string& msg) {
  std::lock_guard lock(sink_mutex());
  if (sink_slot()) sink_slot()(msg);
}

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

void MediumParams::validate() const {
  if (!finite_positive(c)) throw ValidationError("medium.c must be positive and finite");
  if (!finite_positive(Omega)) throw ValidationError("medium.Omega must be positive and finite");
  if (!finite_positive(n0)) throw ValidationError("medium.n0 must be positive and finite");
}

void WavepacketSpec::validate() const {
  if (!k0_hat.allFinite() || std::abs(k0_hat.norm() - 1.0) > 1e-12) {
    throw ValidationError("wavepacket.k0_hat must be a unit vector (|k0_hat| = 1 within 1e-12)");
  }
  if (!finite_positive(k0_mag)) throw ValidationError("wavepacket.k0_mag must be positive and finite");
  if (!finite_positive(sigma)) throw ValidationError("wavepacket.sigma must be positive and finite");
}

WarningSink set_warning_sink(WarningSink sink) {
  std::lock_guard lock(sink_mutex());
  WarningSink previous = std::move(sink_slot());
  sink_slot() = std::move(sink);
  return previous;
}

DispersionResult dispersion(double kmag, double g, const MediumParams& medium) {
  medium.validate();
  if (!(kmag >= 0.0) || !std::isfinite(kmag)) throw ValidationError("kmag must be finite and >= 0");
  if (!(g >= 0.0) || !std::isfinite(g)) throw ValidationError("coupling g must be finite and >= 0");

  const double ck = medium.c * kmag;
  const double coupling_sq = g * g * medium.n0;
  const double root = std::sqrt((medium.Omega - ck) * (medium.Omega - ck) + 4.0 * coupling_sq);

  DispersionResult r;
  r.omega = 0.5 * (medium.Omega + ck - root);
  // Both terms are non-positive on the validated branch, so no cancellation.
  r.detuning = 0.5 * ((ck - medium.Omega) - root);
  r.on_validated_branch = ck < medium.Omega;
  if (r.detuning == 0.0) {
    throw ValidationError("omega == Omega: photon weight is undefined (c*kmag >= Omega with g = 0)");
  }
  const double det_sq = r.detuning * r.detuning;
  r.n_weight = det_sq / (det_sq + coupling_sq);
  r.a_ratio = g / r.detuning;
  return r;
}

double dispersion_omega(double kmag, double g, const MediumParams& medium) {
  medium.validate();
  if (!(kmag >= 0.0) || !std::isfinite(kmag)) throw ValidationError("kmag must be finite and >= 0");
  if (!(g >= 0.0) || !std::isfinite(g)) throw ValidationError("coupling g must be finite and >= 0");
  const double ck = medium.c * kmag;
  if (!(ck < medium.Omega)) {
    std::ostringstream os;
    os << "c*kmag = " << ck << " >= Omega = " << medium.Omega
       << ": the lower branch does not reduce to c|k| at g = 0 here";
    warn(os.str());
  }
  const double root = std::sqrt((medium.Omega - ck) * (medium.Omega - ck) + 4.0 * g * g * medium.n0);
  return 0.5 * (medium.Omega + ck - root);
}

double weight_N(double kmag, double g, const MediumParams& medium) {
  const DispersionResult r = dispersion(kmag, g, medium);
  if (!r.on_validated_branch) {
    std::ostringstream os;
    os << "weight_N evaluated with c*kmag = " << medium.c * kmag << " >= Omega = " << medium.Omega;
    warn(os.str());
  }
  return r.n_weight;
}

double excitation_probability(double kmag, double g, const MediumParams& medium) {
  const DispersionResult r = dispersion(kmag, g, medium);
  const double det_sq = r.detuning * r.detuning;
  const double coupling_sq = g * g * medium.n0;
  return coupling_sq / (det_sq + coupling_sq);
}

double gbar_from_coupling(double g, const MediumParams& medium) {
  medium.validate();
  return g * std::sqrt(medium.n0) / medium.Omega;
}

double coupling_from_gbar(double gbar, const MediumParams& medium) {
  medium.validate();
  if (!(gbar >= 0.0) || !std::isfinite(gbar)) throw ValidationError("gbar must be finite and >= 0");
  return gbar * medium.Omega / std::sqrt(medium.n0);
}

}  // namespace polfid
