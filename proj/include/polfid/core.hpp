#pragma once

#include <Eigen/Core>

#include <functional>
#include <string_view>

namespace polfid {

using Vec3 = Eigen::Vector3d;

/// Constants of the atomic medium and the field, in units where the caller
/// chooses the scale. The library defaults to c = Omega = 1.
struct MediumParams {
  double c = 1.0;      ///< speed of light
  double Omega = 1.0;  ///< atomic resonance frequency
  double n0 = 1.0;     ///< mean number density of atoms

  void validate() const;
  bool operator==(const MediumParams&) const = default;
};

/// Gaussian wavepacket supported on the sphere |k| = k0_mag, centred on
/// k0_mag * k0_hat with spectral width sigma.
struct WavepacketSpec {
  Vec3 k0_hat = Vec3::UnitX();
  double k0_mag = 0.5;
  double sigma = 0.25;

  /// Prefactor scale of the closed-form fidelities. Identified with k0_mag.
  double lambda() const noexcept { return k0_mag; }
  double lambda_over_sigma() const noexcept { return k0_mag / sigma; }

  void validate() const;
  bool operator==(const WavepacketSpec&) const = default;
};

struct DispersionResult {
  double omega = 0.0;     ///< lower-branch eigenfrequency
  double detuning = 0.0;  ///< omega - Omega, computed without cancellation
  double n_weight = 1.0;  ///< photon-sector weight N(g)
  double a_ratio = 0.0;   ///< atomic amplitude per unit photon amplitude, g / (omega - Omega)
  bool on_validated_branch = true;  ///< c * kmag < Omega
};

/// Receives diagnostics such as evaluation off the validated branch.
using WarningSink = std::function<void(std::string_view)>;

/// Installs a new sink and returns the previous one. The default sink writes
/// to stderr. Safe to call concurrently with evaluations.
WarningSink set_warning_sink(WarningSink sink);

/// Full solution of the one-excitation eigenproblem for a plane wave of
/// wavenumber kmag. Throws ValidationError for negative kmag or g and when
/// omega == Omega exactly (N would be 0/0).
DispersionResult dispersion(double kmag, double g, const MediumParams& medium);

/// omega(k, g) = (Omega + c|k| - sqrt((Omega - c|k|)^2 + 4 g^2 n0)) / 2.
///
/// This is the lower polariton branch. It satisfies omega(k, 0) = c|k| only
/// for c|k| < Omega; outside that range a warning is emitted and the formula
/// is still evaluated as written.
double dispersion_omega(double kmag, double g, const MediumParams& medium);

/// N(g) = |omega - Omega|^2 / (|omega - Omega|^2 + g^2 n0), the probability
/// that the excitation is carried by the field. Lies in (1/2, 1] on the
/// validated branch.
double weight_N(double kmag, double g, const MediumParams& medium);

/// 1 - N(g): the probability of finding the excitation in the atoms.
double excitation_probability(double kmag, double g, const MediumParams& medium);

/// Dimensionless coupling gbar = g sqrt(n0) / Omega and its inverse.
double gbar_from_coupling(double g, const MediumParams& medium);
double coupling_from_gbar(double gbar, const MediumParams& medium);

}  // namespace polfid
