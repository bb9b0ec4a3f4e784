#pragma once

#include "polfid/channels.hpp"
#include "polfid/core.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace polfid {

/// Discretized wave-vector modes. Basis index i < d is the single-photon
/// state in mode i; index d is the vacuum.
struct ModeGrid {
  std::vector<double> kmags;

  int d() const noexcept { return static_cast<int>(kmags.size()); }
  int dim() const noexcept { return d() + 1; }
  int vacuum_index() const noexcept { return d(); }

  /// d >= 1, kmags strictly increasing and positive, every c*k < Omega.
  void validate(const MediumParams& medium) const;

  /// d equally spaced wavenumbers k_i = (i + 1) kmax / d with
  /// kmax = 2 pi / Lambda.
  static ModeGrid band_limited(int d, double Lambda);
};

struct StateDefects {
  double hermiticity = 0.0;  ///< max |rho - rho^dagger|
  double trace_error = 0.0;  ///< |tr rho - 1|
  double min_eigenvalue = 0.0;

  bool ok() const noexcept { return hermiticity <= 1e-12 && trace_error <= 1e-10 && min_eigenvalue >= -1e-10; }
};

StateDefects inspect_state(const Eigen::MatrixXcd& m);

/// Hermitian, unit-trace, positive semidefinite matrix. Construction checks
/// the tolerances in StateDefects::ok and throws InvalidStateError otherwise.
class DensityMatrix {
 public:
  explicit DensityMatrix(Eigen::MatrixXcd m);

  static DensityMatrix basis(int dim, int index);
  static DensityMatrix pure(const Eigen::VectorXcd& amplitudes);
  static DensityMatrix maximally_mixed(int dim);

  const Eigen::MatrixXcd& matrix() const noexcept { return m_; }
  int dim() const noexcept { return static_cast<int>(m_.rows()); }

 private:
  Eigen::MatrixXcd m_;
};

/// Interaction with the medium followed by tracing out the atoms: the
/// amplitude in mode k is scaled by sqrt(N_k(g)) and the lost weight
/// (1 - N_k) <k|rho|k> moves to the vacuum.
DensityMatrix medium_map(const DensityMatrix& rho, double g, const MediumParams& medium, const ModeGrid& grid);

/// Erasure: p rho + (1-p)|0><0|. Dephasing: drop every off-diagonal element.
/// Depolarizing: p rho + (1-p) * (uniform mixture over the d photon modes),
/// i.e. alpha is identified with d on the grid and the channel's alpha is not
/// used here. The vacuum is the last basis index.
DensityMatrix apply_channel(const ChannelSpec& channel, const DensityMatrix& rho);

/// Von Neumann entropy in bits. Eigenvalues in [-1e-10, 0) count as zero.
double von_neumann_entropy(const DensityMatrix& rho);

using StateMap = std::function<DensityMatrix(const DensityMatrix&)>;

struct Ensemble {
  std::vector<double> probabilities;
  std::vector<DensityMatrix> states;

  void validate() const;
};

/// chi = S(sum p_i M(rho_i)) - sum p_i S(M(rho_i)), in bits.
double holevo_information(const Ensemble& ensemble, const StateMap& total_map);

/// channel o medium_map at coupling g.
StateMap composed_map(const ChannelSpec& channel, double g, const MediumParams& medium, const ModeGrid& grid);

struct CapacityConfig {
  double tol = 1e-6;           ///< stop when upper bound - chi < tol (bits)
  int max_iterations = 10'000;
  bool include_vacuum = false; ///< add |vac><vac| as an input symbol

  void validate() const;
  bool operator==(const CapacityConfig&) const = default;
};

struct CapacityResult {
  double capacity_bits = 0.0;  ///< restricted-ensemble Holevo information
  double upper_bound_bits = 0.0;
  Ensemble ensemble;
  int iterations = 0;
  bool converged = false;
};

/// Maximizes chi over the probabilities of a fixed ensemble of basis inputs
/// (the d single-photon modes, plus the vacuum if requested) with the
/// Blahut-Arimoto fixed-point update p_x <- p_x 2^{D(rho_x || rho_avg)} / Z.
/// Deterministic. Non-convergence is reported through `converged`.
CapacityResult maximize_holevo(const ChannelSpec& channel, double g, const MediumParams& medium,
                               const ModeGrid& grid, const CapacityConfig& config = {});

}  // namespace polfid
