#include "polfid/capacity.hpp"

#include "polfid/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace polfid {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

Eigen::MatrixXcd hermitian_part(const Eigen::MatrixXcd& m) { return 0.5 * (m + m.adjoint()); }

void require_dims(const DensityMatrix& rho, int dim) {
  if (rho.dim() != dim) {
    std::ostringstream os;
    os << "density matrix has dimension " << rho.dim() << " but the grid needs " << dim;
    throw ValidationError(os.str());
  }
}

}  // namespace

void ModeGrid::validate(const MediumParams& medium) const {
  medium.validate();
  if (kmags.empty()) throw ValidationError("mode grid needs d >= 1 modes");
  for (std::size_t i = 0; i < kmags.size(); ++i) {
    if (!(kmags[i] > 0.0) || !std::isfinite(kmags[i])) throw ValidationError("mode wavenumbers must be > 0");
    if (i > 0 && !(kmags[i] > kmags[i - 1])) throw ValidationError("mode wavenumbers must be strictly increasing");
    if (!(medium.c * kmags[i] < medium.Omega)) {
      std::ostringstream os;
      os << "mode " << i << " has c*k = " << medium.c * kmags[i] << " >= Omega; lower the band limit";
      throw ValidationError(os.str());
    }
  }
}

ModeGrid ModeGrid::band_limited(int d, double Lambda) {
  if (d < 1) throw ValidationError("mode grid needs d >= 1");
  if (!(Lambda > 0.0) || !std::isfinite(Lambda)) throw ValidationError("band-limit length Lambda must be > 0");
  const double kmax = 2.0 * std::numbers::pi / Lambda;
  ModeGrid grid;
  for (int i = 0; i < d; ++i) grid.kmags.push_back(kmax * (i + 1) / d);
  return grid;
}

StateDefects inspect_state(const Eigen::MatrixXcd& m) {
  StateDefects defects;
  if (m.rows() == 0 || m.rows() != m.cols()) {
    defects.trace_error = 1.0;
    return defects;
  }
  defects.hermiticity = (m - m.adjoint()).cwiseAbs().maxCoeff();
  defects.trace_error = std::abs(m.trace() - std::complex<double>(1.0, 0.0));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian_part(m), Eigen::EigenvaluesOnly);
  defects.min_eigenvalue = solver.eigenvalues().minCoeff();
  return defects;
}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd m) : m_(std::move(m)) {
  const StateDefects defects = inspect_state(m_);
  if (!defects.ok()) {
    std::ostringstream os;
    os << "not a density matrix: hermiticity defect " << defects.hermiticity << ", trace error "
       << defects.trace_error << ", min eigenvalue " << defects.min_eigenvalue;
    throw InvalidStateError(os.str());
  }
}

DensityMatrix DensityMatrix::basis(int dim, int index) {
  if (dim < 1 || index < 0 || index >= dim) throw ValidationError("basis index out of range");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  m(index, index) = 1.0;
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0)) throw ValidationError("pure state needs a nonzero amplitude vector");
  const Eigen::VectorXcd v = amplitudes / norm;
  return DensityMatrix(hermitian_part(v * v.adjoint()));
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  if (dim < 1) throw ValidationError("dimension must be >= 1");
  return DensityMatrix(Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix medium_map(const DensityMatrix& rho, double g, const MediumParams& medium, const ModeGrid& grid) {
  grid.validate(medium);
  require_dims(rho, grid.dim());
  const int d = grid.d();

  Eigen::VectorXd keep = Eigen::VectorXd::Ones(grid.dim());
  for (int k = 0; k < d; ++k) keep(k) = std::sqrt(weight_N(grid.kmags[k], g, medium));

  const Eigen::MatrixXcd& in = rho.matrix();
  Eigen::MatrixXcd out = keep.asDiagonal() * in * keep.asDiagonal();
  double lost = 0.0;
  for (int k = 0; k < d; ++k) lost += (1.0 - keep(k) * keep(k)) * in(k, k).real();
  out(d, d) += lost;
  return DensityMatrix(hermitian_part(out));
}

DensityMatrix apply_channel(const ChannelSpec& channel, const DensityMatrix& rho) {
  validate(channel);
  const int dim = rho.dim();
  if (dim < 2) throw ValidationError("channel input needs at least one mode plus the vacuum");
  const int d = dim - 1;
  const Eigen::MatrixXcd& in = rho.matrix();

  Eigen::MatrixXcd out = std::visit(
      overloaded{
          [&](const Erasure& e) -> Eigen::MatrixXcd {
            Eigen::MatrixXcd m = e.p * in;
            m(d, d) += 1.0 - e.p;
            return m;
          },
          [&](const CompletelyDephasing&) -> Eigen::MatrixXcd {
            Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
            m.diagonal() = in.diagonal();
            return m;
          },
          [&](const Depolarizing& dp) -> Eigen::MatrixXcd {
            Eigen::MatrixXcd m = dp.p * in;
            for (int k = 0; k < d; ++k) m(k, k) += (1.0 - dp.p) / d;
            return m;
          },
      },
      channel);
  return DensityMatrix(hermitian_part(out));
}

double von_neumann_entropy(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.matrix(), Eigen::EigenvaluesOnly);
  double entropy = 0.0;
  for (double lambda : solver.eigenvalues()) {
    if (lambda < -1e-10) throw InvalidStateError("negative eigenvalue below -1e-10 in entropy evaluation");
    if (lambda > 0.0) entropy -= lambda * std::log2(lambda);
  }
  return std::max(0.0, entropy);
}

void Ensemble::validate() const {
  if (probabilities.empty() || probabilities.size() != states.size()) {
    throw ValidationError("ensemble needs matching, non-empty probability and state lists");
  }
  double total = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0)) throw ValidationError("ensemble probabilities must be >= 0");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ValidationError("ensemble probabilities must sum to 1");
  for (const auto& s : states) {
    if (s.dim() != states.front().dim()) throw ValidationError("ensemble states differ in dimension");
  }
}

double holevo_information(const Ensemble& ensemble, const StateMap& total_map) {
  ensemble.validate();
  std::vector<DensityMatrix> outputs;
  outputs.reserve(ensemble.states.size());
  for (const auto& s : ensemble.states) outputs.push_back(total_map(s));

  Eigen::MatrixXcd average = Eigen::MatrixXcd::Zero(outputs.front().dim(), outputs.front().dim());
  double conditional = 0.0;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    average += ensemble.probabilities[i] * outputs[i].matrix();
    conditional += ensemble.probabilities[i] * von_neumann_entropy(outputs[i]);
  }
  const double chi = von_neumann_entropy(DensityMatrix(hermitian_part(average))) - conditional;
  return std::max(0.0, chi);
}

StateMap composed_map(const ChannelSpec& channel, double g, const MediumParams& medium, const ModeGrid& grid) {
  validate(channel);
  grid.validate(medium);
  return [channel, g, medium, grid](const DensityMatrix& rho) {
    return apply_channel(channel, medium_map(rho, g, medium, grid));
  };
}

void CapacityConfig::validate() const {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw ValidationError("capacity.tol must be > 0");
  if (max_iterations < 1) throw ValidationError("capacity.max_iterations must be >= 1");
}

CapacityResult maximize_holevo(const ChannelSpec& channel, double g, const MediumParams& medium,
                               const ModeGrid& grid, const CapacityConfig& config) {
  config.validate();
  const StateMap map = composed_map(channel, g, medium, grid);
  const int dim = grid.dim();
  const int symbols = config.include_vacuum ? dim : grid.d();

  std::vector<DensityMatrix> inputs;
  std::vector<DensityMatrix> outputs;
  std::vector<double> output_entropy;
  for (int x = 0; x < symbols; ++x) {
    inputs.push_back(DensityMatrix::basis(dim, x));
    outputs.push_back(map(inputs.back()));
    output_entropy.push_back(von_neumann_entropy(outputs.back()));
  }

  std::vector<double> p(symbols, 1.0 / symbols);
  std::vector<double> divergence(symbols, 0.0);
  CapacityResult result;

  // D(rho_x || rho_avg) in bits for every symbol; returns chi.
  auto evaluate = [&]() {
    Eigen::MatrixXcd average = Eigen::MatrixXcd::Zero(dim, dim);
    for (int x = 0; x < symbols; ++x) average += p[x] * outputs[x].matrix();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian_part(average));
    const Eigen::VectorXd& lambda = solver.eigenvalues();
    const Eigen::MatrixXcd& vectors = solver.eigenvectors();
    double chi = 0.0;
    for (int x = 0; x < symbols; ++x) {
      const Eigen::MatrixXcd rotated = vectors.adjoint() * outputs[x].matrix() * vectors;
      double cross = 0.0;
      for (int i = 0; i < dim; ++i) {
        const double weight = rotated(i, i).real();
        if (weight <= 1e-15 || lambda(i) <= 0.0) continue;
        cross += weight * std::log2(lambda(i));
      }
      divergence[x] = -output_entropy[x] - cross;
      chi += p[x] * divergence[x];
    }
    return chi;
  };

  double chi = evaluate();
  int iteration = 0;
  for (;;) {
    const double upper = *std::max_element(divergence.begin(), divergence.end());
    result.upper_bound_bits = upper;
    if (upper - chi < config.tol) {
      result.converged = true;
      break;
    }
    if (iteration >= config.max_iterations) break;
    double z = 0.0;
    for (int x = 0; x < symbols; ++x) {
      p[x] *= std::exp2(divergence[x] - upper);
      z += p[x];
    }
    for (double& px : p) px /= z;
    chi = evaluate();
    ++iteration;
  }

  // Renormalize so the ensemble passes the 1e-12 simplex check exactly.
  double total = 0.0;
  for (double px : p) total += px;
  for (double& px : p) px /= total;

  result.capacity_bits = std::max(0.0, chi);
  result.iterations = iteration;
  result.ensemble.probabilities = std::move(p);
  result.ensemble.states = std::move(inputs);
  return result;
}

}  // namespace polfid
