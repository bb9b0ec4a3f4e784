#include "polfid/sweeps.hpp"

#include "parallel.hpp"
#include "polfid/disorder.hpp"
#include "polfid/error.hpp"
#include "polfid/format.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace polfid {
namespace {

bool has_diffusion_rows(const ChannelSpec& channel) { return !std::holds_alternative<Depolarizing>(channel); }

struct FidelityTask {
  double gbar;
  std::size_t channel;
  MediumKind kind;
};

}  // namespace

std::vector<FidelityRow> fidelity_sweep(const RunConfig& config) {
  config.validate();
  const std::vector<double> gbars = config.sweep.values();
  const MediumParams& medium = config.medium;
  const WavepacketSpec& wp = config.wavepacket;

  bool need_dephasing = false;
  bool need_diffusion = false;
  for (const auto& c : config.channels) {
    need_dephasing |= std::holds_alternative<CompletelyDephasing>(c);
    need_diffusion |= has_diffusion_rows(c);
  }
  // The angular integrals do not depend on g; evaluate them once.
  const double i1_plus = need_dephasing ? dephasing_uniform_integral(wp, config.quadrature).value : 0.0;
  const double i2_minus = need_diffusion ? diffusion_integral(wp, config.quadrature, config.epsilon).value : 0.0;

  std::vector<FidelityTask> tasks;
  for (double gbar : gbars) {
    for (std::size_t c = 0; c < config.channels.size(); ++c) {
      tasks.push_back({gbar, c, MediumKind::Uniform});
      if (has_diffusion_rows(config.channels[c])) tasks.push_back({gbar, c, MediumKind::RandomDiffusion});
    }
  }

  std::vector<FidelityRow> rows(tasks.size());
  detail::parallel_for(tasks.size(), config.threads, [&](std::size_t i) {
    const FidelityTask& task = tasks[i];
    const ChannelSpec& channel = config.channels[task.channel];
    const double g = coupling_from_gbar(task.gbar, medium);
    FidelityPoint point;
    point.g = g;
    point.channel = channel;
    point.medium_kind = task.kind;
    point.normalized = normalized_fidelity(channel, g, medium, wp);
    if (task.kind == MediumKind::Uniform) {
      if (const auto* e = std::get_if<Erasure>(&channel)) {
        point.fidelity = fidelity_erasure_uniform(g, e->p, medium, wp);
      } else if (std::holds_alternative<CompletelyDephasing>(channel)) {
        point.fidelity = fidelity_dephasing_uniform(g, medium, wp, i1_plus);
        point.epsilon_used = 0.0;
      } else {
        const auto& d = std::get<Depolarizing>(channel);
        point.fidelity = fidelity_depolarizing_uniform(g, d.p, d.alpha, medium, wp);
      }
    } else {
      if (const auto* e = std::get_if<Erasure>(&channel)) {
        point.fidelity = avg_fidelity_erasure_diffusion(g, e->p, medium, wp, i2_minus, config.disorder);
      } else {
        point.fidelity = avg_fidelity_dephasing_diffusion(g, medium, wp, i2_minus, config.disorder);
      }
      point.epsilon_used = config.epsilon;
    }
    rows[i] = {task.gbar, std::move(point)};
  });
  return rows;
}

std::vector<CapacityRow> capacity_sweep(const RunConfig& config) {
  config.validate();
  const std::vector<double> gbars = config.capacity.sweep.values();
  std::vector<CapacityRow> rows;
  for (double gbar : gbars) {
    for (const auto& channel : config.channels) rows.push_back({gbar, channel, config.capacity.d, {}});
  }
  detail::parallel_for(rows.size(), config.threads, [&](std::size_t i) {
    CapacityRow& row = rows[i];
    const auto* dp = std::get_if<Depolarizing>(&row.channel);
    const ModeGrid grid = ModeGrid::band_limited(row.d, dp ? dp->Lambda : config.capacity.Lambda);
    const double g = coupling_from_gbar(row.gbar, config.medium);
    row.result = maximize_holevo(row.channel, g, config.medium, grid, config.capacity.solver);
  });
  return rows;
}

std::vector<IntegralRow> integral_table(const RunConfig& config) {
  config.validate();
  std::vector<IntegralRow> rows;
  for (int n : {1, 2}) {
    for (Sign sign : {Sign::Plus, Sign::Minus}) {
      for (double ratio : config.integrals.lambda_over_sigma) {
        IntegralRow row;
        row.spec.n = n;
        row.spec.sign = sign;
        row.spec.lambda_over_sigma = ratio;
        row.spec.k0_hat = config.wavepacket.k0_hat;
        row.spec.cutoff_eps = n == 1 ? 0.0 : config.epsilon;
        rows.push_back(row);
      }
    }
  }
  detail::parallel_for(rows.size(), config.threads, [&](std::size_t i) {
    IntegralRow& row = rows[i];
    try {
      const IntegralEstimate est = integral_I_converged(row.spec, config.quadrature);
      row.quadrature = est.value;
      row.order = est.order;
    } catch (const ConvergenceError& e) {
      row.quadrature = e.last_estimate();
      row.converged = false;
    }
    row.monte_carlo = integral_I_monte_carlo(row.spec, config.monte_carlo.samples, config.monte_carlo.seed);
  });
  return rows;
}

std::string render_fidelity_csv(const std::vector<FidelityRow>& rows) {
  std::ostringstream out;
  out << kFidelityHeader << '\n';
  for (const auto& row : rows) {
    const FidelityPoint& p = row.point;
    out << format_g17(row.gbar) << ',' << channel_label(p.channel) << ',' << to_string(p.medium_kind) << ','
        << format_g17(p.fidelity) << ',' << format_g17(p.normalized) << ','
        << (p.epsilon_used ? format_g17(*p.epsilon_used) : std::string("none")) << '\n';
  }
  return out.str();
}

std::string render_capacity_csv(const std::vector<CapacityRow>& rows) {
  std::ostringstream out;
  out << kCapacityHeader << '\n';
  for (const auto& row : rows) {
    out << format_g17(row.gbar) << ',' << channel_label(row.channel) << ',' << row.d << ','
        << format_g17(row.result.capacity_bits) << ',' << row.result.iterations << ','
        << (row.result.converged ? "true" : "false") << '\n';
  }
  return out.str();
}

std::string render_integral_csv(const std::vector<IntegralRow>& rows) {
  std::ostringstream out;
  out << kIntegralHeader << '\n';
  for (const auto& row : rows) {
    // Non-converged quadrature is flagged as nan; the MC columns still stand.
    const double quad = row.converged ? row.quadrature : std::numeric_limits<double>::quiet_NaN();
    out << row.spec.n << ',' << to_string(row.spec.sign) << ',' << format_g17(row.spec.lambda_over_sigma) << ','
        << format_g17(row.spec.cutoff_eps) << ',' << format_g17(quad) << ','
        << format_g17(row.monte_carlo.estimate) << ',' << format_g17(row.monte_carlo.std_error) << '\n';
  }
  return out.str();
}

std::string run_fidelity_sweep(const RunConfig& config) { return render_fidelity_csv(fidelity_sweep(config)); }
std::string run_capacity_sweep(const RunConfig& config) { return render_capacity_csv(capacity_sweep(config)); }
std::string run_integral_table(const RunConfig& config) { return render_integral_csv(integral_table(config)); }

}  // namespace polfid
