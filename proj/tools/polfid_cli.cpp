// Command-line front end: fidelity / capacity / integral sweeps as CSV.
//
//   polfid fidelity     [--config cfg.json] [--output out.csv]
//   polfid capacity     [--config cfg.json] [--output out.csv]
//   polfid integrals    [--config cfg.json] [--output out.csv] [--seed N]
//   polfid print-config [--config cfg.json]
//
// Exit status: 0 success (including rows flagged as not converged),
// 1 invalid input, 2 internal error.

#include "polfid/config.hpp"
#include "polfid/error.hpp"
#include "polfid/sweeps.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitInternal = 2;

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw polfid::ValidationError("cannot open output file " + path);
  out << text;
  if (!out) throw polfid::Error("failed writing " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-photon channel fidelity and capacity in a two-level atomic medium"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_path;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "JSON configuration (defaults apply to missing keys)")
      ->check(CLI::ExistingFile);
  app.add_option("--output", output_path, "CSV output path (stdout if omitted)");
  app.add_option("--seed", seed, "Monte Carlo seed (overrides monte_carlo.seed)");

  auto* fidelity = app.add_subcommand("fidelity", "normalized fidelity sweep over gbar");
  auto* capacity = app.add_subcommand("capacity", "restricted-ensemble Holevo capacity sweep");
  auto* integrals = app.add_subcommand("integrals", "angular integrals: quadrature vs Monte Carlo");
  auto* print_config = app.add_subcommand("print-config", "print the effective configuration");
  for (auto* sub : {fidelity, capacity, integrals, print_config}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    polfid::RunConfig config = config_path.empty() ? polfid::default_config() : polfid::load_config(config_path);
    if (seed) config.monte_carlo.seed = *seed;
    if (!output_path.empty()) config.output = output_path;

    std::string text;
    if (*fidelity) {
      text = polfid::run_fidelity_sweep(config);
    } else if (*capacity) {
      text = polfid::run_capacity_sweep(config);
    } else if (*integrals) {
      const auto rows = polfid::integral_table(config);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].converged) {
          std::cerr << "polfid: row " << i + 1 << ": quadrature did not converge (last estimate "
                    << rows[i].quadrature << ")\n";
        }
      }
      text = polfid::render_integral_csv(rows);
    } else {
      text = polfid::dump_config(config);
    }
    write_output(config.output, text);
    return 0;
  } catch (const polfid::ValidationError& e) {
    std::cerr << "polfid: error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "polfid: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}
