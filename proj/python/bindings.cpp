#include "polfid/capacity.hpp"
#include "polfid/channels.hpp"
#include "polfid/config.hpp"
#include "polfid/core.hpp"
#include "polfid/disorder.hpp"
#include "polfid/error.hpp"
#include "polfid/quadrature.hpp"
#include "polfid/sweeps.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>

namespace py = pybind11;
using namespace polfid;

namespace {

std::array<double, 3> to_array(const Vec3& v) { return {v.x(), v.y(), v.z()}; }
Vec3 to_vec(const std::array<double, 3>& a) { return {a[0], a[1], a[2]}; }

AngularIntegralSpec make_spec(int n, const std::string& sign, double lambda_over_sigma,
                              const std::array<double, 3>& k0_hat, double cutoff_eps) {
  AngularIntegralSpec spec;
  spec.n = n;
  spec.sign = sign_from_string(sign);
  spec.lambda_over_sigma = lambda_over_sigma;
  spec.k0_hat = to_vec(k0_hat);
  spec.cutoff_eps = cutoff_eps;
  return spec;
}

}  // namespace

PYBIND11_MODULE(_polfid, m) {
  m.doc() = "Photon transmission fidelity and capacity through a two-level medium";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<InvalidStateError>(m, "InvalidStateError", base.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());

  py::class_<MediumParams>(m, "MediumParams")
      .def(py::init([](double c, double Omega, double n0) { return MediumParams{c, Omega, n0}; }),
           py::arg("c") = 1.0, py::arg("Omega") = 1.0, py::arg("n0") = 1.0)
      .def_readwrite("c", &MediumParams::c)
      .def_readwrite("Omega", &MediumParams::Omega)
      .def_readwrite("n0", &MediumParams::n0)
      .def("__repr__", [](const MediumParams& p) {
        return "MediumParams(c=" + std::to_string(p.c) + ", Omega=" + std::to_string(p.Omega) +
               ", n0=" + std::to_string(p.n0) + ")";
      });

  py::class_<WavepacketSpec>(m, "WavepacketSpec")
      .def(py::init([](const std::array<double, 3>& k0_hat, double k0_mag, double sigma) {
             WavepacketSpec wp;
             wp.k0_hat = to_vec(k0_hat);
             wp.k0_mag = k0_mag;
             wp.sigma = sigma;
             wp.validate();
             return wp;
           }),
           py::arg("k0_hat") = std::array<double, 3>{1.0, 0.0, 0.0}, py::arg("k0_mag") = 0.5,
           py::arg("sigma") = 0.25)
      .def_property(
          "k0_hat", [](const WavepacketSpec& w) { return to_array(w.k0_hat); },
          [](WavepacketSpec& w, const std::array<double, 3>& a) { w.k0_hat = to_vec(a); })
      .def_readwrite("k0_mag", &WavepacketSpec::k0_mag)
      .def_readwrite("sigma", &WavepacketSpec::sigma);

  py::class_<DispersionResult>(m, "DispersionResult")
      .def_readonly("omega", &DispersionResult::omega)
      .def_readonly("detuning", &DispersionResult::detuning)
      .def_readonly("n_weight", &DispersionResult::n_weight)
      .def_readonly("a_ratio", &DispersionResult::a_ratio)
      .def_readonly("on_validated_branch", &DispersionResult::on_validated_branch);

  const MediumParams unit{};
  m.def("dispersion", &dispersion, py::arg("kmag"), py::arg("g"), py::arg("medium") = unit);
  m.def("dispersion_omega", &dispersion_omega, py::arg("kmag"), py::arg("g"), py::arg("medium") = unit);
  m.def("weight_N", &weight_N, py::arg("kmag"), py::arg("g"), py::arg("medium") = unit);
  m.def("excitation_probability", &excitation_probability, py::arg("kmag"), py::arg("g"),
        py::arg("medium") = unit);
  m.def("gbar_from_coupling", &gbar_from_coupling, py::arg("g"), py::arg("medium") = unit);
  m.def("coupling_from_gbar", &coupling_from_gbar, py::arg("gbar"), py::arg("medium") = unit);

  m.def(
      "integral_I",
      [](int n, const std::string& sign, double lambda_over_sigma, double cutoff_eps,
         const std::array<double, 3>& k0_hat, int order, int max_order, double rel_tol) {
        QuadratureConfig cfg{order, max_order, rel_tol};
        const IntegralEstimate e = integral_I_converged(make_spec(n, sign, lambda_over_sigma, k0_hat, cutoff_eps), cfg);
        return py::make_tuple(e.value, e.order, e.rel_change);
      },
      py::arg("n"), py::arg("sign"), py::arg("lambda_over_sigma"), py::arg("cutoff_eps") = 0.0,
      py::arg("k0_hat") = std::array<double, 3>{1.0, 0.0, 0.0}, py::arg("order") = 32, py::arg("max_order") = 256,
      py::arg("rel_tol") = 1e-10,
      "Converged quadrature value of I_n^sign; returns (value, order, rel_change).");
  m.def(
      "integral_I_monte_carlo",
      [](int n, const std::string& sign, double lambda_over_sigma, double cutoff_eps, std::uint64_t samples,
         std::uint64_t seed) {
        const AngularIntegralSpec spec = make_spec(n, sign, lambda_over_sigma, {1.0, 0.0, 0.0}, cutoff_eps);
        MonteCarloEstimate e;
        {
          py::gil_scoped_release release;
          e = integral_I_monte_carlo(spec, samples, seed);
        }
        return py::make_tuple(e.estimate, e.std_error);
      },
      py::arg("n"), py::arg("sign"), py::arg("lambda_over_sigma"), py::arg("cutoff_eps") = 0.0,
      py::arg("samples") = 1'000'000, py::arg("seed") = 20251015,
      "Uniform Monte Carlo estimate; returns (estimate, std_error).");

  py::class_<Erasure>(m, "Erasure")
      .def(py::init([](double p) { return Erasure{p}; }), py::arg("p") = 1.0)
      .def_readwrite("p", &Erasure::p)
      .def("__repr__", [](const Erasure& e) { return channel_label(e); });
  py::class_<CompletelyDephasing>(m, "CompletelyDephasing")
      .def(py::init([](double V) { return CompletelyDephasing{V}; }), py::arg("V") = 1.0)
      .def_readwrite("V", &CompletelyDephasing::V)
      .def("__repr__", [](const CompletelyDephasing& c) { return channel_label(c); });
  py::class_<Depolarizing>(m, "Depolarizing")
      .def(py::init([](double p, double alpha, double Lambda) { return Depolarizing{p, alpha, Lambda}; }),
           py::arg("p") = 1.0, py::arg("alpha") = 1.0, py::arg("Lambda") = 8.0)
      .def_readwrite("p", &Depolarizing::p)
      .def_readwrite("alpha", &Depolarizing::alpha)
      .def_readwrite("Lambda", &Depolarizing::Lambda)
      .def("__repr__", [](const Depolarizing& d) { return channel_label(d); });

  const WavepacketSpec packet{};
  m.def("channel_label", &channel_label, py::arg("channel"));
  m.def("normalized_fidelity", &normalized_fidelity, py::arg("channel"), py::arg("g"), py::arg("medium") = unit,
        py::arg("wavepacket") = packet);
  m.def("fidelity_erasure_uniform", &fidelity_erasure_uniform, py::arg("g"), py::arg("p"), py::arg("medium") = unit,
        py::arg("wavepacket") = packet);
  m.def("fidelity_depolarizing_uniform", &fidelity_depolarizing_uniform, py::arg("g"), py::arg("p"),
        py::arg("alpha"), py::arg("medium") = unit, py::arg("wavepacket") = packet);
  m.def(
      "fidelity_dephasing_uniform",
      [](double g, const MediumParams& medium, const WavepacketSpec& wp) {
        return fidelity_dephasing_uniform(g, medium, wp, QuadratureConfig{});
      },
      py::arg("g"), py::arg("medium") = unit, py::arg("wavepacket") = packet);
  m.def(
      "avg_fidelity_erasure_diffusion",
      [](double g, double p, double eps, const MediumParams& medium, const WavepacketSpec& wp) {
        return avg_fidelity_erasure_diffusion(g, p, medium, wp, QuadratureConfig{}, eps);
      },
      py::arg("g"), py::arg("p"), py::arg("epsilon") = 1e-3, py::arg("medium") = unit, py::arg("wavepacket") = packet);
  m.def(
      "avg_fidelity_dephasing_diffusion",
      [](double g, double eps, const MediumParams& medium, const WavepacketSpec& wp) {
        return avg_fidelity_dephasing_diffusion(g, medium, wp, QuadratureConfig{}, eps);
      },
      py::arg("g"), py::arg("epsilon") = 1e-3, py::arg("medium") = unit, py::arg("wavepacket") = packet);

  m.def(
      "maximize_holevo",
      [](const ChannelSpec& channel, double g, int d, double Lambda, double tol, int max_iterations,
         bool include_vacuum, const MediumParams& medium) {
        const CapacityResult r = maximize_holevo(channel, g, medium, ModeGrid::band_limited(d, Lambda),
                                                 CapacityConfig{tol, max_iterations, include_vacuum});
        py::dict out;
        out["capacity_bits"] = r.capacity_bits;
        out["upper_bound_bits"] = r.upper_bound_bits;
        out["probabilities"] = r.ensemble.probabilities;
        out["iterations"] = r.iterations;
        out["converged"] = r.converged;
        return out;
      },
      py::arg("channel"), py::arg("g"), py::arg("d") = 4, py::arg("Lambda") = 8.0, py::arg("tol") = 1e-6,
      py::arg("max_iterations") = 10'000, py::arg("include_vacuum") = false, py::arg("medium") = unit,
      "Holevo information maximized over basis-state ensembles on a band-limited grid.");

  m.def("default_config_json", [] { return dump_config(default_config()); });
  m.def(
      "run",
      [](const std::string& what, const std::string& config_json) {
        const RunConfig config = parse_config(config_json.empty() ? "{}" : config_json);
        py::gil_scoped_release release;
        if (what == "fidelity") return run_fidelity_sweep(config);
        if (what == "capacity") return run_capacity_sweep(config);
        if (what == "integrals") return run_integral_table(config);
        throw ValidationError("unknown sweep \"" + what + "\" (expected fidelity, capacity or integrals)");
      },
      py::arg("what"), py::arg("config_json") = "",
      "Runs a sweep from a JSON config string and returns the CSV text.");
}
