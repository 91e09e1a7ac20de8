#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <utility>

#include "nanoheat/analysis.hpp"
#include "nanoheat/constants.hpp"

namespace py = pybind11;

using namespace nanoheat;

namespace {

std::string spheroid_repr(const Spheroid& s) {
  return "<Spheroid r_par=" + format_double(s.r_par()) + " r_perp=" + format_double(s.r_perp()) +
         " " + s.material().describe() + ">";
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Radiative heat transfer between anisotropic dipolar nanoparticles";

  m.attr("hbar") = constants::hbar;
  m.attr("k_boltzmann") = constants::k_boltzmann;
  m.attr("c_light") = constants::c_light;
  m.attr("electron_volt") = constants::electron_volt;

  m.def("ev_to_rad_s", &ev_to_rad_s, py::arg("energy_ev"),
        "Photon energy in eV to angular frequency in rad/s.");
  m.def("rad_s_to_ev", &rad_s_to_ev, py::arg("omega"),
        "Angular frequency in rad/s to photon energy in eV.");
  m.def("planck_occupation_weight", &planck_occupation_weight, py::arg("omega"),
        py::arg("temperature"), "omega * n(omega, T) with n the Bose occupation.");
  m.def("planck_difference", &planck_difference, py::arg("omega"), py::arg("t1"), py::arg("t2"),
        "omega * [n(omega, T1) - n(omega, T2)].");
  m.def("thermal_wavelength", &thermal_wavelength, py::arg("temperature"),
        "hbar c / (kB T) in meters.");

  py::register_exception<QuadratureError>(m, "QuadratureError", PyExc_RuntimeError);

  py::class_<PermittivityModel>(m, "PermittivityModel",
                                "Dispersion model eps(omega); omega in rad/s.")
      .def_static(
          "lorentz",
          [](double eps_inf, double omega_lo_ev, double omega_to_ev, double gamma_ev) {
            return PermittivityModel(
                LorentzOscillator::from_ev(eps_inf, omega_lo_ev, omega_to_ev, gamma_ev));
          },
          py::arg("eps_inf"), py::arg("omega_lo_ev"), py::arg("omega_to_ev"), py::arg("gamma_ev"))
      .def_static(
          "drude",
          [](double omega_p_ev, double gamma_ev) {
            return PermittivityModel(DrudeModel::from_ev(omega_p_ev, gamma_ev));
          },
          py::arg("omega_p_ev"), py::arg("gamma_ev"))
      .def_static("constant", &PermittivityModel::constant, py::arg("eps"))
      .def("__call__", [](const PermittivityModel& model, double omega) { return model(omega); },
           py::arg("omega"))
      .def("detuned", &PermittivityModel::detuned, py::arg("scale"),
           "Lorentz model with omega_lo^2 rescaled by `scale`.")
      .def("feature_frequencies", &PermittivityModel::feature_frequencies)
      .def("damping_rate", &PermittivityModel::damping_rate)
      .def("describe", &PermittivityModel::describe)
      .def("__repr__", [](const PermittivityModel& model) {
        return "<PermittivityModel " + model.describe() + ">";
      });

  m.def(
      "material",
      [](const std::string& name) {
        const MaterialRegistry& registry = builtin_materials();
        const auto it = registry.find(name);
        if (it == registry.end()) throw py::key_error("unknown material '" + name + "'");
        return it->second;
      },
      py::arg("name"), "Stock material by name; see material_names().");
  m.def("material_names", [] {
    std::vector<std::string> names;
    for (const auto& [name, model] : builtin_materials()) names.push_back(name);
    return names;
  });

  py::class_<Spheroid>(m, "Spheroid",
                       "Homogeneous spheroid; r_par along the symmetry axis, meters.")
      .def(py::init<double, double, PermittivityModel>(), py::arg("r_par"), py::arg("r_perp"),
           py::arg("material"))
      .def_property_readonly("r_par", &Spheroid::r_par)
      .def_property_readonly("r_perp", &Spheroid::r_perp)
      .def_property_readonly("material", &Spheroid::material)
      .def_property_readonly("aspect", &Spheroid::aspect)
      .def_property_readonly("volume", &Spheroid::volume)
      .def_property_readonly("max_extent", &Spheroid::max_extent)
      .def("with_material", &Spheroid::with_material, py::arg("material"))
      .def("__repr__", &spheroid_repr);

  m.def("spheroid_from_volume", &spheroid_from_volume, py::arg("volume"), py::arg("aspect"),
        py::arg("material"), "Spheroid of given volume and aspect = r_perp / r_par.");
  m.def("equal_volume_sphere", &equal_volume_sphere, py::arg("spheroid"));
  m.def("surface_area", &surface_area, py::arg("spheroid"));
  m.def(
      "depolarization_factors",
      [](const Spheroid& s) {
        const DepolarizationFactors n = depolarization_factors(s);
        return std::make_pair(n.n_par, n.n_perp);
      },
      py::arg("spheroid"), "(n_par, n_perp), n_par + 2 n_perp = 1.");
  m.def(
      "polarizability",
      [](const Spheroid& s, double omega) {
        const PolarizabilityPair a = polarizability(s, omega);
        return std::make_pair(a.alpha_par, a.alpha_perp);
      },
      py::arg("spheroid"), py::arg("omega"), "(Im alpha_par, Im alpha_perp) in m^3.");
  m.def(
      "resonance_frequencies",
      [](const Spheroid& s, double omega_lo, double omega_hi) {
        std::vector<std::pair<double, bool>> out;
        for (const ResonanceMode& mode : resonance_frequencies(s, omega_lo, omega_hi)) {
          out.emplace_back(mode.omega, mode.parallel);
        }
        return out;
      },
      py::arg("spheroid"), py::arg("omega_lo"), py::arg("omega_hi"),
      "List of (omega, is_parallel) surface-mode resonances.");

  py::class_<QuadratureSpec>(m, "QuadratureSpec", "Adaptive spectral quadrature controls.")
      .def(py::init<>())
      .def_readwrite("rel_tol", &QuadratureSpec::rel_tol)
      .def_readwrite("abs_floor", &QuadratureSpec::abs_floor)
      .def_readwrite("omega_max_factor", &QuadratureSpec::omega_max_factor)
      .def_readwrite("seed_points", &QuadratureSpec::seed_points)
      .def_readwrite("auto_seeds", &QuadratureSpec::auto_seeds)
      .def_readwrite("panel_budget", &QuadratureSpec::panel_budget);

  py::enum_<Regime>(m, "Regime")
      .value("near", Regime::near)
      .value("far", Regime::far)
      .value("exact", Regime::exact);

  py::class_<Pair>(m, "Pair",
                   "Two spheroids d apart on the z axis; theta_i tilt off that axis, beta the "
                   "relative azimuth.")
      .def(py::init([](Spheroid s1, Spheroid s2, double d, double theta1, double theta2,
                       double beta, double t1, double t2) {
             Pair p{std::move(s1), std::move(s2), d, theta1, theta2, beta, t1, t2};
             p.validate();
             return p;
           }),
           py::arg("s1"), py::arg("s2"), py::arg("d"), py::arg("theta1") = constants::pi / 2,
           py::arg("theta2") = constants::pi / 2, py::arg("beta") = 0.0, py::arg("t1") = 300.0,
           py::arg("t2") = 0.0)
      .def_readwrite("s1", &Pair::s1)
      .def_readwrite("s2", &Pair::s2)
      .def_readwrite("d", &Pair::d)
      .def_readwrite("theta1", &Pair::theta1)
      .def_readwrite("theta2", &Pair::theta2)
      .def_readwrite("beta", &Pair::beta)
      .def_readwrite("t1", &Pair::t1)
      .def_readwrite("t2", &Pair::t2);

  py::class_<TransferResult>(m, "TransferResult")
      .def_readonly("watts", &TransferResult::watts)
      .def_readonly("error", &TransferResult::error)
      .def_readonly("kernel_evals", &TransferResult::kernel_evals)
      .def_readonly("panels", &TransferResult::panels)
      .def_property_readonly(
          "dipole_ok", [](const TransferResult& r) { return r.validity.dipole_ok(); })
      .def_property_readonly(
          "warnings", [](const TransferResult& r) { return r.validity.warning_flags(); })
      .def("__repr__", [](const TransferResult& r) {
        return "<TransferResult " + format_double(r.watts) + " W +- " + format_double(r.error) +
               ">";
      });

  py::class_<EmissionResult>(m, "EmissionResult")
      .def_readonly("watts", &EmissionResult::watts)
      .def_readonly("error", &EmissionResult::error)
      .def_readonly("kernel_evals", &EmissionResult::kernel_evals)
      .def_readonly("panels", &EmissionResult::panels);

  py::class_<ChannelDecomposition>(m, "ChannelDecomposition")
      .def_readonly("d2", &ChannelDecomposition::d2)
      .def_readonly("d4", &ChannelDecomposition::d4)
      .def_readonly("d6", &ChannelDecomposition::d6)
      .def_readonly("total", &ChannelDecomposition::total)
      .def_readonly("error", &ChannelDecomposition::error);

  py::class_<BetaProfile>(m, "BetaProfile",
                          "H(beta) = c_cos2 cos^2 b + c_sin2 sin^2 b + c_cosb cos b + c_const.")
      .def_readonly("c_cos2", &BetaProfile::c_cos2)
      .def_readonly("c_sin2", &BetaProfile::c_sin2)
      .def_readonly("c_cosb", &BetaProfile::c_cosb)
      .def_readonly("c_const", &BetaProfile::c_const)
      .def_readonly("error", &BetaProfile::error)
      .def("eval", &BetaProfile::eval, py::arg("beta"));

  py::class_<SwitchQuality>(m, "SwitchQuality")
      .def_readonly("quality", &SwitchQuality::quality)
      .def_readonly("beta_max", &SwitchQuality::beta_max)
      .def_readonly("beta_min", &SwitchQuality::beta_min)
      .def_readonly("h_max", &SwitchQuality::h_max)
      .def_readonly("h_min", &SwitchQuality::h_min)
      .def_readonly("profile", &SwitchQuality::profile);

  const QuadratureSpec default_spec;
  m.def("transfer_general", &transfer_general, py::arg("pair"),
        py::arg("spec") = default_spec, py::call_guard<py::gil_scoped_release>(),
        "Net exchanged power in W from the closed-form orientation kernel.");
  m.def("transfer_perpendicular", &transfer_perpendicular, py::arg("pair"),
        py::arg("spec") = default_spec, py::call_guard<py::gil_scoped_release>(),
        "Specialization for theta1 = theta2 = pi/2.");
  m.def("oracle_transfer", &oracle_transfer, py::arg("pair"), py::arg("spec") = default_spec,
        py::call_guard<py::gil_scoped_release>(),
        "Same power from the dyadic Green function trace; independent route.");
  m.def("transfer_regime", &transfer_regime, py::arg("pair"), py::arg("regime"),
        py::arg("spec") = default_spec, py::call_guard<py::gil_scoped_release>(),
        "Transfer with the distance factor of the chosen regime stripped.");
  m.def("emission", &emission, py::arg("spheroid"), py::arg("temperature"),
        py::arg("spec") = default_spec, py::call_guard<py::gil_scoped_release>(),
        "Power radiated by an isolated particle, W.");
  m.def("channel_decomposition", &channel_decomposition, py::arg("pair"),
        py::arg("spec") = default_spec, py::call_guard<py::gil_scoped_release>(),
        "Transfer split into the d^-2 / d^-4 / d^-6 channels.");
  m.def("transfer_beta_profile", &transfer_beta_profile, py::arg("pair"), py::arg("regime"),
        py::arg("spec") = default_spec, py::call_guard<py::gil_scoped_release>());
  m.def("switch_quality", &switch_quality, py::arg("pair"), py::arg("regime"),
        py::arg("spec") = default_spec, py::call_guard<py::gil_scoped_release>(),
        "max/min of H over beta with the extremal angles.");
}
