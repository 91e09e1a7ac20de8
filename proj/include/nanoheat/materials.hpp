#ifndef NANOHEAT_MATERIALS_HPP
#define NANOHEAT_MATERIALS_HPP

#include <complex>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace nanoheat {

// Single-oscillator polar dielectric,
//   eps(w) = eps_inf * (w^2 - w_LO^2 + i w gamma) / (w^2 - w_TO^2 + i w gamma).
// All frequencies in rad/s; from_ev converts energy-unit parameters.
struct LorentzOscillator {
  double eps_inf = 1.0;
  double omega_lo = 0.0;
  double omega_to = 0.0;
  double gamma = 0.0;

  static LorentzOscillator from_ev(double eps_inf, double omega_lo_ev,
                                   double omega_to_ev, double gamma_ev);

  std::complex<double> eval(double omega) const;

  // Rescales omega_lo^2 by `scale` (oscillator-strength detuning). The
  // ordering omega_lo > omega_to must survive, so scale > (omega_to/omega_lo)^2.
  LorentzOscillator detuned(double scale) const;
};

// Free-electron metal, eps(w) = 1 - w_p^2 / (w^2 + i w gamma).
struct DrudeModel {
  double omega_p = 0.0;
  double gamma = 0.0;

  static DrudeModel from_ev(double omega_p_ev, double gamma_ev);

  std::complex<double> eval(double omega) const;
};

// Piecewise-linear interpolation of Re eps and Im eps on a log-omega grid.
// Evaluation outside [omega.front(), omega.back()] throws std::out_of_range.
struct TabulatedPermittivity {
  std::vector<double> omega;  // rad/s, strictly increasing
  std::vector<std::complex<double>> eps;

  std::complex<double> eval(double omega_query) const;
};

struct ConstantPermittivity {
  std::complex<double> eps{1.0, 0.0};
};

enum class MaterialKind { lorentz, drude, constant, tabulated };

// Value-type wrapper over the dispersion models above. Frequencies must be
// positive; operator() throws std::domain_error otherwise.
class PermittivityModel {
 public:
  PermittivityModel() : model_(ConstantPermittivity{}) {}
  explicit PermittivityModel(LorentzOscillator m);
  explicit PermittivityModel(DrudeModel m);
  explicit PermittivityModel(TabulatedPermittivity m);

  static PermittivityModel constant(std::complex<double> eps);

  std::complex<double> operator()(double omega) const;

  MaterialKind kind() const;

  // Lorentz-only accessors; throw std::logic_error on other kinds.
  const LorentzOscillator& lorentz() const;
  PermittivityModel detuned(double scale) const;

  // Characteristic frequencies of the dispersion (TO/LO, plasma, grid ends):
  // used to pre-seed spectral quadrature. Empty for constant models.
  std::vector<double> feature_frequencies() const;

  // Damping rate in rad/s (0 for non-resonant models); sets the frequency
  // scale on which spectral features live.
  double damping_rate() const;

  std::string describe() const;

 private:
  std::variant<LorentzOscillator, DrudeModel, ConstantPermittivity, TabulatedPermittivity> model_;
};

// Named stock materials: "SiC" (the polar-dielectric workhorse), "Au" (Drude),
// "metal_1e6i" (dispersionless near-perfect conductor used by scaling probes).
using MaterialRegistry = std::map<std::string, PermittivityModel>;
const MaterialRegistry& builtin_materials();
PermittivityModel sic_model();

}  // namespace nanoheat

#endif
