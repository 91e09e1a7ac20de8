#include "nanoheat/materials.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "nanoheat/constants.hpp"

namespace nanoheat {

namespace {

void require_positive_omega(double omega) {
  if (!(omega > 0.0)) {
    throw std::domain_error("permittivity requested at non-positive frequency");
  }
}

}  // namespace

LorentzOscillator LorentzOscillator::from_ev(double eps_inf, double omega_lo_ev,
                                             double omega_to_ev, double gamma_ev) {
  LorentzOscillator m;
  m.eps_inf = eps_inf;
  m.omega_lo = ev_to_rad_s(omega_lo_ev);
  m.omega_to = ev_to_rad_s(omega_to_ev);
  m.gamma = ev_to_rad_s(gamma_ev);
  if (!(m.eps_inf > 0.0) || !(m.omega_to > 0.0) || !(m.omega_lo > m.omega_to) || !(m.gamma > 0.0)) {
    throw std::invalid_argument("Lorentz oscillator needs eps_inf > 0, omega_lo > omega_to > 0, gamma > 0");
  }
  return m;
}

std::complex<double> LorentzOscillator::eval(double omega) const {
  const std::complex<double> iwg(0.0, omega * gamma);
  const double w2 = omega * omega;
  return eps_inf * (w2 - omega_lo * omega_lo + iwg) / (w2 - omega_to * omega_to + iwg);
}

LorentzOscillator LorentzOscillator::detuned(double scale) const {
  const double floor = (omega_to / omega_lo) * (omega_to / omega_lo);
  if (!(scale > floor)) {
    std::ostringstream msg;
    msg << "detuning scale " << scale << " would put omega_lo at or below omega_to (needs > " << floor << ")";
    throw std::domain_error(msg.str());
  }
  LorentzOscillator out = *this;
  out.omega_lo = omega_lo * std::sqrt(scale);
  return out;
}

DrudeModel DrudeModel::from_ev(double omega_p_ev, double gamma_ev) {
  DrudeModel m;
  m.omega_p = ev_to_rad_s(omega_p_ev);
  m.gamma = ev_to_rad_s(gamma_ev);
  if (!(m.omega_p > 0.0) || !(m.gamma > 0.0)) {
    throw std::invalid_argument("Drude model needs omega_p > 0 and gamma > 0");
  }
  return m;
}

std::complex<double> DrudeModel::eval(double omega) const {
  return 1.0 - omega_p * omega_p / (omega * omega + std::complex<double>(0.0, omega * gamma));
}

std::complex<double> TabulatedPermittivity::eval(double omega_query) const {
  if (omega.size() < 2 || omega.size() != eps.size()) {
    throw std::logic_error("tabulated permittivity needs >= 2 matching samples");
  }
  if (omega_query < omega.front() || omega_query > omega.back()) {
    std::ostringstream msg;
    msg << "frequency " << omega_query << " rad/s outside tabulated range ["
        << omega.front() << ", " << omega.back() << "]";
    throw std::out_of_range(msg.str());
  }
  const auto it = std::upper_bound(omega.begin(), omega.end(), omega_query);
  const size_t hi = std::min<size_t>(std::distance(omega.begin(), it), omega.size() - 1);
  const size_t lo = hi - 1;
  // Linear in log omega: optical data grids are usually geometric.
  const double t = (std::log(omega_query) - std::log(omega[lo])) /
                   (std::log(omega[hi]) - std::log(omega[lo]));
  return eps[lo] + t * (eps[hi] - eps[lo]);
}

PermittivityModel::PermittivityModel(LorentzOscillator m) : model_(m) {}
PermittivityModel::PermittivityModel(DrudeModel m) : model_(m) {}

PermittivityModel::PermittivityModel(TabulatedPermittivity m) : model_(std::move(m)) {
  const auto& tab = std::get<TabulatedPermittivity>(model_);
  if (tab.omega.size() < 2 || tab.omega.size() != tab.eps.size()) {
    throw std::invalid_argument("tabulated permittivity needs >= 2 matching samples");
  }
  if (!std::is_sorted(tab.omega.begin(), tab.omega.end()) ||
      std::adjacent_find(tab.omega.begin(), tab.omega.end()) != tab.omega.end() ||
      !(tab.omega.front() > 0.0)) {
    throw std::invalid_argument("tabulated frequencies must be positive and strictly increasing");
  }
}

PermittivityModel PermittivityModel::constant(std::complex<double> eps) {
  PermittivityModel m;
  m.model_ = ConstantPermittivity{eps};
  return m;
}

std::complex<double> PermittivityModel::operator()(double omega) const {
  require_positive_omega(omega);
  return std::visit(
      [omega](const auto& m) -> std::complex<double> {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ConstantPermittivity>) {
          return m.eps;
        } else {
          return m.eval(omega);
        }
      },
      model_);
}

MaterialKind PermittivityModel::kind() const {
  switch (model_.index()) {
    case 0: return MaterialKind::lorentz;
    case 1: return MaterialKind::drude;
    case 2: return MaterialKind::constant;
    default: return MaterialKind::tabulated;
  }
}

const LorentzOscillator& PermittivityModel::lorentz() const {
  if (kind() != MaterialKind::lorentz) {
    throw std::logic_error("not a Lorentz-oscillator material");
  }
  return std::get<LorentzOscillator>(model_);
}

PermittivityModel PermittivityModel::detuned(double scale) const {
  return PermittivityModel(lorentz().detuned(scale));
}

std::vector<double> PermittivityModel::feature_frequencies() const {
  switch (kind()) {
    case MaterialKind::lorentz: {
      const auto& m = std::get<LorentzOscillator>(model_);
      return {m.omega_to, m.omega_lo};
    }
    case MaterialKind::drude: {
      const auto& m = std::get<DrudeModel>(model_);
      // The particle resonances sit below omega_p; omega_p itself marks the
      // upper end of the dispersive band.
      return {m.omega_p};
    }
    case MaterialKind::tabulated: {
      const auto& m = std::get<TabulatedPermittivity>(model_);
      return {m.omega.front(), m.omega.back()};
    }
    default:
      return {};
  }
}

double PermittivityModel::damping_rate() const {
  switch (kind()) {
    case MaterialKind::lorentz: return std::get<LorentzOscillator>(model_).gamma;
    case MaterialKind::drude: return std::get<DrudeModel>(model_).gamma;
    default: return 0.0;
  }
}

std::string PermittivityModel::describe() const {
  std::ostringstream out;
  switch (kind()) {
    case MaterialKind::lorentz: {
      const auto& m = std::get<LorentzOscillator>(model_);
      out << "Lorentz(eps_inf=" << m.eps_inf << ", omega_lo=" << rad_s_to_ev(m.omega_lo)
          << " eV, omega_to=" << rad_s_to_ev(m.omega_to) << " eV, gamma="
          << rad_s_to_ev(m.gamma) << " eV)";
      break;
    }
    case MaterialKind::drude: {
      const auto& m = std::get<DrudeModel>(model_);
      out << "Drude(omega_p=" << rad_s_to_ev(m.omega_p) << " eV, gamma="
          << rad_s_to_ev(m.gamma) << " eV)";
      break;
    }
    case MaterialKind::constant: {
      const auto& m = std::get<ConstantPermittivity>(model_);
      out << "Constant(eps=" << m.eps.real() << (m.eps.imag() < 0 ? "" : "+") << m.eps.imag() << "i)";
      break;
    }
    case MaterialKind::tabulated: {
      const auto& m = std::get<TabulatedPermittivity>(model_);
      out << "Tabulated(" << m.omega.size() << " samples, "
          << rad_s_to_ev(m.omega.front()) << ".." << rad_s_to_ev(m.omega.back()) << " eV)";
      break;
    }
  }
  return out.str();
}

PermittivityModel sic_model() {
  return PermittivityModel(LorentzOscillator::from_ev(6.7, 0.12, 0.098, 5.88e-4));
}

const MaterialRegistry& builtin_materials() {
  static const MaterialRegistry registry = [] {
    MaterialRegistry r;
    r.emplace("SiC", sic_model());
    r.emplace("Au", PermittivityModel(DrudeModel::from_ev(9.0, 0.035)));
    r.emplace("metal_1e6i", PermittivityModel::constant({0.0, 1.0e6}));
    return r;
  }();
  return registry;
}

}  // namespace nanoheat
