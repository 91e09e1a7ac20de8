#include "nanoheat/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace nanoheat {

namespace {

using constants::c_light;
using constants::hbar;
using constants::pi;

struct AngleFactors {
  double cos2, sin2, sin_double;  // cos^2, sin^2, sin(2 theta)
};

AngleFactors angle_factors(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c * c, s * s, std::sin(2.0 * theta)};
}

// The four orientation combinations the kernel is built from:
//   on    couples through cos^2(beta)   (axes in the same plane)
//   off   couples through sin^2(beta)   (crossed planes)
//   lz    the beta-independent longitudinal product
//   cross the cos(beta) interference of the anisotropies
struct BracketTerms {
  double on, off, lz, cross;
};

BracketTerms bracket_terms(const PolarizabilityPair& a1, const AngleFactors& f1,
                           const PolarizabilityPair& a2, const AngleFactors& f2) {
  const double t1 = a1.alpha_perp * f1.cos2 + a1.alpha_par * f1.sin2;
  const double t2 = a2.alpha_perp * f2.cos2 + a2.alpha_par * f2.sin2;
  const double l1 = a1.alpha_perp * f1.sin2 + a1.alpha_par * f1.cos2;
  const double l2 = a2.alpha_perp * f2.sin2 + a2.alpha_par * f2.cos2;
  const double cross = (a1.alpha_par - a1.alpha_perp) * f1.sin_double *
                       (a2.alpha_par - a2.alpha_perp) * f2.sin_double;
  return {t1 * t2 + a1.alpha_perp * a2.alpha_perp,
          t1 * a2.alpha_perp + t2 * a1.alpha_perp,
          l1 * l2,
          cross};
}

// At theta = pi/2 exactly the mixing collapses: the in-plane component is
// alpha_par, the longitudinal one alpha_perp, and the interference term dies.
BracketTerms perpendicular_terms(const PolarizabilityPair& a1, const PolarizabilityPair& a2) {
  return {a1.alpha_par * a2.alpha_par + a1.alpha_perp * a2.alpha_perp,
          a1.alpha_par * a2.alpha_perp + a2.alpha_par * a1.alpha_perp,
          a1.alpha_perp * a2.alpha_perp,
          0.0};
}

constexpr double kPerpTol = 1e-12;

bool is_perpendicular(const Pair& p) {
  return std::abs(p.theta1 - pi / 2) <= kPerpTol && std::abs(p.theta2 - pi / 2) <= kPerpTol;
}

SpectralKernel make_kernel_impl(const Pair& p, bool perpendicular_route) {
  p.validate();
  const AngleFactors f1 = angle_factors(p.theta1);
  const AngleFactors f2 = angle_factors(p.theta2);
  const double cb = std::cos(p.beta);
  const double sb = std::sin(p.beta);
  const double cb2 = cb * cb;
  const double sb2 = sb * sb;
  const double inv_d2 = 1.0 / (p.d * p.d);
  const double inv_d4 = inv_d2 * inv_d2;
  const double inv_d6 = inv_d4 * inv_d2;

  SpectralKernel kernel;
  kernel.channels = [=](double omega) -> std::array<double, 3> {
    const PolarizabilityPair a1 = polarizability(p.s1, omega);
    const PolarizabilityPair a2 = polarizability(p.s2, omega);
    const BracketTerms bt =
        perpendicular_route ? perpendicular_terms(a1, a2) : bracket_terms(a1, f1, a2, f2);
    const double b1 = bt.on * cb2 + bt.off * sb2;
    const double k = omega / c_light;
    const double k2 = k * k;
    const double k4 = k2 * k2;
    const double w_pl = planck_difference(omega, p.t1, p.t2);
    const double pref = (2.0 * hbar / pi) * w_pl;
    return {pref * k4 * inv_d2 * b1,
            pref * k2 * inv_d4 * (4.0 * bt.lz - b1),
            pref * inv_d6 * (b1 + 4.0 * bt.lz - bt.cross * cb)};
  };
  const auto channels = kernel.channels;
  kernel.total = [channels](double omega) {
    const auto c = channels(omega);
    return c[0] + c[1] + c[2];
  };
  kernel.seeds = pair_spectral_seeds(p);
  return kernel;
}

TransferResult run_transfer(const Pair& p, const QuadratureSpec& spec, bool perpendicular_route) {
  spec.validate();
  TransferResult out;
  out.validity = check_dipole_validity(p);
  const double omega_hi = spec.omega_cutoff(p.t1, p.t2);
  if (omega_hi <= 0.0) return out;  // both sides cold: nothing flows
  const SpectralKernel kernel = make_kernel_impl(p, perpendicular_route);
  const IntegralResult r = integrate(kernel, 0.0, omega_hi, spec);
  out.watts = r.value;
  out.error = r.error;
  out.kernel_evals = r.kernel_evals;
  out.panels = r.panels;
  return out;
}

}  // namespace

void Pair::validate() const {
  if (!(d > 0.0)) throw std::invalid_argument("pair distance must be positive");
  if (t1 < 0.0 || t2 < 0.0) throw std::invalid_argument("temperatures must be >= 0 K");
  if (!std::isfinite(theta1) || !std::isfinite(theta2) || !std::isfinite(beta)) {
    throw std::invalid_argument("orientation angles must be finite");
  }
}

bool ValidityReport::dipole_ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const ValidityCheck& c) { return c.ok; });
}

std::vector<std::string> ValidityReport::warning_flags() const {
  std::vector<std::string> flags;
  for (const ValidityCheck& c : checks) {
    if (!c.ok) flags.push_back(c.name);
  }
  return flags;
}

ValidityReport check_dipole_validity(const Pair& p) {
  p.validate();
  ValidityReport report;
  const double t_max = std::max(p.t1, p.t2);

  const Spheroid* objects[2] = {&p.s1, &p.s2};
  for (int i = 0; i < 2; ++i) {
    const std::string tag = std::to_string(i + 1);
    const double extent = objects[i]->max_extent();

    const double sep_ratio = p.d / extent;
    report.checks.push_back({"size" + tag + "_vs_d", sep_ratio, 5.0, sep_ratio >= 5.0,
                             "separation over largest diameter; dipole coupling needs >= 5"});

    if (t_max > 0.0) {
      const double lam = thermal_wavelength(t_max);
      const double lam_ratio = extent / lam;
      report.checks.push_back({"size" + tag + "_vs_lambda", lam_ratio, 0.1, lam_ratio <= 0.1,
                               "largest diameter over thermal wavelength; dipole response needs <= 0.1"});

      // Field penetration at the frequencies that carry the exchange: the
      // particle resonances, or failing those the thermal peak.
      std::vector<double> probes;
      for (const SeedPoint& s : spheroid_spectral_seeds(*objects[i])) probes.push_back(s.omega);
      probes.push_back(2.821 * constants::k_boltzmann * t_max / hbar);
      double min_delta = std::numeric_limits<double>::infinity();
      for (double w : probes) {
        const double im_n = std::sqrt(objects[i]->material()(w)).imag();
        if (im_n > 1e-12) {
          min_delta = std::min(min_delta, c_light / (w * im_n));
        }
      }
      const double skin_ratio = min_delta / extent;  // inf when lossless everywhere probed
      report.checks.push_back({"skin_depth" + tag, skin_ratio, 0.5, !(skin_ratio < 0.5),
                               "skin depth over largest diameter; homogeneous polarization needs >= 0.5"});
    }
  }
  return report;
}

SpectralKernel make_transfer_kernel(const Pair& p) { return make_kernel_impl(p, false); }

TransferResult transfer_general(const Pair& p, const QuadratureSpec& spec) {
  return run_transfer(p, spec, false);
}

TransferResult transfer_perpendicular(const Pair& p, const QuadratureSpec& spec) {
  if (!is_perpendicular(p)) {
    throw std::invalid_argument("transfer_perpendicular needs theta1 = theta2 = pi/2");
  }
  return run_transfer(p, spec, true);
}

EmissionResult emission(const Spheroid& s, double temperature, const QuadratureSpec& spec) {
  spec.validate();
  if (temperature < 0.0) throw std::invalid_argument("temperature must be >= 0 K");
  EmissionResult out;
  if (temperature == 0.0) return out;

  SpectralKernel kernel;
  kernel.total = [s, temperature](double omega) {
    const PolarizabilityPair a = polarizability(s, omega);
    const double k = omega / c_light;
    return (4.0 * hbar / (3.0 * pi)) * k * k * k *
           planck_occupation_weight(omega, temperature) * (a.alpha_par + 2.0 * a.alpha_perp);
  };
  kernel.seeds = spheroid_spectral_seeds(s);

  const IntegralResult r = integrate(kernel, 0.0, spec.omega_cutoff(temperature, 0.0), spec);
  out.watts = r.value;
  out.error = r.error;
  out.kernel_evals = r.kernel_evals;
  out.panels = r.panels;
  return out;
}

ChannelDecomposition channel_decomposition(const Pair& p, const QuadratureSpec& spec) {
  spec.validate();
  ChannelDecomposition out;
  out.validity = check_dipole_validity(p);
  const double omega_hi = spec.omega_cutoff(p.t1, p.t2);
  if (omega_hi <= 0.0) return out;
  const ChannelResult r = integrate_channels(make_transfer_kernel(p), 0.0, omega_hi, spec);
  out.d2 = r.channels[0];
  out.d4 = r.channels[1];
  out.d6 = r.channels[2];
  out.total = r.total;
  out.error = r.error;
  out.kernel_evals = r.kernel_evals;
  out.panels = r.panels;
  return out;
}

TransferResult transfer_regime(const Pair& p, Regime regime, const QuadratureSpec& spec) {
  if (regime == Regime::exact) return transfer_general(p, spec);
  spec.validate();
  TransferResult out;
  out.validity = check_dipole_validity(p);
  const double omega_hi = spec.omega_cutoff(p.t1, p.t2);
  if (omega_hi <= 0.0) return out;

  const AngleFactors f1 = angle_factors(p.theta1);
  const AngleFactors f2 = angle_factors(p.theta2);
  const double cb = std::cos(p.beta);
  const double sb = std::sin(p.beta);
  const double cb2 = cb * cb;
  const double sb2 = sb * sb;
  const bool near = regime == Regime::near;

  SpectralKernel kernel;
  kernel.total = [=](double omega) {
    const PolarizabilityPair a1 = polarizability(p.s1, omega);
    const PolarizabilityPair a2 = polarizability(p.s2, omega);
    const BracketTerms bt = bracket_terms(a1, f1, a2, f2);
    const double b1 = bt.on * cb2 + bt.off * sb2;
    const double pref = (2.0 * hbar / pi) * planck_difference(omega, p.t1, p.t2);
    if (near) {
      return pref * (b1 + 4.0 * bt.lz - bt.cross * cb);
    }
    const double k = omega / c_light;
    const double k2 = k * k;
    return pref * k2 * k2 * b1;
  };
  kernel.seeds = pair_spectral_seeds(p);

  const IntegralResult r = integrate(kernel, 0.0, omega_hi, spec);
  out.watts = r.value;
  out.error = r.error;
  out.kernel_evals = r.kernel_evals;
  out.panels = r.panels;
  return out;
}

double BetaProfile::eval(double beta) const {
  const double cb = std::cos(beta);
  const double sb = std::sin(beta);
  return c_cos2 * cb * cb + c_sin2 * sb * sb + c_cosb * cb + c_const;
}

BetaProfile transfer_beta_profile(const Pair& p, Regime regime, const QuadratureSpec& spec) {
  spec.validate();
  p.validate();
  BetaProfile profile;
  profile.regime = regime;
  const double omega_hi = spec.omega_cutoff(p.t1, p.t2);
  if (omega_hi <= 0.0) return profile;

  const AngleFactors f1 = angle_factors(p.theta1);
  const AngleFactors f2 = angle_factors(p.theta2);
  const double inv_d2 = 1.0 / (p.d * p.d);
  const double inv_d4 = inv_d2 * inv_d2;
  const double inv_d6 = inv_d4 * inv_d2;
  const std::vector<SeedPoint> seeds = pair_spectral_seeds(p);

  // Distance weights of the three bracket groups for the chosen regime; the
  // near/far forms have the overall 1/d^6 or 1/d^2 stripped off.
  enum Piece { b1_piece, lz_piece, cross_piece };
  const auto weight = [&](Piece piece, double k) -> double {
    const double k2 = k * k;
    const double k4 = k2 * k2;
    switch (regime) {
      case Regime::near:
        return piece == lz_piece ? 4.0 : 1.0;
      case Regime::far:
        return piece == b1_piece ? k4 : 0.0;
      default:
        switch (piece) {
          case b1_piece: return k4 * inv_d2 - k2 * inv_d4 + inv_d6;
          case lz_piece: return 4.0 * (k2 * inv_d4 + inv_d6);
          default: return inv_d6;
        }
    }
  };

  const auto coefficient = [&](Piece piece, auto term) -> IntegralResult {
    SpectralKernel kernel;
    kernel.total = [=, &p](double omega) {
      const PolarizabilityPair a1 = polarizability(p.s1, omega);
      const PolarizabilityPair a2 = polarizability(p.s2, omega);
      const BracketTerms bt = bracket_terms(a1, f1, a2, f2);
      const double w_pl = planck_difference(omega, p.t1, p.t2);
      return (2.0 * hbar / pi) * w_pl * weight(piece, omega / c_light) * term(bt);
    };
    kernel.seeds = seeds;
    return integrate(kernel, 0.0, omega_hi, spec);
  };

  const IntegralResult on = coefficient(b1_piece, [](const BracketTerms& bt) { return bt.on; });
  const IntegralResult off = coefficient(b1_piece, [](const BracketTerms& bt) { return bt.off; });
  profile.c_cos2 = on.value;
  profile.c_sin2 = off.value;
  profile.error = on.error + off.error;
  profile.kernel_evals = on.kernel_evals + off.kernel_evals;

  if (regime != Regime::far) {
    const IntegralResult lz = coefficient(lz_piece, [](const BracketTerms& bt) { return bt.lz; });
    const IntegralResult crs = coefficient(cross_piece, [](const BracketTerms& bt) { return -bt.cross; });
    profile.c_const = lz.value;
    profile.c_cosb = crs.value;
    profile.error += lz.error + crs.error;
    profile.kernel_evals += lz.kernel_evals + crs.kernel_evals;
  }
  return profile;
}

std::vector<SeedPoint> spheroid_spectral_seeds(const Spheroid& s) {
  const PermittivityModel& m = s.material();
  const double gamma = m.damping_rate();
  std::vector<SeedPoint> seeds;
  const auto half_width = [&](double omega) { return gamma > 0.0 ? 10.0 * gamma : 1e-3 * omega; };

  for (double f : m.feature_frequencies()) {
    seeds.push_back({f, half_width(f)});
  }

  // Particle resonances live inside the dispersive band of the material.
  double lo = 0.0, hi = 0.0;
  switch (m.kind()) {
    case MaterialKind::lorentz:
      lo = 0.5 * m.lorentz().omega_to;
      hi = 1.5 * m.lorentz().omega_lo;
      break;
    case MaterialKind::drude: {
      const double omega_p = m.feature_frequencies().front();
      lo = 1e-3 * omega_p;
      hi = omega_p;
      break;
    }
    case MaterialKind::tabulated: {
      const auto f = m.feature_frequencies();
      lo = f.front();
      hi = f.back();
      break;
    }
    case MaterialKind::constant:
      return seeds;  // dispersionless: nothing to resonate
  }
  for (const ResonanceMode& mode : resonance_frequencies(s, lo, hi)) {
    seeds.push_back({mode.omega, half_width(mode.omega)});
  }
  return seeds;
}

std::vector<SeedPoint> pair_spectral_seeds(const Pair& p) {
  std::vector<SeedPoint> seeds = spheroid_spectral_seeds(p.s1);
  const std::vector<SeedPoint> other = spheroid_spectral_seeds(p.s2);
  seeds.insert(seeds.end(), other.begin(), other.end());
  return seeds;
}

}  // namespace nanoheat
