#include "nanoheat/spheroid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nanoheat/constants.hpp"

namespace nanoheat {

namespace {

// Radii closer than this (relatively) are treated as a sphere so that the
// closed-form depolarization integrals never hit the 0/0 at eta = 0.
constexpr double kSphereTol = 1e-12;

// Below this eccentricity the closed forms lose digits to cancellation and
// the series expansions (error O(eta^6)) take over.
constexpr double kSeriesEta = 1e-3;

}  // namespace

Spheroid::Spheroid(double r_par, double r_perp, PermittivityModel material)
    : r_par_(r_par), r_perp_(r_perp), material_(std::move(material)) {
  if (!(r_par > 0.0) || !(r_perp > 0.0)) {
    throw std::invalid_argument("spheroid semi-axes must be positive");
  }
}

double Spheroid::volume() const {
  return (4.0 / 3.0) * constants::pi * r_perp_ * r_perp_ * r_par_;
}

double Spheroid::max_extent() const {
  return 2.0 * std::max(r_par_, r_perp_);
}

SpheroidClass Spheroid::classify() const {
  const double scale = std::max(r_par_, r_perp_);
  if (std::abs(r_par_ - r_perp_) <= kSphereTol * scale) return SpheroidClass::sphere;
  return r_par_ > r_perp_ ? SpheroidClass::prolate : SpheroidClass::oblate;
}

double Spheroid::eccentricity() const {
  switch (classify()) {
    case SpheroidClass::sphere:
      return 0.0;
    case SpheroidClass::prolate:
      // eta^2 = 1 - (r_perp/r_par)^2, factored to avoid cancellation
      return std::sqrt((r_par_ - r_perp_) * (r_par_ + r_perp_)) / r_par_;
    default:
      // eta^2 = (r_perp/r_par)^2 - 1
      return std::sqrt((r_perp_ - r_par_) * (r_perp_ + r_par_)) / r_par_;
  }
}

DepolarizationFactors depolarization_factors(const Spheroid& s) {
  const SpheroidClass cls = s.classify();
  if (cls == SpheroidClass::sphere) {
    return {1.0 / 3.0, 1.0 / 3.0};
  }
  const double eta = s.eccentricity();
  const double eta2 = eta * eta;
  double n_par;
  if (cls == SpheroidClass::prolate) {
    n_par = eta < kSeriesEta
                ? 1.0 / 3.0 - (2.0 / 15.0) * eta2 - (2.0 / 35.0) * eta2 * eta2
                : (1.0 - eta2) * (std::atanh(eta) - eta) / (eta2 * eta);
  } else {
    n_par = eta < kSeriesEta
                ? 1.0 / 3.0 + (2.0 / 15.0) * eta2 - (2.0 / 35.0) * eta2 * eta2
                : (1.0 + eta2) * (eta - std::atan(eta)) / (eta2 * eta);
  }
  return {n_par, 0.5 * (1.0 - n_par)};
}

PolarizabilityPair polarizability(const Spheroid& s, double omega) {
  const std::complex<double> eps = s.material()(omega);
  const auto [n_par, n_perp] = depolarization_factors(s);
  const double scale = s.r_perp() * s.r_perp() * s.r_par() / 3.0;
  const std::complex<double> chi = eps - 1.0;
  const auto component = [&](double n) {
    return scale * std::imag(chi / (chi * n + 1.0));
  };
  return {component(n_par), component(n_perp)};
}

std::vector<ResonanceMode> resonance_frequencies(const Spheroid& s, double omega_lo, double omega_hi) {
  if (!(omega_lo > 0.0) || !(omega_hi > omega_lo)) {
    throw std::invalid_argument("resonance search needs 0 < omega_lo < omega_hi");
  }
  const auto [n_par, n_perp] = depolarization_factors(s);
  const auto& material = s.material();

  const auto mode_function = [&](double n, double omega) {
    return n * (material(omega).real() - 1.0) + 1.0;
  };

  std::vector<ResonanceMode> modes;
  const int kScan = 6000;
  const double log_lo = std::log(omega_lo);
  const double step = (std::log(omega_hi) - log_lo) / kScan;

  for (const bool parallel : {true, false}) {
    const double n = parallel ? n_par : n_perp;
    double w_prev = omega_lo;
    double g_prev = mode_function(n, w_prev);
    for (int i = 1; i <= kScan; ++i) {
      const double w = i == kScan ? omega_hi : std::exp(log_lo + step * i);
      const double g = mode_function(n, w);
      if ((g_prev < 0.0) != (g < 0.0) || g == 0.0) {
        double a = w_prev, b = w;
        while (b - a > 1e-8 * a) {
          const double mid = 0.5 * (a + b);
          if ((mode_function(n, a) < 0.0) != (mode_function(n, mid) < 0.0)) {
            b = mid;
          } else {
            a = mid;
          }
        }
        const double root = 0.5 * (a + b);
        // Keep only underdamped crossings: where n Im eps >= 1 the mode is
        // swallowed by the absorption core and Im alpha shows no peak.
        if (n * material(root).imag() < 1.0) {
          modes.push_back({root, parallel});
        }
      }
      w_prev = w;
      g_prev = g;
    }
  }

  std::sort(modes.begin(), modes.end(), [](const ResonanceMode& a, const ResonanceMode& b) {
    return a.omega < b.omega;
  });
  // Degenerate components (sphere) produce coincident roots; report one.
  const auto last = std::unique(modes.begin(), modes.end(), [](const ResonanceMode& a, const ResonanceMode& b) {
    return std::abs(a.omega - b.omega) <= 1e-9 * a.omega;
  });
  modes.erase(last, modes.end());
  return modes;
}

Spheroid equal_volume_sphere(const Spheroid& s) {
  if (s.classify() == SpheroidClass::sphere) return s;
  const double r = std::cbrt(s.r_perp() * s.r_perp() * s.r_par());
  return {r, r, s.material()};
}

Spheroid spheroid_from_volume(double volume, double aspect, PermittivityModel material) {
  if (!(volume > 0.0) || !(aspect > 0.0)) {
    throw std::invalid_argument("spheroid_from_volume needs positive volume and aspect");
  }
  const double r_par = std::cbrt(3.0 * volume / (4.0 * constants::pi * aspect * aspect));
  return {r_par, aspect * r_par, std::move(material)};
}

double surface_area(const Spheroid& s) {
  const double a = s.r_par();
  const double b = s.r_perp();
  switch (s.classify()) {
    case SpheroidClass::sphere:
      return 4.0 * constants::pi * b * b;
    case SpheroidClass::prolate: {
      const double e = s.eccentricity();  // sqrt(1 - (b/a)^2), same parameter
      const double asin_over_e = e < kSeriesEta
                                     ? 1.0 + e * e / 6.0 + 3.0 * e * e * e * e / 40.0
                                     : std::asin(e) / e;
      return 2.0 * constants::pi * b * (b + a * asin_over_e);
    }
    default: {
      // Oblate area uses e^2 = 1 - (a/b)^2, not the depolarization eta.
      const double e = std::sqrt((b - a) * (b + a)) / b;
      const double atanh_over_e = e < kSeriesEta
                                      ? 1.0 + e * e / 3.0 + e * e * e * e / 5.0
                                      : std::atanh(e) / e;
      return 2.0 * constants::pi * (b * b + a * a * atanh_over_e);
    }
  }
}

}  // namespace nanoheat
