#include <cmath>
#include <complex>
#include <stdexcept>

#include "doctest.h"
#include "nanoheat/constants.hpp"
#include "nanoheat/materials.hpp"
#include "oracle_values.hpp"

using namespace nanoheat;
using doctest::Approx;

TEST_SUITE("materials") {

TEST_CASE("SiC permittivity matches the reference evaluation") {
  const PermittivityModel sic = sic_model();
  const std::complex<double> eps = sic(ev_to_rad_s(0.10));
  CHECK(eps.real() == Approx(oracle_values::sic_eps_re_0p10ev).epsilon(1e-12));
  CHECK(eps.imag() == Approx(oracle_values::sic_eps_im_0p10ev).epsilon(1e-12));
}

TEST_CASE("Au permittivity matches the reference evaluation") {
  const PermittivityModel au = builtin_materials().at("Au");
  const std::complex<double> eps = au(ev_to_rad_s(1.0));
  CHECK(eps.real() == Approx(oracle_values::au_eps_re_1ev).epsilon(1e-12));
  CHECK(eps.imag() == Approx(oracle_values::au_eps_im_1ev).epsilon(1e-12));
}

TEST_CASE("SiC dispersion has the expected band structure") {
  const PermittivityModel sic = sic_model();
  const LorentzOscillator& osc = sic.lorentz();

  // Static limit exceeds eps_inf by the oscillator strength.
  const double eps_static = sic(osc.omega_to * 1e-3).real();
  CHECK(eps_static ==
        Approx(osc.eps_inf * (osc.omega_lo * osc.omega_lo) /
               (osc.omega_to * osc.omega_to)).epsilon(1e-4));

  // Reststrahlen band: Re eps < 0 strictly between TO and LO.
  for (double f : {0.3, 0.5, 0.7}) {
    const double w = osc.omega_to + f * (osc.omega_lo - osc.omega_to);
    CHECK(sic(w).real() < 0.0);
  }
  // Passive medium: Im eps >= 0 across the band and beyond.
  for (double f : {0.01, 0.5, 1.0, 2.0, 10.0}) {
    CHECK(sic(f * osc.omega_to).imag() >= 0.0);
  }
}

TEST_CASE("detuning rescales the LO frequency and nothing else") {
  const PermittivityModel sic = sic_model();
  const LorentzOscillator& base = sic.lorentz();
  const PermittivityModel shifted = sic.detuned(1.05);
  const LorentzOscillator& osc = shifted.lorentz();

  CHECK(osc.omega_lo * osc.omega_lo ==
        Approx(1.05 * base.omega_lo * base.omega_lo).epsilon(1e-15));
  CHECK(osc.omega_to == base.omega_to);
  CHECK(osc.gamma == base.gamma);
  CHECK(osc.eps_inf == base.eps_inf);

  // A scale that would push LO at or below TO is rejected.
  const double ratio2 = (base.omega_to * base.omega_to) /
                        (base.omega_lo * base.omega_lo);
  CHECK_THROWS_AS((void)sic.detuned(ratio2), std::domain_error);
  CHECK_THROWS_AS((void)sic.detuned(0.5 * ratio2), std::domain_error);
  CHECK_NOTHROW((void)sic.detuned(1.0));
}

TEST_CASE("constant models are dispersionless") {
  const PermittivityModel m = PermittivityModel::constant({2.25, 0.5});
  CHECK(m(1e13) == m(1e15));
  CHECK(m(1e14) == std::complex<double>(2.25, 0.5));
  CHECK(m.kind() == MaterialKind::constant);
  CHECK(m.feature_frequencies().empty());
  CHECK(m.damping_rate() == 0.0);
}

TEST_CASE("tabulated models interpolate and guard their domain") {
  TabulatedPermittivity tab;
  tab.omega = {1e13, 1e14, 1e15};
  tab.eps = {{2.0, 0.1}, {3.0, 0.2}, {5.0, 0.4}};
  const PermittivityModel m{tab};

  CHECK(m(1e13) == std::complex<double>(2.0, 0.1));
  CHECK(m(1e15) == std::complex<double>(5.0, 0.4));
  // Interpolation is linear in log omega: the geometric midpoint lands
  // halfway between the tabulated nodes.
  const std::complex<double> mid = m(std::sqrt(1e13 * 1e14));
  CHECK(mid.real() == Approx(2.5).epsilon(1e-12));
  CHECK(mid.imag() == Approx(0.15).epsilon(1e-12));
  CHECK_THROWS_AS((void)m(9e12), std::out_of_range);
  CHECK_THROWS_AS((void)m(2e15), std::out_of_range);
}

TEST_CASE("non-positive frequencies are rejected") {
  const PermittivityModel sic = sic_model();
  CHECK_THROWS_AS((void)sic(0.0), std::domain_error);
  CHECK_THROWS_AS((void)sic(-1e14), std::domain_error);
}

TEST_CASE("feature frequencies expose the dispersion corners") {
  const PermittivityModel sic = sic_model();
  const auto features = sic.feature_frequencies();
  REQUIRE(features.size() == 2);
  CHECK(features[0] == Approx(ev_to_rad_s(0.098)).epsilon(1e-12));
  CHECK(features[1] == Approx(ev_to_rad_s(0.12)).epsilon(1e-12));
  CHECK(sic.damping_rate() == Approx(ev_to_rad_s(5.88e-4)).epsilon(1e-12));

  const PermittivityModel au = builtin_materials().at("Au");
  REQUIRE(au.feature_frequencies().size() == 1);
  CHECK(au.feature_frequencies()[0] == Approx(ev_to_rad_s(9.0)).epsilon(1e-12));
}

TEST_CASE("builtin registry carries the stock materials") {
  const MaterialRegistry& reg = builtin_materials();
  REQUIRE(reg.count("SiC") == 1);
  REQUIRE(reg.count("Au") == 1);
  REQUIRE(reg.count("metal_1e6i") == 1);
  const std::complex<double> eps = reg.at("metal_1e6i")(1e14);
  CHECK(eps == std::complex<double>(0.0, 1e6));
  CHECK(reg.at("SiC").describe().find("Lorentz") != std::string::npos);
}

}  // TEST_SUITE
