#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "nanoheat/constants.hpp"
#include "nanoheat/transfer.hpp"
#include "oracle_values.hpp"

using namespace nanoheat;
using doctest::Approx;

namespace {

const QuadratureSpec kSpec{};

Spheroid sic(double r_par_nm, double r_perp_nm) {
  return {r_par_nm * 1e-9, r_perp_nm * 1e-9, sic_model()};
}

// The three frozen scenes exercised throughout this suite.
Pair sphere_pair() {
  Pair p{sic(5.0, 5.0), sic(5.0, 5.0), 100e-9};
  return p;
}

Pair general_pair() {
  Pair p{sic(12.0, 3.0), sic(4.0, 9.0), 150e-9};
  p.theta1 = 0.7;
  p.theta2 = 1.1;
  p.beta = 0.9;
  p.t1 = 350.0;
  p.t2 = 150.0;
  return p;
}

Pair perpendicular_pair() {
  Pair p{sic(20.0, 5.0), sic(15.0, 6.0), 200e-9};
  p.beta = 0.6;
  return p;
}

}  // namespace

TEST_SUITE("transfer") {

TEST_CASE("two SiC spheres match the frozen reference") {
  const auto res = transfer_general(sphere_pair(), kSpec);
  CHECK(res.watts ==
        Approx(oracle_values::transfer_sic_spheres_5nm_100nm_300k).epsilon(1e-6));
  CHECK(res.error <= 1e-6 * res.watts);
  CHECK(res.validity.dipole_ok());
}

TEST_CASE("a fully tilted anisotropic scene matches the frozen reference") {
  const auto res = transfer_general(general_pair(), kSpec);
  CHECK(res.watts ==
        Approx(oracle_values::transfer_sic_general_150nm).epsilon(1e-6));
}

TEST_CASE("the trace route reproduces the closed form on the frozen scenes") {
  // The Green-function trace shares no algebra with the orientation kernel;
  // both land on the same frozen numbers independently.
  CHECK(oracle_transfer(sphere_pair(), kSpec).watts ==
        Approx(oracle_values::transfer_sic_spheres_5nm_100nm_300k).epsilon(1e-6));
  CHECK(oracle_transfer(general_pair(), kSpec).watts ==
        Approx(oracle_values::transfer_sic_general_150nm).epsilon(1e-6));
  CHECK(oracle_transfer(perpendicular_pair(), kSpec).watts ==
        Approx(oracle_values::transfer_sic_perpendicular_200nm).epsilon(1e-6));
}

TEST_CASE("the perpendicular specialization is the general kernel, bit for bit") {
  const Pair p = perpendicular_pair();  // default tilts are exactly pi/2
  const auto special = transfer_perpendicular(p, kSpec);
  const auto general = transfer_general(p, kSpec);
  CHECK(special.watts == general.watts);
  CHECK(special.kernel_evals == general.kernel_evals);
  CHECK(special.watts ==
        Approx(oracle_values::transfer_sic_perpendicular_200nm).epsilon(1e-6));

  Pair tilted = p;
  tilted.theta1 = 0.7;
  CHECK_THROWS_AS((void)transfer_perpendicular(tilted, kSpec), std::invalid_argument);
}

TEST_CASE("emission matches the frozen references") {
  const auto sphere = emission(sic(5.0, 5.0), 300.0, kSpec);
  CHECK(sphere.watts ==
        Approx(oracle_values::emission_sic_sphere_5nm_300k).epsilon(1e-6));

  const auto needle = emission(sic(20.0, 4.0), 300.0, kSpec);
  CHECK(needle.watts ==
        Approx(oracle_values::emission_sic_prolate_20_4_300k).epsilon(1e-6));

  CHECK(emission(sic(5.0, 5.0), 0.0, kSpec).watts == 0.0);
  CHECK_THROWS_AS((void)emission(sic(5.0, 5.0), -1.0, kSpec), std::invalid_argument);
}

TEST_CASE("spheres exchange heat independently of every orientation angle") {
  const double reference = transfer_general(sphere_pair(), kSpec).watts;
  for (const auto& [th1, th2, beta] :
       std::vector<std::array<double, 3>>{{0.0, 0.0, 0.0},
                                          {0.3, 1.2, 0.8},
                                          {1.0, 2.0, 3.0},
                                          {constants::pi / 2, 0.1, 2.5}}) {
    Pair p = sphere_pair();
    p.theta1 = th1;
    p.theta2 = th2;
    p.beta = beta;
    CHECK(transfer_general(p, kSpec).watts == Approx(reference).epsilon(1e-12));
  }
}

TEST_CASE("reversing the reservoirs reverses the flow exactly") {
  Pair p = general_pair();
  const auto forward = transfer_general(p, kSpec);
  std::swap(p.t1, p.t2);
  const auto backward = transfer_general(p, kSpec);
  CHECK(backward.watts == -forward.watts);
}

TEST_CASE("equal temperatures exchange nothing") {
  Pair p = sphere_pair();
  p.t1 = p.t2 = 300.0;
  CHECK(transfer_general(p, kSpec).watts == 0.0);
  p.t1 = p.t2 = 0.0;
  const auto cold = transfer_general(p, kSpec);
  CHECK(cold.watts == 0.0);
  CHECK(cold.kernel_evals == 0);
}

TEST_CASE("channel decomposition sums to the total and orders with distance") {
  const Pair close = sphere_pair();  // 100 nm: deep near zone
  const auto near = channel_decomposition(close, kSpec);
  CHECK(std::abs(near.total - (near.d2 + near.d4 + near.d6)) <=
        1e-10 * std::abs(near.total));
  CHECK(near.d6 > near.d4);
  CHECK(near.d4 > near.d2);
  CHECK(near.total == Approx(transfer_general(close, kSpec).watts).epsilon(1e-13));

  Pair far = sphere_pair();
  far.d = 10e-6;  // x ~ 6 at the resonance: radiative channel dominates
  const auto rad = channel_decomposition(far, kSpec);
  CHECK(rad.d2 > rad.d6);
}

TEST_CASE("near and far regimes strip their distance factors") {
  Pair p = general_pair();

  const double near_coeff = transfer_regime(p, Regime::near, kSpec).watts;
  p.d = 25e-9;  // x = omega d / c ~ 0.015 at the resonances
  const double exact_close = transfer_regime(p, Regime::exact, kSpec).watts;
  const double d6 = std::pow(p.d, 6);
  CHECK(exact_close * d6 == Approx(near_coeff).epsilon(2e-3));

  const double far_coeff = transfer_regime(p, Regime::far, kSpec).watts;
  p.d = 150e-6;  // x ~ 90: the surviving corrections scale as 1/x^2
  const double exact_far = transfer_regime(p, Regime::exact, kSpec).watts;
  CHECK(exact_far * p.d * p.d == Approx(far_coeff).epsilon(1e-3));
}

TEST_CASE("stripped regimes do not depend on the stored distance at all") {
  Pair a = general_pair();
  Pair b = general_pair();
  b.d = 10.0 * a.d;
  for (Regime regime : {Regime::near, Regime::far}) {
    CHECK(transfer_regime(a, regime, kSpec).watts ==
          transfer_regime(b, regime, kSpec).watts);
  }
}

TEST_CASE("the beta profile reproduces direct evaluation at arbitrary angles") {
  const Pair p = general_pair();
  const BetaProfile profile = transfer_beta_profile(p, Regime::exact, kSpec);
  CHECK(profile.c_cosb != 0.0);  // tilted axes keep the interference term alive

  for (double beta : {0.0, 0.3, constants::pi / 2, 2.2, constants::pi}) {
    Pair q = p;
    q.beta = beta;
    const double direct = transfer_general(q, kSpec).watts;
    CHECK(profile.eval(beta) == Approx(direct).epsilon(1e-6));
  }

  const BetaProfile far = transfer_beta_profile(p, Regime::far, kSpec);
  CHECK(far.c_cosb == 0.0);  // only the k^4 B1 group radiates to the far zone
  CHECK(far.c_const == 0.0);
}

TEST_CASE("dipole validity flags the scenes that break the picture") {
  Pair cramped = sphere_pair();
  cramped.d = 20e-9;  // twice the diameter: multipoles matter
  const auto report = check_dipole_validity(cramped);
  CHECK_FALSE(report.dipole_ok());
  const auto flags = report.warning_flags();
  CHECK(std::find(flags.begin(), flags.end(), "size1_vs_d") != flags.end());
  CHECK(std::find(flags.begin(), flags.end(), "size2_vs_d") != flags.end());

  CHECK(check_dipole_validity(sphere_pair()).dipole_ok());

  // A conductor this good expels the field from a 5 nm sphere.
  const Spheroid metal{5e-9, 5e-9, builtin_materials().at("metal_1e6i")};
  Pair skin{metal, metal, 500e-9};
  const auto metal_report = check_dipole_validity(skin);
  const auto metal_flags = metal_report.warning_flags();
  CHECK(std::find(metal_flags.begin(), metal_flags.end(), "skin_depth1") !=
        metal_flags.end());
}

TEST_CASE("resonance seeding pays for itself on physical kernels") {
  const Pair p = sphere_pair();
  const auto seeded = transfer_general(p, kSpec);

  QuadratureSpec blind = kSpec;
  blind.auto_seeds = false;
  const auto scanned = transfer_general(p, blind);

  CHECK(seeded.watts == Approx(scanned.watts).epsilon(1e-6));
  CHECK(scanned.kernel_evals >= 5 * seeded.kernel_evals);
}

TEST_CASE("transfer and oracle kernels advertise the same features") {
  const Pair p = general_pair();
  const auto a = make_transfer_kernel(p).seeds;
  const auto b = make_oracle_kernel(p).seeds;
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].omega == b[i].omega);
    CHECK(a[i].half_width == b[i].half_width);
  }
  CHECK(a.size() >= 4);  // dispersion corners and particle modes, both objects
}

TEST_CASE("scene validation rejects unusable pairs") {
  Pair p = sphere_pair();
  p.d = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = sphere_pair();
  p.t2 = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = sphere_pair();
  p.beta = std::nan("");
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

}  // TEST_SUITE
