#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "nanoheat/analysis.hpp"
#include "nanoheat/constants.hpp"
#include "oracle_values.hpp"

using namespace nanoheat;
using doctest::Approx;

namespace {

const QuadratureSpec kSpec{};

double sphere_volume(double r_nm) {
  const double r = r_nm * 1e-9;
  return 4.0 * constants::pi / 3.0 * r * r * r;
}

SweepScene sic_scene() {
  return {sic_model(), sphere_volume(5.0), 0.0, 300.0, 0.0};
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("format_double round-trips every value") {
  for (double v : {0.0, 1.5, 0.1, 1.0 / 3.0, -2.75e-19, 6.02e23, 1e300,
                   3.1949292438703513e-15}) {
    const std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(1.5) == "1.5");
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("logspace pins both endpoints exactly") {
  const auto grid = logspace(0.05, 0.5, 15);
  REQUIRE(grid.size() == 15);
  CHECK(grid.front() == 0.05);
  CHECK(grid.back() == 0.5);
  for (size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);
  CHECK_THROWS_AS((void)logspace(0.0, 1.0, 5), std::invalid_argument);
  CHECK_THROWS_AS((void)logspace(1.0, 0.5, 5), std::invalid_argument);
  CHECK_THROWS_AS((void)logspace(1.0, 2.0, 1), std::invalid_argument);
}

TEST_CASE("the log-log fit recovers an exact power law") {
  const std::vector<double> x{1.0, 2.0, 4.0, 8.0, 16.0};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, 2.5));
  CHECK(fit_loglog_slope(x, y) == Approx(2.5).epsilon(1e-12));
}

TEST_CASE("csv serialization is byte-stable and quotes what it must") {
  SweepResult sweep;
  sweep.parameter_name = "aspect_ratio";
  sweep.quantity_name = "transfer";
  sweep.rows = {{1.5, 2.25, 0.0, ""},
                {0.5, -3.0, 0.125, "size1_vs_d;skin_depth1"}};
  SweepResult quoted;
  quoted.quantity_name = "ratio, near";
  quoted.rows = {{1.0, 1.0, 0.0, ""}};

  const std::string expected =
      "parameter,value,quantity,error,flags\n"
      "1.5,2.25,transfer,0,\n"
      "0.5,-3,transfer,0.125,size1_vs_d;skin_depth1\n"
      "1,1,\"ratio, near\",0,\n";
  CHECK(to_csv({sweep, quoted}) == expected);
}

TEST_CASE("shape sweeps normalize to exactly one at aspect one") {
  const std::vector<double> aspects{0.5, 1.0};
  const auto transfer =
      sphere_normalized_transfer(sic_scene(), aspects, Regime::near, kSpec);
  REQUIRE(transfer.rows.size() == 2);
  CHECK(transfer.rows[1].parameter == 1.0);
  CHECK(transfer.rows[1].value == 1.0);
  CHECK(transfer.rows[0].value > 1.0);  // mild elongation already helps

  const auto emitted = emission_ratio(sic_scene(), aspects, kSpec);
  CHECK(emitted.rows[1].value == 1.0);

  const auto area = macroscopic_emission_ratio(aspects, sic_scene().volume);
  CHECK(area.rows[1].value == 1.0);
  CHECK(area.rows[0].value > 1.0);  // isoperimetric: the sphere minimizes area
  CHECK(area.rows[0].error == 0.0);
}

TEST_CASE("worker count cannot leak into the numbers") {
  const auto aspects = logspace(0.1, 1.0, 6);
  const auto serial =
      sphere_normalized_transfer(sic_scene(), aspects, Regime::near, kSpec, 1);
  const auto threaded =
      sphere_normalized_transfer(sic_scene(), aspects, Regime::near, kSpec, 4);
  REQUIRE(serial.rows.size() == threaded.rows.size());
  for (size_t i = 0; i < serial.rows.size(); ++i) {
    CHECK(serial.rows[i].value == threaded.rows[i].value);
    CHECK(serial.rows[i].error == threaded.rows[i].error);
  }
  CHECK(to_csv({serial}) == to_csv({threaded}));
}

TEST_CASE("a sphere pair cannot switch") {
  const Spheroid sphere = spheroid_from_volume(sphere_volume(5.0), 1.0, sic_model());
  const Pair p{sphere, sphere, 1.0, constants::pi / 2, constants::pi / 2, 0.0, 300.0, 0.0};
  const SwitchQuality q = switch_quality(p, Regime::near, kSpec);
  CHECK(q.quality == Approx(1.0).epsilon(1e-9));
}

TEST_CASE("identical needles switch and the far zone switches harder") {
  const Spheroid needle = spheroid_from_volume(sphere_volume(5.0), 0.2, sic_model());
  const Pair p{needle, needle, 1.0, constants::pi / 2, constants::pi / 2, 0.0, 300.0, 0.0};
  const SwitchQuality near = switch_quality(p, Regime::near, kSpec);
  const SwitchQuality far = switch_quality(p, Regime::far, kSpec);
  CHECK(near.quality > 10.0);
  CHECK(far.quality > near.quality);

  // Thinner needles separate the parallel and crossed orientations further.
  const Spheroid thick = spheroid_from_volume(sphere_volume(5.0), 0.4, sic_model());
  const Pair q{thick, thick, 1.0, constants::pi / 2, constants::pi / 2, 0.0, 300.0, 0.0};
  CHECK(switch_quality(q, Regime::far, kSpec).quality < far.quality);
}

TEST_CASE("beta sweeps mirror around pi/2 when the interference term dies") {
  const Spheroid needle = spheroid_from_volume(sphere_volume(5.0), 0.2, sic_model());
  const Pair p{needle, needle, 1.0, constants::pi / 2, constants::pi / 2, 0.0, 300.0, 0.0};
  const auto sweep = beta_sweep(p, Regime::near, 61, kSpec);
  REQUIRE(sweep.rows.size() == 61);
  CHECK(sweep.rows.front().parameter == 0.0);
  CHECK(sweep.rows.back().parameter == Approx(constants::pi).epsilon(1e-15));
  for (size_t i = 0; i < sweep.rows.size(); ++i) {
    const auto& mirror = sweep.rows[sweep.rows.size() - 1 - i];
    CHECK(sweep.rows[i].value == Approx(mirror.value).epsilon(1e-12));
  }
  CHECK(sweep.quantity_unit == "W*m^6");
}

TEST_CASE("tilted pairs keep the cos(beta) interference") {
  Pair p{Spheroid{12e-9, 3e-9, sic_model()}, Spheroid{4e-9, 9e-9, sic_model()}, 150e-9};
  p.theta1 = 0.7;
  p.theta2 = 1.1;
  p.t1 = 350.0;
  p.t2 = 150.0;
  const auto sweep = beta_sweep(p, Regime::exact, 21, kSpec);
  const double front = sweep.rows.front().value;
  const double back = sweep.rows.back().value;
  CHECK(std::abs(front - back) > 1e-6 * std::abs(front));
}

TEST_CASE("exact-regime sweeps carry the validity flags") {
  const Spheroid sphere = spheroid_from_volume(sphere_volume(5.0), 1.0, sic_model());
  Pair cramped{sphere, sphere, 20e-9};
  cramped.t1 = 300.0;
  const auto sweep = beta_sweep(cramped, Regime::exact, 5, kSpec);
  CHECK(sweep.rows.front().flags.find("size1_vs_d") != std::string::npos);
  // Stripped regimes have no geometry to violate.
  CHECK(beta_sweep(cramped, Regime::near, 5, kSpec).rows.front().flags.empty());
}

TEST_CASE("the detuned pair aligns its parallel modes as frozen") {
  DetunedSwitchScene scene{sic_model(), 0.25, 0.20, 1.05, 1.10,
                           sphere_volume(5.0), 0.0, 300.0, 0.0};
  const DetunedSwitch result = detuned_switch(scene, Regime::near, kSpec);

  CHECK(rad_s_to_ev(result.alignment.omega_par_1) ==
        Approx(oracle_values::detuned_res_par_1_ev).epsilon(1e-5));
  CHECK(rad_s_to_ev(result.alignment.omega_par_2) ==
        Approx(oracle_values::detuned_res_par_2_ev).epsilon(1e-5));
  CHECK(rad_s_to_ev(result.alignment.omega_perp_1) ==
        Approx(oracle_values::detuned_res_perp_1_ev).epsilon(1e-5));
  CHECK(rad_s_to_ev(result.alignment.omega_perp_2) ==
        Approx(oracle_values::detuned_res_perp_2_ev).epsilon(1e-5));

  const double expected_par_gap =
      std::abs(oracle_values::detuned_res_par_1_ev - oracle_values::detuned_res_par_2_ev) /
      oracle_values::sic_gamma_ev;
  CHECK(result.alignment.par_gap_over_gamma == Approx(expected_par_gap).epsilon(1e-3));
  CHECK(result.alignment.par_gap_over_gamma < result.alignment.perp_gap_over_gamma);
  CHECK(result.alignment.perp_gap_over_gamma < result.alignment.cross_gap_over_gamma);
  CHECK(result.quality.quality > 100.0);
}

TEST_CASE("prolate against oblate switches hardest at crossed axes") {
  ProlateOblateScene scene{sic_model(), 0.30, 0.145, sphere_volume(5.0), 0.0, 300.0, 0.0};
  const ProlateOblateSwitch result = prolate_oblate_switch(scene, Regime::near, kSpec);
  CHECK(result.pair.s2.aspect() == Approx(1.0 / 0.145).epsilon(1e-12));
  CHECK(result.quality.quality > 50.0);
  CHECK(result.quality.beta_max == Approx(constants::pi / 2).epsilon(1e-6));

  ProlateOblateScene bad = scene;
  bad.oblate_par_over_perp = 1.5;
  CHECK_THROWS_AS((void)prolate_oblate_switch(bad, Regime::near, kSpec),
                  std::invalid_argument);
}

TEST_CASE("the ideal conductor shows the needle window and SiC does not") {
  ScalingProbe probe{builtin_materials().at("metal_1e6i"), logspace(10.0, 300.0, 8),
                     sphere_volume(5.0), 300.0, 0.0, 0.0};
  SweepResult sweep;
  const ScalingFit fit = metallic_scaling_probe(probe, kSpec, 2, &sweep);
  CHECK(fit.window_found);
  CHECK(fit.fit_accepted);
  CHECK(fit.transfer_exponent == Approx(8.0).epsilon(0.08));
  CHECK(fit.alpha_exponent == Approx(4.0).epsilon(0.08));
  REQUIRE(sweep.rows.size() == 8);
  CHECK(sweep.rows.back().value > sweep.rows.front().value);

  ScalingProbe sic_probe = probe;
  sic_probe.material = sic_model();
  sic_probe.elongations = logspace(10.0, 100.0, 5);
  const ScalingFit rejected = metallic_scaling_probe(sic_probe, kSpec);
  CHECK_FALSE(rejected.window_found);
  CHECK_FALSE(rejected.fit_accepted);
  CHECK(rejected.rejection_reason.find("no asymptotic window") != std::string::npos);
}

}  // TEST_SUITE
