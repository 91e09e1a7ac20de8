#include <cmath>
#include <string>

#include "doctest.h"
#include "nanoheat/config.hpp"
#include "nanoheat/constants.hpp"

using namespace nanoheat;
using doctest::Approx;

namespace {

bool fails_with(const std::string& text, const std::string& needle) {
  try {
    RunConfig cfg = RunConfig::parse_string(text, "test.ini");
    (void)cfg;
  } catch (const ConfigError& e) {
    return std::string(e.what()).find(needle) != std::string::npos;
  }
  return false;
}

const char* kScene = R"(
[task]
name = transfer

# objects are numbered
[object.1]
material = SiC
r_par_nm = 12
r_perp_nm = 3
theta_deg = 40

[object.2]
material = SiC
r_par_nm = 5
r_perp_nm = 5

[pair]
d_nm = 150
t1_k = 350
t2_k = 150
)";

}  // namespace

TEST_SUITE("config") {

TEST_CASE("parsing keeps sections, comments and values straight") {
  RunConfig cfg = RunConfig::parse_string(kScene, "scene.ini");
  CHECK(cfg.has_section("object.1"));
  CHECK(cfg.has("pair", "d_nm"));
  CHECK_FALSE(cfg.has("pair", "beta_deg"));
  CHECK(cfg.get_string("task", "name") == "transfer");
  CHECK(cfg.get_double("pair", "d_nm") == 150.0);
  CHECK(cfg.get_double("pair", "beta_deg", 0.0) == 0.0);  // fallback path
  CHECK(cfg.get_int("pair", "t1_k", 0) == 350);
}

TEST_CASE("parse errors carry file and line context") {
  CHECK(fails_with("key_without_section = 1\n", "test.ini:1"));
  CHECK(fails_with("[sec]\nnot a key value pair\n", "test.ini:2"));
  CHECK(fails_with("[sec]\na = 1\na = 2\n", "duplicate key"));
  CHECK(fails_with("[sec]\na = 1\n[sec]\n", "duplicate section"));
  CHECK(fails_with("[bad name]\n", "section name"));
  CHECK(fails_with("[sec]\nbad-key = 1\n", "key"));
}

TEST_CASE("typed getters reject junk with their source line") {
  RunConfig cfg = RunConfig::parse_string("[a]\nx = not_a_number\nflag = maybe\n", "t.ini");
  try {
    (void)cfg.get_double("a", "x");
    CHECK(false);
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find("t.ini:2") != std::string::npos);
    CHECK(what.find("number") != std::string::npos);
  }
  CHECK_THROWS_AS((void)cfg.get_bool("a", "flag", true), ConfigError);
  CHECK_THROWS_AS((void)cfg.get_double("a", "missing"), ConfigError);
  CHECK_THROWS_AS((void)cfg.get_double("nowhere", "x"), ConfigError);
}

TEST_CASE("boolean spellings") {
  RunConfig cfg = RunConfig::parse_string(
      "[b]\np = true\nq = OFF\nr = 1\ns = no\n", "t.ini");
  CHECK(cfg.get_bool("b", "p", false));
  CHECK_FALSE(cfg.get_bool("b", "q", true));
  CHECK(cfg.get_bool("b", "r", false));
  CHECK_FALSE(cfg.get_bool("b", "s", true));
}

TEST_CASE("list values parse as doubles") {
  RunConfig cfg = RunConfig::parse_string("[q]\nseeds = 0.098, 0.12,0.1153\n", "t.ini");
  const auto seeds = cfg.get_double_list("q", "seeds");
  REQUIRE(seeds.size() == 3);
  CHECK(seeds[0] == 0.098);
  CHECK(seeds[2] == 0.1153);
}

TEST_CASE("unused keys are reported as errors, used ones pass") {
  RunConfig cfg = RunConfig::parse_string("[a]\nx = 1\nyy = 2\n", "t.ini");
  (void)cfg.get_double("a", "x");
  try {
    cfg.check_all_used();
    CHECK(false);
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find("unknown key 'yy'") != std::string::npos);
    CHECK(what.find("[a]") != std::string::npos);
    CHECK(what.find("t.ini:3") != std::string::npos);
  }
  (void)cfg.get_double("a", "yy");
  CHECK_NOTHROW(cfg.check_all_used());
}

TEST_CASE("overrides split on the last dot and are recorded") {
  RunConfig cfg = RunConfig::parse_string(kScene, "scene.ini");
  cfg.apply_override("pair.d_nm=400");
  CHECK(cfg.get_double("pair", "d_nm") == 400.0);
  cfg.apply_override("material.custom.eps_re=2.5");
  CHECK(cfg.get_double("material.custom", "eps_re") == 2.5);
  REQUIRE(cfg.overrides().size() == 2);
  CHECK(cfg.overrides()[0] == "pair.d_nm=400");
  CHECK_THROWS_AS(cfg.apply_override("no_equals_sign"), ConfigError);
  CHECK_THROWS_AS(cfg.apply_override("nodot=1"), ConfigError);
}

TEST_CASE("snapshot reflects the final state of every section") {
  RunConfig cfg = RunConfig::parse_string("[a]\nx = 1\n", "t.ini");
  cfg.apply_override("a.x=2");
  const auto snap = cfg.snapshot();
  CHECK(snap.at("a").at("x") == "2");
}

TEST_CASE("material sections extend and shadow the builtins") {
  RunConfig cfg = RunConfig::parse_string(R"(
[material.glass]
model = constant
eps_re = 2.25
eps_im = 0.001

[material.SiC]
model = lorentz
eps_inf = 6.7
omega_lo_ev = 0.13
omega_to_ev = 0.098
gamma_ev = 5.88e-4
)",
                                          "mats.ini");
  const auto names = cfg.material_section_names();
  REQUIRE(names.size() == 2);
  const MaterialRegistry registry = materials_from_config(cfg);
  CHECK_NOTHROW(cfg.check_all_used());

  CHECK(registry.at("glass")(1e14) == std::complex<double>(2.25, 0.001));
  // The shadowed SiC now has its LO corner at 0.13 eV.
  CHECK(registry.at("SiC").lorentz().omega_lo == Approx(ev_to_rad_s(0.13)).epsilon(1e-12));
  CHECK(registry.count("Au") == 1);  // builtins survive alongside

  RunConfig empty = RunConfig::parse_string("", "none.ini");
  const MaterialRegistry builtin_only = materials_from_config(empty);
  CHECK(builtin_only.count("SiC") == 1);

  try {
    (void)resolve_material(builtin_only, "unobtainium", empty);
    CHECK(false);
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("unobtainium") != std::string::npos);
    CHECK(std::string(e.what()).find("SiC") != std::string::npos);  // lists choices
  }
}

TEST_CASE("objects come out in SI with tilt in radians") {
  RunConfig cfg = RunConfig::parse_string(kScene, "scene.ini");
  MaterialRegistry registry = materials_from_config(cfg);
  const SceneObject first = object_from_config(cfg, registry, "object.1");
  // nm fields scale by 1e-9, so expect that exact product (an ulp off 12e-9).
  CHECK(first.spheroid.r_par() == 12.0 * 1e-9);
  CHECK(first.spheroid.r_perp() == 3.0 * 1e-9);
  CHECK(first.theta == Approx(40.0 * constants::pi / 180.0).epsilon(1e-15));
  const SceneObject second = object_from_config(cfg, registry, "object.2");
  CHECK(second.theta == Approx(constants::pi / 2).epsilon(1e-15));
}

TEST_CASE("object detuning goes through the material") {
  RunConfig cfg = RunConfig::parse_string(R"(
[object.1]
material = SiC
detune = 1.05
r_par_nm = 20
r_perp_nm = 5
)",
                                          "t.ini");
  MaterialRegistry registry = materials_from_config(cfg);
  const SceneObject obj = object_from_config(cfg, registry, "object.1");
  const double base_lo = sic_model().lorentz().omega_lo;
  CHECK(obj.spheroid.material().lorentz().omega_lo * obj.spheroid.material().lorentz().omega_lo ==
        Approx(1.05 * base_lo * base_lo).epsilon(1e-12));
}

TEST_CASE("quadrature settings flow through with eV seeds converted") {
  RunConfig cfg = RunConfig::parse_string(R"(
[quadrature]
rel_tol = 1e-6
omega_max_factor = 50
panel_budget = 20000
auto_seeds = false
seed_points_ev = 0.098, 0.12
)",
                                          "t.ini");
  const QuadratureSpec spec = quadrature_from_config(cfg);
  CHECK_NOTHROW(cfg.check_all_used());
  CHECK(spec.rel_tol == 1e-6);
  CHECK(spec.omega_max_factor == 50.0);
  CHECK(spec.panel_budget == 20000);
  CHECK_FALSE(spec.auto_seeds);
  REQUIRE(spec.seed_points.size() == 2);
  CHECK(spec.seed_points[0] == Approx(ev_to_rad_s(0.098)).epsilon(1e-15));

  RunConfig bad = RunConfig::parse_string("[quadrature]\nrel_tol = 0.5\n", "t.ini");
  CHECK_THROWS_AS((void)quadrature_from_config(bad), ConfigError);
}

TEST_CASE("defaults apply when the sections are absent") {
  RunConfig cfg = RunConfig::parse_string("", "empty.ini");
  const QuadratureSpec spec = quadrature_from_config(cfg);
  CHECK(spec.rel_tol == 1e-8);
  CHECK(spec.panel_budget == 100000);
  CHECK(spec.auto_seeds);
}

}  // TEST_SUITE
