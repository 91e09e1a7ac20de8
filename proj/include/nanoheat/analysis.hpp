#ifndef NANOHEAT_ANALYSIS_HPP
#define NANOHEAT_ANALYSIS_HPP

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "nanoheat/transfer.hpp"

namespace nanoheat {

// One point of a parameter sweep: y(x) with an error estimate and any
// validity warnings raised while computing it.
struct SweepRow {
  double parameter;
  double value;
  double error;
  std::string flags;  // semicolon-joined warning tags, empty when clean
};

struct SweepResult {
  std::string parameter_name;
  std::string parameter_unit;  // empty when dimensionless
  std::string quantity_name;
  std::string quantity_unit;
  std::vector<SweepRow> rows;
  std::map<std::string, std::string> metadata;
};

// CSV serialization, one row per sweep point:
//   parameter,value,quantity,error,flags
// Several sweeps may share a file; the quantity column tells them apart.
std::string to_csv(const std::vector<SweepResult>& sweeps);
void write_csv(const std::vector<SweepResult>& sweeps, const std::filesystem::path& path);

// Shortest-round-trip-style fixed 17-significant-digit formatting used for
// every number the tool writes, so reruns are byte-comparable.
std::string format_double(double v);

std::vector<double> logspace(double lo, double hi, int n);

// Least-squares slope of ln(y) against ln(x).
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Common scene for shape sweeps: material and volume are held fixed while
// the aspect ratio varies; d only matters for Regime::exact.
struct SweepScene {
  PermittivityModel material;
  double volume;  // m^3
  double d = 0.0; // m
  double t1 = 300.0;
  double t2 = 0.0;
};

// H(aspect) / H(equal-volume spheres) for identical spheroids with parallel
// axes perpendicular to the line of centers (theta = pi/2, beta = 0).
SweepResult sphere_normalized_transfer(const SweepScene& scene, const std::vector<double>& aspects,
                                       Regime regime, const QuadratureSpec& spec, int jobs = 1);

// Emitted power over that of the equal-volume sphere, at scene.t1.
SweepResult emission_ratio(const SweepScene& scene, const std::vector<double>& aspects,
                           const QuadratureSpec& spec, int jobs = 1);

// Stefan-Boltzmann expectation for the same ratio: surface area over that of
// the equal-volume sphere. Purely geometric.
SweepResult macroscopic_emission_ratio(const std::vector<double>& aspects, double volume);

// Orientation switch figures of merit from the beta profile: extrema located
// on a 181-point scan of [0, pi] refined by golden section.
struct SwitchQuality {
  double quality = 1.0;  // H_max / H_min over beta
  double beta_max = 0.0;
  double beta_min = 0.0;
  double h_max = 0.0;
  double h_min = 0.0;
  BetaProfile profile;
};

SwitchQuality switch_quality(const Pair& p, Regime regime, const QuadratureSpec& spec);

// H(beta) sampled on a uniform grid (for plotting; the profile itself is the
// exact beta dependence).
SweepResult beta_sweep(const Pair& p, Regime regime, int n_points, const QuadratureSpec& spec);

// Q(aspect) for identical spheroids at theta = pi/2.
SweepResult switch_quality_sweep(const SweepScene& scene, const std::vector<double>& aspects,
                                 Regime regime, const QuadratureSpec& spec, int jobs = 1);

// Two prolate particles of the same material with the LO frequency of each
// rescaled (omega_lo^2 multiplied by lo_scale_i), tuned so their parallel
// resonances line up while everything else stays split.
struct DetunedSwitchScene {
  PermittivityModel base;  // must be a Lorentz material
  double aspect1 = 0.25;
  double aspect2 = 0.20;
  double lo_scale1 = 1.05;
  double lo_scale2 = 1.10;
  double volume;
  double d = 0.0;
  double t1 = 300.0;
  double t2 = 0.0;
};

struct ResonanceAlignment {
  double omega_par_1 = 0.0;  // rad/s
  double omega_par_2 = 0.0;
  double omega_perp_1 = 0.0;
  double omega_perp_2 = 0.0;
  double par_gap_over_gamma = 0.0;   // |w1 - w2| in units of the damping rate
  double perp_gap_over_gamma = 0.0;
  double cross_gap_over_gamma = 0.0; // par of object 1 vs perp of object 2
};

struct DetunedSwitch {
  SwitchQuality quality;
  Pair pair;  // the built scene, beta = 0
  ResonanceAlignment alignment;
};

DetunedSwitch detuned_switch(const DetunedSwitchScene& scene, Regime regime,
                             const QuadratureSpec& spec);

// Prolate against oblate, same material: their resonances overlap when the
// prolate parallel mode matches the oblate transverse mode, which favors
// crossed axes (maximum at beta = pi/2).
struct ProlateOblateScene {
  PermittivityModel material;
  double prolate_aspect = 0.30;         // r_perp / r_par of object 1
  double oblate_par_over_perp = 0.145;  // r_par / r_perp of object 2
  double volume;
  double d = 0.0;
  double t1 = 300.0;
  double t2 = 0.0;
};

struct ProlateOblateSwitch {
  SwitchQuality quality;
  Pair pair;  // beta = 0
  ResonanceAlignment alignment;  // par_1 vs perp_2 carries the overlap here
};

ProlateOblateSwitch prolate_oblate_switch(const ProlateOblateScene& scene, Regime regime,
                                          const QuadratureSpec& spec);

// Fixed-volume elongation sweep against a strongly conducting material,
// fitting the near-field enhancement to v^8 / ln^4 v (v = r_par / r_perp)
// inside the window where the needle asymptotics hold, and locating the
// saturation once the depolarization factor overcomes 1/|eps|.
struct ScalingProbe {
  PermittivityModel material;
  std::vector<double> elongations;  // ascending, > 1
  double volume;
  double t1 = 300.0;
  double t2 = 0.0;
  double probe_omega = 0.0;  // rad/s for the alpha_par fit; 0 picks the thermal peak
};

struct ScalingPoint {
  double elongation;
  double ratio;      // near-field H over the equal-volume-sphere pair
  double alpha_par;  // m^3 at the probe frequency
  bool in_window;
};

struct ScalingFit {
  std::vector<ScalingPoint> points;
  bool window_found = false;
  double window_lo = 0.0;
  double window_hi = 0.0;
  double transfer_exponent = 0.0;  // slope of ln(ratio ln^4 v) vs ln v; 8 in the window
  double alpha_exponent = 0.0;     // slope of ln(alpha_par ln^2 v) vs ln v; 4 in the window
  double residual_rms = 0.0;       // ln-space scatter of the transfer fit
  bool fit_accepted = false;
  std::string rejection_reason;    // why the material shows no clean window
  bool saturated = false;
  double saturation_onset = 0.0;   // first elongation past the window with slope collapse
};

ScalingFit metallic_scaling_probe(const ScalingProbe& probe, const QuadratureSpec& spec,
                                  int jobs = 1, SweepResult* sweep_out = nullptr);

}  // namespace nanoheat

#endif
