#include "nanoheat/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "nanoheat/analysis.hpp"
#include "nanoheat/constants.hpp"

namespace nanoheat {
namespace {

using nlohmann::json;
using constants::pi;

constexpr const char* kVersion = "0.1.0";

// Log formatting only; files go through format_double for full precision.
std::string fmt(double v) {
  std::ostringstream out;
  out << std::setprecision(6) << v;
  return out.str();
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (const std::string& part : parts) {
    if (!out.empty()) out += sep;
    out += part;
  }
  return out;
}

Regime parse_regime(const std::string& name, const RunConfig& cfg) {
  if (name == "near") return Regime::near;
  if (name == "far") return Regime::far;
  if (name == "exact") return Regime::exact;
  throw ConfigError(cfg.name() + ": regime must be near, far or exact, got '" + name + "'");
}

const char* regime_label(Regime regime) {
  switch (regime) {
    case Regime::near: return "near";
    case Regime::far: return "far";
    default: return "exact";
  }
}

const char* transfer_unit_label(Regime regime) {
  switch (regime) {
    case Regime::near: return "W m^6";
    case Regime::far: return "W m^2";
    default: return "W";
  }
}

const char* spectral_unit(Regime regime) {
  switch (regime) {
    case Regime::near: return "W m^6 s";
    case Regime::far: return "W m^2 s";
    default: return "W s";
  }
}

json sweep_series_json(const SweepResult& sweep) {
  json series;
  series["quantity"] = sweep.quantity_name;
  series["unit"] = sweep.quantity_unit;
  series["parameter"] = sweep.parameter_name;
  series["parameter_unit"] = sweep.parameter_unit;
  series["points"] = sweep.rows.size();
  series["metadata"] = sweep.metadata;
  return series;
}

json validity_json(const ValidityReport& report) {
  json checks = json::array();
  for (const ValidityCheck& c : report.checks) {
    checks.push_back(
        {{"name", c.name}, {"value", c.value}, {"limit", c.limit}, {"ok", c.ok}, {"note", c.note}});
  }
  return json{{"dipole_ok", report.dipole_ok()}, {"checks", checks}};
}

struct TaskContext {
  TaskContext(RunConfig& cfg_in, const TaskOptions& options_in, std::ostream& log_in,
              MaterialRegistry materials_in, QuadratureSpec spec_in, std::string task_in)
      : cfg(cfg_in),
        options(options_in),
        log(log_in),
        materials(std::move(materials_in)),
        spec(std::move(spec_in)),
        task(std::move(task_in)) {}

  RunConfig& cfg;
  const TaskOptions& options;
  std::ostream& log;
  MaterialRegistry materials;
  QuadratureSpec spec;
  std::string task;
  json outputs = json::array();
  json results = json::object();
  long kernel_evals = 0;
  long panels = 0;
  std::set<std::string> warnings;

  // Every task reads its whole configuration before computing; this rejects
  // unknown keys up front instead of after expensive work.
  void config_done() { cfg.check_all_used(); }

  void note_flags(const std::string& flags) {
    std::istringstream stream(flags);
    std::string tag;
    while (std::getline(stream, tag, ';')) {
      if (!tag.empty()) warnings.insert(tag);
    }
  }

  void absorb(const ValidityReport& report) {
    for (const ValidityCheck& c : report.checks) {
      if (!c.ok) {
        warnings.insert(c.name);
        log << task << ": warning " << c.name << " = " << fmt(c.value) << " (" << c.note << ")\n";
      }
    }
  }

  void write(const std::string& filename, const std::vector<SweepResult>& sweeps) {
    write_csv(sweeps, options.out_dir / filename);
    json entry;
    entry["file"] = filename;
    json series = json::array();
    std::size_t rows = 0;
    for (const SweepResult& sweep : sweeps) {
      series.push_back(sweep_series_json(sweep));
      rows += sweep.rows.size();
      for (const SweepRow& row : sweep.rows) note_flags(row.flags);
    }
    entry["series"] = series;
    outputs.push_back(entry);
    log << task << ": wrote " << filename << " (" << rows << " rows)\n";
  }
};

void stamp_pair_metadata(SweepResult& sweep, const Pair& p) {
  sweep.metadata["d_m"] = format_double(p.d);
  sweep.metadata["theta1_rad"] = format_double(p.theta1);
  sweep.metadata["theta2_rad"] = format_double(p.theta2);
  sweep.metadata["beta_rad"] = format_double(p.beta);
  sweep.metadata["t1_k"] = format_double(p.t1);
  sweep.metadata["t2_k"] = format_double(p.t2);
  sweep.metadata["material_1"] = p.s1.material().describe();
  sweep.metadata["material_2"] = p.s2.material().describe();
}

Pair pair_from_config(TaskContext& ctx) {
  RunConfig& cfg = ctx.cfg;
  SceneObject o1 = object_from_config(cfg, ctx.materials, "object.1");
  SceneObject o2 = object_from_config(cfg, ctx.materials, "object.2");
  if (!cfg.has_section("pair")) {
    throw ConfigError(cfg.name() + ": missing required section [pair]");
  }
  Pair p{std::move(o1.spheroid),
         std::move(o2.spheroid),
         cfg.get_double("pair", "d_nm") * 1e-9,
         o1.theta,
         o2.theta,
         cfg.get_double("pair", "beta_deg", 0.0) * pi / 180.0,
         cfg.get_double("pair", "t1_k", 300.0),
         cfg.get_double("pair", "t2_k", 0.0)};
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(cfg.name() + ": " + e.what());
  }
  return p;
}

// Shared scene block for the figure tasks: material plus the volume of the
// named sphere; every shape in a sweep keeps that volume.
SweepScene scene_from_config(TaskContext& ctx, const std::string& default_material) {
  RunConfig& cfg = ctx.cfg;
  SweepScene scene;
  scene.material =
      resolve_material(ctx.materials, cfg.get_string("scene", "material", default_material), cfg);
  const double r = cfg.get_double("scene", "sphere_radius_nm", 5.0) * 1e-9;
  if (!(r > 0.0)) throw ConfigError(cfg.name() + ": scene.sphere_radius_nm must be positive");
  scene.volume = 4.0 / 3.0 * pi * r * r * r;
  scene.d = cfg.get_double("scene", "d_nm", 0.0) * 1e-9;
  scene.t1 = cfg.get_double("scene", "t1_k", 300.0);
  scene.t2 = cfg.get_double("scene", "t2_k", 0.0);
  return scene;
}

std::vector<double> aspect_grid_from_config(TaskContext& ctx, double lo, double hi, int n) {
  RunConfig& cfg = ctx.cfg;
  lo = cfg.get_double("sweep", "aspect_min", lo);
  hi = cfg.get_double("sweep", "aspect_max", hi);
  n = cfg.get_int("sweep", "n_aspects", n);
  try {
    return logspace(lo, hi, n);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(cfg.name() + ": [sweep] " + e.what());
  }
}

// Energy window for spectrum dumps: the dispersion features of both
// materials padded by 10%, or a band around the thermal peak when the
// materials are featureless.
std::vector<double> spectra_grid(const Pair& p, int n) {
  std::vector<double> features;
  for (const Spheroid* s : {&p.s1, &p.s2}) {
    for (double w : s->material().feature_frequencies()) features.push_back(w);
  }
  double lo, hi;
  if (features.empty()) {
    const double t_max = std::max({p.t1, p.t2, 1.0});
    const double peak = 2.821 * constants::k_boltzmann * t_max / constants::hbar;
    lo = 0.2 * peak;
    hi = 3.0 * peak;
  } else {
    lo = 0.9 * *std::min_element(features.begin(), features.end());
    hi = 1.1 * *std::max_element(features.begin(), features.end());
  }
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) grid[i] = lo + (hi - lo) * i / (n - 1);
  return grid;
}

// Spectral density of the transfer at fixed beta. For the stripped regimes
// the d^-6 / d^-2 channel of a unit-distance pair is exactly the stripped
// integrand, so no distance factor needs dividing out.
SweepResult spectrum_sweep(Pair p, Regime regime, double beta, const std::vector<double>& grid,
                           const std::string& quantity) {
  p.beta = beta;
  if (regime != Regime::exact) p.d = 1.0;
  const SpectralKernel kernel = make_transfer_kernel(p);
  SweepResult sweep;
  sweep.parameter_name = "omega";
  sweep.parameter_unit = "eV";
  sweep.quantity_name = quantity;
  sweep.quantity_unit = spectral_unit(regime);
  for (double w : grid) {
    double value = 0.0;
    switch (regime) {
      case Regime::near: value = kernel.channels(w)[2]; break;
      case Regime::far: value = kernel.channels(w)[0]; break;
      case Regime::exact: value = kernel.total(w); break;
    }
    sweep.rows.push_back({rad_s_to_ev(w), value, 0.0, ""});
  }
  sweep.metadata["beta_rad"] = format_double(beta);
  sweep.metadata["regime"] = regime_label(regime);
  if (regime == Regime::exact) sweep.metadata["d_m"] = format_double(p.d);
  sweep.metadata["material_1"] = p.s1.material().describe();
  sweep.metadata["material_2"] = p.s2.material().describe();
  return sweep;
}

json switch_json(const SwitchQuality& q, Regime regime) {
  return json{{"quality", q.quality},
              {"beta_max_rad", q.beta_max},
              {"beta_min_rad", q.beta_min},
              {"h_max", q.h_max},
              {"h_min", q.h_min},
              {"unit", transfer_unit_label(regime)}};
}

json alignment_json(const ResonanceAlignment& a) {
  return json{{"omega_par_1_ev", rad_s_to_ev(a.omega_par_1)},
              {"omega_par_2_ev", rad_s_to_ev(a.omega_par_2)},
              {"omega_perp_1_ev", rad_s_to_ev(a.omega_perp_1)},
              {"omega_perp_2_ev", rad_s_to_ev(a.omega_perp_2)},
              {"par_gap_over_gamma", a.par_gap_over_gamma},
              {"perp_gap_over_gamma", a.perp_gap_over_gamma},
              {"cross_gap_over_gamma", a.cross_gap_over_gamma}};
}

void run_transfer_task(TaskContext& ctx) {
  Pair p = pair_from_config(ctx);
  const bool with_oracle = ctx.cfg.get_bool("transfer", "compare_oracle", false);
  ctx.config_done();

  const TransferResult res = transfer_general(p, ctx.spec);
  ctx.kernel_evals += res.kernel_evals;
  ctx.panels += res.panels;

  SweepResult sweep;
  sweep.parameter_name = "d";
  sweep.parameter_unit = "m";
  sweep.quantity_name = "transfer";
  sweep.quantity_unit = "W";
  sweep.rows.push_back({p.d, res.watts, res.error, join(res.validity.warning_flags(), ";")});
  stamp_pair_metadata(sweep, p);
  std::vector<SweepResult> sweeps{sweep};

  ctx.results["transfer_w"] = res.watts;
  ctx.results["error_w"] = res.error;
  ctx.results["validity"] = validity_json(res.validity);
  ctx.log << "transfer: H = " << fmt(res.watts) << " W (error " << fmt(res.error) << " W, "
          << res.panels << " panels)\n";
  ctx.absorb(res.validity);

  if (with_oracle) {
    const TransferResult ref = oracle_transfer(p, ctx.spec);
    ctx.kernel_evals += ref.kernel_evals;
    ctx.panels += ref.panels;
    SweepResult oracle = sweep;
    oracle.quantity_name = "transfer_oracle";
    oracle.rows = {{p.d, ref.watts, ref.error, ""}};
    sweeps.push_back(oracle);
    const double scale = std::max(std::abs(ref.watts), std::abs(res.watts));
    const double rel = scale > 0.0 ? std::abs(res.watts - ref.watts) / scale : 0.0;
    ctx.results["oracle_w"] = ref.watts;
    ctx.results["oracle_rel_diff"] = rel;
    ctx.log << "transfer: Green-function route gives " << fmt(ref.watts)
            << " W, relative difference " << fmt(rel) << "\n";
  }
  ctx.write("transfer.csv", sweeps);
}

void run_emission_task(TaskContext& ctx) {
  SceneObject object = object_from_config(ctx.cfg, ctx.materials, "object.1");
  const double t = ctx.cfg.get_double("emission", "t_k", 300.0);
  ctx.config_done();
  if (!(t >= 0.0)) throw ConfigError(ctx.cfg.name() + ": emission.t_k must be >= 0");

  const EmissionResult res = emission(object.spheroid, t, ctx.spec);
  const EmissionResult ref = emission(equal_volume_sphere(object.spheroid), t, ctx.spec);
  ctx.kernel_evals += res.kernel_evals + ref.kernel_evals;
  ctx.panels += res.panels + ref.panels;
  const double ratio = ref.watts > 0.0 ? res.watts / ref.watts : 0.0;

  SweepResult sweep;
  sweep.parameter_name = "temperature";
  sweep.parameter_unit = "K";
  sweep.quantity_name = "emission";
  sweep.quantity_unit = "W";
  sweep.rows.push_back({t, res.watts, res.error, ""});
  sweep.metadata["material"] = object.spheroid.material().describe();
  sweep.metadata["r_par_m"] = format_double(object.spheroid.r_par());
  sweep.metadata["r_perp_m"] = format_double(object.spheroid.r_perp());

  SweepResult ratio_sweep = sweep;
  ratio_sweep.quantity_name = "emission_sphere_ratio";
  ratio_sweep.quantity_unit = "";
  ratio_sweep.rows = {{t, ratio, 0.0, ""}};
  ratio_sweep.metadata["normalization"] = "equal-volume sphere";

  ctx.results["emission_w"] = res.watts;
  ctx.results["error_w"] = res.error;
  ctx.results["sphere_w"] = ref.watts;
  ctx.results["ratio_to_sphere"] = ratio;
  ctx.log << "emission: P = " << fmt(res.watts) << " W at " << fmt(t) << " K ("
          << fmt(ratio) << "x the equal-volume sphere)\n";
  ctx.write("emission.csv", {sweep, ratio_sweep});
}

void run_channels_task(TaskContext& ctx) {
  Pair p = pair_from_config(ctx);
  ctx.config_done();

  const ChannelDecomposition dec = channel_decomposition(p, ctx.spec);
  ctx.kernel_evals += dec.kernel_evals;
  ctx.panels += dec.panels;
  ctx.absorb(dec.validity);

  const double values[4] = {dec.d2, dec.d4, dec.d6, dec.total};
  const char* names[4] = {"transfer_d2", "transfer_d4", "transfer_d6", "transfer_total"};
  std::vector<SweepResult> sweeps;
  for (int i = 0; i < 4; ++i) {
    SweepResult sweep;
    sweep.parameter_name = "d";
    sweep.parameter_unit = "m";
    sweep.quantity_name = names[i];
    sweep.quantity_unit = "W";
    sweep.rows.push_back(
        {p.d, values[i], dec.error, i == 3 ? join(dec.validity.warning_flags(), ";") : ""});
    stamp_pair_metadata(sweep, p);
    sweeps.push_back(std::move(sweep));
  }

  ctx.results["d2_w"] = dec.d2;
  ctx.results["d4_w"] = dec.d4;
  ctx.results["d6_w"] = dec.d6;
  ctx.results["total_w"] = dec.total;
  ctx.results["error_w"] = dec.error;
  ctx.results["validity"] = validity_json(dec.validity);
  ctx.log << "channels: total " << fmt(dec.total) << " W = " << fmt(dec.d2) << " (d^-2) + "
          << fmt(dec.d4) << " (d^-4) + " << fmt(dec.d6) << " (d^-6)\n";
  ctx.write("channels.csv", sweeps);
}

void run_validate_task(TaskContext& ctx) {
  Pair p = pair_from_config(ctx);
  // The validate subcommand is a preflight check for configs written for
  // other tasks, so keys belonging to the configured task are tolerated;
  // a config that itself selects validate still gets the strict key check.
  const bool preflight = !ctx.options.task_override.empty() && ctx.cfg.has("task", "name") &&
                         ctx.cfg.get_string("task", "name") != "validate";
  if (!preflight) ctx.config_done();

  const ValidityReport report = check_dipole_validity(p);
  for (const ValidityCheck& c : report.checks) {
    ctx.log << "validate: " << (c.ok ? "ok   " : "WARN ") << c.name << " = " << fmt(c.value)
            << " (limit " << fmt(c.limit) << "; " << c.note << ")\n";
    if (!c.ok) ctx.warnings.insert(c.name);
  }
  ctx.log << "validate: dipole picture "
          << (report.dipole_ok() ? "holds" : "is questionable for this scene") << "\n";
  ctx.results["validity"] = validity_json(report);
}

void run_fig1_task(TaskContext& ctx) {
  const SweepScene scene = scene_from_config(ctx, "SiC");
  const std::vector<double> aspects = aspect_grid_from_config(ctx, 0.02, 1.0, 40);
  ctx.config_done();

  SweepResult near = sphere_normalized_transfer(scene, aspects, Regime::near, ctx.spec, ctx.options.jobs);
  near.quantity_name = "transfer_ratio_near";
  SweepResult far = sphere_normalized_transfer(scene, aspects, Regime::far, ctx.spec, ctx.options.jobs);
  far.quantity_name = "transfer_ratio_far";
  ctx.write("fig1_transfer.csv", {near, far});

  SweepResult micro = emission_ratio(scene, aspects, ctx.spec, ctx.options.jobs);
  SweepResult macro = macroscopic_emission_ratio(aspects, scene.volume);
  ctx.write("fig1_inset.csv", {micro, macro});

  const auto peak = [](const SweepResult& sweep) {
    const auto it = std::max_element(sweep.rows.begin(), sweep.rows.end(),
                                     [](const SweepRow& a, const SweepRow& b) { return a.value < b.value; });
    return json{{"aspect_ratio", it->parameter}, {"value", it->value}};
  };
  ctx.results["peak_near"] = peak(near);
  ctx.results["peak_far"] = peak(far);
  ctx.results["peak_emission"] = peak(micro);

  // Shape dependence of the macroscopic (area) expectation at strong
  // elongation, for contrast with the resonant microscopic ratio.
  std::vector<double> tail_u, tail_area;
  for (const SweepRow& row : macro.rows) {
    if (row.parameter <= 0.1) {
      tail_u.push_back(row.parameter);
      tail_area.push_back(row.value);
    }
  }
  if (tail_u.size() >= 2) {
    ctx.results["area_ratio_small_aspect_slope"] = fit_loglog_slope(tail_u, tail_area);
  }

  ctx.log << "fig1: near-zone peak ratio " << fmt(ctx.results["peak_near"]["value"].get<double>())
          << " at aspect " << fmt(ctx.results["peak_near"]["aspect_ratio"].get<double>()) << "\n";
  ctx.log << "fig1: far-zone peak ratio " << fmt(ctx.results["peak_far"]["value"].get<double>())
          << " at aspect " << fmt(ctx.results["peak_far"]["aspect_ratio"].get<double>()) << "\n";
}

void run_fig2_task(TaskContext& ctx) {
  const SweepScene scene = scene_from_config(ctx, "SiC");
  const std::vector<double> aspects = aspect_grid_from_config(ctx, 0.05, 0.5, 15);
  const double sample_aspect = ctx.cfg.get_double("sweep", "beta_aspect", 0.2);
  const int beta_points = ctx.cfg.get_int("sweep", "beta_points", 181);
  ctx.config_done();
  if (!(sample_aspect > 0.0)) throw ConfigError(ctx.cfg.name() + ": sweep.beta_aspect must be positive");

  SweepResult q_near = switch_quality_sweep(scene, aspects, Regime::near, ctx.spec, ctx.options.jobs);
  q_near.quantity_name = "switch_quality_near";
  SweepResult q_far = switch_quality_sweep(scene, aspects, Regime::far, ctx.spec, ctx.options.jobs);
  q_far.quantity_name = "switch_quality_far";
  ctx.write("fig2_quality.csv", {q_near, q_far});

  const Spheroid sample = spheroid_from_volume(scene.volume, sample_aspect, scene.material);
  const double d = scene.d > 0.0 ? scene.d : 1.0;
  const Pair pair{sample, sample, d, pi / 2, pi / 2, 0.0, scene.t1, scene.t2};
  SweepResult b_near = beta_sweep(pair, Regime::near, beta_points, ctx.spec);
  b_near.quantity_name = "transfer_near";
  SweepResult b_far = beta_sweep(pair, Regime::far, beta_points, ctx.spec);
  b_far.quantity_name = "transfer_far";
  ctx.write("fig2_beta.csv", {b_near, b_far});

  const SwitchQuality sq_near = switch_quality(pair, Regime::near, ctx.spec);
  const SwitchQuality sq_far = switch_quality(pair, Regime::far, ctx.spec);
  ctx.kernel_evals += sq_near.profile.kernel_evals + sq_far.profile.kernel_evals;
  ctx.results["sample_aspect"] = sample_aspect;
  ctx.results["sample_near"] = switch_json(sq_near, Regime::near);
  ctx.results["sample_far"] = switch_json(sq_far, Regime::far);
  ctx.results["far_over_near"] = sq_near.quality > 0.0 ? sq_far.quality / sq_near.quality : 0.0;
  ctx.results["far_quality_smallest_aspect"] = q_far.rows.front().value;

  ctx.log << "fig2: at aspect " << fmt(sample_aspect) << " the switch quality is "
          << fmt(sq_far.quality) << " (far zone) vs " << fmt(sq_near.quality) << " (near zone)\n";
}

void run_fig3_task(TaskContext& ctx) {
  const SweepScene scene = scene_from_config(ctx, "SiC");
  DetunedSwitchScene detuned;
  detuned.base = scene.material;
  detuned.aspect1 = ctx.cfg.get_double("detuning", "aspect1", detuned.aspect1);
  detuned.aspect2 = ctx.cfg.get_double("detuning", "aspect2", detuned.aspect2);
  detuned.lo_scale1 = ctx.cfg.get_double("detuning", "lo_scale1", detuned.lo_scale1);
  detuned.lo_scale2 = ctx.cfg.get_double("detuning", "lo_scale2", detuned.lo_scale2);
  detuned.volume = scene.volume;
  detuned.d = scene.d;
  detuned.t1 = scene.t1;
  detuned.t2 = scene.t2;
  const Regime regime = parse_regime(ctx.cfg.get_string("sweep", "regime", "near"), ctx.cfg);
  const int beta_points = ctx.cfg.get_int("sweep", "beta_points", 181);
  const int spectra_points = ctx.cfg.get_int("sweep", "spectra_points", 400);
  ctx.config_done();
  if (scene.material.kind() != MaterialKind::lorentz) {
    throw ConfigError(ctx.cfg.name() + ": the detuned-switch task needs a Lorentz material");
  }
  if (regime == Regime::exact && !(scene.d > 0.0)) {
    throw ConfigError(ctx.cfg.name() + ": scene.d_nm must be set for the exact regime");
  }

  const DetunedSwitch result = [&]() -> DetunedSwitch {
    try {
      return detuned_switch(detuned, regime, ctx.spec);
    } catch (const std::domain_error& e) {
      throw ConfigError(ctx.cfg.name() + ": " + e.what());
    }
  }();
  ctx.kernel_evals += result.quality.profile.kernel_evals;

  SweepResult beta = beta_sweep(result.pair, regime, beta_points, ctx.spec);
  ctx.write("fig3_beta.csv", {beta});

  const std::vector<double> grid = spectra_grid(result.pair, spectra_points);
  const SweepResult on =
      spectrum_sweep(result.pair, regime, result.quality.beta_max, grid, "spectral_density_on");
  const SweepResult off =
      spectrum_sweep(result.pair, regime, result.quality.beta_min, grid, "spectral_density_off");
  ctx.write("fig3_spectra.csv", {on, off});

  ctx.results["switch"] = switch_json(result.quality, regime);
  ctx.results["alignment"] = alignment_json(result.alignment);
  ctx.results["lo_scale1"] = detuned.lo_scale1;
  ctx.results["lo_scale2"] = detuned.lo_scale2;
  ctx.log << "fig3: detuned pair switches by a factor " << fmt(result.quality.quality)
          << " between beta = " << fmt(result.quality.beta_max) << " and "
          << fmt(result.quality.beta_min) << " rad\n";
  ctx.log << "fig3: parallel resonances "
          << fmt(rad_s_to_ev(result.alignment.omega_par_1)) << " / "
          << fmt(rad_s_to_ev(result.alignment.omega_par_2)) << " eV sit "
          << fmt(result.alignment.par_gap_over_gamma) << " damping widths apart\n";
}

void run_fig4_task(TaskContext& ctx) {
  const SweepScene scene = scene_from_config(ctx, "SiC");
  ProlateOblateScene shapes;
  shapes.material = scene.material;
  shapes.prolate_aspect = ctx.cfg.get_double("shapes", "prolate_aspect", shapes.prolate_aspect);
  shapes.oblate_par_over_perp =
      ctx.cfg.get_double("shapes", "oblate_par_over_perp", shapes.oblate_par_over_perp);
  shapes.volume = scene.volume;
  shapes.d = scene.d;
  shapes.t1 = scene.t1;
  shapes.t2 = scene.t2;
  const Regime regime = parse_regime(ctx.cfg.get_string("sweep", "regime", "near"), ctx.cfg);
  const int beta_points = ctx.cfg.get_int("sweep", "beta_points", 181);
  const int spectra_points = ctx.cfg.get_int("sweep", "spectra_points", 400);
  ctx.config_done();
  if (!(shapes.prolate_aspect > 0.0 && shapes.prolate_aspect < 1.0) ||
      !(shapes.oblate_par_over_perp > 0.0 && shapes.oblate_par_over_perp < 1.0)) {
    throw ConfigError(ctx.cfg.name() +
                      ": shapes.prolate_aspect and shapes.oblate_par_over_perp must lie in (0, 1)");
  }
  if (regime == Regime::exact && !(scene.d > 0.0)) {
    throw ConfigError(ctx.cfg.name() + ": scene.d_nm must be set for the exact regime");
  }

  const ProlateOblateSwitch result = prolate_oblate_switch(shapes, regime, ctx.spec);
  ctx.kernel_evals += result.quality.profile.kernel_evals;

  SweepResult beta = beta_sweep(result.pair, regime, beta_points, ctx.spec);
  ctx.write("fig4_beta.csv", {beta});

  const std::vector<double> grid = spectra_grid(result.pair, spectra_points);
  const SweepResult on =
      spectrum_sweep(result.pair, regime, result.quality.beta_max, grid, "spectral_density_on");
  const SweepResult off =
      spectrum_sweep(result.pair, regime, result.quality.beta_min, grid, "spectral_density_off");
  ctx.write("fig4_spectra.csv", {on, off});

  ctx.results["switch"] = switch_json(result.quality, regime);
  ctx.results["alignment"] = alignment_json(result.alignment);
  ctx.results["prolate_aspect"] = shapes.prolate_aspect;
  ctx.results["oblate_par_over_perp"] = shapes.oblate_par_over_perp;
  ctx.log << "fig4: prolate-oblate pair switches by a factor " << fmt(result.quality.quality)
          << ", brightest at beta = " << fmt(result.quality.beta_max) << " rad\n";
  ctx.log << "fig4: prolate parallel mode "
          << fmt(rad_s_to_ev(result.alignment.omega_par_1)) << " eV vs oblate transverse mode "
          << fmt(rad_s_to_ev(result.alignment.omega_perp_2)) << " eV ("
          << fmt(result.alignment.cross_gap_over_gamma) << " damping widths)\n";
}

void run_scaling_task(TaskContext& ctx) {
  const SweepScene scene = scene_from_config(ctx, "metal_1e6i");
  const double lo = ctx.cfg.get_double("sweep", "elongation_min", 5.0);
  const double hi = ctx.cfg.get_double("sweep", "elongation_max", 5000.0);
  const int n = ctx.cfg.get_int("sweep", "n_points", 25);
  const double probe_ev = ctx.cfg.get_double("sweep", "probe_omega_ev", 0.0);
  ctx.config_done();

  ScalingProbe probe;
  probe.material = scene.material;
  try {
    probe.elongations = logspace(lo, hi, n);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(ctx.cfg.name() + ": [sweep] " + e.what());
  }
  probe.volume = scene.volume;
  probe.t1 = scene.t1;
  probe.t2 = scene.t2;
  probe.probe_omega = probe_ev > 0.0 ? ev_to_rad_s(probe_ev) : 0.0;

  SweepResult ratio_sweep;
  const ScalingFit fit = metallic_scaling_probe(probe, ctx.spec, ctx.options.jobs, &ratio_sweep);
  ratio_sweep.quantity_name = "transfer_ratio_near";

  SweepResult alpha_sweep;
  alpha_sweep.parameter_name = "elongation";
  alpha_sweep.quantity_name = "alpha_par";
  alpha_sweep.quantity_unit = "m^3";
  for (const ScalingPoint& pt : fit.points) {
    alpha_sweep.rows.push_back({pt.elongation, pt.alpha_par, 0.0, ""});
  }
  alpha_sweep.metadata = ratio_sweep.metadata;
  ctx.write("scaling.csv", {ratio_sweep, alpha_sweep});

  json points = json::array();
  for (const ScalingPoint& pt : fit.points) {
    points.push_back({{"elongation", pt.elongation},
                      {"ratio", pt.ratio},
                      {"alpha_par_m3", pt.alpha_par},
                      {"in_window", pt.in_window}});
  }
  ctx.results["points"] = points;
  ctx.results["window_found"] = fit.window_found;
  ctx.results["window_lo"] = fit.window_lo;
  ctx.results["window_hi"] = fit.window_hi;
  ctx.results["transfer_exponent"] = fit.transfer_exponent;
  ctx.results["alpha_exponent"] = fit.alpha_exponent;
  ctx.results["residual_rms"] = fit.residual_rms;
  ctx.results["fit_accepted"] = fit.fit_accepted;
  ctx.results["rejection_reason"] = fit.rejection_reason;
  ctx.results["saturated"] = fit.saturated;
  ctx.results["saturation_onset"] = fit.saturation_onset;

  if (fit.fit_accepted) {
    ctx.log << "scaling: enhancement grows as v^" << fmt(fit.transfer_exponent)
            << " (ln-corrected) over v in [" << fmt(fit.window_lo) << ", " << fmt(fit.window_hi)
            << "]; alpha_par goes as v^" << fmt(fit.alpha_exponent) << "\n";
    if (fit.saturated) {
      ctx.log << "scaling: growth saturates past v = " << fmt(fit.saturation_onset) << "\n";
    }
  } else {
    ctx.log << "scaling: no clean scaling window (" << fit.rejection_reason << ")\n";
    ctx.warnings.insert("no_scaling_window");
  }
}

json quadrature_json(const QuadratureSpec& spec) {
  json out;
  out["rel_tol"] = spec.rel_tol;
  out["abs_floor"] = spec.abs_floor;
  out["omega_max_factor"] = spec.omega_max_factor;
  out["panel_budget"] = spec.panel_budget;
  out["auto_seeds"] = spec.auto_seeds;
  out["seed_points_rad_s"] = spec.seed_points;
  return out;
}

}  // namespace

const std::vector<std::string>& task_names() {
  static const std::vector<std::string> names = {"transfer", "emission", "channels", "validate",
                                                 "fig1",     "fig2",     "fig3",     "fig4",
                                                 "scaling"};
  return names;
}

void run_task(RunConfig& cfg, const TaskOptions& options, std::ostream& log) {
  std::string task = options.task_override;
  if (cfg.has("task", "name")) {
    const std::string configured = cfg.get_string("task", "name");
    if (task.empty()) task = configured;
  }
  if (task.empty()) {
    throw ConfigError(cfg.name() + ": no task selected; add [task] name = " +
                      join(task_names(), "|"));
  }
  const auto& names = task_names();
  if (std::find(names.begin(), names.end(), task) == names.end()) {
    throw ConfigError(cfg.name() + ": unknown task '" + task +
                      "' (available: " + join(names, ", ") + ")");
  }
  if (options.jobs < 1) throw ConfigError("jobs must be >= 1");

  TaskContext ctx(cfg, options, log, materials_from_config(cfg), quadrature_from_config(cfg),
                  task);
  if (options.rel_tol > 0.0) {
    ctx.spec.rel_tol = options.rel_tol;
    try {
      ctx.spec.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("rel_tol override: ") + e.what());
    }
  }

  std::filesystem::create_directories(options.out_dir);

  if (task == "transfer") run_transfer_task(ctx);
  else if (task == "emission") run_emission_task(ctx);
  else if (task == "channels") run_channels_task(ctx);
  else if (task == "validate") run_validate_task(ctx);
  else if (task == "fig1") run_fig1_task(ctx);
  else if (task == "fig2") run_fig2_task(ctx);
  else if (task == "fig3") run_fig3_task(ctx);
  else if (task == "fig4") run_fig4_task(ctx);
  else run_scaling_task(ctx);

  json manifest;
  manifest["version"] = kVersion;
  manifest["task"] = task;
  manifest["config"] = cfg.snapshot();
  manifest["overrides"] = cfg.overrides();
  manifest["quadrature"] = quadrature_json(ctx.spec);
  manifest["outputs"] = ctx.outputs;
  manifest["results"] = ctx.results;
  manifest["diagnostics"] =
      json{{"kernel_evals", ctx.kernel_evals},
           {"panels", ctx.panels},
           {"warnings", std::vector<std::string>(ctx.warnings.begin(), ctx.warnings.end())}};

  const std::filesystem::path path = options.out_dir / "manifest.json";
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + path.string() + " for writing");
  file << manifest.dump(2) << "\n";
  if (!file.good()) throw std::runtime_error("failed writing " + path.string());
  log << task << ": wrote manifest.json\n";
}

}  // namespace nanoheat
