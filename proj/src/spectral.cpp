#include "nanoheat/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "nanoheat/constants.hpp"

namespace nanoheat {

double planck_occupation_weight(double omega, double temperature) {
  if (temperature <= 0.0) return 0.0;
  const double x = constants::hbar * omega / (constants::k_boltzmann * temperature);
  if (x > 700.0) return 0.0;  // exp would overflow; the weight is < 1e-300 anyway
  return omega / std::expm1(x);
}

double planck_difference(double omega, double t1, double t2) {
  return planck_occupation_weight(omega, t1) - planck_occupation_weight(omega, t2);
}

double thermal_wavelength(double temperature) {
  if (!(temperature > 0.0)) {
    throw std::domain_error("thermal wavelength needs a positive temperature");
  }
  return constants::hbar * constants::c_light / (constants::k_boltzmann * temperature);
}

void QuadratureSpec::validate() const {
  if (!(rel_tol > 1e-14) || !(rel_tol <= 1e-2)) {
    throw std::invalid_argument("quadrature rel_tol must lie in (1e-14, 1e-2]");
  }
  if (!(abs_floor >= 0.0)) {
    throw std::invalid_argument("quadrature abs_floor must be >= 0");
  }
  if (!(omega_max_factor >= 5.0)) {
    throw std::invalid_argument("omega_max_factor below 5 truncates the thermal spectrum");
  }
  if (panel_budget < 8) {
    throw std::invalid_argument("panel_budget must be at least 8");
  }
  for (double w : seed_points) {
    if (!(w > 0.0)) throw std::invalid_argument("seed_points must be positive frequencies");
  }
}

double QuadratureSpec::omega_cutoff(double t1, double t2) const {
  const double t_max = std::max(t1, t2);
  if (t_max <= 0.0) return 0.0;
  return omega_max_factor * constants::k_boltzmann * t_max / constants::hbar;
}

namespace {

// 15-point Kronrod / 7-point Gauss rule (QUADPACK dqk15 abscissae).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// Without any feature seeds the initial grid must be fine enough on its own
// to land Kronrod nodes inside narrow resonances (widths down to ~1e-3 of
// the domain for polar dielectrics), otherwise whole peaks can slip through
// undetected.
constexpr int kBlindInitialPanels = 512;

template <int N>
std::array<double, N> eval_kernel(const std::function<double(double)>& scalar,
                                  const std::function<std::array<double, 3>(double)>& vec,
                                  double omega) {
  if constexpr (N == 1) {
    return {scalar(omega)};
  } else {
    return vec(omega);
  }
}

template <int N>
struct PanelEval {
  std::array<double, N> value{};  // Kronrod estimates per component
  double err = 0.0;               // error estimate for the component sum
};

template <int N>
struct Panel {
  double lo, hi;
  PanelEval<N> ev;
};

template <int N>
PanelEval<N> gk15(const std::function<double(double)>& scalar,
                  const std::function<std::array<double, 3>(double)>& vec,
                  double lo, double hi) {
  const double half = 0.5 * (hi - lo);
  const double center = 0.5 * (lo + hi);

  const auto metric = [](const std::array<double, N>& v) {
    double m = 0.0;
    for (double c : v) m += c;
    return m;
  };

  const std::array<double, N> fc = eval_kernel<N>(scalar, vec, center);
  const double mc = metric(fc);

  std::array<double, N> resk{};
  for (int n = 0; n < N; ++n) resk[n] = kWgk[7] * fc[n];
  double resk_m = kWgk[7] * mc;
  double resg_m = kWg[3] * mc;

  double m_lo[7], m_hi[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const std::array<double, N> f1 = eval_kernel<N>(scalar, vec, center - dx);
    const std::array<double, N> f2 = eval_kernel<N>(scalar, vec, center + dx);
    m_lo[j] = metric(f1);
    m_hi[j] = metric(f2);
    for (int n = 0; n < N; ++n) resk[n] += kWgk[j] * (f1[n] + f2[n]);
    resk_m += kWgk[j] * (m_lo[j] + m_hi[j]);
    if (j % 2 == 1) resg_m += kWg[(j - 1) / 2] * (m_lo[j] + m_hi[j]);
  }

  // QUADPACK-style rescaled error estimate for the metric.
  const double reskh = 0.5 * resk_m;
  double resasc = kWgk[7] * std::abs(mc - reskh);
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::abs(m_lo[j] - reskh) + std::abs(m_hi[j] - reskh));
  }
  resasc *= half;

  PanelEval<N> out;
  for (int n = 0; n < N; ++n) out.value[n] = resk[n] * half;
  out.err = std::abs((resk_m - resg_m) * half);
  if (resasc != 0.0 && out.err != 0.0) {
    out.err = resasc * std::min(1.0, std::pow(200.0 * out.err / resasc, 1.5));
  }
  return out;
}

std::vector<double> assemble_edges(double lo, double hi, const SpectralKernel& kernel,
                                   const QuadratureSpec& spec) {
  std::vector<double> edges{lo, hi};
  const auto add = [&](double x) {
    if (x > lo && x < hi) edges.push_back(x);
  };
  const auto add_seed = [&](double omega, double half_width) {
    add(omega - half_width);
    add(omega - 0.1 * half_width);
    add(omega);
    add(omega + 0.1 * half_width);
    add(omega + half_width);
  };

  bool any_seed = false;
  if (spec.auto_seeds) {
    for (const SeedPoint& s : kernel.seeds) {
      any_seed = true;
      add_seed(s.omega, s.half_width);
    }
  }
  for (double w : spec.seed_points) {
    any_seed = true;
    add_seed(w, 1e-2 * w);
  }

  if (!any_seed) {
    const double step = (hi - lo) / kBlindInitialPanels;
    for (int i = 1; i < kBlindInitialPanels; ++i) add(lo + step * i);
  }

  std::sort(edges.begin(), edges.end());
  std::vector<double> unique_edges;
  unique_edges.reserve(edges.size());
  const double merge_tol = 1e-13 * (hi - lo);
  for (double e : edges) {
    if (unique_edges.empty() || e - unique_edges.back() > merge_tol) {
      unique_edges.push_back(e);
    }
  }
  if (unique_edges.back() != hi) unique_edges.back() = hi;
  return unique_edges;
}

template <int N>
struct AdaptiveOut {
  std::array<double, N> values{};
  double error = 0.0;
  long evals = 0;
  int panels = 0;
  bool converged = false;
};

template <int N>
AdaptiveOut<N> adapt(const std::function<double(double)>& scalar,
                     const std::function<std::array<double, 3>(double)>& vec,
                     double lo, double hi, const SpectralKernel& kernel,
                     const QuadratureSpec& spec) {
  AdaptiveOut<N> out;
  if (!(hi > lo)) {
    out.converged = true;
    return out;
  }

  // Worst panel first; ties resolved by position so refinement order (and
  // with it every rounding decision) is reproducible run to run.
  const auto worse = [](const Panel<N>& a, const Panel<N>& b) {
    if (a.ev.err != b.ev.err) return a.ev.err < b.ev.err;
    return a.lo > b.lo;
  };
  std::priority_queue<Panel<N>, std::vector<Panel<N>>, decltype(worse)> active(worse);
  std::vector<Panel<N>> frozen;  // too narrow to split any further

  const std::vector<double> edges = assemble_edges(lo, hi, kernel, spec);
  double total_metric = 0.0;
  double total_err = 0.0;
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    Panel<N> p{edges[i], edges[i + 1], gk15<N>(scalar, vec, edges[i], edges[i + 1])};
    out.evals += 15;
    out.panels += 1;
    for (double v : p.ev.value) total_metric += v;
    total_err += p.ev.err;
    active.push(p);
  }

  const auto tolerance = [&](double metric) {
    return std::max(spec.rel_tol * std::abs(metric), spec.abs_floor);
  };

  while (true) {
    // Refine on incrementally tracked sums, which drift by at most a few ulp
    // per split; an exact re-sum below settles borderline cases.
    while (total_err > tolerance(total_metric) && out.panels < spec.panel_budget &&
           !active.empty()) {
      Panel<N> worst = active.top();
      if (worst.ev.err == 0.0) break;
      active.pop();
      const double mid = 0.5 * (worst.lo + worst.hi);
      const double width_floor =
          8.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(worst.lo), std::abs(worst.hi));
      if (worst.hi - worst.lo <= width_floor || mid <= worst.lo || mid >= worst.hi) {
        frozen.push_back(worst);
        continue;
      }
      Panel<N> left{worst.lo, mid, gk15<N>(scalar, vec, worst.lo, mid)};
      Panel<N> right{mid, worst.hi, gk15<N>(scalar, vec, mid, worst.hi)};
      out.evals += 30;
      out.panels += 1;
      double delta_metric = 0.0, delta_err = left.ev.err + right.ev.err - worst.ev.err;
      for (int n = 0; n < N; ++n) {
        delta_metric += left.ev.value[n] + right.ev.value[n] - worst.ev.value[n];
      }
      total_metric += delta_metric;
      total_err += delta_err;
      active.push(left);
      active.push(right);
    }

    // Exact pass: gather every panel, order by position, accumulate.
    std::vector<Panel<N>> all = std::move(frozen);
    frozen.clear();
    while (!active.empty()) {
      all.push_back(active.top());
      active.pop();
    }
    std::sort(all.begin(), all.end(),
              [](const Panel<N>& a, const Panel<N>& b) { return a.lo < b.lo; });
    out.values = {};
    total_metric = 0.0;
    total_err = 0.0;
    bool splittable = false;
    for (const Panel<N>& p : all) {
      for (int n = 0; n < N; ++n) {
        out.values[n] += p.ev.value[n];
        total_metric += p.ev.value[n];
      }
      total_err += p.ev.err;
      const double width_floor =
          8.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(p.lo), std::abs(p.hi));
      if (p.hi - p.lo > width_floor && p.ev.err > 0.0) splittable = true;
    }
    out.error = total_err;

    if (total_err <= tolerance(total_metric)) {
      out.converged = true;
      return out;
    }
    if (out.panels >= spec.panel_budget || !splittable) {
      out.converged = false;
      return out;
    }
    for (Panel<N>& p : all) active.push(std::move(p));
  }
}

SpectralKernel scalar_only(const std::function<double(double)>& f) {
  SpectralKernel k;
  k.total = f;
  return k;
}

[[noreturn]] void throw_non_convergence(const AdaptiveOut<1>& got, const QuadratureSpec& spec) {
  IntegralResult achieved{got.values[0], got.error, got.evals, got.panels};
  std::ostringstream msg;
  msg << "spectral integral not converged after " << got.panels << " panels (budget "
      << spec.panel_budget << "): value " << achieved.value << ", error estimate "
      << achieved.error;
  throw QuadratureError(msg.str(), achieved);
}

}  // namespace

IntegralResult integrate(const SpectralKernel& kernel, double omega_lo, double omega_hi,
                         const QuadratureSpec& spec) {
  spec.validate();
  if (!kernel.total) throw std::invalid_argument("spectral kernel has no integrand");
  const auto got = adapt<1>(kernel.total, nullptr, omega_lo, omega_hi, kernel, spec);
  if (!got.converged) throw_non_convergence(got, spec);
  return {got.values[0], got.error, got.evals, got.panels};
}

IntegralResult integrate(const std::function<double(double)>& f, double omega_lo,
                         double omega_hi, const QuadratureSpec& spec) {
  return integrate(scalar_only(f), omega_lo, omega_hi, spec);
}

ChannelResult integrate_channels(const SpectralKernel& kernel, double omega_lo,
                                 double omega_hi, const QuadratureSpec& spec) {
  spec.validate();
  if (!kernel.channels) throw std::invalid_argument("spectral kernel has no channel split");
  const auto got = adapt<3>(nullptr, kernel.channels, omega_lo, omega_hi, kernel, spec);
  if (!got.converged) {
    AdaptiveOut<1> flat;
    flat.values[0] = got.values[0] + got.values[1] + got.values[2];
    flat.error = got.error;
    flat.evals = got.evals;
    flat.panels = got.panels;
    throw_non_convergence(flat, spec);
  }
  ChannelResult out;
  out.channels = got.values;
  out.total = got.values[0] + got.values[1] + got.values[2];
  out.error = got.error;
  out.kernel_evals = got.evals;
  out.panels = got.panels;
  return out;
}

}  // namespace nanoheat
