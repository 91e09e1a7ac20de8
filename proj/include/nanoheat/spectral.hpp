#ifndef NANOHEAT_SPECTRAL_HPP
#define NANOHEAT_SPECTRAL_HPP

#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nanoheat {

// Controls for the adaptive spectral quadrature.
struct QuadratureSpec {
  double rel_tol = 1e-8;
  double abs_floor = 0.0;           // absolute error floor; 0 keeps it purely relative
  double omega_max_factor = 40.0;   // spectra cut at factor * kB T_max / hbar
  std::vector<double> seed_points;  // extra user-supplied features to pre-refine, rad/s
  bool auto_seeds = true;           // let kernels contribute their resonance seeds
  int panel_budget = 100000;

  void validate() const;  // std::invalid_argument on nonsense settings
  double omega_cutoff(double t1, double t2) const;
};

// A spectral feature worth pre-refining: initial panels are split at
// omega +- half_width and omega +- half_width/10.
struct SeedPoint {
  double omega;
  double half_width;
};

// Spectral integrand with its feature list. `channels`, when present, splits
// the same integrand into the d^-2 / d^-4 / d^-6 distance channels; the three
// parts sum to `total` up to rounding.
struct SpectralKernel {
  std::function<double(double)> total;
  std::function<std::array<double, 3>(double)> channels;
  std::vector<SeedPoint> seeds;
};

struct IntegralResult {
  double value = 0.0;
  double error = 0.0;  // quadrature error estimate, same units as value
  long kernel_evals = 0;
  int panels = 0;
};

struct ChannelResult {
  std::array<double, 3> channels{};  // d^-2, d^-4, d^-6 contributions
  double total = 0.0;
  double error = 0.0;
  long kernel_evals = 0;
  int panels = 0;
};

// Raised when refinement exhausts the panel budget before reaching rel_tol.
// `achieved` carries the best estimate so callers can report it.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, IntegralResult achieved_result)
      : std::runtime_error(what), achieved(achieved_result) {}
  IntegralResult achieved;
};

// omega * n(omega, T) with n the Bose occupation; 0 at T <= 0.
double planck_occupation_weight(double omega, double temperature);

// omega * [n(omega, T1) - n(omega, T2)]; antisymmetric in (T1, T2).
double planck_difference(double omega, double t1, double t2);

// hbar c / (kB T) in meters.
double thermal_wavelength(double temperature);

IntegralResult integrate(const SpectralKernel& kernel, double omega_lo, double omega_hi,
                         const QuadratureSpec& spec);

// Scalar convenience wrapper for feature-free integrands.
IntegralResult integrate(const std::function<double(double)>& f, double omega_lo,
                         double omega_hi, const QuadratureSpec& spec);

// Same adaptive refinement driven by the channel sum, so the three channel
// integrals share one panel set and add up to the total exactly.
ChannelResult integrate_channels(const SpectralKernel& kernel, double omega_lo,
                                 double omega_hi, const QuadratureSpec& spec);

}  // namespace nanoheat

#endif
