#ifndef NANOHEAT_TRANSFER_HPP
#define NANOHEAT_TRANSFER_HPP

#include <string>
#include <vector>

#include "nanoheat/constants.hpp"
#include "nanoheat/spectral.hpp"
#include "nanoheat/spheroid.hpp"

namespace nanoheat {

// Two-particle scene. Centers sit on the z axis a distance d apart; theta_i
// tilts each symmetry axis off that line, and beta is the relative azimuth
// between the two tilt planes (only the difference is physical, so object 1
// is evaluated at azimuth 0 and object 2 at beta).
struct Pair {
  Spheroid s1;
  Spheroid s2;
  double d;                           // m, center to center
  double theta1 = constants::pi / 2;  // rad
  double theta2 = constants::pi / 2;
  double beta = 0.0;                  // rad
  double t1 = 300.0;                  // K
  double t2 = 0.0;

  void validate() const;  // std::invalid_argument on unusable scenes
};

struct ValidityCheck {
  std::string name;   // short tag, doubles as the CSV flag when violated
  double value;       // the ratio that was tested
  double limit;
  bool ok;
  std::string note;
};

struct ValidityReport {
  std::vector<ValidityCheck> checks;
  bool dipole_ok() const;
  std::vector<std::string> warning_flags() const;  // names of failed checks
};

// Dipole-picture sanity: separation vs particle size, size vs thermal
// wavelength, and skin depth vs size at the dominant spectral features.
ValidityReport check_dipole_validity(const Pair& p);

struct TransferResult {
  double watts = 0.0;
  double error = 0.0;  // quadrature error estimate, W
  long kernel_evals = 0;
  int panels = 0;
  ValidityReport validity;
};

// Net exchanged power for arbitrary tilts, from the closed-form orientation
// kernel. Positive when t1 > t2.
TransferResult transfer_general(const Pair& p, const QuadratureSpec& spec);

// Specialization for both axes perpendicular to the line of centers
// (theta1 = theta2 = pi/2), where the kernel depends on beta alone. Throws
// std::invalid_argument unless both tilts are pi/2 (to 1e-12).
TransferResult transfer_perpendicular(const Pair& p, const QuadratureSpec& spec);

// Same quantity evaluated through the fluctuation-dissipation trace formula
// with explicit rotation matrices and the full dyadic Green function. Shares
// no kernel algebra with transfer_general; used to validate it.
TransferResult oracle_transfer(const Pair& p, const QuadratureSpec& spec);

struct EmissionResult {
  double watts = 0.0;
  double error = 0.0;
  long kernel_evals = 0;
  int panels = 0;
};

// Power radiated by an isolated particle at `temperature` into vacuum at 0 K.
EmissionResult emission(const Spheroid& s, double temperature, const QuadratureSpec& spec);

struct ChannelDecomposition {
  double d2 = 0.0, d4 = 0.0, d6 = 0.0;  // W per distance channel
  double total = 0.0;                   // sums to transfer_general
  double error = 0.0;
  long kernel_evals = 0;
  int panels = 0;
  ValidityReport validity;
};

ChannelDecomposition channel_decomposition(const Pair& p, const QuadratureSpec& spec);

// Distance regimes: `near` keeps only the d^-6 channel and strips the 1/d^6
// (coefficients in W m^6), `far` keeps the d^-2 channel stripped of 1/d^2
// (W m^2), `exact` keeps everything at p.d (W).
enum class Regime { near, far, exact };

// Transfer in one distance regime: `near` and `far` integrate a single
// channel with its distance factor stripped (units W m^6 and W m^2), `exact`
// is transfer_general at p.d.
TransferResult transfer_regime(const Pair& p, Regime regime, const QuadratureSpec& spec);

// Orientation profile at fixed tilts:
//   H(beta) = c_cos2 cos^2(beta) + c_sin2 sin^2(beta) + c_cosb cos(beta) + c_const.
// Four spectral integrals give the whole beta dependence exactly.
struct BetaProfile {
  double c_cos2 = 0.0;
  double c_sin2 = 0.0;
  double c_cosb = 0.0;
  double c_const = 0.0;
  double error = 0.0;  // summed coefficient error estimates
  long kernel_evals = 0;
  Regime regime = Regime::exact;

  double eval(double beta) const;
};

BetaProfile transfer_beta_profile(const Pair& p, Regime regime, const QuadratureSpec& spec);

// Kernel builders, exposed for spectrum dumps and tests. Both carry the same
// feature seeds; their integrands agree but are computed via unrelated routes.
SpectralKernel make_transfer_kernel(const Pair& p);
SpectralKernel make_oracle_kernel(const Pair& p);

// Spectral features (dispersion corners and particle resonances) of both
// objects, used to pre-refine the quadrature.
std::vector<SeedPoint> pair_spectral_seeds(const Pair& p);
std::vector<SeedPoint> spheroid_spectral_seeds(const Spheroid& s);

}  // namespace nanoheat

#endif
