#ifndef NANOHEAT_SPHEROID_HPP
#define NANOHEAT_SPHEROID_HPP

#include <vector>

#include "nanoheat/materials.hpp"

namespace nanoheat {

enum class SpheroidClass { sphere, prolate, oblate };

struct DepolarizationFactors {
  double n_par;   // along the symmetry axis
  double n_perp;  // either transverse axis; n_par + 2 n_perp = 1
};

struct PolarizabilityPair {
  double alpha_par;   // m^3, Im alpha along the symmetry axis
  double alpha_perp;  // m^3, Im alpha transverse
};

struct ResonanceMode {
  double omega;  // rad/s
  bool parallel; // which principal component resonates
};

// Homogeneous spheroid: r_par is the semi-axis along the symmetry axis,
// r_perp the (doubly degenerate) transverse semi-axis, both in meters.
class Spheroid {
 public:
  Spheroid(double r_par, double r_perp, PermittivityModel material);

  double r_par() const { return r_par_; }
  double r_perp() const { return r_perp_; }
  const PermittivityModel& material() const { return material_; }

  double aspect() const { return r_perp_ / r_par_; }  // < 1 prolate, > 1 oblate
  double volume() const;
  double max_extent() const;  // largest full diameter, limits the dipole picture

  SpheroidClass classify() const;

  // Eccentricity parameter eta of the depolarization integrals:
  // prolate eta^2 = 1 - (r_perp/r_par)^2, oblate eta^2 = (r_perp/r_par)^2 - 1,
  // sphere 0.
  double eccentricity() const;

  Spheroid with_material(PermittivityModel m) const { return {r_par_, r_perp_, std::move(m)}; }

 private:
  double r_par_;
  double r_perp_;
  PermittivityModel material_;
};

DepolarizationFactors depolarization_factors(const Spheroid& s);

// Im alpha per principal axis at omega (rad/s), from
// alpha_j = (r_perp^2 r_par / 3) (eps - 1) / ((eps - 1) n_j + 1).
PolarizabilityPair polarizability(const Spheroid& s, double omega);

// Zero crossings of n_j (Re eps - 1) + 1 in [omega_lo, omega_hi], bisected to
// 1e-8 relative. Crossings where n_j Im eps >= 1 are overdamped remnants of
// the dispersion core rather than surface modes and are dropped.
std::vector<ResonanceMode> resonance_frequencies(const Spheroid& s, double omega_lo, double omega_hi);

// Sphere of the same volume and material. A sphere input comes back
// unchanged, radii bit for bit.
Spheroid equal_volume_sphere(const Spheroid& s);

// Spheroid of prescribed volume with aspect = r_perp / r_par; aspect 1 gives
// a sphere with both radii bit-identical.
Spheroid spheroid_from_volume(double volume, double aspect, PermittivityModel material);

double surface_area(const Spheroid& s);

}  // namespace nanoheat

#endif
