#ifndef NANOHEAT_CONSTANTS_HPP
#define NANOHEAT_CONSTANTS_HPP

namespace nanoheat {

// 2019 SI exact values (CODATA).
namespace constants {
inline constexpr double hbar = 1.054571817e-34;          // J s
inline constexpr double k_boltzmann = 1.380649e-23;      // J / K
inline constexpr double c_light = 299792458.0;           // m / s
inline constexpr double electron_volt = 1.602176634e-19; // J
inline constexpr double pi = 3.14159265358979323846;
}  // namespace constants

// Photon energy in eV <-> angular frequency in rad/s.
inline constexpr double ev_to_rad_s(double energy_ev) {
  return energy_ev * constants::electron_volt / constants::hbar;
}

inline constexpr double rad_s_to_ev(double omega) {
  return omega * constants::hbar / constants::electron_volt;
}

}  // namespace nanoheat

#endif
