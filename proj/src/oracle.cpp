// Reference route for the two-particle exchange: the fluctuation-dissipation
// trace over explicit polarizability tensors and the full vacuum dyadic Green
// function. Deliberately brute force -- rotation matrices multiplied out,
// 81-term trace -- so it shares no algebra with the closed-form kernel it is
// used to validate.

#include <array>
#include <cmath>
#include <complex>

#include "nanoheat/transfer.hpp"

namespace nanoheat {

namespace {

using constants::c_light;
using constants::hbar;
using constants::pi;

using Mat3 = std::array<std::array<double, 3>, 3>;
using CMat3 = std::array<std::array<std::complex<double>, 3>, 3>;

Mat3 matmul(const Mat3& a, const Mat3& b) {
  Mat3 out{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) out[i][j] += a[i][k] * b[k][j];
    }
  }
  return out;
}

Mat3 transpose(const Mat3& a) {
  Mat3 out{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) out[i][j] = a[j][i];
  }
  return out;
}

// Body frame carries the symmetry axis along z; the lab orientation is
// Rz(phi) Ry(theta), so the axis maps to (sin t cos p, sin t sin p, cos t).
Mat3 alpha_tensor(const PolarizabilityPair& a, double theta, double phi) {
  const double ct = std::cos(theta), st = std::sin(theta);
  const double cp = std::cos(phi), sp = std::sin(phi);
  const Mat3 ry = {{{ct, 0.0, st}, {0.0, 1.0, 0.0}, {-st, 0.0, ct}}};
  const Mat3 rz = {{{cp, -sp, 0.0}, {sp, cp, 0.0}, {0.0, 0.0, 1.0}}};
  const Mat3 rot = matmul(rz, ry);
  const Mat3 diag = {{{a.alpha_perp, 0.0, 0.0}, {0.0, a.alpha_perp, 0.0}, {0.0, 0.0, a.alpha_par}}};
  return matmul(rot, matmul(diag, transpose(rot)));
}

// G(r) = (e^{ikr}/r) [ a(x) 1 + b(x) rhat rhat ], x = kr,
// a = 1 + i/x - 1/x^2, b = -1 - 3i/x + 3/x^2.
CMat3 greens_dyadic(double k, const std::array<double, 3>& rvec) {
  const double r = std::sqrt(rvec[0] * rvec[0] + rvec[1] * rvec[1] + rvec[2] * rvec[2]);
  const std::array<double, 3> rhat = {rvec[0] / r, rvec[1] / r, rvec[2] / r};
  const double x = k * r;
  const std::complex<double> i_unit(0.0, 1.0);
  const std::complex<double> a = 1.0 + i_unit / x - 1.0 / (x * x);
  const std::complex<double> b = -1.0 - 3.0 * i_unit / x + 3.0 / (x * x);
  const std::complex<double> pref = std::exp(i_unit * x) / r;
  CMat3 g{};
  for (int p = 0; p < 3; ++p) {
    for (int q = 0; q < 3; ++q) {
      g[p][q] = pref * (a * double(p == q) + b * rhat[p] * rhat[q]);
    }
  }
  return g;
}

// Re Tr[A1 Gdag A2 G], written out index by index.
double coupling_trace(const Mat3& a1, const Mat3& a2, const CMat3& g) {
  std::complex<double> tr(0.0, 0.0);
  for (int p = 0; p < 3; ++p) {
    for (int q = 0; q < 3; ++q) {
      for (int r = 0; r < 3; ++r) {
        for (int s = 0; s < 3; ++s) {
          tr += a1[p][q] * std::conj(g[r][q]) * a2[r][s] * g[s][p];
        }
      }
    }
  }
  return tr.real();
}

}  // namespace

SpectralKernel make_oracle_kernel(const Pair& p) {
  p.validate();
  SpectralKernel kernel;
  kernel.total = [p](double omega) {
    const Mat3 a1 = alpha_tensor(polarizability(p.s1, omega), p.theta1, 0.0);
    const Mat3 a2 = alpha_tensor(polarizability(p.s2, omega), p.theta2, p.beta);
    const double k = omega / c_light;
    const CMat3 g = greens_dyadic(k, {0.0, 0.0, p.d});
    return (2.0 * hbar / pi) * planck_difference(omega, p.t1, p.t2) * (k * k) * (k * k) *
           coupling_trace(a1, a2, g);
  };
  kernel.seeds = pair_spectral_seeds(p);
  return kernel;
}

TransferResult oracle_transfer(const Pair& p, const QuadratureSpec& spec) {
  spec.validate();
  TransferResult out;
  out.validity = check_dipole_validity(p);
  const double omega_hi = spec.omega_cutoff(p.t1, p.t2);
  if (omega_hi <= 0.0) return out;
  const IntegralResult r = integrate(make_oracle_kernel(p), 0.0, omega_hi, spec);
  out.watts = r.value;
  out.error = r.error;
  out.kernel_evals = r.kernel_evals;
  out.panels = r.panels;
  return out;
}

}  // namespace nanoheat
