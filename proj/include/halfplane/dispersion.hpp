#pragma once

// Rayleigh determinant and generalized eigenvalues of the free-surface
// half-plane problem, in the scaled Laplace variable s~ = s / (|omega| sqrt(mu)).

#include <cmath>
#include <complex>
#include <stdexcept>

#include "halfplane/material.hpp"

namespace halfplane {

using complex = std::complex<double>;

/// Square root with arg(z) taken in (-pi, pi] and arg(sqrt z) = arg(z)/2.
///
/// Differs from std::sqrt only on the negative real axis with a negative
/// signed zero imaginary part, where std::sqrt returns the lower root.
inline complex branch_sqrt(complex z) {
  if (z.imag() == 0.0 && z.real() < 0.0) {
    return {0.0, std::sqrt(-z.real())};
  }
  return std::sqrt(z);
}

/// kappa = sqrt(omega^2 + s^2 / speed_sq). Pass mu for kappa_1 and
/// lambda + 2 mu for kappa_2.
inline complex kappa(complex s, double omega, double speed_sq) {
  return branch_sqrt(omega * omega + s * s / speed_sq);
}

/// phi(s~) = sqrt(1+s~^2) sqrt(1 + mu s~^2/(lambda+2mu)) - (1 + s~^2/2)^2
inline complex phi(complex s_tilde, LameRatio ratio) {
  const complex s2 = s_tilde * s_tilde;
  const double q = ratio.shear_fraction();
  const complex half = 1.0 + 0.5 * s2;
  return branch_sqrt(1.0 + s2) * branch_sqrt(1.0 + q * s2) - half * half;
}

/// d phi / d s~, evaluated term by term.
inline complex phi_prime(complex s_tilde, LameRatio ratio) {
  const complex s2 = s_tilde * s_tilde;
  const double q = ratio.shear_fraction();
  const complex a = branch_sqrt(1.0 + s2);
  const complex b = branch_sqrt(1.0 + q * s2);
  return s_tilde * b / a + s_tilde * q * a / b - 2.0 * s_tilde * (1.0 + 0.5 * s2);
}

/// Real function with the same roots on 0 < sigma < 1 as phi(i sqrt(sigma)).
inline double psi(double sigma, LameRatio ratio) {
  const double q = ratio.shear_fraction();
  const double t = 1.0 - 0.5 * sigma;
  return (1.0 - sigma) * (1.0 - q * sigma) - t * t * t * t;
}

inline double psi_prime(double sigma, LameRatio ratio) {
  const double q = ratio.shear_fraction();
  const double t = 1.0 - 0.5 * sigma;
  return -(1.0 + q) + 2.0 * q * sigma + 2.0 * t * t * t;
}

/// The generalized eigenvalue s~0 = +/- i xi0 and the quantities that depend
/// on it. All lengths are relative to |omega|.
struct RayleighMode {
  double xi0_sq = 0.0;          ///< xi~0^2, the positive root of psi in (0, 1)
  double xi0 = 0.0;             ///< xi~0
  double kappa10 = 0.0;         ///< kappa_10/|omega| = sqrt(1 - xi~0^2)
  double kappa20 = 0.0;         ///< kappa_20/|omega| = sqrt(1 - xi~0^2 mu/(lambda+2mu))
  double phi_prime_abs = 0.0;   ///< |phi'(s~0)|
  double coeff = 0.0;           ///< xi~0^2/2 - 1, weight of the P part of the eigenfunction

  /// Rayleigh phase velocity c_r = xi~0 sqrt(mu).
  double phase_velocity(const Material& m) const { return xi0 * std::sqrt(m.mu()); }
};

/// Real constant C0 with sqrt(1+s~0^2) sqrt(1+q s~0^2) phi'(s~0)/s~0 = C0, valid at
/// a root of phi.
inline double phi_prime_constant(double xi0_sq, LameRatio ratio) {
  const double q = ratio.shear_fraction();
  const double s2 = -xi0_sq;
  const double t = 1.0 + 0.5 * s2;
  return 1.0 + q * s2 + q * (1.0 + s2) - 2.0 * t * t * t;
}

namespace detail {

inline double psi_root(LameRatio ratio) {
  constexpr double edge = 1e-9;
  constexpr double tolerance = 1e-14;
  double lo = edge;
  double hi = 1.0 - edge;
  if (!(psi(lo, ratio) > 0.0 && psi(hi, ratio) < 0.0)) {
    throw std::logic_error("psi root not bracketed on (0, 1)");
  }
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    (psi(mid, ratio) > 0.0 ? lo : hi) = mid;
  }
  double sigma = 0.5 * (lo + hi);
  for (int it = 0; it < 10; ++it) {
    const double f = psi(sigma, ratio);
    if (std::abs(f) <= tolerance) break;
    const double next = sigma - f / psi_prime(sigma, ratio);
    if (!(next > lo && next < hi)) break;
    sigma = next;
  }
  return sigma;
}

}  // namespace detail

inline RayleighMode find_rayleigh_mode(LameRatio ratio) {
  RayleighMode mode;
  mode.xi0_sq = detail::psi_root(ratio);
  mode.xi0 = std::sqrt(mode.xi0_sq);
  mode.kappa10 = std::sqrt(1.0 - mode.xi0_sq);
  mode.kappa20 = std::sqrt(1.0 - ratio.shear_fraction() * mode.xi0_sq);
  const double c0 = phi_prime_constant(mode.xi0_sq, ratio);
  mode.phi_prime_abs = std::abs(c0 * mode.xi0 / (mode.kappa10 * mode.kappa20));
  mode.coeff = 0.5 * mode.xi0_sq - 1.0;
  return mode;
}

inline RayleighMode find_rayleigh_mode(const Material& m) { return find_rayleigh_mode(m.ratio()); }

/// Unscaled boundary determinant
/// Delta = 2 omega^2 (1-gamma^2) kappa1 kappa2 - (kappa2^2 - gamma^2 omega^2)(kappa1^2 + omega^2).
inline complex determinant_delta(complex s, double omega, const Material& m) {
  const complex k1 = kappa(s, omega, m.mu());
  const complex k2 = kappa(s, omega, m.p_modulus());
  const double w2 = omega * omega;
  const double g2 = m.gamma_sq();
  return 2.0 * w2 * (1.0 - g2) * k1 * k2 - (k2 * k2 - g2 * w2) * (k1 * k1 + w2);
}

/// s~ = s / (|omega| sqrt(mu))
inline complex scale_laplace(complex s, double omega, const Material& m) {
  return s / (std::abs(omega) * std::sqrt(m.mu()));
}

}  // namespace halfplane
