#pragma once

// Laplace-Fourier boundary response of the half-plane problem and the
// truncation-error model for the generalized eigenvalue.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "halfplane/dispersion.hpp"
#include "halfplane/material.hpp"

namespace halfplane {

/// Transformed boundary forcing at one (s, omega) pair.
struct BoundaryData {
  complex g1_hat{0.0, 0.0};
  complex g2_hat{0.0, 0.0};
  complex s{1.0, 0.0};  ///< Laplace dual, Re(s) >= 0
  double omega = 1.0;   ///< Fourier dual in y
};

/// Mode amplitudes of the bounded solution and its traces on x = 0.
struct BoundaryResponse {
  complex u01_hat;
  complex u02_hat;
  complex u_at_0;
  complex v_at_0;
  complex phi;  ///< determinant phi(s~) of the scaled system
};

/// Thrown when s sits on a generalized eigenvalue and the boundary system is singular.
class SingularBoundarySystem : public std::runtime_error {
 public:
  SingularBoundarySystem(double abs_phi, double distance)
      : std::runtime_error(message(abs_phi, distance)), abs_phi_(abs_phi), distance_(distance) {}

  double abs_phi() const { return abs_phi_; }
  /// |s~ - s~0| to the nearest generalized eigenvalue.
  double distance() const { return distance_; }

 private:
  static std::string message(double abs_phi, double distance) {
    std::ostringstream os;
    os << "boundary system singular at a generalized eigenvalue: |phi|=" << abs_phi
       << ", |s~ - s~0|=" << distance;
    return os.str();
  }

  double abs_phi_;
  double distance_;
};

inline constexpr double kSingularPhiTolerance = 1e-10;

inline void validate(const BoundaryData& d) {
  if (d.s.real() < 0.0) throw std::domain_error("boundary data requires Re(s) >= 0");
  if (d.s == complex{0.0, 0.0} && d.omega == 0.0) {
    throw std::domain_error("boundary data requires (s, omega) != (0, 0)");
  }
}

/// Solves the 2x2 boundary system for the amplitudes of the two decaying
/// modes and returns the traces u(0), v(0).
inline BoundaryResponse solve_boundary_system(const BoundaryData& d, const Material& m) {
  validate(d);
  if (d.omega == 0.0) throw std::domain_error("solve_boundary_system requires omega != 0");
  const LameRatio ratio = m.ratio();
  const double abs_w = std::abs(d.omega);
  const complex st = scale_laplace(d.s, d.omega, m);
  const complex s2 = st * st;
  const complex a = branch_sqrt(1.0 + s2);
  const complex b = branch_sqrt(1.0 + ratio.shear_fraction() * s2);
  const complex half = 1.0 + 0.5 * s2;
  // ab - 1 written without cancellation so that phi keeps full relative
  // precision at its double zero s~ = 0.
  const complex ab = a * b;
  const complex ab_minus_1 =
      std::abs(s2) < 0.5 ? ((1.0 + ratio.shear_fraction()) * s2 + ratio.shear_fraction() * s2 * s2) / (ab + 1.0)
                         : ab - 1.0;
  const complex det = ab_minus_1 - s2 - 0.25 * s2 * s2;

  if (det == complex{0.0, 0.0} || (std::abs(det) < kSingularPhiTolerance && std::abs(st) > 1e-3)) {
    const double xi0 = find_rayleigh_mode(ratio).xi0;
    const double dist = std::min(std::abs(st - complex{0.0, xi0}), std::abs(st + complex{0.0, xi0}));
    throw SingularBoundarySystem(std::abs(det), dist);
  }

  const complex r1 = -m.p_modulus() * d.g1_hat / (2.0 * m.mu() * abs_w) * b;
  const complex r2 = complex{0.0, 1.0} * d.g2_hat / (2.0 * d.omega);

  BoundaryResponse out;
  out.phi = det;
  out.u01_hat = (r1 + r2 * half) / det;
  // u(0) = u01 + u02 and v(0) rearranged so the O(1/s~^2) parts cancel exactly.
  out.u_at_0 = -0.5 * s2 * out.u01_hat - r2;
  out.u02_hat = out.u_at_0 - out.u01_hat;
  const double sign = d.omega > 0.0 ? 1.0 : -1.0;
  const complex i{0.0, 1.0};
  out.v_at_0 = -i * sign * (ab_minus_1 / b * out.u01_hat + out.u_at_0 / b);
  return out;
}

struct BoundaryBound {
  double bound_u = 0.0;
  double bound_v = 0.0;
};

/// Right-hand side of the near-eigenvalue estimate
/// |u(0)|, |v(0)| <= (K/eta) [ (2mu+lambda)/sqrt(mu) |g1| + sqrt(mu) |g2| ].
/// K is a calibration constant, not a derived quantity.
inline BoundaryBound boundary_estimate_bound(const BoundaryData& d, const Material& m, double eta,
                                             double K) {
  if (!(eta > 0.0)) throw std::domain_error("boundary estimate requires eta > 0");
  const double sq = std::sqrt(m.mu());
  const double b = K / eta * (m.p_modulus() / sq * std::abs(d.g1_hat) + sq * std::abs(d.g2_hat));
  return {b, b};
}

struct AsymptoticTraces {
  complex u_at_0;
  complex v_at_0;
};

/// Leading-order traces as omega -> 0 at fixed s != 0: the problem decouples
/// into two 1-D wave equations, giving u(0) = -cp g1/s and v(0) = -cs g2/s.
inline AsymptoticTraces omega_zero_asymptotics(const BoundaryData& d, const Material& m) {
  if (d.s == complex{0.0, 0.0}) throw std::domain_error("omega -> 0 limit requires s != 0");
  return {-m.cp() * d.g1_hat / d.s, -m.cs() * d.g2_hat / d.s};
}

/// Leading truncation coefficients of a discretized traction condition,
/// g1 = alpha1 h^2 u_xxx + alpha2 h^2 v_yyy, g2 = beta1 h^2 v_xxx + beta2 h^2 u_yyy
/// for order 2 and g1 = alpha1p h^4 d^5u/dx^5 + alpha2p h^4 d^5v/dy^5 for order 4.
struct TruncationCoeffs {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double alpha1p = 0.0;
  double alpha2p = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
  double h = 0.0;
  int order = 2;
};

inline void validate(const TruncationCoeffs& c) {
  if (!(c.h > 0.0)) throw std::domain_error("truncation model requires h > 0");
  if (c.order != 2 && c.order != 4) throw std::domain_error("truncation model order must be 2 or 4");
}

/// Perturbation theta of the eigenvalue relation phi(s~) u01 = theta u01 at an
/// arbitrary s~. Reduces to the closed form for g2 = 0 when beta1 = beta2 = 0.
inline complex theta_at(complex s_tilde, const Material& m, double omega, const TruncationCoeffs& c) {
  validate(c);
  const LameRatio ratio = m.ratio();
  const double w = std::abs(omega);
  const complex s2 = s_tilde * s_tilde;
  const complex a = branch_sqrt(1.0 + s2);
  const complex b = branch_sqrt(1.0 + ratio.shear_fraction() * s2);
  const complex half = 1.0 + 0.5 * s2;
  const complex k1 = w * a;
  const complex k2 = w * b;
  const double w2 = omega * omega;
  const double w4 = w2 * w2;

  // g1 = A1 u01 + A2 u02 and g2 = B1 u01 + B2 u02 in transformed space.
  complex A1, A2, B1{0.0, 0.0}, B2{0.0, 0.0};
  if (c.order == 2) {
    const double h2 = c.h * c.h;
    A1 = -h2 * (c.alpha1 * k1 * k1 * k1 + c.alpha2 * w2 * k1);
    A2 = -h2 * (c.alpha1 * k2 * k2 * k2 + c.alpha2 * w4 / k2);
    const complex i{0.0, 1.0};
    B1 = i * c.beta1 * h2 * (k1 * k1 * k1 * k1 / omega) - i * c.beta2 * h2 * w2 * omega;
    B2 = i * c.beta1 * h2 * (k2 * k2 * omega) - i * c.beta2 * h2 * w2 * omega;
  } else {
    const double h4 = c.h * c.h * c.h * c.h;
    const complex k1_5 = k1 * k1 * k1 * k1 * k1;
    const complex k2_5 = k2 * k2 * k2 * k2 * k2;
    A1 = -h4 * (c.alpha1p * k1_5 - c.alpha2p * w4 * k1);
    A2 = -h4 * (c.alpha1p * k2_5 - c.alpha2p * w4 * w2 / k2);
  }
  const complex cg1 = m.p_modulus() * b / (2.0 * m.mu() * w);
  const complex cg2 = complex{0.0, 1.0} / (2.0 * omega);
  return -(cg1 * A1 - half * cg1 * A2 + a * b * cg2 * B2 - half * cg2 * B1);
}

/// theta at the generalized eigenvalue s~0 = i xi~0.
inline complex theta(const RayleighMode& mode, const Material& m, double omega, const TruncationCoeffs& c) {
  return theta_at(complex{0.0, mode.xi0}, m, omega, c);
}

struct PerturbedEigenvalue {
  complex s_tilde;    ///< s~0 + shift
  complex shift;      ///< theta / phi'(s~0)
  bool asymptotic = true;  ///< false when |theta| is not small against |phi'(s~0)|
};

/// First-order shift of s~0 = i xi~0 under a perturbation theta of the determinant.
inline PerturbedEigenvalue perturbed_eigenvalue(const RayleighMode& mode, LameRatio ratio, complex theta_value) {
  const complex s0{0.0, mode.xi0};
  const complex dphi = phi_prime(s0, ratio);
  PerturbedEigenvalue out;
  out.shift = theta_value / dphi;
  out.s_tilde = s0 + out.shift;
  out.asymptotic = std::abs(theta_value) < 0.1 * std::abs(dphi);
  return out;
}

inline PerturbedEigenvalue perturbed_eigenvalue(const RayleighMode& mode, const Material& m, double omega,
                                                const TruncationCoeffs& c) {
  return perturbed_eigenvalue(mode, m.ratio(), theta(mode, m, omega, c));
}

/// Lumped coefficient |alpha0| = |0.027 a1 + 0.3 a2 - 0.55 (a1 + a2)| / 2 of
/// the lambda/mu >> 1 evaluation of theta.
inline double composite_alpha0(double a1, double a2) {
  return std::abs(0.027 * a1 + 0.3 * a2 - 0.55 * (a1 + a2)) / 2.0;
}

/// Points per wave length for a relative phase-speed error eps:
/// P = 2 pi (|alpha0| lambda / (eps mu))^(1/order).
inline double required_points_per_wavelength(const Material& m, double eps, int order, double alpha0_abs) {
  if (!(eps > 0.0)) throw std::domain_error("phase error target must be positive");
  if (order != 2 && order != 4) throw std::domain_error("order must be 2 or 4");
  const double base = alpha0_abs * m.lambda() / (eps * m.mu());
  return 2.0 * std::numbers::pi * std::pow(base, 1.0 / order);
}

inline double required_points_per_wavelength(const Material& m, double eps, const TruncationCoeffs& c) {
  const double a0 = c.order == 2 ? composite_alpha0(c.alpha1, c.alpha2) : composite_alpha0(c.alpha1p, c.alpha2p);
  return required_points_per_wavelength(m, eps, c.order, a0);
}

}  // namespace halfplane
