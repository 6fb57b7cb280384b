#pragma once

// Closed-form solutions of the elastic wave equation used as initial data,
// boundary data and error references.

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "halfplane/dispersion.hpp"
#include "halfplane/material.hpp"

namespace halfplane {

struct Displacement {
  double u = 0.0;
  double v = 0.0;
};

/// Normal-stress boundary data at x = 0: g1 = u_x + gamma^2 v_y, g2 = u_y + v_x.
struct Traction {
  double g1 = 0.0;
  double g2 = 0.0;
};

/// Real part of the Rayleigh eigenfunction travelling in the negative
/// y-direction with wave form cos(omega (y + c_r t)).
class RayleighWave {
 public:
  explicit RayleighWave(const Material& m, double omega = 2.0 * std::numbers::pi)
      : material_(m), omega_(omega), mode_(find_rayleigh_mode(m)) {
    if (!(omega > 0.0)) throw std::invalid_argument("Rayleigh wave needs omega > 0");
    c_r_ = mode_.phase_velocity(m);
  }

  Displacement operator()(double x, double y, double t) const {
    const double theta = omega_ * (y + c_r_ * t);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double e1 = std::exp(-omega_ * mode_.kappa10 * x);
    const double e2 = mode_.coeff * std::exp(-omega_ * mode_.kappa20 * x);
    return {e1 * c + e2 * c, mode_.kappa10 * e1 * s + e2 * s / mode_.kappa20};
  }

  /// T = 2 pi / (omega c_r); equals 1/c_r for unit wave length.
  double period() const { return 2.0 * std::numbers::pi / (omega_ * c_r_); }
  double phase_velocity() const { return c_r_; }
  double omega() const { return omega_; }
  double wavelength() const { return 2.0 * std::numbers::pi / omega_; }
  const RayleighMode& mode() const { return mode_; }
  const Material& material() const { return material_; }

 private:
  Material material_;
  double omega_;
  RayleighMode mode_;
  double c_r_ = 0.0;
};

/// Real plane wave (ax, ay) cos(freq t + kx x + ky y) and its first derivatives.
struct PlaneComponent {
  double ax = 0.0;
  double ay = 0.0;
  double kx = 0.0;
  double ky = 0.0;
  double freq = 0.0;

  double phase(double x, double y, double t) const { return freq * t + kx * x + ky * y; }

  Displacement value(double x, double y, double t) const {
    const double c = std::cos(phase(x, y, t));
    return {ax * c, ay * c};
  }

  /// Returns {u_x, u_y, v_x, v_y}.
  std::array<double, 4> gradient(double x, double y, double t) const {
    const double s = -std::sin(phase(x, y, t));
    return {ax * kx * s, ax * ky * s, ay * kx * s, ay * ky * s};
  }
};

/// Plane body wave on a doubly periodic domain. A P-wave is polarized along the
/// wave vector and travels at cp, an S-wave is polarized across it and travels
/// at cs. Both travel in the direction of -(kx, ky).
class PlaneWave {
 public:
  enum class Kind { p, s };

  PlaneWave(const Material& m, double kx, double ky, Kind kind = Kind::p) {
    const double k = std::hypot(kx, ky);
    if (!(k > 0.0)) throw std::invalid_argument("plane wave needs a nonzero wave vector");
    const double speed = kind == Kind::p ? m.cp() : m.cs();
    component_ = kind == Kind::p ? PlaneComponent{kx / k, ky / k, kx, ky, k * speed}
                                 : PlaneComponent{-ky / k, kx / k, kx, ky, k * speed};
  }

  Displacement operator()(double x, double y, double t) const { return component_.value(x, y, t); }
  double period() const { return 2.0 * std::numbers::pi / component_.freq; }
  const PlaneComponent& component() const { return component_; }

 private:
  PlaneComponent component_;
};

struct Wavelengths {
  double p = 0.0;
  double s = 0.0;
};

/// Body-wave lengths at temporal frequency xi: 2 pi cp / xi and 2 pi cs / xi.
inline Wavelengths wavelengths_at_frequency(const Material& m, double xi) {
  if (!(xi > 0.0)) throw std::invalid_argument("frequency must be positive");
  return {2.0 * std::numbers::pi * m.cp() / xi, 2.0 * std::numbers::pi * m.cs() / xi};
}

/// Wave lengths when the P-wave has a unit wave vector (xi = cp), so L_p = 2 pi
/// and L_s = 2 pi sqrt(mu / (lambda + 2 mu)).
inline Wavelengths wavelengths(const Material& m) { return wavelengths_at_frequency(m, m.cp()); }

/// Incident P-wave hitting the free surface at x = 0, with its reflected P and
/// converted S waves.
///
/// incident:    (k, w) cos(xi t + k x + w y)
/// reflected P: Rp (-k, w) cos(xi t - k x + w y)
/// reflected S: Rs / sqrt(a^2 k^2 + w^2) (-w, -a k) cos(xi t - a k x + w y)
///
/// with k = cos(angle), w = sin(angle), xi = cp and
/// a^2 = 1 + (lambda + mu) / (mu cos^2(angle)).
class ModeConversion {
 public:
  const Material& material() const { return material_; }
  double angle() const { return angle_; }
  double k() const { return k_; }
  double omega_y() const { return omega_y_; }
  double xi() const { return xi_; }
  double alpha() const { return alpha_; }
  double rp() const { return rp_; }
  double rs() const { return rs_; }

  PlaneComponent incident() const { return {k_, omega_y_, k_, omega_y_, xi_}; }
  PlaneComponent reflected_p() const { return {-rp_ * k_, rp_ * omega_y_, -k_, omega_y_, xi_}; }
  PlaneComponent reflected_s() const {
    const double n = std::sqrt(alpha_ * alpha_ * k_ * k_ + omega_y_ * omega_y_);
    return {-rs_ * omega_y_ / n, -rs_ * alpha_ * k_ / n, -alpha_ * k_, omega_y_, xi_};
  }

  Displacement shear_field(double x, double y, double t) const { return reflected_s().value(x, y, t); }

  Displacement total_field(double x, double y, double t) const {
    const auto a = incident().value(x, y, t);
    const auto b = reflected_p().value(x, y, t);
    const auto c = reflected_s().value(x, y, t);
    return {a.u + b.u + c.u, a.v + b.v + c.v};
  }

  /// Traction data at x = 0 that makes the reflected S-wave alone satisfy the
  /// normal-stress conditions: minus the traction of the incident and
  /// reflected P waves.
  Traction forcing(double y, double t) const {
    const auto a = incident().gradient(0.0, y, t);
    const auto b = reflected_p().gradient(0.0, y, t);
    const double g2 = material_.gamma_sq();
    return {-(a[0] + b[0]) - g2 * (a[3] + b[3]), -(a[1] + b[1] + a[2] + b[2])};
  }

  /// Second time derivative of forcing(); every wave oscillates at xi.
  Traction forcing_tt(double y, double t) const {
    const auto g = forcing(y, t);
    return {-xi_ * xi_ * g.g1, -xi_ * xi_ * g.g2};
  }

  /// Temporal period 2 pi / xi.
  double period() const { return 2.0 * std::numbers::pi / xi_; }
  /// Two wave lengths of the incident wave along the surface.
  double y_period() const { return 4.0 * std::numbers::pi / omega_y_; }
  /// Two wave lengths of the incident wave normal to the surface.
  double x_extent() const { return 4.0 * std::numbers::pi / k_; }

 private:
  friend ModeConversion solve_reflection(const Material& m, double angle);

  explicit ModeConversion(const Material& m) : material_(m) {}

  Material material_;
  double angle_ = 0.0;
  double k_ = 1.0;
  double omega_y_ = 0.0;
  double xi_ = 0.0;
  double alpha_ = 0.0;
  double rp_ = 0.0;
  double rs_ = 0.0;
};

/// Traction (u_x + gamma^2 v_y, u_y + v_x) of a plane component at x = 0 in
/// complex amplitude form, i.e. the coefficient of i e^{i(freq t + ky y)}.
inline std::array<double, 2> traction_amplitude(const PlaneComponent& c, double gamma_sq) {
  return {c.kx * c.ax + gamma_sq * c.ky * c.ay, c.ky * c.ax + c.kx * c.ay};
}

/// Builds the three-wave system for incidence angle in [0, pi/2) and
/// determines Rp and Rs from the homogeneous free-surface conditions.
inline ModeConversion solve_reflection(const Material& m, double angle) {
  if (!(angle >= 0.0 && angle < 0.5 * std::numbers::pi)) {
    throw std::invalid_argument("incidence angle must lie in [0, pi/2)");
  }
  ModeConversion mc(m);
  mc.angle_ = angle;
  mc.k_ = std::cos(angle);
  mc.omega_y_ = std::sin(angle);
  mc.xi_ = m.cp();
  mc.alpha_ = std::sqrt(1.0 + (m.lambda() + m.mu()) / (m.mu() * mc.k_ * mc.k_));

  // Unit-amplitude columns for Rp and Rs.
  mc.rp_ = 1.0;
  mc.rs_ = 1.0;
  const double g2 = m.gamma_sq();
  const auto p = traction_amplitude(mc.reflected_p(), g2);
  const auto s = traction_amplitude(mc.reflected_s(), g2);
  const auto in = traction_amplitude(mc.incident(), g2);

  const double det = p[0] * s[1] - p[1] * s[0];
  const double scale = std::abs(p[0] * s[1]) + std::abs(p[1] * s[0]);
  if (!(std::abs(det) > 1e-14 * scale)) {
    throw std::runtime_error("reflection system is singular");
  }
  mc.rp_ = (-in[0] * s[1] + in[1] * s[0]) / det;
  mc.rs_ = (-p[0] * in[1] + p[1] * in[0]) / det;
  return mc;
}

}  // namespace halfplane
