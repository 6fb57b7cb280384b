#pragma once

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace halfplane {

/// Ratio λ/μ of the Lamé parameters. Infinity is a valid value and stands
/// for the incompressible limit μ → 0 at fixed λ.
class LameRatio {
 public:
  constexpr explicit LameRatio(double lam_over_mu) : value_(lam_over_mu) {
    if (!(lam_over_mu >= 0.0)) {
      throw std::invalid_argument("lambda/mu must be non-negative");
    }
  }

  static constexpr LameRatio infinite() {
    return LameRatio(std::numeric_limits<double>::infinity());
  }

  constexpr double value() const { return value_; }
  bool is_infinite() const { return std::isinf(value_); }

  /// μ/(λ+2μ) = 1/(λ/μ + 2); exactly zero in the incompressible limit.
  double shear_fraction() const { return is_infinite() ? 0.0 : 1.0 / (value_ + 2.0); }

 private:
  double value_;
};

/// Homogeneous isotropic material with unit density.
class Material {
 public:
  Material(double lambda, double mu) : lambda_(lambda), mu_(mu) {
    if (!(lambda > 0.0) || !(mu > 0.0) || !std::isfinite(lambda) || !std::isfinite(mu)) {
      std::ostringstream msg;
      msg << "invalid material: lambda=" << lambda << ", mu=" << mu
          << " (both must be finite and positive)";
      throw std::invalid_argument(msg.str());
    }
  }

  double lambda() const { return lambda_; }
  double mu() const { return mu_; }

  /// λ + 2μ
  double p_modulus() const { return lambda_ + 2.0 * mu_; }
  double cp() const { return std::sqrt(p_modulus()); }
  double cs() const { return std::sqrt(mu_); }
  /// γ² = λ/(λ+2μ)
  double gamma_sq() const { return lambda_ / p_modulus(); }

  LameRatio ratio() const { return LameRatio(lambda_ / mu_); }

 private:
  double lambda_;
  double mu_;
};

}  // namespace halfplane
