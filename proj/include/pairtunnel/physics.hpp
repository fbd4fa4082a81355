#pragma once

#include <cmath>
#include <numbers>

#include "pairtunnel/errors.hpp"

namespace pairtunnel {

// Optical constants of the paraxial equation i lambda_bar d_z psi = H psi,
// H = -(lambda_bar^2 / 2 n_s) Laplacian + V. Lengths in micrometers.
class PhysicsConstants {
 public:
  PhysicsConstants() : PhysicsConstants(0.633, 1.45) {}
  PhysicsConstants(double lambda_um, double n_s) : lambda_(lambda_um), n_s_(n_s) {
    if (!(lambda_um > 0.0) || !std::isfinite(lambda_um))
      throw ConfigError("wavelength must be positive");
    if (!(n_s > 0.0) || !std::isfinite(n_s)) throw ConfigError("substrate index must be positive");
    lambda_bar_ = lambda_um / (2.0 * std::numbers::pi);
  }

  double lambda() const { return lambda_; }
  double lambda_bar() const { return lambda_bar_; }
  double n_s() const { return n_s_; }

  // Coefficient of -Laplacian in H, in um^2.
  double kinetic_coefficient() const { return lambda_bar_ * lambda_bar_ / (2.0 * n_s_); }

 private:
  double lambda_;
  double n_s_;
  double lambda_bar_;
};

}  // namespace pairtunnel
