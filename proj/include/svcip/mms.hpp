// Manufactured solution for the unit-square transient benchmark: a
// divergence-free velocity with zero boundary trace, a trigonometric
// pressure, hand-coded derivatives, and the consistent forcing term.

#ifndef SVCIP_MMS_HPP
#define SVCIP_MMS_HPP

#include <Eigen/Dense>

#include "svcip/fem.hpp"

namespace svcip {

struct ExactValues {
  Eigen::Vector2d u;
  double p = 0.0;
  Eigen::Matrix2d grad_u;  // (i,j) = d u_i / d x_j
  Eigen::Vector2d lap_u;
  Eigen::Vector2d u_t;
  Eigen::Vector2d grad_p;
};

/// u = g(t) * [16 sin^2(pi x) y(1-y)(1-2y), -8 pi sin(2 pi x) (y(1-y))^2],
/// p = g(t) sin(pi x) cos(pi y), with g(t) = (6 + 4 cos(4t)) / 10.
class ManufacturedSolution {
 public:
  ExactValues eval(double x, double y, double t) const;

  /// f = u_t - nu lap(u) + (u . grad) u + grad p
  Eigen::Vector2d forcing(double x, double y, double t, double nu) const;

  VectorField velocity_at(double t) const;
  ScalarField pressure_at(double t) const;
  VectorField forcing_at(double t, double nu) const;

  /// Row-major 2x2 gradient closure, for Stokes-projection right-hand sides.
  std::function<Eigen::Matrix2d(double, double)> velocity_gradient_at(double t) const;

  static double amplitude(double t) { return (6.0 + 4.0 * std::cos(4.0 * t)) / 10.0; }
  static double amplitude_dt(double t) { return -1.6 * std::sin(4.0 * t); }
};

/// grad(amplitude * sin(pi x) cos(pi y)); an irrotational body-force term.
Eigen::Vector2d gradient_perturbation(double amplitude, double x, double y);

/// The potential itself, for assembling the perturbation through integration
/// by parts against div(v).
double gradient_perturbation_potential(double amplitude, double x, double y);

}  // namespace svcip

#endif
