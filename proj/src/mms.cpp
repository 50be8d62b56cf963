#include "svcip/mms.hpp"

#include <cmath>

namespace svcip {

ExactValues ManufacturedSolution::eval(double x, double y, double t) const {
  const double g = amplitude(t);
  const double gt = amplitude_dt(t);
  const double pi = M_PI;

  const double sx = std::sin(pi * x), cx = std::cos(pi * x);
  const double s2x = std::sin(2.0 * pi * x), c2x = std::cos(2.0 * pi * x);
  const double yy = y * (1.0 - y);       // Y
  const double dyy = 1.0 - 2.0 * y;      // Y'
  const double pp = yy * dyy;            // P = Y Y'
  const double dpp = dyy * dyy - 2.0 * yy;  // P'

  ExactValues v;
  v.u.x() = 16.0 * g * sx * sx * pp;
  v.u.y() = -8.0 * pi * g * s2x * yy * yy;
  v.p = g * sx * std::cos(pi * y);

  v.grad_u(0, 0) = 16.0 * pi * g * s2x * pp;
  v.grad_u(0, 1) = 16.0 * g * sx * sx * dpp;
  v.grad_u(1, 0) = -16.0 * pi * pi * g * c2x * yy * yy;
  v.grad_u(1, 1) = -16.0 * pi * g * s2x * pp;

  v.lap_u.x() = 32.0 * pi * pi * g * c2x * pp - 96.0 * g * sx * sx * dyy;
  v.lap_u.y() = 32.0 * pi * pi * pi * g * s2x * yy * yy - 16.0 * pi * g * s2x * dpp;

  v.u_t.x() = 16.0 * gt * sx * sx * pp;
  v.u_t.y() = -8.0 * pi * gt * s2x * yy * yy;

  v.grad_p.x() = pi * g * cx * std::cos(pi * y);
  v.grad_p.y() = -pi * g * sx * std::sin(pi * y);
  return v;
}

Eigen::Vector2d ManufacturedSolution::forcing(double x, double y, double t, double nu) const {
  const ExactValues v = eval(x, y, t);
  return v.u_t - nu * v.lap_u + v.grad_u * v.u + v.grad_p;
}

VectorField ManufacturedSolution::velocity_at(double t) const {
  return [this, t](double x, double y) { return eval(x, y, t).u; };
}

ScalarField ManufacturedSolution::pressure_at(double t) const {
  return [this, t](double x, double y) { return eval(x, y, t).p; };
}

VectorField ManufacturedSolution::forcing_at(double t, double nu) const {
  return [this, t, nu](double x, double y) { return forcing(x, y, t, nu); };
}

std::function<Eigen::Matrix2d(double, double)> ManufacturedSolution::velocity_gradient_at(double t) const {
  return [this, t](double x, double y) { return eval(x, y, t).grad_u; };
}

Eigen::Vector2d gradient_perturbation(double amplitude, double x, double y) {
  const double pi = M_PI;
  return {amplitude * pi * std::cos(pi * x) * std::cos(pi * y),
          -amplitude * pi * std::sin(pi * x) * std::sin(pi * y)};
}

double gradient_perturbation_potential(double amplitude, double x, double y) {
  return amplitude * std::sin(M_PI * x) * std::cos(M_PI * y);
}

}  // namespace svcip
