#pragma once

#include <functional>

#include "pcad/geometry.hpp"

namespace pcad {

// Truncation box for hypothetical ("imaginary") velocities, in the road
// frame: x in [backward, forward], y in [right, left], all m/s.
struct VelocityBounds {
  double forward = 30.0;
  double backward = -10.0;
  double left = 6.0;
  double right = -6.0;
};

// Zero-mean Gaussian density truncated to [lo, hi]; zero outside.
double truncated_normal_pdf(double x, double sigma, double lo, double hi);

// Mean of a zero-mean Gaussian truncated to [0, hi] (half-normal when
// hi -> inf). Closed form used as a test oracle for the quadrature path.
double truncated_half_normal_mean(double sigma, double hi);

// Length at which the ray l * direction (l >= 0) leaves the box. Finite for
// any nonzero direction.
double ray_exit_length(const Vec2& direction, const VelocityBounds& bounds);

// Adaptive Gauss-Kronrod (G7/K15) quadrature of f over [a, b].
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-8, double abs_tol = 1e-300);

// Expected speed along `direction` (unit vector) of a 2D random velocity
// whose components are independent zero-mean Gaussians truncated to the
// bounds box, conditioned on the velocity lying on that ray:
//   E = Int_0^L l f(l) dl / Int_0^L f(l) dl,  f(l) = D_x(l u_x) D_y(l u_y),
// with L the ray/box exit length. Returns 0 when the density degenerates to
// a point mass at the origin (sigma zero along every used axis).
double imaginary_speed_expectation(const Vec2& direction, double sigma_x, double sigma_y,
                                   const VelocityBounds& bounds);

}  // namespace pcad
