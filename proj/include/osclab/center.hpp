#pragma once

#include <array>

#include "osclab/poly.hpp"

namespace osclab {

struct CenterResult {
  Point2 z{};
  int iterations = 0;
  double residual = 0.0;
};

/// Taylor coefficients of y1^2 y2 and y1 y2^2 in phase(z + y).
std::array<double, 2> mixed_cubic_coeffs(const SmoothFunction2d& phase, Point2 z);

/// Damped Newton on the two mixed cubic coefficients, starting from z0.
CenterResult newton_center(const SmoothFunction2d& phase, Point2 z0 = {}, double tol = 1e-12, int max_iter = 50,
                           const Box& box = Box{});

}  // namespace osclab
