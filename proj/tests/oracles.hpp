#pragma once

// Reference values computed without the panel quadrature: polar reduction for
// homogeneous phases with a radial bump, Hankel transform for a linear phase,
// and plain adaptive Gauss-Kronrod in one dimension.

#include <cmath>
#include <complex>
#include <functional>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

namespace oracle {

using cd = std::complex<double>;

inline double radial_bump(double r, double R) {
  const double t = r / R;
  if (t >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

// n equal pieces of 30-point Gauss-Legendre, each piece holding under one radian of phase
inline cd gl_split(const std::function<cd(double)>& f, double a, double b, int n) {
  using boost::math::quadrature::gauss;
  cd s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double lo = a + (b - a) * i / n, hi = a + (b - a) * (i + 1) / n;
    s += cd(gauss<double, 30>::integrate([&](double x) { return f(x).real(); }, lo, hi),
            gauss<double, 30>::integrate([&](double x) { return f(x).imag(); }, lo, hi));
  }
  return s;
}

// J for a phase g(theta) r^d and the radial bump of radius R, via
// trapezoid in theta (periodic, spectrally accurate) and adaptive GK in r.
inline cd polar(const std::function<double(double)>& g, int d, double R, double lambda, int n_theta = 2048) {
  cd sum = 0.0;
  const double h = 2.0 * M_PI / n_theta;
  for (int k = 0; k < n_theta; ++k) {
    const double c = g(k * h);
    const int pieces = 32 + static_cast<int>(std::abs(lambda * c) * std::pow(R, d) * d);
    sum += gl_split([&](double r) { return radial_bump(r, R) * r * std::exp(cd(0.0, lambda * c * std::pow(r, d))); },
                    0.0, R, pieces);
  }
  return sum * h;
}

// f(cos t, sin t) for a homogeneous quartic a40 x^4 + a31 x^3 y + a22 x^2 y^2 + a13 x y^3 + a04 y^4
inline std::function<double(double)> quartic_on_circle(double a40, double a31, double a22, double a13, double a04) {
  return [=](double t) {
    const double c = std::cos(t), s = std::sin(t);
    return a40 * c * c * c * c + a31 * c * c * c * s + a22 * c * c * s * s + a13 * c * s * s * s + a04 * s * s * s * s;
  };
}

// Integral of the radial bump against exp(i lambda x1): 2 pi int a(r) J0(lambda r) r dr.
inline double hankel_linear(double R, double lambda) {
  using boost::math::quadrature::gauss_kronrod;
  const auto f = [&](double r) { return radial_bump(r, R) * boost::math::cyl_bessel_j(0, lambda * r) * r; };
  return 2.0 * M_PI * gauss_kronrod<double, 61>::integrate(f, 0.0, R, 20, 1e-13);
}

// 1D bump times exp(i lambda phase) on [c - r, c + r].
inline cd line(const std::function<double(double)>& phase, double c, double r, double lambda) {
  const auto f = [&](double x) {
    const double t = (x - c) / r;
    const double a = std::abs(t) >= 1.0 ? 0.0 : std::exp(1.0 - 1.0 / (1.0 - t * t));
    return a * std::exp(cd(0.0, lambda * phase(x)));
  };
  return gl_split(f, c - r, c + r, 64 + static_cast<int>(8.0 * std::abs(lambda) * r * r * r));
}

}  // namespace oracle
