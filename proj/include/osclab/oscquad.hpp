#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "osclab/poly.hpp"

namespace osclab {

using cdouble = std::complex<double>;

struct Rect {
  double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;

  bool empty() const { return !(x1 > x0) || !(y1 > y0); }
};

/// Sum of compactly supported bumps  s * exp(1 - 1/(1 - |(x - c)/r|^2)).
class Amplitude {
 public:
  struct Term {
    Point2 center;
    double radius = 1.0;
    double scale = 1.0;
  };

  Amplitude() = default;
  static Amplitude bump(Point2 center, double radius);

  double value(Point2 x) const;
  Point2 gradient(Point2 x) const;
  /// {d11, d12, d22}
  std::array<double, 3> hessian(Point2 x) const;

  Rect support_box() const;
  bool vanishes_on(const Rect& r) const;
  const std::vector<Term>& terms() const { return terms_; }

  Amplitude scaled(double s) const;
  friend Amplitude operator+(const Amplitude& a, const Amplitude& b);

  double c1_norm() const { return c1_norm_; }
  double c2_norm() const { return c2_norm_; }

 private:
  void compute_norms();

  std::vector<Term> terms_;
  double c1_norm_ = 0.0;
  double c2_norm_ = 0.0;
};

inline Amplitude bump_amplitude(Point2 center, double radius) { return Amplitude::bump(center, radius); }

/// One-dimensional bump exp(1 - 1/(1 - ((x - c)/r)^2)).
struct Bump1d {
  double center = 0.0;
  double radius = 1.0;

  double operator()(double x) const;
};

struct QuadResult {
  cdouble value{};
  double abs_error_estimate = 0.0;
  long panels = 0;
};

struct QuadOptions {
  double theta = 20.0;            // max lambda * phase range per leaf panel, in radians
  double weight_variation = 0.1;  // max weight spread per leaf panel at the base theta
  int min_depth = 4;               // every leaf is at least this many bisections deep
  long max_panels = 1L << 22;
  bool parallel = true;
};

/// Real weight on the plane with a bounding rectangle and an exact emptiness test.
struct Weight2d {
  std::function<double(Point2)> value;
  Rect support;
  std::function<bool(const Rect&)> vanishes_on;
};

/// Integral of w(x) exp(i lambda phase(x)) over w's support.  Two-level
/// refinement in theta; the estimate is the difference between the levels.
QuadResult integrate_weighted(const SmoothFunction2d& phase, const Weight2d& w, double lambda, double tol,
                              const QuadOptions& opt = {});

QuadResult integrate_2d(const SmoothFunction2d& phase, const Amplitude& amp, double lambda, double tol,
                        const QuadOptions& opt = {});
QuadResult integrate_2d_serial(const SmoothFunction2d& phase, const Amplitude& amp, double lambda, double tol,
                               QuadOptions opt = {});

/// Single pass at a fixed theta, no error estimate; the benchmark kernel.
cdouble integrate_fixed(const SmoothFunction2d& phase, const Weight2d& w, double lambda, const QuadOptions& opt,
                        long* panels = nullptr);

Weight2d amplitude_weight(const Amplitude& amp);

QuadResult integrate_1d(const std::function<double(double)>& phase, const Bump1d& amp, double lambda, double tol,
                        const QuadOptions& opt = {});

/// 1 / (|lambda|^{1/3} + |lambda|^{1/2} |sigma|^{1/4})
double airy_envelope(double lambda, double sigma);

}  // namespace osclab
