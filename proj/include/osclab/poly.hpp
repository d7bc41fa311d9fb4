#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace osclab {

struct Point2 {
  double x1 = 0.0;
  double x2 = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x1, s * a.x2}; }
  friend bool operator==(Point2, Point2) = default;
};

double norm(Point2 p);

/// Row-major 2x2 real matrix acting on column vectors.
struct Mat2 {
  double a11 = 1.0, a12 = 0.0;
  double a21 = 0.0, a22 = 1.0;

  static Mat2 identity() { return {}; }
  static Mat2 rotation(double angle);
  double det() const { return a11 * a22 - a12 * a21; }
  Mat2 inverse() const;
  Point2 apply(Point2 u) const { return {a11 * u.x1 + a12 * u.x2, a21 * u.x1 + a22 * u.x2}; }
  friend Mat2 operator*(const Mat2& a, const Mat2& b);
};

/// Exact sparse bivariate polynomial: (i, j) -> coefficient of x1^i x2^j.
/// Zero coefficients are never stored.
class BivarPoly {
 public:
  using Exponent = std::pair<int, int>;
  using TermMap = std::map<Exponent, double>;

  BivarPoly() = default;

  static BivarPoly constant(double c);
  static BivarPoly monomial(double c, int i, int j);
  static BivarPoly x1() { return monomial(1.0, 1, 0); }
  static BivarPoly x2() { return monomial(1.0, 0, 1); }

  /// Adds c to the coefficient of x1^i x2^j, dropping the term if it cancels.
  void add_term(int i, int j, double c);
  double coefficient(int i, int j) const;
  const TermMap& terms() const { return terms_; }

  /// Total degree; -1 for the zero polynomial.
  int degree() const;
  int degree_x1() const;
  int degree_x2() const;
  bool is_zero() const { return terms_.empty(); }

  BivarPoly operator-() const;
  BivarPoly& operator+=(const BivarPoly& other);
  BivarPoly& operator-=(const BivarPoly& other);
  BivarPoly& operator*=(double s);
  friend BivarPoly operator+(BivarPoly a, const BivarPoly& b) { return a += b; }
  friend BivarPoly operator-(BivarPoly a, const BivarPoly& b) { return a -= b; }
  friend BivarPoly operator*(const BivarPoly& a, const BivarPoly& b);
  friend BivarPoly operator*(double s, BivarPoly a) { return a *= s; }
  friend bool operator==(const BivarPoly&, const BivarPoly&) = default;

 private:
  TermMap terms_;
};

/// Horner in x1 over Horner-in-x2 inner sums; the summation order is fixed by
/// the lexicographic term order.
double eval(const BivarPoly& p, Point2 x);

BivarPoly partial(const BivarPoly& p, int axis);
BivarPoly derivative(const BivarPoly& p, int a, int b);
BivarPoly homogeneous_part(const BivarPoly& p, int d);
bool is_quasi_homogeneous(const BivarPoly& p, double w1, double w2, double d, double tol);

/// p(shift + T u) as a polynomial in u.
BivarPoly substitute_affine(const BivarPoly& p, Point2 shift, const Mat2& T);
inline BivarPoly shifted(const BivarPoly& p, Point2 z) { return substitute_affine(p, z, Mat2::identity()); }

/// Polynomial text format: sum of terms `c*x1^i*x2^j`; `*` and `^1` optional.
BivarPoly parse_poly(std::string_view text);
std::string format_poly(const BivarPoly& p);
/// Shortest decimal form that parses back to the same double.
std::string format_real(double v);

struct Box {
  double half_width = 0.5;

  Box() = default;
  explicit Box(double w);
  bool contains(Point2 p) const;
};

struct NormBound {
  double bound = 0.0;     // rigorous coefficient-sum bound
  double grid_max = 0.0;  // lattice maximum (a lower estimate of the sup)
};

/// ||p||_{C^N} on the box, max over the box of sum_{|alpha|<=N} |D^alpha p|.
NormBound c_norm_report(const BivarPoly& p, int N, const Box& box, int grid);
inline double c_norm(const BivarPoly& p, int N, const Box& box, int grid = 16) {
  return c_norm_report(p, N, box, grid).bound;
}

/// Dense coefficient table for fast repeated evaluation on tensor grids.
class DensePoly {
 public:
  DensePoly() = default;
  explicit DensePoly(const BivarPoly& p);

  double operator()(double x1, double x2) const;
  /// out[i * ys.size() + j] = p(xs[i], ys[j])
  void eval_tensor(std::span<const double> xs, std::span<const double> ys, std::span<double> out) const;
  int degree_x1() const { return nx_ - 1; }
  int degree_x2() const { return ny_ - 1; }

 private:
  int nx_ = 0;
  int ny_ = 0;
  std::vector<double> c_;  // c_[i * ny_ + j] multiplies x1^i x2^j
};

/// A real function of two variables with evaluable partial derivatives.
/// Polynomials differentiate exactly; callables use 4th-order central
/// stencils and support derivatives up to `max_order`.
class SmoothFunction2d {
 public:
  static SmoothFunction2d from_polynomial(BivarPoly p);
  static SmoothFunction2d from_callable(std::function<double(Point2)> f, int max_order = 4,
                                        double step = 1e-3);

  double value(Point2 x) const;
  double derivative(Point2 x, int a, int b) const;
  /// -1 means unbounded (polynomial).
  int max_order() const { return poly_ ? -1 : max_order_; }
  const BivarPoly* polynomial() const { return poly_ ? &*poly_ : nullptr; }
  double step() const { return step_; }

 private:
  std::optional<BivarPoly> poly_;
  std::function<double(Point2)> fn_;
  int max_order_ = 4;
  double step_ = 1e-3;
};

/// Central finite-difference estimate of D^(a,b) f(x), 4th order, a, b <= 4.
double fd_derivative(const std::function<double(Point2)>& f, Point2 x, int a, int b, double h);

/// Taylor data of a phase about a center, standard normalization D^a/a!.
struct TaylorData {
  Point2 center{};
  double s00 = 0.0;
  double s10 = 0.0, s01 = 0.0;
  double s20 = 0.0, s11 = 0.0, s02 = 0.0;
  double s30 = 0.0, s21 = 0.0, s12 = 0.0, s03 = 0.0;
  BivarPoly quartic_part;
  double remainder_bound = 0.0;
  bool remainder_rigorous = true;

  double coefficient(int i, int j) const;
};

TaylorData taylor_data(const BivarPoly& f_pi, const SmoothFunction2d& g_plus_F, Point2 center,
                       const Box& box = Box{});

/// rho = |s10|^{4/3}+|s01|^{4/3}+|s20|^2+|s02|^2+|s11|^2+|s30|^4+|s03|^4
double quasi_distance(const TaylorData& t);

}  // namespace osclab
