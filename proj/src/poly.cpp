#include "osclab/poly.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "osclab/error.hpp"

namespace osclab {

double norm(Point2 p) { return std::hypot(p.x1, p.x2); }

Mat2 Mat2::rotation(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c, -s, s, c};
}

Mat2 Mat2::inverse() const {
  const double d = det();
  if (d == 0.0) throw Error(ErrorKind::InvalidArgument, "singular 2x2 matrix");
  return {a22 / d, -a12 / d, -a21 / d, a11 / d};
}

Mat2 operator*(const Mat2& a, const Mat2& b) {
  return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
          a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
}

// ---------------------------------------------------------------------------
// BivarPoly

BivarPoly BivarPoly::constant(double c) { return monomial(c, 0, 0); }

BivarPoly BivarPoly::monomial(double c, int i, int j) {
  BivarPoly p;
  p.add_term(i, j, c);
  return p;
}

void BivarPoly::add_term(int i, int j, double c) {
  if (i < 0 || j < 0) throw Error(ErrorKind::InvalidArgument, "negative exponent");
  if (c == 0.0) return;
  auto [it, inserted] = terms_.try_emplace({i, j}, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double BivarPoly::coefficient(int i, int j) const {
  auto it = terms_.find({i, j});
  return it == terms_.end() ? 0.0 : it->second;
}

int BivarPoly::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, e.first + e.second);
  return d;
}

int BivarPoly::degree_x1() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, e.first);
  return d;
}

int BivarPoly::degree_x2() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, e.second);
  return d;
}

BivarPoly BivarPoly::operator-() const {
  BivarPoly r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

BivarPoly& BivarPoly::operator+=(const BivarPoly& other) {
  for (const auto& [e, c] : other.terms_) add_term(e.first, e.second, c);
  return *this;
}

BivarPoly& BivarPoly::operator-=(const BivarPoly& other) {
  for (const auto& [e, c] : other.terms_) add_term(e.first, e.second, -c);
  return *this;
}

BivarPoly& BivarPoly::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

BivarPoly operator*(const BivarPoly& a, const BivarPoly& b) {
  BivarPoly r;
  for (const auto& [ea, ca] : a.terms())
    for (const auto& [eb, cb] : b.terms()) r.add_term(ea.first + eb.first, ea.second + eb.second, ca * cb);
  return r;
}

double eval(const BivarPoly& p, Point2 x) {
  if (p.is_zero()) return 0.0;
  // Terms are sorted by (i, j); walk the x1-degree groups from the top.
  const auto& terms = p.terms();
  double acc = 0.0;
  int current_i = terms.rbegin()->first.first;
  auto it = terms.rbegin();
  while (current_i >= 0) {
    double inner = 0.0;
    if (it != terms.rend() && it->first.first == current_i) {
      int current_j = it->first.second;
      while (current_j >= 0) {
        double c = 0.0;
        if (it != terms.rend() && it->first.first == current_i && it->first.second == current_j) {
          c = it->second;
          ++it;
        }
        inner = inner * x.x2 + c;
        --current_j;
      }
    }
    acc = acc * x.x1 + inner;
    --current_i;
  }
  return acc;
}

BivarPoly partial(const BivarPoly& p, int axis) {
  if (axis != 1 && axis != 2) throw Error(ErrorKind::InvalidArgument, "axis must be 1 or 2");
  BivarPoly r;
  for (const auto& [e, c] : p.terms()) {
    if (axis == 1 && e.first > 0) r.add_term(e.first - 1, e.second, c * e.first);
    if (axis == 2 && e.second > 0) r.add_term(e.first, e.second - 1, c * e.second);
  }
  return r;
}

namespace {

double falling_factorial(int n, int k) {
  double r = 1.0;
  for (int m = 0; m < k; ++m) r *= static_cast<double>(n - m);
  return r;
}

double factorial(int n) { return falling_factorial(n, n); }

}  // namespace

BivarPoly derivative(const BivarPoly& p, int a, int b) {
  BivarPoly r;
  for (const auto& [e, c] : p.terms()) {
    if (e.first < a || e.second < b) continue;
    r.add_term(e.first - a, e.second - b, c * falling_factorial(e.first, a) * falling_factorial(e.second, b));
  }
  return r;
}

BivarPoly homogeneous_part(const BivarPoly& p, int d) {
  BivarPoly r;
  for (const auto& [e, c] : p.terms())
    if (e.first + e.second == d) r.add_term(e.first, e.second, c);
  return r;
}

bool is_quasi_homogeneous(const BivarPoly& p, double w1, double w2, double d, double tol) {
  if (!(w1 > 0.0) || !(w2 > 0.0)) throw Error(ErrorKind::InvalidArgument, "weights must be positive");
  return std::all_of(p.terms().begin(), p.terms().end(), [&](const auto& t) {
    return std::abs(w1 * t.first.first + w2 * t.first.second - d) <= tol;
  });
}

BivarPoly substitute_affine(const BivarPoly& p, Point2 shift, const Mat2& T) {
  if (p.is_zero()) return {};
  BivarPoly l1 = BivarPoly::constant(shift.x1);
  l1.add_term(1, 0, T.a11);
  l1.add_term(0, 1, T.a12);
  BivarPoly l2 = BivarPoly::constant(shift.x2);
  l2.add_term(1, 0, T.a21);
  l2.add_term(0, 1, T.a22);

  const int d1 = p.degree_x1(), d2 = p.degree_x2();
  std::vector<BivarPoly> pow1(d1 + 1), pow2(d2 + 1);
  pow1[0] = BivarPoly::constant(1.0);
  pow2[0] = BivarPoly::constant(1.0);
  for (int k = 1; k <= d1; ++k) pow1[k] = pow1[k - 1] * l1;
  for (int k = 1; k <= d2; ++k) pow2[k] = pow2[k - 1] * l2;

  BivarPoly r;
  for (const auto& [e, c] : p.terms()) r += c * (pow1[e.first] * pow2[e.second]);
  return r;
}

// ---------------------------------------------------------------------------
// Text format

std::string format_real(double v) {
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

namespace {

class PolyParser {
 public:
  explicit PolyParser(std::string_view s) : s_(s) {}

  BivarPoly parse() {
    BivarPoly result;
    skip_ws();
    if (at_end()) fail("empty polynomial");
    bool first = true;
    while (true) {
      skip_ws();
      if (at_end()) break;
      double sign = 1.0;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1.0 : 1.0;
        ++pos_;
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      parse_term(sign, result);
      first = false;
    }
    return result;
  }

 private:
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::ParseError, what + " at offset " + std::to_string(pos_) + " in '" +
                                           std::string(s_) + "'");
  }

  void parse_term(double sign, BivarPoly& out) {
    skip_ws();
    double coeff = 1.0;
    bool any = false;
    if (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.')) {
      coeff = parse_number();
      any = true;
    }
    int i = 0, j = 0;
    while (true) {
      skip_ws();
      if (at_end()) break;
      if (peek() == '*') {
        if (!any) fail("dangling '*'");
        ++pos_;
        skip_ws();
        if (at_end() || peek() != 'x') fail("expected variable after '*'");
      }
      if (peek() != 'x') break;
      ++pos_;
      if (at_end() || (peek() != '1' && peek() != '2')) fail("expected x1 or x2");
      const int var = peek() - '0';
      ++pos_;
      int power = 1;
      skip_ws();
      if (!at_end() && peek() == '^') {
        ++pos_;
        skip_ws();
        power = parse_int();
      }
      (var == 1 ? i : j) += power;
      any = true;
    }
    if (!any) fail("expected a term");
    out.add_term(i, j, sign * coeff);
  }

  double parse_number() {
    const std::size_t start = pos_;
    while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.')) ++pos_;
    if (!at_end() && (peek() == 'e' || peek() == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (!at_end() && (peek() == '+' || peek() == '-')) ++pos_;
      if (at_end() || !std::isdigit(static_cast<unsigned char>(peek()))) {
        pos_ = save;
      } else {
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      }
    }
    const std::string token(s_.substr(start, pos_ - start));
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size()) fail("malformed number '" + token + "'");
    return v;
  }

  int parse_int() {
    const std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_) fail("expected integer exponent");
    int v = 0;
    std::from_chars(s_.data() + start, s_.data() + pos_, v);
    return v;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

BivarPoly parse_poly(std::string_view text) { return PolyParser(text).parse(); }

std::string format_poly(const BivarPoly& p) {
  if (p.is_zero()) return "0";
  std::vector<std::pair<BivarPoly::Exponent, double>> terms(p.terms().begin(), p.terms().end());
  std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    const int da = a.first.first + a.first.second, db = b.first.first + b.first.second;
    if (da != db) return da > db;
    return a.first.first > b.first.first;
  });
  std::string out;
  bool first = true;
  for (const auto& [e, c] : terms) {
    const double mag = std::abs(c);
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    first = false;
    std::string mono;
    auto append_var = [&](const char* name, int k) {
      if (k == 0) return;
      if (!mono.empty()) mono += "*";
      mono += name;
      if (k > 1) mono += "^" + std::to_string(k);
    };
    append_var("x1", e.first);
    append_var("x2", e.second);
    if (mono.empty()) {
      out += format_real(mag);
    } else if (mag == 1.0) {
      out += mono;
    } else {
      out += format_real(mag) + "*" + mono;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Box and norms

Box::Box(double w) : half_width(w) {
  if (!(w > 0.0)) throw Error(ErrorKind::InvalidArgument, "box half-width must be positive");
}

bool Box::contains(Point2 p) const { return std::abs(p.x1) <= half_width && std::abs(p.x2) <= half_width; }

NormBound c_norm_report(const BivarPoly& p, int N, const Box& box, int grid) {
  if (grid < 16) throw Error(ErrorKind::InvalidArgument, "c_norm grid must be >= 16");
  if (N < 0) throw Error(ErrorKind::InvalidArgument, "norm order must be nonnegative");
  NormBound out;
  if (p.is_zero()) return out;
  const double w = box.half_width;

  std::vector<BivarPoly> derivs;
  for (int a = 0; a <= N; ++a)
    for (int b = 0; a + b <= N; ++b) {
      BivarPoly d = derivative(p, a, b);
      if (d.is_zero()) continue;
      for (const auto& [e, c] : d.terms()) out.bound += std::abs(c) * std::pow(w, e.first + e.second);
      derivs.push_back(std::move(d));
    }

  std::vector<DensePoly> dense(derivs.begin(), derivs.end());
  for (int ix = 0; ix < grid; ++ix) {
    const double x1 = -w + 2.0 * w * ix / (grid - 1);
    for (int iy = 0; iy < grid; ++iy) {
      const double x2 = -w + 2.0 * w * iy / (grid - 1);
      double s = 0.0;
      for (const auto& d : dense) s += std::abs(d(x1, x2));
      out.grid_max = std::max(out.grid_max, s);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// DensePoly

DensePoly::DensePoly(const BivarPoly& p) {
  if (p.is_zero()) {
    nx_ = ny_ = 1;
    c_.assign(1, 0.0);
    return;
  }
  nx_ = p.degree_x1() + 1;
  ny_ = p.degree_x2() + 1;
  c_.assign(static_cast<std::size_t>(nx_ * ny_), 0.0);
  for (const auto& [e, c] : p.terms()) c_[e.first * ny_ + e.second] = c;
}

double DensePoly::operator()(double x1, double x2) const {
  double acc = 0.0;
  for (int i = nx_ - 1; i >= 0; --i) {
    const double* row = &c_[i * ny_];
    double inner = 0.0;
    for (int j = ny_ - 1; j >= 0; --j) inner = inner * x2 + row[j];
    acc = acc * x1 + inner;
  }
  return acc;
}

void DensePoly::eval_tensor(std::span<const double> xs, std::span<const double> ys, std::span<double> out) const {
  const std::size_t m = ys.size();
  // q[i][k] = sum_j c[i][j] ys[k]^j
  thread_local std::vector<double> q;
  q.resize(static_cast<std::size_t>(nx_) * m);
  for (int i = 0; i < nx_; ++i) {
    const double* row = &c_[i * ny_];
    for (std::size_t k = 0; k < m; ++k) {
      double inner = 0.0;
      for (int j = ny_ - 1; j >= 0; --j) inner = inner * ys[k] + row[j];
      q[i * m + k] = inner;
    }
  }
  for (std::size_t a = 0; a < xs.size(); ++a) {
    const double x = xs[a];
    double* dst = &out[a * m];
    for (std::size_t k = 0; k < m; ++k) dst[k] = q[(nx_ - 1) * m + k];
    for (int i = nx_ - 2; i >= 0; --i) {
      const double* qi = &q[i * m];
      for (std::size_t k = 0; k < m; ++k) dst[k] = dst[k] * x + qi[k];
    }
  }
}

// ---------------------------------------------------------------------------
// Finite differences and smooth functions

namespace {

// 4th-order central stencils, offsets -3..3.
constexpr std::array<std::array<double, 7>, 5> kStencil = {{
    {0, 0, 0, 1, 0, 0, 0},
    {0, 1.0 / 12, -8.0 / 12, 0, 8.0 / 12, -1.0 / 12, 0},
    {0, -1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12, 0},
    {1.0 / 8, -8.0 / 8, 13.0 / 8, 0, -13.0 / 8, 8.0 / 8, -1.0 / 8},
    {-1.0 / 6, 12.0 / 6, -39.0 / 6, 56.0 / 6, -39.0 / 6, 12.0 / 6, -1.0 / 6},
}};

}  // namespace

double fd_derivative(const std::function<double(Point2)>& f, Point2 x, int a, int b, double h) {
  if (a < 0 || b < 0 || a > 4 || b > 4)
    throw Error(ErrorKind::DifferentiationFailure, "finite-difference order per axis must be <= 4");
  double acc = 0.0;
  for (int k = 0; k < 7; ++k) {
    const double wk = kStencil[a][k];
    if (wk == 0.0) continue;
    for (int l = 0; l < 7; ++l) {
      const double wl = kStencil[b][l];
      if (wl == 0.0) continue;
      acc += wk * wl * f({x.x1 + (k - 3) * h, x.x2 + (l - 3) * h});
    }
  }
  return acc / (std::pow(h, a) * std::pow(h, b));
}

SmoothFunction2d SmoothFunction2d::from_polynomial(BivarPoly p) {
  SmoothFunction2d f;
  f.poly_ = std::move(p);
  return f;
}

SmoothFunction2d SmoothFunction2d::from_callable(std::function<double(Point2)> fn, int max_order, double step) {
  if (!fn) throw Error(ErrorKind::InvalidArgument, "empty callable");
  if (!(step > 0.0)) throw Error(ErrorKind::InvalidArgument, "finite-difference step must be positive");
  SmoothFunction2d f;
  f.fn_ = std::move(fn);
  f.max_order_ = std::min(max_order, 8);
  f.step_ = step;
  return f;
}

double SmoothFunction2d::value(Point2 x) const { return poly_ ? eval(*poly_, x) : fn_(x); }

double SmoothFunction2d::derivative(Point2 x, int a, int b) const {
  if (poly_) return eval(osclab::derivative(*poly_, a, b), x);
  if (a + b > max_order_)
    throw Error(ErrorKind::DifferentiationFailure,
                "derivative of order " + std::to_string(a + b) + " unavailable (max " +
                    std::to_string(max_order_) + ")");
  return fd_derivative(fn_, x, a, b, step_);
}

// ---------------------------------------------------------------------------
// Taylor data

double TaylorData::coefficient(int i, int j) const {
  switch (i * 10 + j) {
    case 0: return s00;
    case 10: return s10;
    case 1: return s01;
    case 20: return s20;
    case 11: return s11;
    case 2: return s02;
    case 30: return s30;
    case 21: return s21;
    case 12: return s12;
    case 3: return s03;
    default: break;
  }
  if (i + j == 4) return quartic_part.coefficient(i, j);
  throw Error(ErrorKind::InvalidArgument, "Taylor coefficient index out of range");
}

namespace {

void assign_low_order(TaylorData& t, const std::function<double(int, int)>& coeff) {
  t.s00 = coeff(0, 0);
  t.s10 = coeff(1, 0);
  t.s01 = coeff(0, 1);
  t.s20 = coeff(2, 0);
  t.s11 = coeff(1, 1);
  t.s02 = coeff(0, 2);
  t.s30 = coeff(3, 0);
  t.s21 = coeff(2, 1);
  t.s12 = coeff(1, 2);
  t.s03 = coeff(0, 3);
}

}  // namespace

TaylorData taylor_data(const BivarPoly& f_pi, const SmoothFunction2d& g_plus_F, Point2 center, const Box& box) {
  TaylorData t;
  t.center = center;
  // The remainder is bounded over every displacement that keeps center + y
  // inside the box.
  const double w = box.half_width + std::max(std::abs(center.x1), std::abs(center.x2));

  if (const BivarPoly* gp = g_plus_F.polynomial()) {
    const BivarPoly local = shifted(f_pi + *gp, center);
    assign_low_order(t, [&](int i, int j) { return local.coefficient(i, j); });
    t.quartic_part = homogeneous_part(local, 4);
    for (const auto& [e, c] : local.terms())
      if (e.first + e.second >= 5) t.remainder_bound += std::abs(c) * std::pow(w, e.first + e.second);
    t.remainder_rigorous = true;
    return t;
  }

  if (g_plus_F.max_order() < 4)
    throw Error(ErrorKind::DifferentiationFailure, "Taylor data needs derivatives through order 4");
  const BivarPoly local_pi = shifted(f_pi, center);
  auto coeff = [&](int i, int j) {
    return local_pi.coefficient(i, j) + g_plus_F.derivative(center, i, j) / (factorial(i) * factorial(j));
  };
  assign_low_order(t, coeff);
  for (int i = 0; i <= 4; ++i) t.quartic_part.add_term(i, 4 - i, coeff(i, 4 - i));

  // Sampled estimate of |phase - Taylor_4| on the box; not a certificate.
  BivarPoly taylor4 = t.quartic_part;
  for (int i = 0; i <= 3; ++i)
    for (int j = 0; i + j <= 3; ++j) taylor4.add_term(i, j, t.coefficient(i, j));
  double worst = 0.0;
  constexpr int kGrid = 17;
  for (int a = 0; a < kGrid; ++a)
    for (int b = 0; b < kGrid; ++b) {
      const Point2 y{-w + 2.0 * w * a / (kGrid - 1), -w + 2.0 * w * b / (kGrid - 1)};
      const double full = eval(f_pi, center + y) + g_plus_F.value(center + y);
      worst = std::max(worst, std::abs(full - eval(taylor4, y)));
    }
  t.remainder_bound = 1.5 * worst;
  t.remainder_rigorous = false;
  return t;
}

double quasi_distance(const TaylorData& t) {
  auto p = [](double v, double e) { return std::pow(std::abs(v), e); };
  return p(t.s10, 4.0 / 3.0) + p(t.s01, 4.0 / 3.0) + t.s20 * t.s20 + t.s02 * t.s02 + t.s11 * t.s11 +
         p(t.s30, 4.0) + p(t.s03, 4.0);
}

}  // namespace osclab
