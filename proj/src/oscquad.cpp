#include "osclab/oscquad.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

#include "osclab/error.hpp"

namespace osclab {

// ---------------------------------------------------------------------------
// Amplitudes

namespace {

double rect_distance(Point2 c, const Rect& r) {
  const double dx = std::max({r.x0 - c.x1, 0.0, c.x1 - r.x1});
  const double dy = std::max({r.y0 - c.x2, 0.0, c.x2 - r.y1});
  return std::hypot(dx, dy);
}

}  // namespace

Amplitude Amplitude::bump(Point2 center, double radius) {
  if (!(radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "bump radius must be positive");
  Amplitude a;
  a.terms_.push_back({center, radius, 1.0});
  a.compute_norms();
  return a;
}

double Amplitude::value(Point2 x) const {
  double v = 0.0;
  for (const auto& t : terms_) {
    const double u1 = (x.x1 - t.center.x1) / t.radius, u2 = (x.x2 - t.center.x2) / t.radius;
    const double q = u1 * u1 + u2 * u2;
    if (q < 1.0) v += t.scale * std::exp(1.0 - 1.0 / (1.0 - q));
  }
  return v;
}

Point2 Amplitude::gradient(Point2 x) const {
  Point2 g;
  for (const auto& t : terms_) {
    const double u1 = (x.x1 - t.center.x1) / t.radius, u2 = (x.x2 - t.center.x2) / t.radius;
    const double q = u1 * u1 + u2 * u2;
    if (q >= 1.0) continue;
    const double s = 1.0 / (1.0 - q);
    const double v = t.scale * std::exp(1.0 - s);
    const double f = -2.0 * v * s * s / t.radius;
    g.x1 += f * u1;
    g.x2 += f * u2;
  }
  return g;
}

std::array<double, 3> Amplitude::hessian(Point2 x) const {
  std::array<double, 3> h{};
  for (const auto& t : terms_) {
    const double r = t.radius;
    const double u[2] = {(x.x1 - t.center.x1) / r, (x.x2 - t.center.x2) / r};
    const double q = u[0] * u[0] + u[1] * u[1];
    if (q >= 1.0) continue;
    const double s = 1.0 / (1.0 - q);
    const double v = t.scale * std::exp(1.0 - s);
    auto d = [&](int i, int j) {
      // d/dx_j of -2 v s^2 u_i / r
      const double dv_j = -2.0 * v * s * s * u[j] / r;
      const double ds_j = 2.0 * s * s * u[j] / r;
      return -2.0 / r * (dv_j * s * s * u[i] + v * 2.0 * s * ds_j * u[i] + v * s * s * (i == j ? 1.0 / r : 0.0));
    };
    h[0] += d(0, 0);
    h[1] += d(0, 1);
    h[2] += d(1, 1);
  }
  return h;
}

Rect Amplitude::support_box() const {
  if (terms_.empty()) return {};
  Rect b{1e300, -1e300, 1e300, -1e300};
  for (const auto& t : terms_) {
    b.x0 = std::min(b.x0, t.center.x1 - t.radius);
    b.x1 = std::max(b.x1, t.center.x1 + t.radius);
    b.y0 = std::min(b.y0, t.center.x2 - t.radius);
    b.y1 = std::max(b.y1, t.center.x2 + t.radius);
  }
  return b;
}

bool Amplitude::vanishes_on(const Rect& r) const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [&](const Term& t) { return t.scale == 0.0 || rect_distance(t.center, r) >= t.radius; });
}

Amplitude Amplitude::scaled(double s) const {
  Amplitude a = *this;
  for (auto& t : a.terms_) t.scale *= s;
  a.compute_norms();
  return a;
}

Amplitude operator+(const Amplitude& a, const Amplitude& b) {
  Amplitude c = a;
  c.terms_.insert(c.terms_.end(), b.terms_.begin(), b.terms_.end());
  c.compute_norms();
  return c;
}

void Amplitude::compute_norms() {
  c1_norm_ = c2_norm_ = 0.0;
  if (terms_.empty()) return;
  const Rect b = support_box();
  constexpr int n = 256;
  double m1 = 0.0, m2 = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Point2 x{b.x0 + (b.x1 - b.x0) * i / (n - 1), b.y0 + (b.y1 - b.y0) * j / (n - 1)};
      const Point2 g = gradient(x);
      const double first = std::abs(value(x)) + std::abs(g.x1) + std::abs(g.x2);
      const auto h = hessian(x);
      m1 = std::max(m1, first);
      m2 = std::max(m2, first + std::abs(h[0]) + std::abs(h[1]) + std::abs(h[2]));
    }
  c1_norm_ = 1.5 * m1;
  c2_norm_ = 1.5 * m2;
}

double Bump1d::operator()(double x) const {
  const double u = (x - center) / radius;
  return std::abs(u) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - u * u)) : 0.0;
}

double airy_envelope(double lambda, double sigma) {
  const double l = std::abs(lambda);
  return 1.0 / (std::cbrt(l) + std::sqrt(l) * std::pow(std::abs(sigma), 0.25));
}

// ---------------------------------------------------------------------------
// Panel quadrature

namespace {

constexpr int kNodes = 16;

struct GaussRule {
  std::array<double, kNodes> x{}, w{};

  GaussRule() {
    using G = boost::math::quadrature::gauss<double, kNodes>;
    const auto& a = G::abscissa();
    const auto& wt = G::weights();
    for (int k = 0; k < kNodes / 2; ++k) {
      x[kNodes / 2 + k] = a[k];
      w[kNodes / 2 + k] = wt[k];
      x[kNodes / 2 - 1 - k] = -a[k];
      w[kNodes / 2 - 1 - k] = wt[k];
    }
  }
};

const GaussRule& gauss_rule() {
  static const GaussRule rule;
  return rule;
}

class PhaseEval {
 public:
  explicit PhaseEval(const SmoothFunction2d& f) : f_(f) {
    if (const BivarPoly* p = f.polynomial()) {
      poly_ = true;
      p_ = DensePoly(*p);
      d1_ = DensePoly(partial(*p, 1));
      d2_ = DensePoly(partial(*p, 2));
    }
  }

  double value(double x, double y) const { return poly_ ? p_(x, y) : f_.value({x, y}); }
  Point2 gradient(double x, double y) const {
    if (poly_) return {d1_(x, y), d2_(x, y)};
    return {f_.derivative({x, y}, 1, 0), f_.derivative({x, y}, 0, 1)};
  }
  void tensor(std::span<const double> xs, std::span<const double> ys, std::span<double> out) const {
    if (poly_) {
      p_.eval_tensor(xs, ys, out);
      return;
    }
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t j = 0; j < ys.size(); ++j) out[i * ys.size() + j] = f_.value({xs[i], ys[j]});
  }

 private:
  const SmoothFunction2d& f_;
  bool poly_ = false;
  DensePoly p_, d1_, d2_;
};

std::vector<Rect> build_panels(const PhaseEval& phase, const Weight2d& w, double abs_lambda, double theta,
                               double wthr, int min_depth, long max_panels) {
  std::vector<Rect> leaves;
  if (w.support.empty()) return leaves;
  struct Item {
    Rect r;
    int depth;
  };
  std::vector<Item> stack{{w.support, 0}};
  while (!stack.empty()) {
    const Item it = stack.back();
    stack.pop_back();
    const Rect& r = it.r;
    if (w.vanishes_on && w.vanishes_on(r)) continue;

    const double xm = 0.5 * (r.x0 + r.x1), ym = 0.5 * (r.y0 + r.y1);
    const double xs[3] = {r.x0, xm, r.x1}, ys[3] = {r.y0, ym, r.y1};
    double pmin = 1e300, pmax = -1e300, wmin = 1e300, wmax = -1e300;
    for (double x : xs)
      for (double y : ys) {
        const double p = phase.value(x, y), v = w.value({x, y});
        pmin = std::min(pmin, p);
        pmax = std::max(pmax, p);
        wmin = std::min(wmin, v);
        wmax = std::max(wmax, v);
      }
    const Point2 g = phase.gradient(xm, ym);
    const double linear = std::abs(g.x1) * (r.x1 - r.x0) + std::abs(g.x2) * (r.y1 - r.y0);
    const double range = abs_lambda * std::max(pmax - pmin, linear);

    if ((range > theta || wmax - wmin > wthr || it.depth < min_depth) && it.depth < 48) {
      const Rect q[4] = {{r.x0, xm, r.y0, ym}, {xm, r.x1, r.y0, ym}, {r.x0, xm, ym, r.y1}, {xm, r.x1, ym, r.y1}};
      for (int k = 3; k >= 0; --k) stack.push_back({q[k], it.depth + 1});
    } else {
      leaves.push_back(r);
      if (static_cast<long>(leaves.size()) > max_panels)
        throw Error(ErrorKind::BudgetExceeded, "more than " + std::to_string(max_panels) +
                                                   " panels needed at lambda " + format_real(abs_lambda));
    }
  }
  return leaves;
}

cdouble panel_sum(const PhaseEval& phase, const Weight2d& w, const Rect& r, double lambda) {
  const auto& g = gauss_rule();
  const double hx = 0.5 * (r.x1 - r.x0), hy = 0.5 * (r.y1 - r.y0);
  const double xm = 0.5 * (r.x0 + r.x1), ym = 0.5 * (r.y0 + r.y1);
  std::array<double, kNodes> xs, ys;
  for (int k = 0; k < kNodes; ++k) {
    xs[k] = xm + hx * g.x[k];
    ys[k] = ym + hy * g.x[k];
  }
  std::array<double, kNodes * kNodes> ph;
  phase.tensor(xs, ys, ph);
  double re = 0.0, im = 0.0;
  for (int i = 0; i < kNodes; ++i) {
    double rrow = 0.0, irow = 0.0;
    for (int j = 0; j < kNodes; ++j) {
      const double v = w.value({xs[i], ys[j]});
      if (v == 0.0) continue;
      const double a = lambda * ph[i * kNodes + j];
      rrow += g.w[j] * v * std::cos(a);
      irow += g.w[j] * v * std::sin(a);
    }
    re += g.w[i] * rrow;
    im += g.w[i] * irow;
  }
  return {re * hx * hy, im * hx * hy};
}

cdouble single_pass(const PhaseEval& phase, const Weight2d& w, double lambda, double theta, double wthr,
                    int min_depth, const QuadOptions& opt, long* panels) {
  const std::vector<Rect> leaves = build_panels(phase, w, std::abs(lambda), theta, wthr, min_depth, opt.max_panels);
  const long n = static_cast<long>(leaves.size());
  std::vector<cdouble> parts(leaves.size());
  if (opt.parallel) {
#pragma omp parallel for schedule(dynamic, 64)
    for (long i = 0; i < n; ++i) parts[i] = panel_sum(phase, w, leaves[i], lambda);
  } else {
    for (long i = 0; i < n; ++i) parts[i] = panel_sum(phase, w, leaves[i], lambda);
  }
  cdouble total{};
  for (const auto& p : parts) total += p;
  if (panels) *panels = n;
  return total;
}

}  // namespace

Weight2d amplitude_weight(const Amplitude& amp) {
  return {[amp](Point2 x) { return amp.value(x); }, amp.support_box(),
          [amp](const Rect& r) { return amp.vanishes_on(r); }};
}

cdouble integrate_fixed(const SmoothFunction2d& phase, const Weight2d& w, double lambda, const QuadOptions& opt,
                        long* panels) {
  const PhaseEval pe(phase);
  return single_pass(pe, w, lambda, opt.theta, opt.weight_variation, opt.min_depth, opt, panels);
}

QuadResult integrate_weighted(const SmoothFunction2d& phase, const Weight2d& w, double lambda, double tol,
                              const QuadOptions& opt) {
  if (!(tol >= 1e-12)) throw Error(ErrorKind::InvalidArgument, "quadrature tol must be >= 1e-12");
  if (!(opt.theta > 0.0)) throw Error(ErrorKind::InvalidArgument, "theta must be positive");
  const PhaseEval pe(phase);
  const double root2 = std::sqrt(2.0);
  double theta = opt.theta;
  double wthr = opt.weight_variation;
  int depth = std::max(opt.min_depth, 1);
  long panels = 0;
  cdouble coarse = single_pass(pe, w, lambda, theta * root2, wthr * root2, depth - 1, opt, &panels);
  while (true) {
    const cdouble fine = single_pass(pe, w, lambda, theta, wthr, depth, opt, &panels);
    const double est = std::abs(fine - coarse);
    if (est <= tol || theta < 0.5) return {fine, est, panels};
    coarse = fine;
    theta /= root2;
    wthr /= root2;
    ++depth;
  }
}

QuadResult integrate_2d(const SmoothFunction2d& phase, const Amplitude& amp, double lambda, double tol,
                        const QuadOptions& opt) {
  return integrate_weighted(phase, amplitude_weight(amp), lambda, tol, opt);
}

QuadResult integrate_2d_serial(const SmoothFunction2d& phase, const Amplitude& amp, double lambda, double tol,
                               QuadOptions opt) {
  opt.parallel = false;
  return integrate_weighted(phase, amplitude_weight(amp), lambda, tol, opt);
}

// ---------------------------------------------------------------------------
// One dimension

namespace {

cdouble single_pass_1d(const std::function<double(double)>& phase, const Bump1d& amp, double lambda, double theta,
                       double wthr, long max_panels, long* panels) {
  const auto& g = gauss_rule();
  std::vector<std::pair<double, double>> stack{{amp.center - amp.radius, amp.center + amp.radius}};
  std::vector<std::pair<double, double>> leaves;
  while (!stack.empty()) {
    const auto [a, b] = stack.back();
    stack.pop_back();
    double pmin = 1e300, pmax = -1e300, wmin = 1e300, wmax = -1e300;
    for (int k = 0; k <= 8; ++k) {
      const double x = a + (b - a) * k / 8.0;
      const double p = phase(x), v = amp(x);
      pmin = std::min(pmin, p);
      pmax = std::max(pmax, p);
      wmin = std::min(wmin, v);
      wmax = std::max(wmax, v);
    }
    const double range = std::abs(lambda) * (pmax - pmin);
    if ((range > theta || wmax - wmin > wthr) && b - a > 1e-12) {
      const double m = 0.5 * (a + b);
      stack.push_back({m, b});
      stack.push_back({a, m});
    } else {
      leaves.push_back({a, b});
      if (static_cast<long>(leaves.size()) > max_panels)
        throw Error(ErrorKind::BudgetExceeded, "too many 1d panels");
    }
  }
  cdouble total{};
  for (const auto& [a, b] : leaves) {
    const double h = 0.5 * (b - a), m = 0.5 * (a + b);
    cdouble s{};
    for (int k = 0; k < kNodes; ++k) {
      const double x = m + h * g.x[k];
      const double v = amp(x);
      if (v == 0.0) continue;
      const double arg = lambda * phase(x);
      s += g.w[k] * v * cdouble(std::cos(arg), std::sin(arg));
    }
    total += h * s;
  }
  if (panels) *panels = static_cast<long>(leaves.size());
  return total;
}

}  // namespace

QuadResult integrate_1d(const std::function<double(double)>& phase, const Bump1d& amp, double lambda, double tol,
                        const QuadOptions& opt) {
  if (!(tol >= 1e-12)) throw Error(ErrorKind::InvalidArgument, "quadrature tol must be >= 1e-12");
  if (!(amp.radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "bump radius must be positive");
  const double root2 = std::sqrt(2.0);
  double theta = opt.theta, wthr = opt.weight_variation;
  long panels = 0;
  cdouble coarse = single_pass_1d(phase, amp, lambda, theta * root2, wthr * root2, opt.max_panels, &panels);
  while (true) {
    const cdouble fine = single_pass_1d(phase, amp, lambda, theta, wthr, opt.max_panels, &panels);
    const double est = std::abs(fine - coarse);
    if (est <= tol || theta < 0.5) return {fine, est, panels};
    coarse = fine;
    theta /= root2;
    wthr /= root2;
  }
}

}  // namespace osclab
