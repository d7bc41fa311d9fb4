#include "osclab/dyadic.hpp"

#include <algorithm>
#include <cmath>

#include "osclab/error.hpp"

namespace osclab {

double CutoffProfile::operator()(double s) const {
  if (s <= 0.0) return 1.0;
  if (s >= 1.0) return 0.0;
  const double a = std::exp(-1.0 / (1.0 - s)), b = std::exp(-1.0 / s);
  return a / (a + b);
}

Point2 dilate(double r, Point2 x) {
  if (!(r > 0.0)) throw Error(ErrorKind::InvalidArgument, "dilation parameter must be positive");
  const double f = std::pow(r, 0.25);
  return {f * x.x1, f * x.x2};
}

double beta_cutoff(const CutoffProfile& h, Point2 x) {
  const double q = x.x1 * x.x1 + x.x2 * x.x2;
  if (q <= 1.0) return 1.0;
  if (q >= std::sqrt(2.0)) return 0.0;
  return h((q - 1.0) / (std::sqrt(2.0) - 1.0));
}

double chi(const CutoffProfile& h, Point2 x) { return beta_cutoff(h, x) - beta_cutoff(h, dilate(2.0, x)); }

std::vector<double> partition_weights(const CutoffProfile& h, Point2 x, int nu0, int K) {
  if (K < nu0) throw Error(ErrorKind::InvalidArgument, "K must be >= nu0");
  std::vector<double> w;
  w.reserve(K - nu0 + 1);
  double prev = beta_cutoff(h, dilate(std::exp2(-nu0), x));
  w.push_back(prev);
  for (int nu = nu0 + 1; nu <= K; ++nu) {
    const double cur = beta_cutoff(h, dilate(std::exp2(-nu), x));
    w.push_back(cur - prev);
    prev = cur;
  }
  return w;
}

const char* regime_name(Regime r) { return r == Regime::LowRho ? "LowRho" : "HighRho"; }

cdouble RingDecomposition::total() const {
  cdouble s = j0;
  for (const auto& [k, v] : rings) s += v;
  return s;
}

int ring_count(double lambda, const DyadicConfig& cfg) {
  const int k = static_cast<int>(std::ceil(cfg.ring_constant * std::log(std::abs(lambda))));
  return std::max(cfg.nu0, std::min(k, cfg.max_rings));
}

namespace {

double rect_min_radius(const Rect& r) {
  const double dx = std::max({r.x0, 0.0, -r.x1});
  const double dy = std::max({r.y0, 0.0, -r.y1});
  return std::hypot(dx, dy);
}

double rect_max_radius(const Rect& r) {
  return std::hypot(std::max(std::abs(r.x0), std::abs(r.x1)), std::max(std::abs(r.y0), std::abs(r.y1)));
}

Rect intersect(const Rect& a, const Rect& b) {
  return {std::max(a.x0, b.x0), std::min(a.x1, b.x1), std::max(a.y0, b.y0), std::min(a.y1, b.y1)};
}

}  // namespace

RingDecomposition dyadic_integrate(const TaylorData& t, const SmoothFunction2d& phase, const Amplitude& amp,
                                   double lambda, const DyadicConfig& cfg) {
  if (!(std::abs(lambda) >= 2.0)) throw Error(ErrorKind::InvalidArgument, "dyadic_integrate needs |lambda| >= 2");
  RingDecomposition out;
  out.nu0 = cfg.nu0;
  out.K = ring_count(lambda, cfg);
  out.rho = quasi_distance(t);
  const double L = std::abs(lambda);

  out.regime = L * out.rho <= 2.0 ? Regime::LowRho : Regime::HighRho;
  if (cfg.request_high_rho) {
    if (out.rho > 0.0)
      out.regime = Regime::HighRho;
    else
      out.rho_degenerate = true;
  }
  out.scale = out.regime == Regime::LowRho ? std::pow(L, -0.25) : std::pow(out.rho, 0.25);

  if (out.rho > 0.0) {
    const double r34 = std::pow(out.rho, 0.75), r12 = std::sqrt(out.rho), r14 = std::pow(out.rho, 0.25);
    out.sigma = {t.s10 / r34, t.s01 / r34, t.s20 / r12, t.s11 / r12, t.s02 / r12, t.s30 / r14, t.s03 / r14};
    const auto& s = out.sigma;
    out.quasisphere_sum = std::pow(std::abs(s[0]), 4.0 / 3.0) + std::pow(std::abs(s[1]), 4.0 / 3.0) + s[2] * s[2] +
                          s[3] * s[3] + s[4] * s[4] + std::pow(s[5], 4.0) + std::pow(s[6], 4.0);
  }

  const Point2 z = t.center;
  const Rect sb = amp.support_box();
  double reach = 0.0;
  for (const auto& term : amp.terms()) reach = std::max(reach, norm(term.center - z) + term.radius);
  out.covers_support = out.scale * std::pow(2.0, out.K / 4.0) >= reach;

  const CutoffProfile h;
  const double outer = std::pow(2.0, 0.25), inner = std::pow(2.0, -0.25);
  const int pieces = out.K - out.nu0 + 1;

  auto piece = [&](int k, bool central) {
    const double c = out.scale * std::pow(2.0, k / 4.0);
    const double jac = c * c;
    SmoothFunction2d local = phase.polynomial()
                                 ? SmoothFunction2d::from_polynomial(
                                       substitute_affine(*phase.polynomial(), z, Mat2{c, 0.0, 0.0, c}))
                                 : SmoothFunction2d::from_callable(
                                       [&phase, z, c](Point2 u) { return phase.value(z + c * u); }, 4);
    const Rect pre{(sb.x0 - z.x1) / c, (sb.x1 - z.x1) / c, (sb.y0 - z.x2) / c, (sb.y1 - z.x2) / c};
    Weight2d w;
    w.support = intersect(pre, Rect{-outer, outer, -outer, outer});
    w.value = [&amp, &h, z, c, central](Point2 u) {
      const double cut = central ? beta_cutoff(h, u) : chi(h, u);
      return cut == 0.0 ? 0.0 : cut * amp.value(z + c * u);
    };
    w.vanishes_on = [&amp, z, c, central, outer, inner](const Rect& r) {
      if (rect_min_radius(r) >= outer) return true;
      if (!central && rect_max_radius(r) <= inner) return true;
      return amp.vanishes_on({z.x1 + c * r.x0, z.x1 + c * r.x1, z.x2 + c * r.y0, z.x2 + c * r.y1});
    };
    if (w.support.empty()) return cdouble{};
    const QuadResult q = integrate_weighted(local, w, lambda, std::max(1e-12, cfg.tol / pieces / jac), cfg.quad);
    out.abs_error_estimate += q.abs_error_estimate * jac;
    out.panels += q.panels;
    return jac * q.value;
  };

  out.j0 = piece(out.nu0, true);
  for (int k = out.nu0 + 1; k <= out.K; ++k) out.rings.emplace_back(k, piece(k, false));
  return out;
}

}  // namespace osclab
