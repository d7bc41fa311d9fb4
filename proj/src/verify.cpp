#include "osclab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "osclab/center.hpp"
#include "osclab/error.hpp"

namespace osclab {

std::vector<double> LambdaGrid::values() const {
  if (points < 1) throw Error(ErrorKind::InvalidArgument, "lambda grid needs at least one point");
  if (!(min > 0.0) || !(max >= min)) throw Error(ErrorKind::InvalidArgument, "lambda grid needs 0 < min <= max");
  std::vector<double> v(points);
  if (points == 1) {
    v[0] = min;
    return v;
  }
  const double lmin = std::log(min), lmax = std::log(max);
  for (int i = 0; i < points; ++i) v[i] = std::exp(lmin + (lmax - lmin) * i / (points - 1));
  v.front() = min;
  v.back() = max;
  return v;
}

BivarPoly sample_perturbation(double epsilon, const Box& box, std::uint64_t seed, int id) {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(id)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  BivarPoly F;
  for (int d = 0; d <= 7; ++d)
    for (int i = d; i >= 0; --i) F.add_term(i, d - i, u(rng));
  const double n = c_norm(F, 8, box);
  F *= 0.5 * epsilon / n;
  return F;
}

namespace {

struct LineFit {
  double slope = 0.0, intercept = 0.0, ssr = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    f.ssr += r * r;
  }
  return f;
}

}  // namespace

DecayFit decay_fit(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 6)
    throw Error(ErrorKind::InsufficientRange, "decay fit needs at least 6 points, got " + std::to_string(samples.size()));
  double lo = 1e300, hi = 0.0;
  for (const auto& [l, m] : samples) {
    if (!(l > 1.0)) throw Error(ErrorKind::InvalidArgument, "decay fit needs lambda > 1");
    if (!(m > 0.0)) throw Error(ErrorKind::NonPositiveMagnitude, "magnitude " + format_real(m) + " at lambda " + format_real(l));
    lo = std::min(lo, l);
    hi = std::max(hi, l);
  }
  if (std::log10(hi / lo) < 2.0 - 1e-9)
    throw Error(ErrorKind::InsufficientRange, "lambda range spans fewer than 2 decades");

  std::vector<double> x, y0, y1;
  for (const auto& [l, m] : samples) {
    x.push_back(std::log(l));
    y0.push_back(std::log(m));
    y1.push_back(std::log(m) - std::log(std::log(l)));
  }
  const LineFit f0 = fit_line(x, y0), f1 = fit_line(x, y1);
  DecayFit out;
  out.residual_p0 = f0.ssr;
  out.residual_p1 = f1.ssr;
  out.beta_p0 = f0.slope;
  out.beta_p1 = f1.slope;
  out.p_hat = f1.ssr < f0.ssr ? 1 : 0;
  const LineFit& best = out.p_hat == 1 ? f1 : f0;
  out.beta_hat = best.slope;
  out.c_hat = std::exp(best.intercept);
  return out;
}

double loglog_slope(const std::vector<double>& lambdas, const std::vector<double>& values) {
  if (lambdas.size() != values.size() || lambdas.size() < 2)
    throw Error(ErrorKind::InsufficientRange, "slope needs at least two points");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!(values[i] > 0.0)) throw Error(ErrorKind::NonPositiveMagnitude, "non-positive value in slope fit");
    x.push_back(std::log(lambdas[i]));
    y.push_back(std::log(values[i]));
  }
  return fit_line(x, y).slope;
}

SweepResult uniform_sweep(const SweepConfig& cfg) {
  if (!(cfg.epsilon > 0.0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
  if (cfg.grid.min < 2.0) throw Error(ErrorKind::InvalidArgument, "lambda grid must start at >= 2");
  if (cfg.n_perturbations < 0) throw Error(ErrorKind::InvalidArgument, "n_perturbations must be >= 0");
  const Box box(cfg.box);
  const Amplitude amp = Amplitude::bump({0.0, 0.0}, cfg.amp_radius);

  SweepResult res;
  res.lambdas = cfg.grid.values();
  res.a_c1 = amp.c1_norm();
  res.a_c2 = amp.c2_norm();
  const int npert = std::max(cfg.n_perturbations, 1);

  struct Prepared {
    SmoothFunction2d phase;
    TaylorData taylor;
    bool fallback = false;
    std::string error;
  };
  std::vector<Prepared> prepared;
  for (int id = 0; id < npert; ++id) {
    BivarPoly rest = cfg.g;
    if (cfg.n_perturbations > 0) rest += sample_perturbation(cfg.epsilon, box, cfg.seed, id);
    Prepared p{SmoothFunction2d::from_polynomial(cfg.f_pi + rest), {}, false, {}};
    Point2 z{};
    try {
      z = newton_center(p.phase, {}, 1e-12, 50, box).z;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SingularJacobian && e.kind() != ErrorKind::NoConvergence) throw;
      p.fallback = true;
      p.error = e.what();
    }
    p.taylor = taylor_data(cfg.f_pi, SmoothFunction2d::from_polynomial(rest), z, box);
    prepared.push_back(std::move(p));
  }

  DyadicConfig dcfg;
  dcfg.tol = cfg.tol;
  dcfg.quad = cfg.quad;
  for (std::size_t li = 0; li < res.lambdas.size(); ++li) {
    const double lambda = res.lambdas[li];
    for (int id = 0; id < npert; ++id) {
      const Prepared& p = prepared[id];
      SweepRow row;
      row.lambda = lambda;
      row.pert_id = id;
      row.center_fallback = p.fallback;
      try {
        cdouble j;
        if (cfg.use_dyadic) {
          j = dyadic_integrate(p.taylor, p.phase, amp, lambda, dcfg).total();
          if (static_cast<int>(li) < cfg.cross_check) {
            const cdouble direct = integrate_2d(p.phase, amp, lambda, cfg.tol, cfg.quad).value;
            res.max_cross_check_rel = std::max(res.max_cross_check_rel, std::abs(j - direct) / std::abs(direct));
          }
        } else {
          j = integrate_2d(p.phase, amp, lambda, cfg.tol, cfg.quad).value;
        }
        row.abs_j = std::abs(j);
        row.normalized = std::sqrt(lambda) * row.abs_j / (res.a_c1 * std::log(2.0 + lambda));
      } catch (const Error& e) {
        row.failed = true;
        row.error = e.what();
        ++res.failures;
      }
      res.rows.push_back(row);
    }
  }
  for (const auto& p : prepared) res.center_fallbacks += p.fallback ? 1 : 0;

  std::vector<std::pair<double, double>> fit_samples;
  for (std::size_t li = 0; li < res.lambdas.size(); ++li) {
    double sup_n = 0.0, sup_a = 0.0;
    bool complete = true;
    for (int id = 0; id < npert; ++id) {
      const SweepRow& r = res.rows[li * npert + id];
      if (r.failed) {
        complete = false;
        continue;
      }
      sup_n = std::max(sup_n, r.normalized);
      sup_a = std::max(sup_a, r.abs_j);
    }
    res.sup_curve.push_back(sup_n);
    res.sup_abs.push_back(sup_a);
    if (complete) fit_samples.emplace_back(res.lambdas[li], sup_a);
  }
  try {
    res.fit = decay_fit(fit_samples);
    res.fit_ok = true;
  } catch (const Error& e) {
    res.fit_error = e.what();
  }
  return res;
}

double uniformity_ratio(const SweepResult& r) {
  if (r.sup_curve.empty()) throw Error(ErrorKind::InsufficientRange, "empty sweep");
  double top = 0.0;
  for (const auto& row : r.rows)
    if (!row.failed) top = std::max(top, row.normalized);
  std::vector<double> s = r.sup_curve;
  std::sort(s.begin(), s.end());
  const std::size_t n = s.size();
  const double median = n % 2 ? s[n / 2] : 0.5 * (s[n / 2 - 1] + s[n / 2]);
  return top / median;
}

LimitCheck limit_check(const BivarPoly& f_pi, const Amplitude& amp, const LambdaGrid& grid, double tol,
                       const QuadOptions& quad) {
  LimitCheck out;
  out.lambdas = grid.values();
  if (grid.points < 2 || std::log10(grid.max / grid.min) < 2.0 - 1e-9)
    throw Error(ErrorKind::InsufficientRange, "limit check needs a grid spanning 2 decades");
  const SmoothFunction2d phase = SmoothFunction2d::from_polynomial(f_pi);
  for (double l : out.lambdas) {
    const double a = std::abs(integrate_2d(phase, amp, l, tol, quad).value);
    out.abs_j.push_back(a);
    out.stat.push_back(std::sqrt(l) * a / std::log(l));
  }
  const double top = out.lambdas.back();
  std::size_t ref = 0;
  for (std::size_t i = 0; i < out.lambdas.size(); ++i)
    if (std::abs(std::log(out.lambdas[i] / (top / 10.0))) < std::abs(std::log(out.lambdas[ref] / (top / 10.0))))
      ref = i;
  out.c_estimate = out.stat.back();
  out.convergence_ratio = out.stat.back() / out.stat[ref];
  return out;
}

double airy_peak(double lambda, double sigma, const Bump1d& amp, int samples, double tol) {
  const auto phase = [sigma](double x) { return x * x * x + sigma * x; };
  if (sigma >= 0.0) return std::abs(integrate_1d(phase, amp, lambda, tol).value);
  const double gap = 4.0 * std::pow(-sigma, 1.5) / (3.0 * std::sqrt(3.0));
  const double period = 2.0 * std::numbers::pi / gap;
  double m = 0.0;
  for (int k = 0; k < samples; ++k)
    m = std::max(m, std::abs(integrate_1d(phase, amp, lambda + period * k / samples, tol).value));
  return m;
}

AirySweep airy_sweep(const std::vector<double>& lambdas, const std::vector<double>& sigmas, const Bump1d& amp,
                     double tol) {
  if (lambdas.empty() || sigmas.empty()) throw Error(ErrorKind::InvalidArgument, "airy grids must be nonempty");
  AirySweep out;
  out.lambdas = lambdas;
  out.sigmas = sigmas;
  for (double s : sigmas) {
    std::vector<double> col, rat;
    for (double l : lambdas) {
      if (!(l >= 2.0)) throw Error(ErrorKind::InvalidArgument, "airy sweep needs lambda >= 2");
      const auto phase = [s](double x) { return x * x * x + s * x; };
      const double a = std::abs(integrate_1d(phase, amp, l, tol).value);
      col.push_back(a);
      rat.push_back(a / airy_envelope(l, s));
      out.C = std::max(out.C, rat.back());
    }
    out.abs_j.push_back(col);
    out.ratio.push_back(rat);
  }
  const auto lmin = std::min_element(lambdas.begin(), lambdas.end()) - lambdas.begin();
  for (std::size_t i = 0; i < sigmas.size(); ++i)
    if (sigmas[i] == 0.0) out.ratio_ref = out.ratio[i][lmin];
  return out;
}

}  // namespace osclab
