#include "osclab/classify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>
#include <optional>

#include "osclab/error.hpp"

namespace osclab {

namespace {

constexpr double kPi = std::numbers::pi;

double binom(int n, int k) {
  double r = 1.0;
  for (int m = 1; m <= k; ++m) r = r * (n - k + m) / m;
  return r;
}

}  // namespace

QuarticForm QuarticForm::from_poly(const BivarPoly& p) {
  if (p.is_zero()) throw Error(ErrorKind::InvalidArgument, "zero quartic form");
  if (!(homogeneous_part(p, 4) == p))
    throw Error(ErrorKind::InvalidArgument, "not a homogeneous quartic: " + format_poly(p));
  return {p.coefficient(4, 0), p.coefficient(3, 1), p.coefficient(2, 2), p.coefficient(1, 3),
          p.coefficient(0, 4)};
}

BivarPoly QuarticForm::to_poly() const {
  BivarPoly p;
  p.add_term(4, 0, a40);
  p.add_term(3, 1, a31);
  p.add_term(2, 2, a22);
  p.add_term(1, 3, a13);
  p.add_term(0, 4, a04);
  return p;
}

double QuarticForm::operator()(Point2 x) const {
  const double u = x.x1, v = x.x2;
  return (((a40 * u + a31 * v) * u + a22 * v * v) * u + a13 * v * v * v) * u + a04 * v * v * v * v;
}

double QuarticForm::max_abs() const {
  return std::max({std::abs(a40), std::abs(a31), std::abs(a22), std::abs(a13), std::abs(a04)});
}

QuarticForm pull_back(const QuarticForm& f, const Mat2& T) {
  // (t11 u1 + t12 u2)^i (t21 u1 + t22 u2)^j expanded into u1^k u2^(4-k).
  const std::array<double, 5> a = {f.a04, f.a13, f.a22, f.a31, f.a40};  // index = power of x1
  std::array<double, 5> out{};                                         // index = power of u1
  for (int i = 0; i <= 4; ++i) {
    const int j = 4 - i;
    if (a[i] == 0.0) continue;
    std::array<double, 5> li{}, lj{};
    for (int k = 0; k <= i; ++k)
      li[k] = binom(i, k) * std::pow(T.a11, k) * std::pow(T.a12, i - k);
    for (int k = 0; k <= j; ++k)
      lj[k] = binom(j, k) * std::pow(T.a21, k) * std::pow(T.a22, j - k);
    for (int k = 0; k <= i; ++k)
      for (int l = 0; l <= j; ++l) out[k + l] += a[i] * li[k] * lj[l];
  }
  return {out[4], out[3], out[2], out[1], out[0]};
}

// ---------------------------------------------------------------------------
// Roots on the circle

namespace {

// g(theta) = f(cos, sin) / max|a| = c0 + sum_{k=2,4} A_k cos(k theta) + B_k sin(k theta)
struct CircleTrig {
  double c0 = 0.0;
  std::array<double, 2> A{}, B{};

  explicit CircleTrig(const QuarticForm& f) {
    const double m = f.max_abs();
    constexpr int n = 16;
    for (int s = 0; s < n; ++s) {
      const double t = 2.0 * kPi * s / n;
      const double g = f({std::cos(t), std::sin(t)}) / m;
      c0 += g / n;
      for (int h = 0; h < 2; ++h) {
        const int k = 2 * (h + 1);
        A[h] += 2.0 * g * std::cos(k * t) / n;
        B[h] += 2.0 * g * std::sin(k * t) / n;
      }
    }
  }

  double deriv(double theta, int d) const {
    double v = d == 0 ? c0 : 0.0;
    for (int h = 0; h < 2; ++h) {
      const int k = 2 * (h + 1);
      const double arg = k * theta + d * kPi / 2.0;
      v += std::pow(k, d) * (A[h] * std::cos(arg) + B[h] * std::sin(arg));
    }
    return v;
  }
};

double wrap_pi(double a) {
  a = std::fmod(a, kPi);
  if (a < 0) a += kPi;
  if (a < 1e-12 || kPi - a < 1e-12) a = 0.0;
  return a;
}

double circular_gap(double a, double b) {
  const double d = std::abs(a - b);
  return std::min(d, kPi - d);
}

struct Candidate {
  double angle;
  int order;  // derivative whose sign change located it
  int multiplicity = 0;
};

}  // namespace

std::vector<CircleRoot> circle_roots(const QuarticForm& f, double tol) {
  if (!(tol > 0.0) || tol > 1e-4) throw Error(ErrorKind::InvalidArgument, "circle_roots tol must lie in (0, 1e-4]");
  if (f.max_abs() == 0.0) throw Error(ErrorKind::InvalidArgument, "zero quartic form");
  const CircleTrig g(f);

  constexpr int kScan = 4096;
  const double h = kPi / kScan;
  const double offset = 0.123456789 * h;

  // Roots of g^(d+1) split the grid so that g^(d) is monotone on every cell;
  // close root pairs of g^(d) inside one grid cell are then still bracketed.
  std::vector<double> grid;
  for (int s = 0; s <= kScan; ++s) grid.push_back(offset + s * h);
  std::vector<double> below;
  std::vector<Candidate> cands;
  for (int d = 4; d >= 0; --d) {
    auto fn = [&](double t) { return g.deriv(t, d); };
    std::vector<double> pts = grid;
    for (double r : below) {
      double t = r;
      while (t < offset) t += kPi;
      while (t > offset + kPi) t -= kPi;
      pts.push_back(t);
    }
    std::sort(pts.begin(), pts.end());
    std::vector<double> found;
    double t0 = pts.front(), v0 = fn(t0);
    for (std::size_t s = 1; s < pts.size(); ++s) {
      const double t1 = pts[s], v1 = fn(t1);
      if (v0 == 0.0) {
        found.push_back(t0);
      } else if (v0 * v1 < 0.0) {
        std::uintmax_t iters = 200;
        auto [lo, hi] = boost::math::tools::toms748_solve(fn, t0, t1, v0, v1,
                                                          boost::math::tools::eps_tolerance<double>(), iters);
        found.push_back(std::abs(fn(lo)) <= std::abs(fn(hi)) ? lo : hi);
      }
      t0 = t1;
      v0 = v1;
    }
    if (d <= 3)
      for (double r : found) cands.push_back({wrap_pi(r), d});
    below = std::move(found);
  }

  auto multiplicity_at = [&](double t) {
    for (int j = 0; j <= 4; ++j)
      if (std::abs(g.deriv(t, j)) > tol * std::pow(4.0, j)) return j;
    return 5;
  };

  std::vector<Candidate> kept;
  for (auto c : cands) {
    if (std::abs(g.deriv(c.angle, 0)) > tol) continue;
    c.multiplicity = multiplicity_at(c.angle);
    kept.push_back(c);
  }
  std::sort(kept.begin(), kept.end(), [](const Candidate& a, const Candidate& b) { return a.angle < b.angle; });

  // Cluster candidates that locate the same root.
  std::vector<std::vector<Candidate>> clusters;
  for (const auto& c : kept) {
    if (!clusters.empty() && circular_gap(clusters.back().back().angle, c.angle) < 1e-5)
      clusters.back().push_back(c);
    else
      clusters.push_back({c});
  }
  if (clusters.size() > 1 && circular_gap(clusters.front().front().angle, clusters.back().back().angle) < 1e-5) {
    clusters.front().insert(clusters.front().end(), clusters.back().begin(), clusters.back().end());
    clusters.pop_back();
  }

  std::vector<CircleRoot> roots;
  int total = 0;
  for (const auto& cl : clusters) {
    int m = 0;
    for (const auto& c : cl) m = std::max(m, c.multiplicity);
    const Candidate* best = &cl.front();
    for (const auto& c : cl)
      if (c.multiplicity == m && (best->multiplicity != m || c.order == m - 1)) best = &c;
    if (m > 4) throw Error(ErrorKind::IllConditioned, "root multiplicity cannot be resolved at tol");
    for (int j = 0; j < m; ++j) {
      const double v = std::abs(g.deriv(best->angle, j));
      if (v > 1e-11 * std::pow(4.0, j) && v <= tol * std::pow(4.0, j))
        throw Error(ErrorKind::IllConditioned, "root cluster near angle " + format_real(best->angle) +
                                                   " is not separable at tol");
    }
    const double decide = std::abs(g.deriv(best->angle, m)) / std::pow(4.0, m);
    if (decide < std::sqrt(tol))
      throw Error(ErrorKind::IllConditioned, "multiplicity at angle " + format_real(best->angle) +
                                                 " is ambiguous at tol");
    roots.push_back({best->angle, m});
    total += m;
  }
  if (total > 4) throw Error(ErrorKind::IllConditioned, "multiplicities sum to more than 4");
  std::sort(roots.begin(), roots.end(), [](const CircleRoot& a, const CircleRoot& b) { return a.angle < b.angle; });
  return roots;
}

// ---------------------------------------------------------------------------
// Normal forms

const char* kind_name(NormalKind k) {
  switch (k) {
    case NormalKind::Mu: return "Mu";
    case NormalKind::DegenPlus: return "DegenPlus";
    case NormalKind::DegenMinus: return "DegenMinus";
  }
  return "?";
}

QuarticForm NormalForm::representative() const {
  switch (kind) {
    case NormalKind::Mu: return {1.0, 0.0, mu, 0.0, 1.0};
    case NormalKind::DegenPlus: return {1.0, 0.0, 1.0, 0.0, 0.0};
    case NormalKind::DegenMinus: return {1.0, 0.0, -1.0, 0.0, 0.0};
  }
  return {};
}

namespace {

double mismatch(const QuarticForm& f, const NormalForm& nf) {
  const QuarticForm b = pull_back(f, nf.transform);
  const QuarticForm r = nf.representative();
  const double s = nf.scale;
  const double scale_ref = std::max(1.0, r.max_abs());
  return std::max({std::abs(b.a40 / s - r.a40), std::abs(b.a31 / s - r.a31), std::abs(b.a22 / s - r.a22),
                   std::abs(b.a13 / s - r.a13), std::abs(b.a04 / s - r.a04)}) /
         scale_ref;
}

NormalForm checked(const QuarticForm& f, NormalForm nf) {
  const double r = mismatch(f, nf);
  if (!(r <= kNormalFormTol))
    throw Error(ErrorKind::ReductionFailed, "normal form mismatch " + format_real(r));
  return nf;
}

// Diagonal scaling of a form with a31 = a13 = 0 and a40*a04 > 0.
NormalForm diagonal_mu(const QuarticForm& b, const Mat2& T) {
  const double scale = std::copysign(std::sqrt(b.a40 * b.a04), b.a40);
  const double p = std::pow(scale / b.a40, 0.25), q = std::pow(scale / b.a04, 0.25);
  NormalForm nf;
  nf.kind = NormalKind::Mu;
  nf.transform = T * Mat2{p, 0.0, 0.0, q};
  nf.scale = scale;
  nf.mu = b.a22 * p * p * q * q / scale;
  if (p == 1.0 && q == 1.0) nf.transform = T;
  return nf;
}

Mat2 search_transform(double phi, double psi) { return Mat2::rotation(phi) * Mat2{1.0, std::tan(psi), 0.0, 1.0}; }

std::array<double, 2> off_diagonal(const QuarticForm& f, double phi, double psi) {
  const QuarticForm b = pull_back(f, search_transform(phi, psi));
  const double m = b.max_abs();
  return {b.a31 / m, b.a13 / m};
}

std::optional<std::array<double, 2>> polish(const QuarticForm& f, double phi, double psi) {
  for (int it = 0; it < 60; ++it) {
    const auto r = off_diagonal(f, phi, psi);
    if (std::hypot(r[0], r[1]) < 1e-14) return std::array<double, 2>{phi, psi};
    constexpr double h = 1e-7;
    const auto rp = off_diagonal(f, phi + h, psi), rq = off_diagonal(f, phi, psi + h);
    const double j11 = (rp[0] - r[0]) / h, j21 = (rp[1] - r[1]) / h;
    const double j12 = (rq[0] - r[0]) / h, j22 = (rq[1] - r[1]) / h;
    const double det = j11 * j22 - j12 * j21;
    if (det == 0.0) return std::nullopt;
    phi -= (j22 * r[0] - j12 * r[1]) / det;
    psi -= (-j21 * r[0] + j11 * r[1]) / det;
    if (std::abs(psi) > 1.5) return std::nullopt;
  }
  const auto r = off_diagonal(f, phi, psi);
  if (std::hypot(r[0], r[1]) < 1e-12) return std::array<double, 2>{phi, psi};
  return std::nullopt;
}

NormalForm reduce_generic(const QuarticForm& f) {
  if (f.a31 == 0.0 && f.a13 == 0.0 && f.a40 * f.a04 > 0.0) return diagonal_mu(f, Mat2::identity());

  constexpr int nphi = 90, npsi = 57;
  constexpr double psi_max = 1.4;
  std::vector<double> grid(nphi * npsi);
  auto phi_at = [](int i) { return kPi * i / nphi; };
  auto psi_at = [](int j) { return -psi_max + 2.0 * psi_max * j / (npsi - 1); };
  for (int i = 0; i < nphi; ++i)
    for (int j = 0; j < npsi; ++j) {
      const auto r = off_diagonal(f, phi_at(i), psi_at(j));
      grid[i * npsi + j] = r[0] * r[0] + r[1] * r[1];
    }

  std::optional<NormalForm> best;
  double best_cost = 0.0;
  double best_residual = 1e300;
  for (int i = 0; i < nphi; ++i)
    for (int j = 0; j < npsi; ++j) {
      const double v = grid[i * npsi + j];
      bool is_min = true;
      for (int di = -1; di <= 1 && is_min; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const int jj = j + dj;
          if (jj < 0 || jj >= npsi) continue;
          const int ii = (i + di + nphi) % nphi;
          if (grid[ii * npsi + jj] < v) {
            is_min = false;
            break;
          }
        }
      if (!is_min) continue;
      best_residual = std::min(best_residual, std::sqrt(v));
      const auto sol = polish(f, phi_at(i), psi_at(j));
      if (!sol) continue;
      const Mat2 T = search_transform((*sol)[0], (*sol)[1]);
      QuarticForm b = pull_back(f, T);
      b.a31 = b.a13 = 0.0;
      if (!(b.a40 * b.a04 > 0.0)) continue;
      NormalForm nf = diagonal_mu(b, T);
      const double phi_dist = circular_gap(wrap_pi((*sol)[0]), 0.0);
      const double cost = phi_dist + std::abs((*sol)[1]);
      if (mismatch(f, nf) > kNormalFormTol) continue;
      if (!best || cost < best_cost) {
        best = nf;
        best_cost = cost;
      }
    }
  if (!best)
    throw Error(ErrorKind::ReductionFailed,
                "no linear map to the mu-family found (best off-diagonal residual " + format_real(best_residual) + ")");
  return *best;
}

}  // namespace

NormalForm reduce_to_normal_form(const QuarticForm& f, double tol) {
  const auto roots = circle_roots(f, tol);
  std::vector<double> doubles;
  for (const auto& r : roots) {
    if (r.multiplicity >= 3)
      throw Error(ErrorKind::MultiplicityTooHigh,
                  "root of multiplicity " + std::to_string(r.multiplicity) + " at angle " + format_real(r.angle));
    if (r.multiplicity == 2) doubles.push_back(r.angle);
  }

  if (doubles.size() == 2) {
    const Mat2 V{std::cos(doubles[0]), std::cos(doubles[1]), std::sin(doubles[0]), std::sin(doubles[1])};
    const double c = 1.0 / std::sqrt(2.0);
    NormalForm nf;
    nf.kind = NormalKind::Mu;
    nf.transform = V * Mat2{c, -c, c, c};
    const QuarticForm b = pull_back(f, nf.transform);
    nf.scale = b.a40;
    nf.mu = b.a22 / b.a40;
    return checked(f, nf);
  }

  if (doubles.size() == 1) {
    const double t = doubles[0];
    const Mat2 T1 = t == 0.0 ? Mat2{0.0, 1.0, 1.0, 0.0} : Mat2{std::sin(t), std::cos(t), -std::cos(t), std::sin(t)};
    const QuarticForm b = pull_back(f, T1);
    if (b.a22 == 0.0) throw Error(ErrorKind::ReductionFailed, "degenerate double root");
    const double k = b.a31 / (2.0 * b.a22);
    const double e = b.a40 - b.a31 * k + b.a22 * k * k;
    if (e == 0.0) throw Error(ErrorKind::ReductionFailed, "degenerate double root");
    const double d = std::sqrt(std::abs(e / b.a22));
    NormalForm nf;
    nf.kind = b.a22 / e > 0.0 ? NormalKind::DegenPlus : NormalKind::DegenMinus;
    nf.transform = T1 * Mat2{1.0, 0.0, -k, 1.0} * Mat2{1.0, 0.0, 0.0, d};
    nf.scale = e;
    return checked(f, nf);
  }

  return checked(f, reduce_generic(f));
}

OscillationType oscillation_type(const NormalForm& nf) {
  if (nf.kind == NormalKind::Mu && std::abs(nf.mu * nf.mu - 4.0) > 1e-8) return {-0.5, 0};
  return {-0.5, 1};
}

// ---------------------------------------------------------------------------
// Versality

VersalityReport versality_check(const QuarticForm& f) {
  // Basis of E1: monomials of total degree <= 3.
  std::vector<std::pair<int, int>> basis;
  for (int d = 0; d <= 3; ++d)
    for (int i = d; i >= 0; --i) basis.emplace_back(i, d - i);
  auto index_of = [&](int i, int j) {
    return static_cast<int>(std::find(basis.begin(), basis.end(), std::make_pair(i, j)) - basis.begin());
  };

  const BivarPoly p = f.to_poly();
  Eigen::MatrixXd ideal(10, 2);
  ideal.setZero();
  for (int axis = 1; axis <= 2; ++axis) {
    const BivarPoly d = partial(p, axis);
    for (const auto& [e, c] : d.terms()) ideal(index_of(e.first, e.second), axis - 1) = c;
  }

  const std::array<std::pair<int, int>, 8> b_monomials = {
      {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {0, 2}, {1, 1}, {3, 0}, {0, 3}}};
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(10, 8);
  for (int k = 0; k < 8; ++k) B(index_of(b_monomials[k].first, b_monomials[k].second), k) = 1.0;

  auto rank = [](Eigen::MatrixXd M) {
    for (int c = 0; c < M.cols(); ++c) {
      const double n = M.col(c).norm();
      if (n > 0.0) M.col(c) /= n;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& s = svd.singularValues();
    int r = 0;
    for (int i = 0; i < s.size(); ++i)
      if (s(i) > 1e-10) ++r;
    return r;
  };

  Eigen::MatrixXd both(10, 10);
  both << ideal, B;
  VersalityReport rep;
  rep.dim_ideal_slice = rank(ideal);
  rep.dim_B = rank(B);
  rep.dim_sum = rank(both);
  rep.dim_intersection = rep.dim_ideal_slice + rep.dim_B - rep.dim_sum;
  rep.is_versal = rep.dim_intersection == 0 && rep.dim_sum == 10;
  return rep;
}

}  // namespace osclab
