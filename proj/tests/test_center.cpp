#include <cmath>

#include "doctest.h"
#include "osclab/center.hpp"
#include "osclab/error.hpp"
#include "osclab/verify.hpp"

using namespace osclab;

namespace {

// Mixed cubic Taylor coefficients from monomials directly.
std::array<double, 2> phi(const BivarPoly& p, Point2 z) {
  std::array<double, 2> out{0.0, 0.0};
  for (const auto& [e, c] : p.terms()) {
    const int i = e.first, j = e.second;
    if (i >= 2 && j >= 1) out[0] += 0.5 * c * i * (i - 1) * j * std::pow(z.x1, i - 2) * std::pow(z.x2, j - 1);
    if (i >= 1 && j >= 2) out[1] += 0.5 * c * i * j * (j - 1) * std::pow(z.x1, i - 1) * std::pow(z.x2, j - 2);
  }
  return out;
}

double phi2(const BivarPoly& p, Point2 z) {
  const auto v = phi(p, z);
  return v[0] * v[0] + v[1] * v[1];
}

// 200 x 200 grid search on the box, then Newton with a central-difference Jacobian.
Point2 grid_center(const BivarPoly& p) {
  Point2 best{};
  double bv = INFINITY;
  for (int i = 0; i < 200; ++i)
    for (int j = 0; j < 200; ++j) {
      const Point2 z{-0.5 + i / 199.0, -0.5 + j / 199.0};
      const double v = phi2(p, z);
      if (v < bv) bv = v, best = z;
    }
  for (int it = 0; it < 30; ++it) {
    const double h = 1e-6;
    const auto f = phi(p, best);
    const auto fx = phi(p, {best.x1 + h, best.x2}), gx = phi(p, {best.x1 - h, best.x2});
    const auto fy = phi(p, {best.x1, best.x2 + h}), gy = phi(p, {best.x1, best.x2 - h});
    const double a = (fx[0] - gx[0]) / (2 * h), b = (fy[0] - gy[0]) / (2 * h);
    const double c = (fx[1] - gx[1]) / (2 * h), d = (fy[1] - gy[1]) / (2 * h);
    const double det = a * d - b * c;
    best.x1 -= (d * f[0] - b * f[1]) / det;
    best.x2 -= (-c * f[0] + a * f[1]) / det;
  }
  return best;
}

const BivarPoly kMu1 = parse_poly("x1^4 + x1^2*x2^2 + x2^4");

}  // namespace

TEST_CASE("already centered phase") {
  const CenterResult r = newton_center(SmoothFunction2d::from_polynomial(kMu1));
  CHECK(r.z.x1 == 0.0);
  CHECK(r.z.x2 == 0.0);
  CHECK(r.iterations <= 1);
}

TEST_CASE("constructed shift is recovered") {
  const BivarPoly p = shifted(kMu1, {-0.1, 0.2});
  const CenterResult r = newton_center(SmoothFunction2d::from_polynomial(p));
  CHECK(std::abs(r.z.x1 - 0.1) <= 1e-8);
  CHECK(std::abs(r.z.x2 + 0.2) <= 1e-8);
  CHECK(r.residual <= 1e-12);

  const CenterResult again = newton_center(SmoothFunction2d::from_polynomial(shifted(p, r.z)));
  CHECK(norm(again.z) <= 1e-10);

  // same answer through the finite-difference route
  const CenterResult fd = newton_center(
      SmoothFunction2d::from_callable([&p](Point2 x) { return eval(p, x); }, 4), {}, 1e-9);
  CHECK(std::abs(fd.z.x1 - 0.1) <= 1e-6);
  CHECK(std::abs(fd.z.x2 + 0.2) <= 1e-6);
}

TEST_CASE("small quartic perturbation of x1^4 + x2^4") {
  const BivarPoly p = parse_poly("x1^4 + x2^4 + 0.01*x1^3*x2");
  const CenterResult r = newton_center(SmoothFunction2d::from_polynomial(p));
  CHECK(r.residual <= 1e-10);
  const auto v = phi(p, r.z);
  CHECK(std::abs(v[0]) <= 1e-10);
  CHECK(std::abs(v[1]) <= 1e-10);
}

TEST_CASE("centering matches the grid oracle") {
  const Box box(0.5);
  for (int id = 0; id < 10; ++id) {
    const BivarPoly p = kMu1 + sample_perturbation(0.05, box, 17, id);
    const CenterResult r = newton_center(SmoothFunction2d::from_polynomial(p));
    const Point2 g = grid_center(p);
    CHECK(norm(r.z - g) <= 1e-8);
    const TaylorData t = taylor_data(kMu1, SmoothFunction2d::from_polynomial(p - kMu1), r.z);
    CHECK(std::abs(t.s21) <= 1e-12);
    CHECK(std::abs(t.s12) <= 1e-12);
  }
}

TEST_CASE("centering is stable under doubling the perturbation") {
  const Box box(0.5);
  for (int id = 0; id < 50; ++id) {
    const BivarPoly F = sample_perturbation(0.05, box, 99, id);
    const Point2 z1 = newton_center(SmoothFunction2d::from_polynomial(kMu1 + F)).z;
    const Point2 z2 = newton_center(SmoothFunction2d::from_polynomial(kMu1 + 2.0 * F)).z;
    CHECK(norm(z2) <= 4.0 * norm(z1) + 1e-12);
  }
}

TEST_CASE("degenerate Jacobian") {
  try {
    newton_center(SmoothFunction2d::from_polynomial(parse_poly("x1^4 + x2^4 + 0.01*x1^2*x2")));
    FAIL("expected SingularJacobian");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularJacobian);
  }
  CHECK_THROWS_AS(newton_center(SmoothFunction2d::from_callable([](Point2 x) { return x.x1; }, 3)), Error);
}

TEST_CASE("iteration budget") {
  const BivarPoly p = shifted(kMu1, {-0.1, 0.2}) + parse_poly("0.3*x1^3*x2^2");
  try {
    newton_center(SmoothFunction2d::from_polynomial(p), {}, 1e-14, 1);
    FAIL("expected NoConvergence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoConvergence);
  }
}
