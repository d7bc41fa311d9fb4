#include <cmath>
#include <random>

#include "doctest.h"
#include "osclab/classify.hpp"
#include "osclab/error.hpp"

using namespace osclab;

namespace {

// Product of linear factors (sin t) x1 - (cos t) x2, each vanishing on direction t.
QuarticForm from_roots(const std::vector<double>& angles) {
  BivarPoly p = BivarPoly::constant(1.0);
  for (double t : angles) p = p * (std::sin(t) * BivarPoly::x1() - std::cos(t) * BivarPoly::x2());
  return QuarticForm::from_poly(p);
}

int sign_changes(const QuarticForm& f, int n) {
  int changes = 0;
  double prev = f({1.0, 0.0});
  for (int k = 1; k <= n; ++k) {
    const double t = M_PI * (k + 0.5) / n;
    const double v = f({std::cos(t), std::sin(t)});
    if ((v > 0) != (prev > 0)) ++changes;
    prev = v;
  }
  return changes;
}

QuarticForm scaled(const QuarticForm& f, double s) { return {s * f.a40, s * f.a31, s * f.a22, s * f.a13, s * f.a04}; }

double rel_diff(const QuarticForm& a, const QuarticForm& b) {
  const double d = std::max({std::abs(a.a40 - b.a40), std::abs(a.a31 - b.a31), std::abs(a.a22 - b.a22),
                             std::abs(a.a13 - b.a13), std::abs(a.a04 - b.a04)});
  return d / a.max_abs();
}

Mat2 random_matrix(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    Mat2 m{u(rng), u(rng), u(rng), u(rng)};
    const double n = std::abs(m.a11) + std::abs(m.a12) + std::abs(m.a21) + std::abs(m.a22);
    if (std::abs(m.det()) > 0.2 * n * n / 4) return m;
  }
}

}  // namespace

TEST_CASE("quartic forms") {
  const QuarticForm f = QuarticForm::from_poly(parse_poly("x1^4 - 2*x1^3*x2 + x2^4"));
  CHECK(f.a40 == 1.0);
  CHECK(f.a31 == -2.0);
  CHECK(f.to_poly() == parse_poly("x1^4 - 2*x1^3*x2 + x2^4"));
  CHECK_THROWS_AS(QuarticForm::from_poly(parse_poly("x1^4 + x1")), Error);
  CHECK_THROWS_AS(QuarticForm::from_poly({}), Error);

  const Mat2 T{1.0, 2.0, -0.5, 1.5};
  const QuarticForm g = pull_back(f, T);
  const Point2 u{0.3, -0.7};
  CHECK(g(u) == doctest::Approx(f(T.apply(u))).epsilon(1e-13));
}

TEST_CASE("circle roots of constructed forms") {
  auto roots = circle_roots(from_roots({0.3, 1.1, 2.0, 2.9}));
  REQUIRE(roots.size() == 4);
  CHECK(roots[0].angle == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(roots[3].angle == doctest::Approx(2.9).epsilon(1e-9));
  for (const auto& r : roots) CHECK(r.multiplicity == 1);

  roots = circle_roots(from_roots({0.7, 0.7, 2.0, 2.0}));
  REQUIRE(roots.size() == 2);
  CHECK(roots[0].multiplicity == 2);
  CHECK(roots[1].multiplicity == 2);

  roots = circle_roots(QuarticForm::from_poly(parse_poly("x1^2*x2^2")));
  REQUIRE(roots.size() == 2);
  CHECK(roots[0].angle == 0.0);
  CHECK(roots[1].angle == doctest::Approx(M_PI / 2));

  CHECK(circle_roots(QuarticForm::from_poly(parse_poly("x1^4 + x2^4"))).empty());
  roots = circle_roots(from_roots({1.0, 1.0, 1.0, 2.5}));
  REQUIRE(roots.size() == 2);
  CHECK(roots[0].multiplicity == 3);
}

TEST_CASE("circle roots against a sign scan") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const QuarticForm f{n(rng), n(rng), n(rng), n(rng), n(rng)};
    std::vector<CircleRoot> roots;
    try {
      roots = circle_roots(f);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::IllConditioned);
      continue;
    }
    int total = 0;
    for (const auto& r : roots) total += r.multiplicity;
    CHECK(total <= 4);
    CHECK(static_cast<int>(roots.size()) == sign_changes(f, 20000));
  }
}

TEST_CASE("ill-conditioned root clusters are reported") {
  CHECK_THROWS_AS(circle_roots(from_roots({1.0, 1.0 + 1e-5, 2.0, 2.5})), Error);
  // two simple roots inside one scan cell are still separated
  const auto roots = circle_roots(from_roots({1.0, 1.0 + 1e-4, 2.0, 2.5}));
  REQUIRE(roots.size() == 4);
  CHECK(roots[1].angle - roots[0].angle == doctest::Approx(1e-4).epsilon(1e-6));
}

TEST_CASE("normal forms of known inputs") {
  NormalForm nf = reduce_to_normal_form(QuarticForm::from_poly(parse_poly("x1^4 + 3*x1^2*x2^2 + x2^4")));
  CHECK(nf.kind == NormalKind::Mu);
  CHECK(nf.mu == doctest::Approx(3.0));

  nf = reduce_to_normal_form(QuarticForm::from_poly(parse_poly("x1^4 + x1^2*x2^2")));
  CHECK(nf.kind == NormalKind::DegenPlus);
  nf = reduce_to_normal_form(QuarticForm::from_poly(parse_poly("x1^4 - x1^2*x2^2")));
  CHECK(nf.kind == NormalKind::DegenMinus);
  nf = reduce_to_normal_form(QuarticForm::from_poly(parse_poly("x2^4 - x1^2*x2^2")));
  CHECK(nf.kind == NormalKind::DegenMinus);

  nf = reduce_to_normal_form(QuarticForm::from_poly(parse_poly("x1^2*x2^2")));
  CHECK(nf.kind == NormalKind::Mu);
  CHECK(nf.mu == doctest::Approx(-2.0));
  CHECK(oscillation_type(nf).p == 1);

  try {
    reduce_to_normal_form(QuarticForm::from_poly(parse_poly("x1^3*x2")));
    FAIL("expected MultiplicityTooHigh");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MultiplicityTooHigh);
  }
  try {
    reduce_to_normal_form(QuarticForm::from_poly(parse_poly("x1^4 - x2^4")));
    FAIL("expected ReductionFailed");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ReductionFailed);
  }
}

TEST_CASE("reduction round trip through random transforms") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int failed = 0;
  for (int trial = 0; trial < 100; ++trial) {
    NormalForm src;
    const int kind = trial % 4;
    if (kind == 0) src.kind = NormalKind::DegenPlus;
    if (kind == 1) src.kind = NormalKind::DegenMinus;
    if (kind >= 2) {
      src.mu = 6.0 * u(rng);
      if (std::abs(std::abs(src.mu) - 2.0) < 0.05) src.mu += 0.2;
    }
    const Mat2 M = random_matrix(rng);
    const double s = (u(rng) > 0 ? 1.0 : -1.0) * (0.5 + std::abs(u(rng)));
    const QuarticForm f = scaled(pull_back(src.representative(), M), s);

    NormalForm nf;
    try {
      nf = reduce_to_normal_form(f);
    } catch (const Error& e) {
      ++failed;
      MESSAGE("trial " << trial << ": " << std::string(e.what()));
      continue;
    }
    const QuarticForm back = scaled(pull_back(nf.representative(), nf.transform.inverse()), nf.scale);
    CHECK(rel_diff(f, back) <= 1e-8);

    const OscillationType a = oscillation_type(nf), b = oscillation_type(src);
    CHECK(a.beta == b.beta);
    CHECK(a.p == b.p);
    const OscillationType c = oscillation_type(reduce_to_normal_form(nf.representative()));
    CHECK(c.p == a.p);
  }
  CHECK(failed == 0);
}

TEST_CASE("oscillation types") {
  NormalForm nf;
  nf.mu = 1.0;
  CHECK(oscillation_type(nf).beta == -0.5);
  CHECK(oscillation_type(nf).p == 0);
  nf.mu = 2.0;
  CHECK(oscillation_type(nf).p == 1);
  nf.kind = NormalKind::DegenPlus;
  CHECK(oscillation_type(nf).p == 1);
  nf.kind = NormalKind::DegenMinus;
  CHECK(oscillation_type(nf).p == 1);
}

TEST_CASE("versality ranks") {
  VersalityReport r = versality_check(QuarticForm::from_poly(parse_poly("x1^4 + x1^2*x2^2 + x2^4")));
  CHECK(r.dim_ideal_slice == 2);
  CHECK(r.dim_intersection == 0);
  CHECK(r.dim_sum == 10);
  CHECK(r.is_versal);

  r = versality_check(QuarticForm::from_poly(parse_poly("x1^4 + x2^4")));
  CHECK(r.dim_intersection == 2);
  CHECK_FALSE(r.is_versal);

  r = versality_check(QuarticForm::from_poly(parse_poly("x1^4 + x1^2*x2^2")));
  CHECK(r.is_versal);

  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 20; ++i) {
    NormalForm nf;
    nf.mu = u(rng);
    if (std::abs(nf.mu) < 1e-3) nf.mu = 1.0;
    const VersalityReport v = versality_check(nf.representative());
    CHECK(v.is_versal == (v.dim_intersection == 0 && v.dim_sum == 10));
    CHECK(v.is_versal);
  }
}
