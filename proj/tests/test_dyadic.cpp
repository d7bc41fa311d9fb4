#include <cmath>
#include <random>

#include "doctest.h"
#include "osclab/dyadic.hpp"
#include "osclab/error.hpp"
#include "osclab/verify.hpp"

using namespace osclab;

namespace {

const Amplitude kBump = bump_amplitude({0.0, 0.0}, 0.5);
const SmoothFunction2d kZero = SmoothFunction2d::from_polynomial({});

double rel(cdouble a, cdouble b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("cutoff profile") {
  const CutoffProfile h;
  CHECK(h(0.0) == 1.0);
  CHECK(h(1.0) == 0.0);
  CHECK(h(-3.0) == 1.0);
  CHECK(h(0.5) == doctest::Approx(0.5));
  double prev = 1.0;
  for (int i = 1; i <= 1000; ++i) {
    const double v = h(i / 1000.0);
    CHECK(v <= prev);
    CHECK(v >= 0.0);
    prev = v;
  }
}

TEST_CASE("beta and chi") {
  const CutoffProfile h;
  CHECK(beta_cutoff(h, {0.6, 0.7}) == 1.0);
  CHECK(beta_cutoff(h, {std::pow(2.0, 0.25), 0.0}) == 0.0);
  CHECK(chi(h, {1.0, 0.0}) == 1.0);
  CHECK(chi(h, {0.0, 0.0}) == 0.0);
  CHECK(chi(h, {1.1, 0.0}) > 0.0);
  CHECK(chi(h, {1.2, 0.0}) == 0.0);
  CHECK_THROWS_AS(dilate(0.0, {1.0, 1.0}), Error);
  const Point2 d = dilate(16.0, {1.0, -0.5});
  CHECK(d.x1 == doctest::Approx(2.0));
  CHECK(d.x2 == doctest::Approx(-1.0));
}

TEST_CASE("partition of unity") {
  const CutoffProfile h;
  auto w = partition_weights(h, {0.0, 0.0}, 2, 10);
  REQUIRE(w.size() == 9);
  CHECK(w[0] == 1.0);
  for (std::size_t i = 1; i < w.size(); ++i) CHECK(w[i] == 0.0);
  CHECK_THROWS_AS(partition_weights(h, {}, 3, 2), Error);

  const int K = 20;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int inside = 0;
  for (int i = 0; i < 1000; ++i) {
    const double r = std::exp(std::log(60.0) * u(rng)) - 0.99, t = 2 * M_PI * u(rng);
    const Point2 x{r * std::cos(t), r * std::sin(t)};
    w = partition_weights(h, x, 2, K);
    double s = 0.0;
    for (double v : w) s += v;
    const Point2 y = dilate(std::exp2(-K), x);
    CHECK(std::abs(s - beta_cutoff(h, y)) <= 1e-12);
    if (norm(y) <= 1.0) {
      ++inside;
      CHECK(std::abs(s - 1.0) <= 1e-12);
    }
  }
  CHECK(inside > 500);
}

TEST_CASE("quartic dilation covariance") {
  const BivarPoly f = parse_poly("x1^4 + x1^2*x2^2 - 2*x1*x2^3");
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const Point2 x{u(rng), u(rng)};
    const double r = std::exp(4.0 * u(rng));
    CHECK(eval(f, dilate(r, x)) == doctest::Approx(r * eval(f, x)).epsilon(1e-12));
  }
}

TEST_CASE("ring count") {
  DyadicConfig cfg;
  for (double lambda : {2.0, 10.0, 1e3, 1e5, 1e30}) {
    const int K = ring_count(lambda, cfg);
    CHECK(K >= cfg.nu0);
    CHECK(K <= std::max(cfg.nu0, static_cast<int>(std::ceil(cfg.ring_constant * std::log(lambda)))));
    CHECK(K <= cfg.max_rings);
  }
  CHECK(ring_count(1e30, cfg) == 64);
}

TEST_CASE("unperturbed phase: low regime and agreement with direct quadrature") {
  const BivarPoly fp = parse_poly("x1^4 + x2^4");
  const SmoothFunction2d phase = SmoothFunction2d::from_polynomial(fp);
  const TaylorData t = taylor_data(fp, kZero, {});
  const RingDecomposition d = dyadic_integrate(t, phase, kBump, 100.0);
  CHECK(d.regime == Regime::LowRho);
  CHECK(d.rho == 0.0);
  CHECK(d.covers_support);
  CHECK(static_cast<int>(d.rings.size()) == d.K - d.nu0);
  const QuadResult q = integrate_2d(phase, kBump, 100.0, 1e-10);
  CHECK(rel(d.total(), q.value) <= 1e-6);

  DyadicConfig cfg;
  cfg.request_high_rho = true;
  const RingDecomposition e = dyadic_integrate(t, phase, kBump, 100.0, cfg);
  CHECK(e.rho_degenerate);
  CHECK(e.regime == Regime::LowRho);
  CHECK_THROWS_AS(dyadic_integrate(t, phase, kBump, 1.5), Error);
}

TEST_CASE("linear term: high regime and quasisphere normalization") {
  TaylorData t;
  t.s10 = 1.0;
  const SmoothFunction2d phase = SmoothFunction2d::from_polynomial(parse_poly("x1^4 + x2^4 + x1"));
  const RingDecomposition d = dyadic_integrate(t, phase, kBump, 100.0);
  CHECK(d.rho == 1.0);
  CHECK(d.regime == Regime::HighRho);
  CHECK(std::pow(std::abs(d.sigma[0]), 4.0 / 3.0) == doctest::Approx(1.0));
  CHECK(d.quasisphere_sum == doctest::Approx(1.0));
}

TEST_CASE("perturbed phases agree with direct quadrature") {
  const Box box(0.5);
  for (const char* s : {"x1^4 + x1^2*x2^2 + x2^4", "x1^4 + x1^2*x2^2"}) {
    const BivarPoly fp = parse_poly(s);
    const BivarPoly F = sample_perturbation(0.05, box, 5, 0);
    const SmoothFunction2d phase = SmoothFunction2d::from_polynomial(fp + F);
    const TaylorData t = taylor_data(fp, SmoothFunction2d::from_polynomial(F), {});
    const RingDecomposition d = dyadic_integrate(t, phase, kBump, 100.0);
    const QuadResult q = integrate_2d(phase, kBump, 100.0, 1e-10);
    INFO(s);
    CHECK(rel(d.total(), q.value) <= 1e-3);
    CHECK(d.quasisphere_sum == doctest::Approx(1.0).epsilon(1e-12));

    DyadicConfig cfg;
    const RingDecomposition c = dyadic_integrate(t, phase, kBump, -100.0, cfg);
    CHECK(std::abs(c.total() - std::conj(d.total())) <= 1e-8);
  }
}

TEST_CASE("ring values stay within a fitted multiple of lambda^-1/2") {
  const BivarPoly fp = parse_poly("x1^4 + x1^2*x2^2 + x2^4");
  const SmoothFunction2d phase = SmoothFunction2d::from_polynomial(fp);
  const TaylorData t = taylor_data(fp, kZero, {});
  auto worst = [&](double lambda) {
    const RingDecomposition d = dyadic_integrate(t, phase, kBump, lambda);
    double m = std::abs(d.j0);
    for (const auto& [k, v] : d.rings) m = std::max(m, std::abs(v));
    return std::sqrt(lambda) * m;
  };
  const double C = worst(100.0);
  CHECK(C > 0.0);
  CHECK(worst(1000.0) <= 1.5 * C);
}

TEST_CASE("amplitude linearity carries over to the total") {
  const BivarPoly fp = parse_poly("x1^4 + x1^2*x2^2");
  const SmoothFunction2d phase = SmoothFunction2d::from_polynomial(fp + parse_poly("0.01*x1"));
  const TaylorData t = taylor_data(fp, SmoothFunction2d::from_polynomial(parse_poly("0.01*x1")), {});
  const Amplitude a2 = bump_amplitude({0.1, 0.0}, 0.2);
  const cdouble s = dyadic_integrate(t, phase, kBump + a2, 50.0).total();
  const cdouble u = dyadic_integrate(t, phase, kBump, 50.0).total() + dyadic_integrate(t, phase, a2, 50.0).total();
  CHECK(std::abs(s - u) <= 1e-8);
}
