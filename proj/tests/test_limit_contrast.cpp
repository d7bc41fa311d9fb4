// x1^4 + x2^4 has no log factor, so lambda^{1/2}|J| / ln(lambda) decays like
// 1 / ln(lambda) and the ratio over the top decade is ln(lambda/10) / ln(lambda).
#include <cmath>

#include "doctest.h"
#include "osclab/verify.hpp"

using namespace osclab;

namespace {

const LimitCheck& contrast() {
  static const LimitCheck r =
      limit_check(parse_poly("x1^4 + x2^4"), bump_amplitude({0.0, 0.0}, 0.5), {1e3, 1e5, 3});
  return r;
}

}  // namespace

TEST_CASE("contrast ratio below 0.8" * doctest::should_fail()) {
  CHECK(contrast().convergence_ratio < 0.8);
}

TEST_CASE("contrast ratio follows the pure power law") {
  const LimitCheck& r = contrast();
  // lambda^{1/2} |J| is already constant to 1% over the top decade
  const double flat = std::sqrt(1e5) * r.abs_j[2] / (std::sqrt(1e4) * r.abs_j[1]);
  CHECK(flat == doctest::Approx(1.0).epsilon(0.01));
  CHECK(r.convergence_ratio == doctest::Approx(flat * std::log(1e4) / std::log(1e5)).epsilon(1e-12));
  CHECK(r.convergence_ratio > std::log(1e4) / std::log(1e5));
  CHECK(r.convergence_ratio < 0.82);
}
