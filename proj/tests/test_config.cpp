#include "doctest.h"
#include "osclab/config.hpp"
#include "osclab/error.hpp"

using namespace osclab;

TEST_CASE("flat key = value files") {
  const KeyValues kv = parse_config(
      "# sweep over the degenerate family\n"
      "phase = \"x1^4 + x1^2*x2^2\"\n"
      "epsilon = 0.02   # smaller deformations\n"
      "\n"
      "n_pert = 4\n"
      "lambda_min = 1e2\n"
      "lambda_max = 1e4\n"
      "lambda_points = 6\n"
      "use_dyadic = false\n");
  const SweepConfig c = apply_config(kv);
  CHECK(c.f_pi == parse_poly("x1^4 + x1^2*x2^2"));
  CHECK(c.epsilon == 0.02);
  CHECK(c.n_perturbations == 4);
  CHECK(c.grid.max == 1e4);
  CHECK(c.grid.points == 6);
  CHECK_FALSE(c.use_dyadic);
  CHECK(c.seed == 1);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("phase x1^4"), Error);
  try {
    apply_config(parse_config("lambda = 3"));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidArgument);
  }
  CHECK_THROWS_AS(apply_config(parse_config("n_pert = 2.5")), Error);
  CHECK_THROWS_AS(apply_config(parse_config("epsilon = abc")), Error);
  CHECK_THROWS_AS(apply_config(parse_config("use_dyadic = yes")), Error);
  CHECK_THROWS_AS(read_config("/nonexistent/osclab.cfg"), std::runtime_error);
}
