#pragma once

#include <vector>

#include "osclab/poly.hpp"

namespace osclab {

struct QuarticForm {
  double a40 = 0.0, a31 = 0.0, a22 = 0.0, a13 = 0.0, a04 = 0.0;

  /// Throws InvalidArgument unless p is a nonzero homogeneous quartic.
  static QuarticForm from_poly(const BivarPoly& p);
  BivarPoly to_poly() const;
  double operator()(Point2 x) const;
  double max_abs() const;
};

/// f(T u) as a form in u.
QuarticForm pull_back(const QuarticForm& f, const Mat2& T);

struct CircleRoot {
  double angle = 0.0;  // direction (cos, sin), angle in [0, pi)
  int multiplicity = 1;
};

std::vector<CircleRoot> circle_roots(const QuarticForm& f, double tol = 1e-9);

enum class NormalKind { Mu, DegenPlus, DegenMinus };

/// f(transform * u) / scale equals the representative of the kind.
struct NormalForm {
  NormalKind kind = NormalKind::Mu;
  double mu = 0.0;
  Mat2 transform{};
  double scale = 1.0;

  QuarticForm representative() const;
};

inline constexpr double kNormalFormTol = 1e-8;

NormalForm reduce_to_normal_form(const QuarticForm& f, double tol = 1e-9);

struct OscillationType {
  double beta = -0.5;
  int p = 0;
};

OscillationType oscillation_type(const NormalForm& nf);

struct VersalityReport {
  int dim_ideal_slice = 0;
  int dim_B = 8;
  int dim_intersection = 0;
  int dim_sum = 0;
  bool is_versal = false;
};

VersalityReport versality_check(const QuarticForm& f);

const char* kind_name(NormalKind k);

}  // namespace osclab
