#pragma once

#include <array>
#include <utility>
#include <vector>

#include "osclab/oscquad.hpp"
#include "osclab/poly.hpp"

namespace osclab {

/// Smooth step h on [0, 1] with h(0) = 1, h(1) = 0 and flat ends.
struct CutoffProfile {
  double operator()(double s) const;
};

/// delta_r(x) = r^{1/4} x
Point2 dilate(double r, Point2 x);

/// 1 for |x| <= 1, 0 for |x| >= 2^{1/4}.
double beta_cutoff(const CutoffProfile& h, Point2 x);
/// beta(x) - beta(delta_2 x), supported in 2^{-1/4} <= |x| <= 2^{1/4}.
double chi(const CutoffProfile& h, Point2 x);

/// [beta(delta_{2^-nu0} x), chi_{nu0+1}(x), ..., chi_K(x)]; the list sums to beta(delta_{2^-K} x).
std::vector<double> partition_weights(const CutoffProfile& h, Point2 x, int nu0, int K);

enum class Regime { LowRho, HighRho };
const char* regime_name(Regime r);

struct DyadicConfig {
  int nu0 = 2;
  double ring_constant = 1.5;
  int max_rings = 64;
  double tol = 1e-9;  // absolute, shared over all pieces
  bool request_high_rho = false;
  QuadOptions quad{};
};

struct RingDecomposition {
  int nu0 = 2;
  int K = 2;
  cdouble j0{};
  std::vector<std::pair<int, cdouble>> rings;
  Regime regime = Regime::LowRho;
  double rho = 0.0;
  double scale = 0.0;             // lambda^{-1/4} or rho^{1/4}
  bool rho_degenerate = false;    // high-rho regime requested with rho = 0
  bool covers_support = true;     // scale * 2^{K/4} reaches the whole amplitude support
  // sigma_ij = s_ij / rho^{w}: s10, s01, s20, s11, s02, s30, s03
  std::array<double, 7> sigma{};
  double quasisphere_sum = 0.0;
  double abs_error_estimate = 0.0;
  long panels = 0;

  cdouble total() const;
};

/// Splits J(lambda, phase, amp) into the central piece and dyadic rings
/// around the center recorded in t.
RingDecomposition dyadic_integrate(const TaylorData& t, const SmoothFunction2d& phase, const Amplitude& amp,
                                   double lambda, const DyadicConfig& cfg = {});

int ring_count(double lambda, const DyadicConfig& cfg);

}  // namespace osclab
