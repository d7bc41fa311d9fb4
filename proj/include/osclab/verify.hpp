#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "osclab/dyadic.hpp"
#include "osclab/oscquad.hpp"
#include "osclab/poly.hpp"

namespace osclab {

struct LambdaGrid {
  double min = 1e2;
  double max = 1e5;
  int points = 8;

  /// Geometric grid including both endpoints.
  std::vector<double> values() const;
};

/// Random polynomial of degree <= 7 rescaled so that c_norm(F, 8, box) = epsilon / 2.
BivarPoly sample_perturbation(double epsilon, const Box& box, std::uint64_t seed, int id);

struct DecayFit {
  double beta_hat = 0.0;
  int p_hat = 0;
  double c_hat = 0.0;
  double residual_p0 = 0.0;
  double residual_p1 = 0.0;
  double beta_p0 = 0.0, beta_p1 = 0.0;
};

/// Least squares of log|J| against log(lambda), with and without a ln(lambda) factor.
DecayFit decay_fit(const std::vector<std::pair<double, double>>& samples);

/// Least-squares slope of log(value) against log(lambda).
double loglog_slope(const std::vector<double>& lambdas, const std::vector<double>& values);

struct SweepConfig {
  BivarPoly f_pi;
  BivarPoly g;  // terms of degree >= 5
  double epsilon = 0.05;
  int n_perturbations = 0;  // 0: the unperturbed phase only
  LambdaGrid grid{};
  std::uint64_t seed = 1;
  double amp_radius = 0.5;
  double box = 0.5;
  bool use_dyadic = true;
  int cross_check = 2;  // smallest lambdas also integrated directly
  double tol = 1e-9;
  QuadOptions quad{};
};

struct SweepRow {
  double lambda = 0.0;
  int pert_id = 0;
  double abs_j = 0.0;
  double normalized = 0.0;  // lambda^{1/2} |J| / (||a||_{C^1} ln(2 + lambda))
  bool failed = false;
  bool center_fallback = false;
  std::string error;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<double> lambdas;
  std::vector<double> sup_curve;  // per lambda, max over perturbations of the normalized column
  std::vector<double> sup_abs;    // per lambda, max over perturbations of |J|
  DecayFit fit;
  bool fit_ok = false;
  std::string fit_error;
  int failures = 0;
  int center_fallbacks = 0;
  double max_cross_check_rel = 0.0;
  double a_c1 = 0.0;
  double a_c2 = 0.0;
};

SweepResult uniform_sweep(const SweepConfig& cfg);

/// max over rows of the normalized column divided by the median over lambda of sup_curve.
double uniformity_ratio(const SweepResult& r);

struct LimitCheck {
  double c_estimate = 0.0;
  double convergence_ratio = 0.0;
  std::vector<double> lambdas;
  std::vector<double> stat;  // lambda^{1/2} |J| / ln(lambda)
  std::vector<double> abs_j;
};

LimitCheck limit_check(const BivarPoly& f_pi, const Amplitude& amp, const LambdaGrid& grid, double tol = 1e-10,
                       const QuadOptions& quad = {});

struct AirySweep {
  std::vector<double> lambdas;
  std::vector<double> sigmas;
  std::vector<std::vector<double>> abs_j;  // [sigma][lambda]
  std::vector<std::vector<double>> ratio;  // |J| / envelope
  double C = 0.0;
  double ratio_ref = 0.0;  // at (lambda_min, sigma = 0) when present
};

/// max |J_A| over one beat period [lambda, lambda + P) of the two stationary
/// points when sigma < 0; plain |J_A(lambda)| otherwise.
double airy_peak(double lambda, double sigma, const Bump1d& amp, int samples = 32, double tol = 1e-12);

AirySweep airy_sweep(const std::vector<double>& lambdas, const std::vector<double>& sigmas, const Bump1d& amp,
                     double tol = 1e-12);

}  // namespace osclab
