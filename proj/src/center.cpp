#include "osclab/center.hpp"

#include <cmath>

#include "osclab/error.hpp"

namespace osclab {

std::array<double, 2> mixed_cubic_coeffs(const SmoothFunction2d& phase, Point2 z) {
  return {phase.derivative(z, 2, 1) / 2.0, phase.derivative(z, 1, 2) / 2.0};
}

namespace {

double residual_of(const std::array<double, 2>& r) { return std::hypot(r[0], r[1]); }

}  // namespace

CenterResult newton_center(const SmoothFunction2d& phase, Point2 z0, double tol, int max_iter, const Box& box) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "centering tol must be positive");
  if (phase.max_order() >= 0 && phase.max_order() < 4)
    throw Error(ErrorKind::DifferentiationFailure, "centering needs fourth derivatives");

  CenterResult out;
  out.z = z0;
  auto phi = mixed_cubic_coeffs(phase, z0);
  out.residual = residual_of(phi);

  for (int it = 0; it < max_iter; ++it) {
    if (out.residual <= tol) return out;

    const double j11 = phase.derivative(out.z, 3, 1) / 2.0;
    const double j12 = phase.derivative(out.z, 2, 2) / 2.0;
    const double j22 = phase.derivative(out.z, 1, 3) / 2.0;
    const double j21 = j12;
    const double det = j11 * j22 - j12 * j21;
    // Condition number of the symmetric 2x2 Jacobian from its eigenvalues.
    const double tr = j11 + j22;
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    const double e1 = std::abs(tr / 2.0 + disc), e2 = std::abs(tr / 2.0 - disc);
    const double emax = std::max(e1, e2), emin = std::min(e1, e2);
    if (emax == 0.0 || emin < emax * 1e-12)
      throw Error(ErrorKind::SingularJacobian, "centering Jacobian is singular at z = (" + format_real(out.z.x1) +
                                                   ", " + format_real(out.z.x2) + ")");

    const Point2 step{-(j22 * phi[0] - j12 * phi[1]) / det, -(-j21 * phi[0] + j11 * phi[1]) / det};
    double t = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= 20; ++halving, t *= 0.5) {
      const Point2 trial = out.z + t * step;
      if (!box.contains(trial)) continue;
      const auto trial_phi = mixed_cubic_coeffs(phase, trial);
      const double r = residual_of(trial_phi);
      if (r < out.residual) {
        out.z = trial;
        phi = trial_phi;
        out.residual = r;
        accepted = true;
        break;
      }
    }
    out.iterations = it + 1;
    if (!accepted) break;
  }
  if (out.residual <= tol) return out;
  throw Error(ErrorKind::NoConvergence, "centering stopped after " + std::to_string(out.iterations) +
                                            " iterations with residual " + format_real(out.residual));
}

}  // namespace osclab
