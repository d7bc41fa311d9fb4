#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "osclab/center.hpp"
#include "osclab/classify.hpp"
#include "osclab/config.hpp"
#include "osclab/dyadic.hpp"
#include "osclab/error.hpp"
#include "osclab/oscquad.hpp"
#include "osclab/verify.hpp"

using namespace osclab;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Writes to the --out file when one was given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw UsageError("cannot write output file '" + path + "'");
    }
  }
  std::ostream& get() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::string fmt(double v) { return format_real(v); }

int run_classify(const std::string& poly, double tol, bool verbose) {
  const QuarticForm f = QuarticForm::from_poly(parse_poly(poly));
  const NormalForm nf = reduce_to_normal_form(f, tol);
  const OscillationType ot = oscillation_type(nf);
  std::cout << "kind=" << kind_name(nf.kind);
  if (nf.kind == NormalKind::Mu) std::cout << " mu=" << fmt(nf.mu);
  std::cout << " beta=" << fmt(ot.beta) << " p=" << ot.p << "\n";
  if (verbose) {
    const auto& T = nf.transform;
    std::cout << "scale=" << fmt(nf.scale) << "\n";
    std::cout << "transform=" << fmt(T.a11) << "," << fmt(T.a12) << "," << fmt(T.a21) << "," << fmt(T.a22) << "\n";
    std::cout << "roots=";
    bool first = true;
    for (const auto& r : circle_roots(f, tol)) {
      std::cout << (first ? "" : ";") << fmt(r.angle) << ":" << r.multiplicity;
      first = false;
    }
    std::cout << "\n";
    const VersalityReport v = versality_check(f);
    std::cout << "dim_ideal_slice=" << v.dim_ideal_slice << " dim_intersection=" << v.dim_intersection
              << " dim_sum=" << v.dim_sum << " is_versal=" << (v.is_versal ? "true" : "false") << "\n";
  }
  return 0;
}

int run_integrate(const std::string& poly, double lambda, double radius, double tol, bool dyadic) {
  const BivarPoly p = parse_poly(poly);
  const auto phase = SmoothFunction2d::from_polynomial(p);
  const Amplitude amp = Amplitude::bump({0.0, 0.0}, radius);
  cdouble value;
  double est = 0.0;
  long panels = 0;
  if (dyadic) {
    const TaylorData t = taylor_data(p, SmoothFunction2d::from_polynomial({}), {});
    DyadicConfig cfg;
    cfg.tol = tol;
    const auto d = dyadic_integrate(t, phase, amp, lambda, cfg);
    value = d.total();
    est = d.abs_error_estimate;
    panels = d.panels;
  } else {
    const QuadResult q = integrate_2d(phase, amp, lambda, tol);
    value = q.value;
    est = q.abs_error_estimate;
    panels = q.panels;
  }
  std::cout << "lambda=" << fmt(lambda) << "\nre=" << fmt(value.real()) << "\nim=" << fmt(value.imag())
            << "\nabs=" << fmt(std::abs(value)) << "\nabs_error_estimate=" << fmt(est) << "\npanels=" << panels
            << "\n";
  return 0;
}

int run_decompose(const std::string& poly, double lambda, double radius, double tol, bool center,
                  const std::string& out) {
  const BivarPoly p = parse_poly(poly);
  const auto phase = SmoothFunction2d::from_polynomial(p);
  Point2 z{};
  if (center) z = newton_center(phase).z;
  const TaylorData t = taylor_data(p, SmoothFunction2d::from_polynomial({}), z);
  DyadicConfig cfg;
  cfg.tol = tol;
  const auto d = dyadic_integrate(t, phase, Amplitude::bump({0.0, 0.0}, radius), lambda, cfg);
  Output o(out);
  auto& os = o.get();
  const double sl = std::sqrt(lambda);
  os << "k,regime,abs_jk,sqrt_lambda_abs_jk\n";
  os << d.nu0 << "," << regime_name(d.regime) << "," << fmt(std::abs(d.j0)) << "," << fmt(sl * std::abs(d.j0))
     << "\n";
  for (const auto& [k, v] : d.rings)
    os << k << "," << regime_name(d.regime) << "," << fmt(std::abs(v)) << "," << fmt(sl * std::abs(v)) << "\n";
  std::cerr << "rho=" << fmt(d.rho) << " K=" << d.K << " total_abs=" << fmt(std::abs(d.total())) << "\n";
  return 0;
}

void write_fit(std::ostream& os, const SweepResult& r) {
  os << "rows=" << r.rows.size() << "\nfailures=" << r.failures << "\ncenter_fallbacks=" << r.center_fallbacks
     << "\na_c1_norm=" << fmt(r.a_c1) << "\na_c2_norm=" << fmt(r.a_c2) << "\n";
  if (r.fit_ok) {
    os << "beta_hat=" << fmt(r.fit.beta_hat) << "\np_hat=" << r.fit.p_hat << "\nc_hat=" << fmt(r.fit.c_hat)
       << "\nresidual_p0=" << fmt(r.fit.residual_p0) << "\nresidual_p1=" << fmt(r.fit.residual_p1) << "\n";
  } else {
    os << "fit_error=" << r.fit_error << "\n";
  }
  os << "uniformity_ratio=" << fmt(uniformity_ratio(r)) << "\nmax_cross_check_rel=" << fmt(r.max_cross_check_rel)
     << "\n";
}

int run_sweep(const SweepConfig& cfg, const std::string& out) {
  const SweepResult r = uniform_sweep(cfg);
  Output o(out);
  auto& os = o.get();
  os << "lambda,pert_id,abs_j,normalized\n";
  for (const auto& row : r.rows) {
    if (row.failed)
      os << fmt(row.lambda) << "," << row.pert_id << ",nan,nan\n";
    else
      os << fmt(row.lambda) << "," << row.pert_id << "," << fmt(row.abs_j) << "," << fmt(row.normalized) << "\n";
  }
  for (const auto& row : r.rows)
    if (row.failed) std::cerr << "row lambda=" << fmt(row.lambda) << " pert=" << row.pert_id << ": " << row.error << "\n";
  write_fit(std::cout, r);
  return 0;
}

int run_airy(const LambdaGrid& grid, const std::vector<double>& sigmas, const std::string& out) {
  const AirySweep a = airy_sweep(grid.values(), sigmas, Bump1d{});
  Output o(out);
  auto& os = o.get();
  os << "sigma,lambda,abs_j,ratio\n";
  for (std::size_t i = 0; i < a.sigmas.size(); ++i)
    for (std::size_t j = 0; j < a.lambdas.size(); ++j)
      os << fmt(a.sigmas[i]) << "," << fmt(a.lambdas[j]) << "," << fmt(a.abs_j[i][j]) << "," << fmt(a.ratio[i][j])
         << "\n";
  std::cout << "C=" << fmt(a.C) << "\nratio_ref=" << fmt(a.ratio_ref) << "\n";
  return 0;
}

int run_check_partition(int points, int K, int nu0, std::uint64_t seed) {
  const CutoffProfile h;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI), logr(std::log(1e-3), std::log(100.0));
  double dev = 0.0, dev_one = 0.0;
  int covered = 0;
  for (int i = 0; i < points; ++i) {
    const double r = std::exp(logr(rng)), t = angle(rng);
    const Point2 x{r * std::cos(t), r * std::sin(t)};
    const auto w = partition_weights(h, x, nu0, K);
    double s = 0.0;
    for (double v : w) s += v;
    dev = std::max(dev, std::abs(s - beta_cutoff(h, dilate(std::exp2(-K), x))));
    if (norm(dilate(std::exp2(-K), x)) <= 1.0) {
      dev_one = std::max(dev_one, std::abs(s - 1.0));
      ++covered;
    }
  }
  std::cout << "points=" << points << "\ncovered=" << covered << "\nmax_deviation=" << fmt(dev)
            << "\nmax_deviation_from_one=" << fmt(dev_one) << "\n";
  return dev <= 1e-10 && dev_one <= 1e-10 ? 0 : 1;
}

int run_center(const std::string& poly, double tol, int max_iter) {
  const auto phase = SmoothFunction2d::from_polynomial(parse_poly(poly));
  const CenterResult c = newton_center(phase, {}, tol, max_iter);
  std::cout << "z1=" << fmt(c.z.x1) << "\nz2=" << fmt(c.z.x2) << "\niterations=" << c.iterations
            << "\nresidual=" << fmt(c.residual) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"osclab: oscillatory integrals with quartic phases"};
  app.require_subcommand(1);

  double tol = 1e-9, lambda = 100.0, amp_radius = 0.5;
  std::string out, poly, config_path;
  bool verbose = false, dyadic = false, center = false;

  auto* classify = app.add_subcommand("classify", "normal form and oscillation type of a quartic form");
  classify->add_option("poly", poly, "homogeneous quartic")->required();
  classify->add_option("--tol", tol, "root tolerance");
  classify->add_flag("--verbose", verbose, "print transform, roots and versality ranks");

  auto* integrate = app.add_subcommand("integrate", "J(lambda) for a polynomial phase and the standard bump");
  integrate->add_option("poly", poly, "phase")->required();
  integrate->add_option("--lambda", lambda)->required();
  integrate->add_option("--amp-radius", amp_radius);
  integrate->add_option("--tol", tol);
  integrate->add_flag("--dyadic", dyadic, "sum the dyadic pieces instead of the direct quadrature");

  auto* decompose = app.add_subcommand("decompose", "per-ring values of the dyadic decomposition (CSV)");
  decompose->add_option("poly", poly, "phase")->required();
  decompose->add_option("--lambda", lambda)->required();
  decompose->add_option("--amp-radius", amp_radius);
  decompose->add_option("--tol", tol);
  decompose->add_flag("--center", center, "center the phase first");
  decompose->add_option("--out", out);

  SweepConfig sc;
  sc.f_pi = parse_poly("x1^4 + x1^2*x2^2 + x2^4");
  std::string phase_text, g_text;
  double epsilon = 0, lmin = 0, lmax = 0, box = 0;
  int lpoints = 0, npert = 0;
  std::uint64_t seed = 0;
  auto* sweep = app.add_subcommand("sweep", "lambda sweep over seeded perturbations (CSV + fit summary)");
  sweep->add_option("--config", config_path, "flat key = value file");
  auto* o_phase = sweep->add_option("--phase", phase_text);
  auto* o_g = sweep->add_option("--g", g_text);
  auto* o_eps = sweep->add_option("--epsilon", epsilon);
  auto* o_npert = sweep->add_option("--n-pert", npert);
  auto* o_seed = sweep->add_option("--seed", seed);
  auto* o_lmin = sweep->add_option("--lambda-min", lmin);
  auto* o_lmax = sweep->add_option("--lambda-max", lmax);
  auto* o_lpts = sweep->add_option("--lambda-points", lpoints);
  auto* o_rad = sweep->add_option("--amp-radius", amp_radius);
  auto* o_box = sweep->add_option("--box", box);
  auto* o_tol = sweep->add_option("--tol", tol);
  sweep->add_option("--out", out);

  LambdaGrid airy_grid{10.0, 1e4, 7};
  std::vector<double> sigmas{-1.0, -0.3, 0.0, 0.3, 1.0};
  auto* airy = app.add_subcommand("airy", "1d sweep over x^3 + sigma x (CSV + fitted constant)");
  airy->add_option("--lambda-min", airy_grid.min);
  airy->add_option("--lambda-max", airy_grid.max);
  airy->add_option("--lambda-points", airy_grid.points);
  airy->add_option("--sigmas", sigmas)->delimiter(',');
  airy->add_option("--out", out);

  int points = 1000, K = 20, nu0 = 2;
  std::uint64_t pseed = 7;
  auto* partition = app.add_subcommand("check-partition", "partition-of-unity identity on random points");
  partition->add_option("--points", points);
  partition->add_option("--K", K);
  partition->add_option("--nu0", nu0);
  partition->add_option("--seed", pseed);

  int max_iter = 50;
  auto* centercmd = app.add_subcommand("center", "shift that removes the mixed cubic Taylor terms");
  centercmd->add_option("poly", poly, "phase")->required();
  centercmd->add_option("--tol", tol);
  centercmd->add_option("--max-iter", max_iter);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (classify->parsed()) return run_classify(poly, tol, verbose);
    if (integrate->parsed()) return run_integrate(poly, lambda, amp_radius, tol, dyadic);
    if (decompose->parsed()) return run_decompose(poly, lambda, amp_radius, tol, center, out);
    if (sweep->parsed()) {
      if (!config_path.empty()) {
        KeyValues kv;
        try {
          kv = read_config(config_path);
          sc = apply_config(kv, sc);
        } catch (const std::runtime_error& e) {
          throw UsageError(e.what());
        }
      }
      if (o_phase->count()) sc.f_pi = parse_poly(phase_text);
      if (o_g->count()) sc.g = parse_poly(g_text);
      if (o_eps->count()) sc.epsilon = epsilon;
      if (o_npert->count()) sc.n_perturbations = npert;
      if (o_seed->count()) sc.seed = seed;
      if (o_lmin->count()) sc.grid.min = lmin;
      if (o_lmax->count()) sc.grid.max = lmax;
      if (o_lpts->count()) sc.grid.points = lpoints;
      if (o_rad->count()) sc.amp_radius = amp_radius;
      if (o_box->count()) sc.box = box;
      if (o_tol->count()) sc.tol = tol;
      return run_sweep(sc, out);
    }
    if (airy->parsed()) return run_airy(airy_grid, sigmas, out);
    if (partition->parsed()) return run_check_partition(points, K, nu0, pseed);
    if (centercmd->parsed()) return run_center(poly, tol, max_iter);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 2;
}
