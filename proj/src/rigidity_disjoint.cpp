#include "orlicz/rigidity_disjoint.hpp"

#include <cmath>

#include "orlicz/rng.hpp"

namespace orlicz {
namespace {

Vec random_band_vector(Rng& rng, Index dim, const LuxemburgSpace& space) {
  Vec v(dim);
  for (Index k = 0; k < dim; ++k) v[k] = rng.normal();
  v /= luxemburg_norm(space, v);
  return v * rng.uniform(0.82, 1.22);
}

double measure_sup_partials(const OrliczFunction& M, const EmpiricalOptions& opts) {
  LuxemburgSpace space{M, opts.dim, 1e-10};
  Rng rng(opts.seed);
  double sup = 0.0;
  for (int s = 0; s < opts.pair_samples; ++s) {
    const NormSurface surf(space, random_band_vector(rng, opts.dim, space),
                           random_band_vector(rng, opts.dim, space));
    for (int ia = 0; ia < opts.box_points; ++ia) {
      const double alpha = -0.499 + 0.998 * ia / (opts.box_points - 1);
      for (int ie = 0; ie < opts.box_points; ++ie) {
        const double eta = 0.126 + (1.999 - 0.126) * ie / (opts.box_points - 1);
        for (int i = 0; i <= 3; ++i) {
          for (int j = 0; i + j <= 3; ++j) {
            if (i == 0 && j == 0) continue;
            sup = std::max(sup, std::abs(surf.partial(alpha, eta, i, j)));
          }
        }
      }
    }
  }
  return sup;
}

}  // namespace

CascadeConstants cascade_from_C0(Budget C0) {
  CascadeConstants c;
  c.C0 = C0;
  c.C1 = 2.0L * C0;
  c.C2 = 2.0L * C0 * (1.0L + 2.0L * c.C1 + c.C1 * c.C1);
  c.C3 = 2.0L * C0 *
         (1.0L + 4.0L * c.C1 + 3.0L * c.C2 + 3.0L * c.C1 * c.C1 + 2.0L * c.C1 * c.C2 +
          c.C1 * c.C1 * c.C1);
  c.C_taylor = c.C3 / 6.0L;
  return c;
}

CascadeConstants cascade_constants(const OrliczFunction& M, const GridSpec& good_grid,
                                   const GridSpec& ratio_grid) {
  const GoodReport rep = check_good(M, good_grid);
  if (!rep.is_good) {
    std::string what = "cascade_constants: M fails the structural audit:";
    for (const auto& v : rep.violations) what += " [" + v + "]";
    throw HypothesisViolation(what);
  }
  const double c54 = delta2_constant(M, 1.25, ratio_grid);
  const double c15 = delta2_constant(M, 15.0, ratio_grid);
  const Budget K = rep.K;
  CascadeConstants c = cascade_from_C0(3584.0L * K * K * K * (Budget(c54) + Budget(c15)));
  c.K = rep.K;
  c.C_5_4 = c54;
  c.C_15 = c15;
  return c;
}

Budget h_of_eps(const OrliczFunction& M, double eps, const GridSpec& ratio_grid) {
  require(eps > 0.0, "h_of_eps requires eps > 0");
  const double l = 5.0 / (4.0 * eps);
  if (l <= 1.0) return 1.0L;
  return 1.0L / Budget(delta2_constant(M, l, ratio_grid));
}

WitnessPair witness_split(const LuxemburgSpace& space, const Vec& f, const Vec& g) {
  require(f.size() == g.size(), "witness_split: dimension mismatch");
  WitnessPair w;
  w.f_part = Vec::Zero(f.size());
  w.g_part = Vec::Zero(g.size());
  Vec f_rest = Vec::Zero(f.size()), g_rest = Vec::Zero(g.size());
  for (Index k = 0; k < f.size(); ++k) {
    if (std::abs(f[k]) >= std::abs(g[k])) {
      w.A.push_back(k);
      w.f_part[k] = f[k];
      g_rest[k] = g[k];
    } else {
      w.B.push_back(k);
      w.g_part[k] = g[k];
      f_rest[k] = f[k];
    }
  }
  w.err_f = luxemburg_norm(space, f_rest);
  w.err_g = luxemburg_norm(space, g_rest);
  return w;
}

CurvatureCriterion criterion_second_derivative(const NormSurface& surface, double eps,
                                               const GridSpec& ratio_grid) {
  CurvatureCriterion c;
  const double eta0 = surface.norm_at(0.0);
  c.second_partial = surface.partial(0.0, eta0, 2, 0);
  c.threshold = h_of_eps(surface.space().M, eps, ratio_grid);
  c.holds = Budget(c.second_partial) >= c.threshold;
  return c;
}

RigidityBudget delta_of_eps(const OrliczFunction& M1, const OrliczFunction& M2, double eps,
                            BudgetMode mode, const EmpiricalOptions& opts,
                            const GridSpec& good_grid, const GridSpec& ratio_grid) {
  require(eps > 0.0 && eps < 2.0, "delta_of_eps requires eps in (0, 2)");
  RigidityBudget b;
  b.eps = eps;
  b.mode = mode;
  b.good_grid = good_grid;
  b.ratio_grid = ratio_grid;
  if (mode == BudgetMode::Certified) {
    b.source = cascade_constants(M1, good_grid, ratio_grid);
    b.target = cascade_constants(M2, good_grid, ratio_grid);
  } else {
    // Measured sup of |d^beta F| replaces the symbolic C0; flagged via mode.
    b.empirical_C0 = std::max(measure_sup_partials(M1, opts), measure_sup_partials(M2, opts));
    b.source = cascade_from_C0(Budget(b.empirical_C0));
    b.target = b.source;
  }
  b.C = std::max(b.source.C_taylor, b.target.C_taylor);
  b.h_target = h_of_eps(M2, eps, ratio_grid);
  b.h1 = b.h_target / (6.0L * b.target.C0);
  b.alpha0 = b.h1 / (8.0L * b.C);
  const Budget x = b.alpha0 * b.alpha0 * b.h1 / 4.0L;
  b.delta1 = x / (1.0L - x);                  // 1/(1-x) - 1 without cancellation
  b.delta2 = (x / 2.0L) / (1.0L + x / 2.0L);  // (1+x)/(1+x/2) - 1 without cancellation
  b.delta = std::min({Budget(0.25L), b.delta1, b.delta2});

  // Structural log10 bookkeeping in parallel with the long double values: at
  // small eps the doubling constant C(5/(4 eps)) overflows and every scaled
  // value above flushes to zero, but each one is a product of factors whose
  // log10 stays finite.  Range checks run on the logs so an underflowed value
  // is not mistaken for a degenerate budget.
  const double l = 5.0 / (4.0 * eps);
  b.log10_h_target = l <= 1.0 ? 0.0 : -delta2_log_constant(M2, l, ratio_grid) / std::log(10.0);
  b.log10_h1 = b.log10_h_target - static_cast<double>(log10l(6.0L * b.target.C0));
  b.log10_alpha0 = b.log10_h1 - static_cast<double>(log10l(8.0L * b.C));
  if (!(b.log10_alpha0 < std::log10(0.125))) {
    throw std::runtime_error("delta_of_eps: alpha0 not below 1/8; degenerate budget");
  }
  const double log10_x = 2.0 * b.log10_alpha0 + b.log10_h1 - std::log10(4.0);
  if (!(log10_x < 0.0)) {
    throw std::runtime_error("delta_of_eps: quadratic gain not below 1; degenerate budget");
  }
  b.log10_delta1 = log10_x - static_cast<double>(log10l(1.0L - x));
  b.log10_delta2 = log10_x - static_cast<double>(log10l(2.0L + x));
  b.log10_delta = std::min({std::log10(0.25), b.log10_delta1, b.log10_delta2});
  return b;
}

AlphaCertificate discriminating_alpha(const RigidityBudget& budget,
                                      const LuxemburgSpace& space, const Vec& u, const Vec& v,
                                      const Vec& f, const Vec& g) {
  require(disjoint(u, v), "discriminating_alpha: u, v must be disjointly supported");
  const double band = static_cast<double>(budget.delta) + 1e-9;
  require(std::abs(luxemburg_norm(space, u) - 1.0) <= 1e-9 &&
              std::abs(luxemburg_norm(space, v) - 1.0) <= 1e-9,
          "discriminating_alpha: u, v must be unit vectors");
  const double nf = luxemburg_norm(space, f);
  const double ng = luxemburg_norm(space, g);
  require(nf >= 1.0 / (1.0 + band) - 1e-12 && nf <= 1.0 + band + 1e-12 &&
              ng >= 1.0 / (1.0 + band) - 1e-12 && ng <= 1.0 + band + 1e-12,
          "discriminating_alpha: f, g norms outside the (1+delta) band");

  const NormSurface surf_fg(space, f, g);
  const CurvatureCriterion crit =
      criterion_second_derivative(surf_fg, budget.eps, budget.ratio_grid);
  if (!crit.holds) {
    throw std::invalid_argument(
        "discriminating_alpha: curvature criterion fails, an eps-witness exists; "
        "nothing to discriminate");
  }

  const NormSurface surf_uv(space, u, v);
  const NormCurve curve_fg(surf_fg), curve_uv(surf_uv);

  AlphaCertificate cert;
  cert.n_prime0 = curve_fg.prime(0.0);
  cert.n_second0 = curve_fg.second(0.0);
  cert.alpha = cert.n_prime0 >= 0.0 ? budget.alpha0 : -budget.alpha0;
  const double a = static_cast<double>(cert.alpha);
  cert.lhs = surf_fg.norm_at(a);
  cert.rhs = (1.0 + static_cast<double>(budget.delta)) * surf_uv.norm_at(a);
  cert.direct_inequality = cert.lhs > cert.rhs;
  cert.dichotomy_holds = std::abs(Budget(cert.n_prime0)) > budget.h1 ||
                         Budget(cert.n_second0) > 2.0L * budget.h1;
  cert.certified = cert.direct_inequality || cert.dichotomy_holds;

  if (!cert.direct_inequality) {
    // The certified margin is below double resolution; exhibit the strict
    // inequality at an observable offset of the same sign.
    const double ladder[] = {1e-3, 1e-2, 0.05, 0.1, 0.2, 0.4};
    for (double mag : ladder) {
      const double aa = cert.n_prime0 >= 0.0 ? mag : -mag;
      const double lhs = surf_fg.norm_at(aa);
      const double rhs = (1.0 + static_cast<double>(budget.delta)) * surf_uv.norm_at(aa);
      if (lhs > rhs * (1.0 + 1e-12)) {
        cert.demo_alpha = aa;
        cert.demo_lhs = lhs;
        cert.demo_rhs = rhs;
        break;
      }
    }
  }
  return cert;
}

}  // namespace orlicz
