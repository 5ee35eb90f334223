#include "orlicz/rigidity_basis.hpp"

#include <cmath>
#include <cstdio>

namespace orlicz {
namespace {

// Largest e in (0, cap] with M(1/(1 + 2e)) > target, halved to stay strictly
// inside the feasible bracket.  The condition is rearranged to
// 1 - M(1 - u) < 1 - target with u = 2e/(1 + 2e), and both sides are handled
// as small quantities: with target = 2/(1+alpha) or 1/alpha and
// a = alpha - 1 of order 1e-18, the complement 1 - target is a/(2+a) resp.
// a/(1+a), and the feasible e of order 1e-19 would vanish entirely inside
// a direct M(...) > target comparison in double.
Budget feasible_eps(const OrliczFunction& M, Budget target_complement, double cap) {
  require(target_complement > 0.0L && target_complement < 1.0L,
          "feasible_eps: complement must lie in (0, 1)");
  auto small_enough = [&](double e) {
    const double u = 2.0 * e / (1.0 + 2.0 * e);
    return Budget(M.tail_near_one(u)) < target_complement;
  };
  if (small_enough(cap)) return Budget(cap) / 2.0L;
  // The feasible boundary can sit hundreds of decades below cap (it scales
  // with the submultiplicativity excess), so bisect in log10(e).
  double lo = -306.0, hi = std::log10(cap);
  if (!small_enough(std::pow(10.0, lo))) {
    throw std::runtime_error(
        "feasible_eps: no representable epsilon satisfies the strict inequality; "
        "the tolerance is too small for double precision");
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (small_enough(std::pow(10.0, mid)) ? lo : hi) = mid;
  }
  return Budget(std::pow(10.0, lo)) / 2.0L;
}

}  // namespace

double compute_r(const OrliczFunction& M) {
  require(std::abs(M(1.0) - 1.0) < 1e-12, "compute_r requires M(1) = 1");
  // Solve M(s) = 1/2 on s in (0, 1); r = 1/s.
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (M(mid) < 0.5 ? lo : hi) = mid;
  }
  const double s = 0.5 * (lo + hi);
  return 1.0 / s;
}

double compute_h(const OrliczFunction& M, double eps, const GridSpec& ratio_grid) {
  require(eps > 0.0 && eps < 1.0, "compute_h requires eps in (0, 1)");
  require(std::abs(M(1.0) - 1.0) < 1e-12, "compute_h requires M(1) = 1");
  const double target = 1.0 / delta2_constant(M, 1.0 / eps, ratio_grid);
  if (!(target > 0.0) || !std::isfinite(target)) {
    throw std::runtime_error(
        "compute_h: the doubling constant at 1/eps overflows double precision; "
        "the snap threshold at this eps has no representable value");
  }
  // phi(t) = M(t) + 1 - M(1-t) rises strictly from 0 at t = 0 to 2 at t = 1.
  // The root can lie hundreds of decades below 1 (target is 1/C(1/eps)), so
  // bisect in log10(t), and take the 1 - M(1-t) term from tail_near_one:
  // computed literally it quantizes to multiples of M'(1) 2^-53 and the
  // bisection would converge onto the rounding cliff at t = 2^-54 instead of
  // the root.  phi(t) ~ M'(1) t near 0 keeps the left end feasible.
  auto phi = [&](double t) { return M(t) + M.tail_near_one(t); };
  double lo = -306.0, hi = 0.0;
  if (!(phi(std::pow(10.0, lo)) < target)) {
    throw std::runtime_error("compute_h: no representable threshold at this eps");
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (phi(std::pow(10.0, mid)) < target ? lo : hi) = mid;
  }
  return std::pow(10.0, 0.5 * (lo + hi));
}

std::optional<SnapResult> snap_to_basis(const LuxemburgSpace& space, const Vec& x, double h) {
  require(h > 0.0 && h < 1.0, "snap_to_basis requires h in (0, 1)");
  const double nx = luxemburg_norm(space, x);
  require(nx <= 1.0 + space.tol, "snap_to_basis requires ||x|| <= 1 + tol");
  std::optional<SnapResult> found;
  for (Index k = 0; k < x.size(); ++k) {
    if (std::abs(x[k]) > 1.0 - h) {
      if (found) {
        throw std::domain_error(
            "snap_to_basis: two coordinates exceed 1 - h, which forces ||x|| > 1");
      }
      found = SnapResult{k, x[k] > 0.0 ? 1 : -1};
    }
  }
  return found;
}

BasisBudget basis_delta_of_eps(const OrliczFunction& M, double eps, BudgetMode mode,
                               const GridSpec& good_grid, const GridSpec& ratio_grid) {
  require(eps > 0.0 && eps < 1.0, "basis_delta_of_eps requires eps in (0, 1)");
  {
    const GoodReport rep = check_good(M, good_grid);
    if (!rep.is_good) {
      std::string what = "basis_delta_of_eps: M fails the structural audit:";
      for (const auto& v : rep.violations) what += " [" + v + "]";
      throw HypothesisViolation(what);
    }
  }
  BasisBudget b;
  b.eps = eps;
  b.good_grid = good_grid;
  b.ratio_grid = ratio_grid;
  b.r = compute_r(M);
  b.h_snap = std::min(compute_h(M, eps / 2.0, ratio_grid), 1.0 - 1.0 / b.r);

  const SubmultResult sm = submult_constant(M, b.h_snap, ratio_grid.points);
  if (!sm.hypothesis_ok) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3Le", sm.log_alpha);
    throw HypothesisViolation(
        "basis_delta_of_eps: submultiplicativity constant alpha <= 1 at level h(eps/2); "
        "the basis-preservation pipeline needs alpha > 1 (log alpha = " +
        std::string(buf) + ")");
  }
  b.alpha = sm.alpha;
  b.log_alpha = static_cast<double>(sm.log_alpha);

  // Binding strict inequality for eps': M(1/(1+2e)) > 2/(1+alpha); it implies
  // the companion M(1/(1+2e)) > 1/alpha.  The complement 1 - 2/(1+alpha)
  // equals a/(2+a) with a = alpha - 1, computed without the 1 + a rounding.
  const Budget a = expm1l(sm.log_alpha);
  if (!(a > 0.0L)) {
    throw std::runtime_error(
        "basis_delta_of_eps: alpha - 1 underflows the extended budget range; "
        "no usable feasibility threshold at this eps");
  }
  b.eps_prime = feasible_eps(M, a / (2.0L + a), eps);

  // Perturbation stage at eps'/2; its disjointness budget is taken at eps'/6
  // and capped strictly below eps'/6.
  b.lemma.eps_stage = b.eps_prime / 2.0L;
  b.lemma.eps_disjoint = b.eps_prime / 6.0L;
  b.lemma.delta_cap = b.lemma.eps_disjoint * (1.0L - 1e-9L);
  b.lemma.disjoint = delta_of_eps(M, M, static_cast<double>(b.lemma.eps_disjoint), mode,
                                  EmpiricalOptions{}, good_grid, ratio_grid);
  b.lemma.delta = std::min(b.lemma.disjoint.delta, b.lemma.delta_cap);
  b.lemma.log10_delta = std::min(b.lemma.disjoint.log10_delta,
                                 static_cast<double>(log10l(b.lemma.delta_cap)));

  b.delta = b.lemma.delta;
  b.log10_delta = b.lemma.log10_delta;
  // Invariant checks run on the structural logs: the values legitimately
  // flush to zero long before the budget itself is degenerate.
  if (!std::isfinite(b.log10_delta) ||
      !(b.log10_delta < static_cast<double>(log10l(b.lemma.eps_disjoint)))) {
    throw std::runtime_error("basis_delta_of_eps: budget invariant delta < eps'/6 broken");
  }
  if (b.delta > 0.0L && !(b.delta < b.lemma.eps_disjoint)) {
    throw std::runtime_error("basis_delta_of_eps: budget invariant delta < eps'/6 broken");
  }
  return b;
}

std::vector<BasisWitness> extract_basis_witnesses(const LuxemburgSpace& space,
                                                  const BasisBudget& budget,
                                                  const std::vector<Vec>& images) {
  require(!images.empty(), "extract_basis_witnesses: no images");
  std::vector<BasisWitness> out(images.size());

  for (size_t i = 0; i < images.size(); ++i) {
    const Vec& x = images[i];
    BasisWitness w;
    if (luxemburg_norm(space, x) == 0.0) {
      out[i] = w;
      continue;
    }
    auto try_snap = [&](const Vec& candidate) -> bool {
      const Vec unit = normalize(space, candidate);
      const auto snap = snap_to_basis(space, unit, budget.h_snap);
      if (!snap) return false;
      w.index = snap->index;
      w.sign = snap->sign;
      Vec target = Vec::Zero(x.size());
      target[snap->index] = snap->sign;
      w.error = luxemburg_norm(space, x - target);
      w.ok = true;
      return true;
    };
    if (!try_snap(x)) {
      // Disjointification against the other images: keep only coordinates
      // this image dominates (ties resolved toward the earlier image).
      Vec part = Vec::Zero(x.size());
      for (Index k = 0; k < x.size(); ++k) {
        bool mine = x[k] != 0.0;
        for (size_t j = 0; mine && j < images.size(); ++j) {
          if (j == i) continue;
          const double other = std::abs(images[j][k]);
          if (j < i ? std::abs(x[k]) <= other : std::abs(x[k]) < other) mine = false;
        }
        if (mine) part[k] = x[k];
      }
      if (part.cwiseAbs().maxCoeff() > 0.0) try_snap(part);
    }
    out[i] = w;
  }

  for (size_t i = 0; i < out.size(); ++i) {
    for (size_t j = i + 1; j < out.size(); ++j) {
      if (out[i].ok && out[j].ok && out[i].index == out[j].index) {
        throw DistinctnessViolation("extract_basis_witnesses: images " + std::to_string(i) +
                                    " and " + std::to_string(j) +
                                    " snap to the same coordinate");
      }
    }
  }
  return out;
}

LemmaWitnesses lemma_witnesses(const LuxemburgSpace& space, const BasisBudget& budget,
                               const Vec& x1, const Vec& x2) {
  const WitnessPair split = witness_split(space, x1, x2);
  require(split.f_part.cwiseAbs().maxCoeff() > 0.0 && split.g_part.cwiseAbs().maxCoeff() > 0.0,
          "lemma_witnesses: degenerate split");
  const Vec f1 = normalize(space, split.f_part);
  const Vec g1 = normalize(space, split.g_part);

  LemmaWitnesses lw;
  const std::optional<SnapResult> snap_f = snap_to_basis(space, f1, budget.h_snap);
  std::optional<SnapResult> snap_g;
  if (!snap_f) snap_g = snap_to_basis(space, g1, budget.h_snap);
  if (snap_f) {
    lw.f_tilde = Vec::Zero(x1.size());
    lw.f_tilde[snap_f->index] = snap_f->sign;
    lw.g_tilde = g1;
    lw.snapped = 0;
  } else if (snap_g) {
    lw.g_tilde = Vec::Zero(x2.size());
    lw.g_tilde[snap_g->index] = snap_g->sign;
    lw.f_tilde = f1;
    lw.snapped = 1;
  } else {
    throw std::runtime_error(
        "lemma_witnesses: neither normalized part carries a dominating coordinate; "
        "inputs are outside the budget's guarantee");
  }
  lw.err1 = luxemburg_norm(space, x1 - lw.f_tilde);
  lw.err2 = luxemburg_norm(space, x2 - lw.g_tilde);
  return lw;
}

double basis_contradiction_modular(const LuxemburgSpace& space, const BasisBudget& budget,
                                   const Vec& f1, const Vec& g1) {
  const double scale =
      static_cast<double>(budget.eps_prime) + (1.0 + static_cast<double>(budget.delta)) * budget.r;
  return modular(space, f1 - g1, scale);
}

}  // namespace orlicz
