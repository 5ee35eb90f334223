#include "orlicz/spectra_age.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "orlicz/rng.hpp"

namespace orlicz {
namespace {

// log(M(st)/M(s)) tabulated over a grid square; working in logs keeps the
// ratio finite for every exponent q in the bisection range.
struct LogRatioTable {
  std::vector<double> log_t;
  std::vector<double> log_R;
};

LogRatioTable build_table(const OrliczFunction& M, const GridSpec& g) {
  const std::vector<double> ts = g.make();
  LogRatioTable tab;
  size_t skipped = 0;
  for (double t : ts) {
    const double lt = std::log(t);
    for (double s : ts) {
      const double num = M.eval(s * t);
      const double den = M.eval(s);
      if (!(num > 0.0) || !(den > 0.0) || !std::isfinite(num) || !std::isfinite(den)) {
        ++skipped;
        continue;
      }
      tab.log_t.push_back(lt);
      tab.log_R.push_back(std::log(num) - std::log(den));
    }
  }
  if (skipped * 10 > ts.size() * ts.size()) {
    throw std::runtime_error("boyd_indices: Orlicz function under/overflows on the ratio grid");
  }
  return tab;
}

// Extrema of log(M(st)/(M(s)t^q)) over the tabulated square.
std::pair<double, double> log_extrema(const LogRatioTable& tab, double q) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < tab.log_R.size(); ++i) {
    const double v = tab.log_R[i] - q * tab.log_t[i];
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

}  // namespace

RatioBounds ratio_bounds(const OrliczFunction& M, double p, const GridSpec& grid) {
  require(p > 0.0 && std::isfinite(p), "ratio_bounds: need finite p > 0");
  RatioBounds rb;
  rb.p = p;
  rb.grid = grid;
  const std::vector<double> ts = grid.make();
  rb.c_low = std::numeric_limits<double>::infinity();
  rb.c_high = 0.0;
  for (double t : ts) {
    if (t >= 1.0) continue;  // the upper bound must hold strictly on t < 1
    const double tp = std::pow(t, p);
    for (double s : ts) {
      const double r = M.eval(s * t) / (M.eval(s) * tp);
      if (!std::isfinite(r)) continue;
      rb.c_low = std::min(rb.c_low, r);
      rb.c_high = std::max(rb.c_high, r);
    }
  }
  rb.hypothesis_ok = rb.c_low > 1e-9 && rb.c_high < 1.0 - 1e-9;
  return rb;
}

BoydIndices boyd_indices(const OrliczFunction& M, const GridSpec& base, const GridSpec& refined,
                         double resolution) {
  require(refined.lo < base.lo && refined.points > base.points,
          "boyd_indices: refined grid must be deeper and denser than the base grid");
  require(resolution > 0.0, "boyd_indices: resolution must be positive");

  const LogRatioTable tb = build_table(M, base);
  const LogRatioTable tr = build_table(M, refined);
  const double tol_log = std::log(1.01);

  const auto sup_stable = [&](double q) {
    return log_extrema(tr, q).second <= log_extrema(tb, q).second + tol_log;
  };
  const auto inf_stable = [&](double q) {
    return log_extrema(tr, q).first >= log_extrema(tb, q).first - tol_log;
  };

  BoydIndices b;
  b.resolution = resolution;
  b.base_grid = base;
  b.refined_grid = refined;
  b.band = tol_log / std::log(base.lo / refined.lo);

  constexpr double kQLo = 1.0, kQHi = 16.0;

  // alpha: largest q whose grid sup stays stable.
  double alo = kQLo, ahi = kQHi;
  if (!sup_stable(alo)) {
    ahi = alo;
  } else if (sup_stable(ahi)) {
    alo = ahi;  // capped at the top of the search range
  } else {
    int it = 0;
    while (ahi - alo > 0.25 * resolution && ++it < 64) {
      const double mid = 0.5 * (alo + ahi);
      (sup_stable(mid) ? alo : ahi) = mid;
    }
  }

  // beta: smallest q whose grid inf stays stable.
  double blo = kQLo, bhi = kQHi;
  if (inf_stable(blo)) {
    bhi = blo;
  } else if (!inf_stable(bhi)) {
    blo = bhi;
  } else {
    int it = 0;
    while (bhi - blo > 0.25 * resolution && ++it < 64) {
      const double mid = 0.5 * (blo + bhi);
      (inf_stable(mid) ? bhi : blo) = mid;
    }
  }

  b.alpha_lo = alo;
  b.alpha_hi = ahi;
  b.beta_lo = blo;
  b.beta_hi = bhi;
  b.alpha_M = std::clamp(0.5 * (alo + ahi) - b.band, kQLo, kQHi);
  b.beta_M = std::clamp(0.5 * (blo + bhi) + b.band, kQLo, kQHi);
  if (b.alpha_M > b.beta_M) std::swap(b.alpha_M, b.beta_M);  // noise around equal indices
  b.ratio = ratio_bounds(M, 0.5 * (b.alpha_M + b.beta_M), base);
  return b;
}

double non_embedding_certificate(const LuxemburgSpace& space, double p, const Vec& x1,
                                 const Vec& x2) {
  require(p > 1.0 && std::isfinite(p), "non_embedding_certificate: need finite p > 1");
  require(disjoint(x1, x2), "non_embedding_certificate: pair must have disjoint supports");
  require(std::abs(luxemburg_norm(space, x1) - 1.0) <= 1e-9 &&
              std::abs(luxemburg_norm(space, x2) - 1.0) <= 1e-9,
          "non_embedding_certificate: pair must be unit vectors");
  const double a = std::pow(2.0, -1.0 / p);
  return 1.0 - modular(space, x1 + x2, 1.0 / a);
}

double block_copy_distortion(const OrliczFunction& M, double p, Index N, int sweep_points) {
  require(p > 1.0 && std::isfinite(p), "block_copy_distortion: need finite p > 1");
  require(N >= 1, "block_copy_distortion: need N >= 1");
  require(sweep_points >= 3, "block_copy_distortion: need at least 3 sweep points");

  const double t1 = M.unit_argument();
  const double dN = static_cast<double>(N);

  // lambda with N * M(lambda) = 1, so each block has unit norm.
  double lo = 0.0, hi = t1;
  for (int it = 0; it < 120; ++it) {
    const double mid = 0.5 * (lo + hi);
    (dN * M.eval(mid) < 1.0 ? lo : hi) = mid;
  }
  const double lambda = 0.5 * (lo + hi);

  // Image norm of c1*u1 + c2*u2: the modular collapses to two terms.
  const auto image_norm = [&](double c1, double c2) {
    const double cmax = std::max(c1, c2);
    double rlo = cmax * lambda / t1;
    double rhi = dN * (c1 + c2) * lambda / t1;
    for (int it = 0; it < 110; ++it) {
      const double mid = 0.5 * (rlo + rhi);
      const double g = dN * (M.eval(c1 * lambda / mid) + M.eval(c2 * lambda / mid));
      (g > 1.0 ? rlo : rhi) = mid;
    }
    return 0.5 * (rlo + rhi);
  };

  double sup = 0.0, inf = std::numeric_limits<double>::infinity();
  for (int i = 0; i < sweep_points; ++i) {
    const double w = static_cast<double>(i) / (sweep_points - 1);
    const double c1 = std::pow(w, 1.0 / p);
    const double c2 = std::pow(1.0 - w, 1.0 / p);
    const double source = std::pow(std::pow(c1, p) + std::pow(c2, p), 1.0 / p);
    const double r = image_norm(c1, c2) / source;
    sup = std::max(sup, r);
    inf = std::min(inf, r);
  }
  return std::max(sup, 1.0 / inf);
}

AgeReport age_experiment(const OrliczFunction& M, int pairs, std::uint64_t seed,
                         const std::vector<Index>& block_sizes) {
  require(pairs >= 1, "age_experiment: need at least one pair");
  AgeReport rep;
  rep.family = M.name();
  rep.pairs = pairs;
  rep.seed = seed;
  rep.block_sizes = block_sizes;
  rep.boyd = boyd_indices(M);
  rep.p_estimate = 0.5 * (rep.boyd.alpha_M + rep.boyd.beta_M);

  {
    LuxemburgSpace two{M, 2, 1e-10};
    Vec e1 = Vec::Zero(2), e2 = Vec::Zero(2);
    e1[0] = 1.0;
    e2[1] = 1.0;
    rep.basis_margin = non_embedding_certificate(two, rep.p_estimate, e1, e2);
  }

  const Index n = rep.pair_dim;
  LuxemburgSpace space{M, n, 1e-10};
  rep.min_pair_margin = std::numeric_limits<double>::infinity();
  for (int t = 0; t < pairs; ++t) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(t));
    std::vector<Index> idx(static_cast<size_t>(n));
    std::iota(idx.begin(), idx.end(), Index{0});
    for (Index i = n - 1; i > 0; --i) {
      const auto j = static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(i + 1)));
      std::swap(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)]);
    }
    Vec x1 = Vec::Zero(n), x2 = Vec::Zero(n);
    for (Index i = 0; i < n; ++i) {
      const double v = rng.sign() * rng.uniform(0.1, 1.0);
      (i < n / 2 ? x1 : x2)[idx[static_cast<size_t>(i)]] = v;
    }
    x1 /= luxemburg_norm(space, x1);
    x2 /= luxemburg_norm(space, x2);
    const double margin = non_embedding_certificate(space, rep.p_estimate, x1, x2);
    rep.pair_margins.push_back(margin);
    rep.min_pair_margin = std::min(rep.min_pair_margin, margin);
    if (margin <= 1e-12) ++rep.inconclusive_pairs;
  }

  rep.block_monotone = true;
  for (Index N : block_sizes) {
    rep.block_distortions.push_back(block_copy_distortion(M, rep.p_estimate, N));
  }
  for (size_t i = 1; i < rep.block_distortions.size(); ++i) {
    if (!(rep.block_distortions[i] < rep.block_distortions[i - 1])) rep.block_monotone = false;
  }
  return rep;
}

}  // namespace orlicz
