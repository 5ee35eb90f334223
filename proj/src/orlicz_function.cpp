#include "orlicz/orlicz_function.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>

namespace orlicz {
namespace {

double fd_step(double t) { return std::cbrt(DBL_EPSILON) * std::max(std::abs(t), 1.0); }

void check_domain(double t) {
  if (!(t >= 0.0)) throw std::domain_error("OrliczFunction: argument must be >= 0");
}

// t^e with the convention 0^0 = 1 and exact zero for e > 0, used so that the
// closed-form derivative coefficients behave at t = 0.
double powt(double t, double e) { return std::pow(t, e); }

}  // namespace

OrliczFunction OrliczFunction::power(double p) {
  require(p > 1.0, "power family requires p > 1");
  OrliczFunction M;
  M.family_ = OrliczFamily::Power;
  M.p_ = p;
  M.t_one_ = 1.0;
  M.name_ = "power(p=" + std::to_string(p) + ")";
  return M;
}

OrliczFunction OrliczFunction::exp_weighted(double p) {
  require(p > 3.0, "exp_weighted family requires p > 3");
  OrliczFunction M;
  M.family_ = OrliczFamily::ExpWeighted;
  M.p_ = p;
  M.t_one_ = 1.0;
  M.name_ = "exp_weighted(p=" + std::to_string(p) + ")";
  return M;
}

OrliczFunction OrliczFunction::custom(std::string name, std::function<double(double)> f,
                                      std::function<double(double)> d1,
                                      std::function<double(double)> d2,
                                      std::function<double(double)> d3) {
  require(static_cast<bool>(f), "custom family requires an evaluator");
  OrliczFunction M;
  M.family_ = OrliczFamily::Custom;
  M.name_ = std::move(name);
  M.f_ = std::move(f);
  M.d1_ = std::move(d1);
  M.d2_ = std::move(d2);
  M.d3_ = std::move(d3);
  require(std::abs(M.f_(0.0)) < 1e-14, "custom Orlicz function must satisfy M(0) = 0");
  // Solve M(t1) = 1 by bracketed bisection.
  double lo = 1.0, hi = 1.0;
  int guard = 0;
  while (M.f_(lo) > 1.0 && ++guard < 2048) lo *= 0.5;
  guard = 0;
  while (M.f_(hi) < 1.0 && ++guard < 2048) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (M.f_(mid) < 1.0 ? lo : hi) = mid;
  }
  M.t_one_ = 0.5 * (lo + hi);
  return M;
}

double OrliczFunction::eval(double t) const {
  check_domain(t);
  switch (family_) {
    case OrliczFamily::Power:
      return powt(t, p_);
    case OrliczFamily::ExpWeighted:
      return powt(t, p_) * std::exp(t - 1.0);
    case OrliczFamily::Custom:
      return f_(t);
  }
  return 0.0;
}

double OrliczFunction::deriv1(double t) const {
  check_domain(t);
  switch (family_) {
    case OrliczFamily::Power:
      return p_ * powt(t, p_ - 1.0);
    case OrliczFamily::ExpWeighted:
      return std::exp(t - 1.0) * powt(t, p_ - 1.0) * (t + p_);
    case OrliczFamily::Custom: {
      if (d1_) return d1_(t);
      const double h = std::min(fd_step(t), t > 0 ? t : fd_step(t));
      if (t - h < 0.0) return (f_(t + h) - f_(t)) / h;
      return (f_(t + h) - f_(t - h)) / (2.0 * h);
    }
  }
  return 0.0;
}

double OrliczFunction::deriv2(double t) const {
  check_domain(t);
  switch (family_) {
    case OrliczFamily::Power: {
      const double c = p_ * (p_ - 1.0);
      return c == 0.0 ? 0.0 : c * powt(t, p_ - 2.0);
    }
    case OrliczFamily::ExpWeighted: {
      const double x = (t + p_) * (t + p_) - p_;
      return std::exp(t - 1.0) * powt(t, p_ - 2.0) * x;
    }
    case OrliczFamily::Custom: {
      if (d2_) return d2_(t);
      const double h = fd_step(t);
      if (t - h < 0.0) return (f_(t + 2 * h) - 2.0 * f_(t + h) + f_(t)) / (h * h);
      return (f_(t + h) - 2.0 * f_(t) + f_(t - h)) / (h * h);
    }
  }
  return 0.0;
}

double OrliczFunction::deriv3(double t) const {
  check_domain(t);
  switch (family_) {
    case OrliczFamily::Power: {
      const double c = p_ * (p_ - 1.0) * (p_ - 2.0);
      return c == 0.0 ? 0.0 : c * powt(t, p_ - 3.0);
    }
    case OrliczFamily::ExpWeighted: {
      const double x = (t + p_) * (t + p_) - p_;
      return std::exp(t - 1.0) * powt(t, p_ - 3.0) *
             ((t + p_ - 2.0) * x + 2.0 * t * (t + p_));
    }
    case OrliczFamily::Custom: {
      if (d3_) return d3_(t);
      const double h = 4.0 * fd_step(t);
      if (t - 2 * h < 0.0) {
        return (f_(t + 3 * h) - 3.0 * f_(t + 2 * h) + 3.0 * f_(t + h) - f_(t)) / (h * h * h);
      }
      return (f_(t + 2 * h) - 2.0 * f_(t + h) + 2.0 * f_(t - h) - f_(t - 2 * h)) /
             (2.0 * h * h * h);
    }
  }
  return 0.0;
}

double OrliczFunction::log_eval(double t) const {
  require(t > 0.0, "log_eval requires t > 0");
  switch (family_) {
    case OrliczFamily::Power:
      return p_ * std::log(t);
    case OrliczFamily::ExpWeighted:
      return p_ * std::log(t) + (t - 1.0);
    case OrliczFamily::Custom:
      return std::log(f_(t));
  }
  return 0.0;
}

double OrliczFunction::log_ratio(double t, double u) const {
  require(t > 0.0 && u > 0.0, "log_ratio requires t, u > 0");
  switch (family_) {
    case OrliczFamily::Power:
      return 0.0;
    case OrliczFamily::ExpWeighted:
      return (1.0 - t) * (1.0 - u);
    case OrliczFamily::Custom:
      return std::log(f_(t * u)) - std::log(f_(t)) - std::log(f_(u));
  }
  return 0.0;
}

long double OrliczFunction::log_ratio_complement(double s, double sigma) const {
  require(s > 0.0 && s < 1.0 && sigma > 0.0 && sigma < 1.0,
          "log_ratio_complement requires complements in (0, 1)");
  switch (family_) {
    case OrliczFamily::Power:
      return 0.0L;
    case OrliczFamily::ExpWeighted:
      return static_cast<long double>(s) * static_cast<long double>(sigma);
    case OrliczFamily::Custom:
      return static_cast<long double>(log_ratio(1.0 - s, 1.0 - sigma));
  }
  return 0.0L;
}

double OrliczFunction::tail_near_one(double u) const {
  require(u >= 0.0 && u < 1.0, "tail_near_one requires u in [0, 1)");
  switch (family_) {
    case OrliczFamily::Power:
      return -std::expm1(p_ * std::log1p(-u));
    case OrliczFamily::ExpWeighted:
      return -std::expm1(p_ * std::log1p(-u) - u);
    case OrliczFamily::Custom:
      return 1.0 - f_(1.0 - u);
  }
  return 0.0;
}

GoodReport check_good(const OrliczFunction& M, const GridSpec& grid) {
  require(grid.hi >= 15.0 - 1e-12, "check_good: grid must reach 15");
  require(grid.points >= 1000 && grid.log_spaced, "check_good: need >= 1000 log-spaced points");

  GoodReport rep;
  rep.grid = grid;
  const std::vector<double> ts = grid.make();
  const size_t n = ts.size();

  std::vector<double> m(n), m1(n), m2(n), m3(n);
  for (size_t i = 0; i < n; ++i) {
    const double t = ts[i];
    m[i] = M(t);
    m1[i] = M.deriv1(t);
    m2[i] = M.deriv2(t);
    m3[i] = M.deriv3(t);
    if (!std::isfinite(m[i]) || !std::isfinite(m1[i]) || !std::isfinite(m2[i]) ||
        !std::isfinite(m3[i])) {
      throw std::runtime_error("check_good: derivative evaluation failed at t = " +
                               std::to_string(t));
    }
  }

  if (std::abs(M(0.0)) > 1e-14) rep.violations.push_back("M(0) != 0");

  bool pos_ok[3] = {true, true, true};
  for (size_t i = 0; i < n; ++i) {
    if (m1[i] <= 0.0) pos_ok[0] = false;
    if (m2[i] <= 0.0) pos_ok[1] = false;
    if (m3[i] <= 0.0) pos_ok[2] = false;
  }
  for (int d = 0; d < 3; ++d) {
    if (!pos_ok[d]) {
      rep.violations.push_back("derivative of order " + std::to_string(d + 1) +
                               " not strictly positive on (0, 15]");
    }
  }

  // Convexity via the first derivative: M' must be nondecreasing.
  for (size_t i = 0; i + 1 < n; ++i) {
    if (m1[i + 1] < m1[i] * (1.0 - 1e-9) - 1e-300) {
      rep.violations.push_back("M' decreases near t = " + std::to_string(ts[i]));
      break;
    }
  }

  // M''' increasing.
  for (size_t i = 0; i + 1 < n; ++i) {
    if (m3[i + 1] < m3[i] * (1.0 - 1e-9) - 1e-300) {
      rep.violations.push_back("M''' not increasing near t = " + std::to_string(ts[i]));
      break;
    }
  }

  // o(t^3) at 0: M(t)/t^3 must decay as t descends through the smallest decade.
  {
    const double decade_hi = grid.lo * 10.0;
    double r_lo = -1.0, r_hi = -1.0;
    bool monotone = true;
    double prev = -1.0;
    for (size_t i = 0; i < n && ts[i] <= decade_hi; ++i) {
      const double r = m[i] / (ts[i] * ts[i] * ts[i]);
      if (r_lo < 0.0) r_lo = r;
      r_hi = r;
      if (prev >= 0.0 && r < prev * (1.0 - 1e-9)) monotone = false;
      prev = r;
    }
    if (!monotone || !(r_lo < r_hi * (1.0 - 1e-6))) {
      rep.violations.push_back("M(t)/t^3 does not decay to 0 near 0 (o(t^3) fails)");
    }
  }

  // Ratio suprema t M^(i)(t) / M^(i-1)(t).
  double K = 1.0 + 1e-12;
  const std::vector<double>* lvl[4] = {&m, &m1, &m2, &m3};
  for (int d = 1; d <= 3; ++d) {
    double sup = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double denom = (*lvl[d - 1])[i];
      if (denom <= 0.0) continue;
      const double r = ts[i] * (*lvl[d])[i] / denom;
      if (!std::isfinite(r)) {
        rep.violations.push_back("ratio sup for derivative order " + std::to_string(d) +
                                 " diverges");
        sup = 0.0;
        break;
      }
      sup = std::max(sup, r);
    }
    K = std::max(K, sup);
  }
  rep.K = K;
  rep.is_good = rep.violations.empty();
  return rep;
}

double delta2_constant(const OrliczFunction& M, double l, const GridSpec& grid) {
  require(l > 1.0, "delta2_constant requires l > 1");
  require(grid.hi <= 1.0 + 1e-12, "delta2_constant: grid must live on (0, 1]");
  double sup = 0.0;
  for (double x : grid.make()) {
    const double denom = M(x);
    if (denom <= 0.0) continue;
    sup = std::max(sup, M(l * x) / denom);
  }
  if (!(sup > 1.0)) throw std::runtime_error("delta2_constant: degenerate supremum");
  return sup;
}

double delta2_log_constant(const OrliczFunction& M, double l, const GridSpec& grid) {
  require(l > 1.0, "delta2_log_constant requires l > 1");
  require(grid.hi <= 1.0 + 1e-12, "delta2_log_constant: grid must live on (0, 1]");
  double sup = -std::numeric_limits<double>::infinity();
  for (double x : grid.make()) sup = std::max(sup, M.log_eval(l * x) - M.log_eval(x));
  if (!std::isfinite(sup)) throw std::runtime_error("delta2_log_constant: degenerate supremum");
  return sup;
}

SubmultResult submult_constant(const OrliczFunction& M, double eps, int points_per_dim) {
  require(eps > 0.0 && eps < 1.0, "submult_constant requires eps in (0, 1)");
  require(std::abs(M(1.0) - 1.0) < 1e-12, "submult_constant requires M(1) = 1");
  SubmultResult res;
  // Scan in the complements s = 1 - t: the inf sits at the corner t = 1 - eps,
  // and eps below 1e-16 would otherwise round the corner onto t = 1 exactly.
  res.grid = GridSpec{eps, 1.0 - 1e-8, points_per_dim, true};
  const std::vector<double> ss = res.grid.make();
  long double inf = std::numeric_limits<long double>::infinity();
  for (size_t i = 0; i < ss.size(); ++i) {
    for (size_t j = i; j < ss.size(); ++j) {  // ratio is symmetric in (t, u)
      inf = std::min(inf, M.log_ratio_complement(ss[i], ss[j]));
    }
  }
  res.log_alpha = inf;
  res.alpha = static_cast<double>(expl(inf));
  res.hypothesis_ok = std::isfinite(inf) && inf > 0.0L;
  return res;
}

GrowthConstants growth_constants(const OrliczFunction& M, const GridSpec& good_grid,
                                 const GridSpec& ratio_grid) {
  GrowthConstants g{0.0, good_grid, ratio_grid, M};
  g.K = check_good(M, good_grid).K;
  return g;
}

}  // namespace orlicz
