#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "orlicz/core.hpp"
#include "orlicz/grid.hpp"

namespace orlicz {

enum class OrliczFamily { Power, ExpWeighted, Custom };

// Convex Orlicz function M with derivatives up to order 3.
//
// Families:
//   Power        M(t) = t^p,            p > 1
//   ExpWeighted  M(t) = t^p e^(t-1),    p > 3, normalized so M(1) = 1
//   Custom       user-supplied callables; missing derivatives fall back to
//                central differences
//
// Derivative formulas for ExpWeighted (X = (t+p)^2 - p):
//   M'   = e^(t-1) t^(p-1) (t + p)
//   M''  = e^(t-1) t^(p-2) X
//   M''' = e^(t-1) t^(p-3) [ (t+p-2) X + 2 t (t+p) ]
class OrliczFunction {
 public:
  static OrliczFunction power(double p);
  static OrliczFunction exp_weighted(double p);
  static OrliczFunction custom(std::string name, std::function<double(double)> f,
                               std::function<double(double)> d1 = nullptr,
                               std::function<double(double)> d2 = nullptr,
                               std::function<double(double)> d3 = nullptr);

  double operator()(double t) const { return eval(t); }
  double eval(double t) const;
  double deriv1(double t) const;
  double deriv2(double t) const;
  double deriv3(double t) const;

  // ln M(t) for t > 0, evaluated without forming M(t); stays finite where
  // M(t) itself overflows (power: p ln t; exp-weighted: p ln t + t - 1).
  double log_eval(double t) const;

  // ln[ M(t u) / (M(t) M(u)) ] through the family's closed form, so that
  // excesses far below one double ulp of the plain ratio survive:
  //   power        (t u)^p = t^p u^p exactly, so 0
  //   exp-weighted (t u - 1) - (t - 1) - (u - 1) = (1 - t)(1 - u)
  // Custom functions fall back to differences of logs (noise ~1e-16).
  double log_ratio(double t, double u) const;

  // log_ratio(1 - s, 1 - sigma) taken directly in the complements, so bands
  // with s below 1e-16 (where 1 - s rounds to 1 in double) keep their exact
  // value: power -> 0, exp-weighted -> s * sigma.  The product is formed in
  // long double: s near 1e-300 squares past double range but stays normal in
  // the extended format.  Custom functions reconstruct t = 1 - s and inherit
  // the double rounding collapse.
  long double log_ratio_complement(double s, double sigma) const;

  // 1 - M(1 - u) for u in [0, 1), via expm1/log1p so values down to ~1e-300
  // come out to full relative precision instead of cancelling against 1.
  double tail_near_one(double u) const;

  // The argument t1 with M(t1) = 1; both built-in families have t1 = 1 exactly.
  double unit_argument() const { return t_one_; }

  OrliczFamily family() const { return family_; }
  double exponent() const { return p_; }
  const std::string& name() const { return name_; }

 private:
  OrliczFunction() = default;

  OrliczFamily family_ = OrliczFamily::Custom;
  double p_ = 0.0;
  double t_one_ = 1.0;
  std::string name_;
  std::function<double(double)> f_, d1_, d2_, d3_;
};

// Result of the structural audit below.
struct GoodReport {
  bool is_good = false;
  double K = 0.0;  // empirical sup over the grid of t M^(i)(t) / M^(i-1)(t), i = 1..3
  std::vector<std::string> violations;
  GridSpec grid;
};

// Audits M on a log grid over (0, 15]: positivity and convexity, increasing
// third derivative, M(t) = o(t^3) near 0 (strict decay of M(t)/t^3 across the
// smallest grid decade), and finiteness of the three ratio suprema whose max
// is the candidate K.  Requires at least 10^3 log-spaced points reaching 15.
GoodReport check_good(const OrliczFunction& M, const GridSpec& grid = default_good_grid());

// C(l) = sup_{0 < x <= 1} M(l x) / M(x), the growth constant of the doubling
// inequality M(l x) <= C(l) M(x).  Requires l > 1; grid lives on (0, 1].
double delta2_constant(const OrliczFunction& M, double l,
                       const GridSpec& grid = default_ratio_grid());

// ln C(l) as a grid sup of log_eval(l x) - log_eval(x).  Usable where C(l)
// overflows double (the budget cascades reach l ~ 1e20 and beyond).
double delta2_log_constant(const OrliczFunction& M, double l,
                           const GridSpec& grid = default_ratio_grid());

struct SubmultResult {
  double alpha = 0.0;  // inf of M(t u) / (M(t) M(u)) over (0, 1-eps]^2
  // ln of the same inf, in long double: the excess above 1 scales like the
  // square of the band and drops past double range near eps ~ 1e-160.
  long double log_alpha = 0.0L;
  bool hypothesis_ok = false;  // alpha > 1, decided on log_alpha > 0
  GridSpec grid;               // scanned complements s = 1 - t
};

// alpha(eps) = inf_{0 < t,u <= 1-eps} M(t u) / (M(t) M(u)), taken as the inf
// of log_ratio over the grid (same minimizer; the log form keeps excesses of
// order 1e-18 above 1 from rounding away at small eps).  Requires M(1) = 1
// and 0 < eps < 1.  alpha <= 1 is not an error here; pipelines that need
// alpha > 1 inspect hypothesis_ok and refuse on their own terms.
SubmultResult submult_constant(const OrliczFunction& M, double eps, int points_per_dim = 4096);

// Bundled grid-derived constants for one M.
struct GrowthConstants {
  double K = 0.0;
  GridSpec good_grid;
  GridSpec ratio_grid;
  OrliczFunction M;

  double delta2(double l) const { return delta2_constant(M, l, ratio_grid); }
  SubmultResult submult(double eps) const { return submult_constant(M, eps, ratio_grid.points); }
};

GrowthConstants growth_constants(const OrliczFunction& M,
                                 const GridSpec& good_grid = default_good_grid(),
                                 const GridSpec& ratio_grid = default_ratio_grid());

}  // namespace orlicz
