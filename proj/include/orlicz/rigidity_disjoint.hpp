#pragma once

#include <cstdint>
#include <vector>

#include "orlicz/core.hpp"
#include "orlicz/norm_geometry.hpp"

namespace orlicz {

// The certified constants are products of many conservative factors and land
// far below DBL_MIN in realistic configurations, so the scalar cascade runs
// in long double (x87 extended range reaches ~1e-4932).  Reports additionally
// carry log10 values so a double-rounded 0 is never the only record.
using Budget = long double;

// Grid-derived growth data for one M, as consumed by the cascade.
struct CascadeConstants {
  double K = 0.0;
  double C_5_4 = 0.0;   // delta2 constant at l = 5/4
  double C_15 = 0.0;    // delta2 constant at l = 15
  Budget C0 = 0.0;      // 3584 K^3 (C(5/4) + C(15)), uniform bound on |d^beta F|
  Budget C1 = 0.0;      // 2 C0, bound on |N'|
  Budget C2 = 0.0;      // 2 C0 (1 + 2 C1 + C1^2), bound on |N''|
  Budget C3 = 0.0;      // 2 C0 (1 + 4 C1 + 3 C2 + 3 C1^2 + 2 C1 C2 + C1^3), bound on |N'''|
  Budget C_taylor = 0.0;  // C3 / 6, the cubic Taylor-remainder coefficient
};

enum class BudgetMode { Certified, Empirical };

// Everything the discrimination step needs, for a pair of Orlicz functions
// (source M1, target M2).  h1 and onward follow the target-space cascade.
struct RigidityBudget {
  double eps = 0.0;
  BudgetMode mode = BudgetMode::Certified;
  CascadeConstants source;   // cascade for M1
  CascadeConstants target;   // cascade for M2
  Budget C = 0.0;            // max of the two Taylor coefficients
  Budget h_target = 0.0;     // h_{M2}(eps) = 1 / C_{M2}(5 / (4 eps))
  Budget h1 = 0.0;           // h_target / (6 C0 of M2)
  Budget alpha0 = 0.0;       // h1 / (8 C), the discriminating offset
  Budget delta1 = 0.0;       // 1/(1 - alpha0^2 h1 / 4) - 1
  Budget delta2 = 0.0;       // (1 + alpha0^2 h1 / 4)/(1 + alpha0^2 h1 / 8) - 1
  Budget delta = 0.0;        // min(1/4, delta1, delta2)
  // log10 of the five scaled quantities, accumulated structurally step by
  // step, so extreme eps (budgets below ~1e-4932) still leave a finite
  // record after the long double values flush to zero.
  double log10_h_target = 0.0;
  double log10_h1 = 0.0;
  double log10_alpha0 = 0.0;
  double log10_delta1 = 0.0;
  double log10_delta2 = 0.0;
  double log10_delta = 0.0;
  double empirical_C0 = 0.0; // measured sup of |d^beta F| (Empirical mode only)
  GridSpec good_grid;
  GridSpec ratio_grid;
};

struct EmpiricalOptions {
  int pair_samples = 64;     // random anchor pairs per function
  int box_points = 15;       // (alpha, eta) grid points per axis
  Index dim = 6;
  std::uint64_t seed = 0x5eedbeefULL;
};

CascadeConstants cascade_constants(const OrliczFunction& M,
                                   const GridSpec& good_grid = default_good_grid(),
                                   const GridSpec& ratio_grid = default_ratio_grid());

// Cascade from an externally supplied C0 (used by the empirical mode).
CascadeConstants cascade_from_C0(Budget C0);

// h_M(eps) = 1 / C(5 / (4 eps)); clamps to 1 when 5/(4 eps) <= 1, where the
// doubling constant degenerates.
Budget h_of_eps(const OrliczFunction& M, double eps,
                const GridSpec& ratio_grid = default_ratio_grid());

// Splits a pair into disjointly supported parts: A = { k : |f_k| >= |g_k| }
// (ties to A), f1 = f restricted to A, g1 = g restricted to the complement.
// err_* are the Luxemburg norms of the discarded parts.
struct WitnessPair {
  std::vector<Index> A, B;
  Vec f_part, g_part;
  double err_f = 0.0, err_g = 0.0;
};
WitnessPair witness_split(const LuxemburgSpace& space, const Vec& f, const Vec& g);

// Second-derivative criterion: when no coordinate split leaves both errors
// below eps, the surface must curve, namely
// d^2F/d alpha^2 (0, N(0)) >= h_M(eps).  Returns the comparison outcome
// together with both sides.
struct CurvatureCriterion {
  double second_partial = 0.0;
  Budget threshold = 0.0;
  bool holds = false;
};
CurvatureCriterion criterion_second_derivative(const NormSurface& surface, double eps,
                                               const GridSpec& ratio_grid = default_ratio_grid());

// The full eps -> delta pipeline for a source/target pair of Orlicz functions.
RigidityBudget delta_of_eps(const OrliczFunction& M1, const OrliczFunction& M2, double eps,
                            BudgetMode mode = BudgetMode::Certified,
                            const EmpiricalOptions& opts = {},
                            const GridSpec& good_grid = default_good_grid(),
                            const GridSpec& ratio_grid = default_ratio_grid());

// Outcome of evaluating the discrimination at alpha = +-alpha0.  The certified
// margin alpha0^2 h1 sits far below double resolution, so in addition to the
// face-value comparison lhs > rhs the certificate records the dichotomy data
// (N'(0), N''(0) against h1, both O(1)-scale comparisons) and, when the direct
// comparison saturates, a macroscopic alpha at which the strict inequality is
// visible in floating point.
struct AlphaCertificate {
  Budget alpha = 0.0;             // +-alpha0, sign from N'(0)
  double lhs = 0.0;               // N_{f,g}(alpha)
  double rhs = 0.0;               // (1 + delta) N_{u,v}(alpha)
  bool direct_inequality = false; // lhs > rhs at face value
  double n_prime0 = 0.0;
  double n_second0 = 0.0;
  bool dichotomy_holds = false;   // |N'(0)| > h1 or N''(0) > 2 h1
  double demo_alpha = 0.0;        // macroscopic alpha with visible inequality (0 if none)
  double demo_lhs = 0.0, demo_rhs = 0.0;
  bool certified = false;
};

// Given disjoint unit (u, v) and a pair (f, g) with norms in the (1+delta)
// band and no eps-witness (curvature criterion holds), produces the
// discriminating alpha certificate.  Refuses (invalid_argument) when the
// criterion fails, i.e. when a witness exists and there is nothing to
// discriminate.
AlphaCertificate discriminating_alpha(const RigidityBudget& budget,
                                      const LuxemburgSpace& space, const Vec& u, const Vec& v,
                                      const Vec& f, const Vec& g);

}  // namespace orlicz
