#pragma once

#include <optional>
#include <vector>

#include "orlicz/core.hpp"
#include "orlicz/rigidity_disjoint.hpp"

namespace orlicz {

// Two basis witnesses landed on the same coordinate; the images cannot come
// from a small perturbation of distinct signed basis vectors.
struct DistinctnessViolation : std::runtime_error {
  explicit DistinctnessViolation(const std::string& what) : std::runtime_error(what) {}
};

// r > 1 with M(1/r) = 1/2; for t^p this is 2^(1/p).  Requires M(1) = 1.
double compute_r(const OrliczFunction& M);

// Threshold h such that phi(t) = M(t) + 1 - M(1-t) stays below 1/C(1/eps) for
// 0 <= t < h.  phi is strictly increasing from phi(0) = 0, so h is the unique
// solution of phi(h) = 1/C(1/eps).  A unit-ball vector with |x(i0)| > 1 - h
// then sits within eps of sgn(x(i0)) e_{i0}.  Requires eps in (0, 1).
double compute_h(const OrliczFunction& M, double eps,
                 const GridSpec& ratio_grid = default_ratio_grid());

struct SnapResult {
  Index index = -1;
  int sign = 0;
};

// Finds the coordinate of x exceeding 1 - h in magnitude, if any.  Requires
// ||x|| <= 1 + tol.  Two qualifying coordinates force ||x|| > 1 (each sits
// above 1/r once h <= 1 - 1/r) and throw domain_error.
std::optional<SnapResult> snap_to_basis(const LuxemburgSpace& space, const Vec& x, double h);

// Budget for basis preservation.  The construction is two-stage: the
// snapping threshold h(eps/2) fixes the submultiplicativity band, its excess
// above 1 fixes the largest feasible eps' through the strict inequality
// M(1/(1+2 eps')) > 2/(1+alpha) (which implies the companion inequality
// M(1/(1+2 eps')) > 1/alpha), and the disjointness pipeline at eps'/6
// supplies the final candidate, capped below eps'/6.
//
// At desk-scale eps the excess alpha - 1 is of order 1e-18, eps' of order
// 1e-19, and the disjointness budget at eps'/6 lies far beyond every
// floating-point range; its value field is then 0 and log10_delta carries
// the only usable record (order -1e19 for the exp-weighted family).
struct BasisBudget {
  double eps = 0.0;
  double r = 0.0;
  double h_snap = 0.0;     // min(h(eps/2), 1 - 1/r), the snapping threshold
  double alpha = 0.0;      // submultiplicativity constant at the h_snap band
  double log_alpha = 0.0;  // ln alpha; resolves the excess when alpha rounds to 1
  Budget eps_prime = 0.0;
  struct LemmaStage {
    Budget eps_stage = 0.0;     // eps'/2, the tolerance handed to the pair stage
    Budget eps_disjoint = 0.0;  // eps'/6, the disjointness tolerance
    Budget delta_cap = 0.0;     // just below eps'/6
    RigidityBudget disjoint;    // disjointness budget at eps'/6
    Budget delta = 0.0;         // min(disjoint delta, cap)
    double log10_delta = 0.0;
  } lemma;
  Budget delta = 0.0;
  double log10_delta = 0.0;
  GridSpec good_grid;
  GridSpec ratio_grid;
};

// eps -> delta for basis preservation.  Throws HypothesisViolation when M
// fails the structural audit or when the submultiplicativity constant does
// not exceed 1 (e.g. the pure power family, where it equals 1 identically).
BasisBudget basis_delta_of_eps(const OrliczFunction& M, double eps,
                               BudgetMode mode = BudgetMode::Certified,
                               const GridSpec& good_grid = default_good_grid(),
                               const GridSpec& ratio_grid = default_ratio_grid());

struct BasisWitness {
  Index index = -1;
  int sign = 0;
  double error = 0.0;  // || image - sign * e_index ||, computed, not inferred
  bool ok = false;
};

// Runs the witness path per image: normalize and snap; if no coordinate
// dominates outright, first strip the coordinates on which some other image
// is at least as large (the disjointification step), renormalize, snap again.
// Witness indices must be pairwise distinct across successful images.
std::vector<BasisWitness> extract_basis_witnesses(const LuxemburgSpace& space,
                                                  const BasisBudget& budget,
                                                  const std::vector<Vec>& images);

struct LemmaWitnesses {
  Vec f_tilde, g_tilde;   // disjointly supported approximants
  int snapped = -1;       // which of the two collapsed to a signed basis vector
  double err1 = 0.0, err2 = 0.0;
};

// The two-image path: split the pair into disjoint parts, normalize both, and
// snap whichever part carries a dominating coordinate.  At least one must,
// otherwise the budget's defining inequality would be violated.
LemmaWitnesses lemma_witnesses(const LuxemburgSpace& space, const BasisBudget& budget,
                               const Vec& x1, const Vec& x2);

// modular((f1 - g1) / (eps' + (1 + delta) r)): for disjoint unit f1, g1 with
// all coordinates at most 1 - h(eps/2) this exceeds 1, the inequality that
// forces some coordinate to dominate.
double basis_contradiction_modular(const LuxemburgSpace& space, const BasisBudget& budget,
                                   const Vec& f1, const Vec& g1);

}  // namespace orlicz
