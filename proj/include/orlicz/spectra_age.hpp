#pragma once
// Boyd-index estimation plus the two experiments separating almost-isometric
// from isometric copies of l_p inside l_M.

#include <cstdint>
#include <string>
#include <vector>

#include "orlicz/grid.hpp"
#include "orlicz/luxemburg.hpp"
#include "orlicz/orlicz_function.hpp"

namespace orlicz {

inline GridSpec boyd_base_grid() { return {1e-4, 1.0, 96, true}; }
inline GridSpec boyd_refined_grid() { return {1e-10, 1.0, 384, true}; }

// Grid extrema of M(s*t) / (M(s) * t^p) over s in (0,1], t in (0,1).
// hypothesis_ok demands 0 < c_low and c_high < 1 with a 1e-9 strictness
// margin; the power family sits at c_high = 1 and is reported, not rejected.
struct RatioBounds {
  double c_low = 0.0;
  double c_high = 0.0;
  bool hypothesis_ok = false;
  double p = 0.0;
  GridSpec grid;
};

RatioBounds ratio_bounds(const OrliczFunction& M, double p,
                         const GridSpec& grid = boyd_base_grid());

// alpha_M = sup{q : sup_{0<s,t<=1} M(st)/(M(s)t^q) finite},
// beta_M  = inf{q : inf_{0<s,t<=1} M(st)/(M(s)t^q) positive}.
// Finiteness of a sup over a non-compact square is not computable; the
// operational surrogate is stability of the grid extremum under a 4x denser
// grid whose lower endpoint drops from 1e-4 to 1e-10, with a 1% tolerance.
// That tolerance admits power-law drift up to band = log(1.01)/log(1e6)
// in the exponent, so the raw bisection boundary sits `band` above alpha_M
// (below beta_M); the reported values subtract the known offset and the raw
// brackets are kept alongside.
struct BoydIndices {
  double alpha_M = 1.0;
  double beta_M = 1.0;
  double alpha_lo = 1.0, alpha_hi = 1.0;  // raw surrogate-boundary bracket
  double beta_lo = 1.0, beta_hi = 1.0;
  double band = 0.0;
  double resolution = 1e-3;
  RatioBounds ratio;  // evaluated at p = (alpha_M + beta_M)/2
  GridSpec base_grid, refined_grid;
};

BoydIndices boyd_indices(const OrliczFunction& M,
                         const GridSpec& base = boyd_base_grid(),
                         const GridSpec& refined = boyd_refined_grid(),
                         double resolution = 1e-3);

// 1 - sum_k M(2^{-1/p} |x1_k + x2_k|) for a disjoint unit pair. A strictly
// positive margin certifies that (x1, x2) cannot span an isometric copy of
// l_p^2; for M = t^p the chain closes with margin exactly 0. Values at or
// below roundoff are inconclusive, which the caller decides.
double non_embedding_certificate(const LuxemburgSpace& space, double p, const Vec& x1,
                                 const Vec& x2);

// Distortion of e_i -> u_i from l_p^2 into l_M^{2N}, where u_1 and u_2 are
// disjoint blocks of N equal coordinates lambda = M^{-1}(1/N). The image norm
// of (c_1, c_2) solves N(M(c_1 lambda/rho) + M(c_2 lambda/rho)) = 1, so the
// sweep over the l_p sphere costs O(points) regardless of N.
double block_copy_distortion(const OrliczFunction& M, double p, Index N,
                             int sweep_points = 2049);

struct AgeReport {
  std::string family;
  double p_estimate = 0.0;  // Boyd midpoint, used for margins and blocks
  BoydIndices boyd;
  double basis_margin = 0.0;  // pair (e_1, e_2) in dimension 2
  std::vector<double> pair_margins;
  double min_pair_margin = 0.0;
  int inconclusive_pairs = 0;
  std::vector<Index> block_sizes;
  std::vector<double> block_distortions;
  bool block_monotone = false;
  int pairs = 0;
  Index pair_dim = 8;
  std::uint64_t seed = 0;
};

// Margins over random disjoint unit pairs plus the block-size sweep: together
// they exhibit almost-isometric copies of l_p^2 without an isometric one.
AgeReport age_experiment(const OrliczFunction& M, int pairs, std::uint64_t seed,
                         const std::vector<Index>& block_sizes = {10, 100, 1000, 10000});

}  // namespace orlicz
