#pragma once

#include <vector>

#include "orlicz/core.hpp"
#include "orlicz/orlicz_function.hpp"

namespace orlicz {

// Finite-dimensional Orlicz sequence space: coordinates weighted by M, with
// one solver tolerance threaded through every downstream computation.
struct LuxemburgSpace {
  OrliczFunction M;
  Index dim = 0;
  double tol = 1e-10;
};

// Sum of M(|f_k| / rho) over coordinates.  Terms are accumulated over
// magnitudes sorted ascending with compensated summation, which makes the
// value an exact symmetric function of the coordinate multiset: permuting
// coordinates or flipping signs cannot change the result by even an ulp.
double modular(const LuxemburgSpace& space, const Vec& f, double rho);

// The norm ||f|| = inf { rho > 0 : modular(f, rho) <= 1 }.  Solved by
// bracketed bisection to 1e-12 relative width, then at most three safeguarded
// Newton corrections; the bisection-only path is what the test oracles use.
// Guarantees |modular(f, ||f||) - 1| <= space.tol for f != 0; ||0|| = 0.
double luxemburg_norm(const LuxemburgSpace& space, const Vec& f);

// f / ||f||; rejects the zero vector.
Vec normalize(const LuxemburgSpace& space, const Vec& f);

bool disjoint(const Vec& f, const Vec& g);

std::vector<Index> support(const Vec& f);

}  // namespace orlicz
