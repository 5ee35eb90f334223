#include "orlicz/luxemburg.hpp"

#include <algorithm>
#include <cmath>

#include "orlicz/grid.hpp"

namespace orlicz {
namespace {

void check_vector(const LuxemburgSpace& space, const Vec& f) {
  require(space.dim == 0 || f.size() == space.dim,
          "vector does not fit the space dimension");
  for (Index k = 0; k < f.size(); ++k) {
    if (!std::isfinite(f[k])) throw std::invalid_argument("non-finite coordinate");
  }
}

// Magnitudes sorted ascending; the canonical representation all norm and
// modular arithmetic runs on.
std::vector<double> sorted_abs(const Vec& f) {
  std::vector<double> a(static_cast<size_t>(f.size()));
  for (Index k = 0; k < f.size(); ++k) a[static_cast<size_t>(k)] = std::abs(f[k]);
  std::sort(a.begin(), a.end());
  return a;
}

double modular_sorted(const OrliczFunction& M, const std::vector<double>& abs_sorted,
                      double rho) {
  NeumaierSum s;
  for (double a : abs_sorted) {
    if (a != 0.0) s.add(M(a / rho));
  }
  return s.value();
}

double dmodular_sorted(const OrliczFunction& M, const std::vector<double>& abs_sorted,
                       double rho) {
  NeumaierSum s;
  for (double a : abs_sorted) {
    if (a != 0.0) {
      const double w = a / rho;
      s.add(-(w / rho) * M.deriv1(w));
    }
  }
  return s.value();
}

}  // namespace

double modular(const LuxemburgSpace& space, const Vec& f, double rho) {
  require(rho > 0.0, "modular requires rho > 0");
  check_vector(space, f);
  return modular_sorted(space.M, sorted_abs(f), rho);
}

double luxemburg_norm(const LuxemburgSpace& space, const Vec& f) {
  check_vector(space, f);
  const std::vector<double> a = sorted_abs(f);
  const double m = a.empty() ? 0.0 : a.back();
  if (m == 0.0) return 0.0;

  NeumaierSum abs_sum;
  for (double x : a) abs_sum.add(x);
  const double t1 = space.M.unit_argument();

  // modular(m/t1) >= M(t1) = 1 and, by convexity, modular(S/t1) <= 1,
  // so the root lies in [m/t1, S/t1].  Nudge endpoints for rounding slack.
  double lo = m / t1;
  double hi = std::max(abs_sum.value() / t1, lo);
  for (int i = 0; i < 8 && modular_sorted(space.M, a, lo) < 1.0; ++i) lo *= 1.0 - 1e-10;
  for (int i = 0; i < 8 && modular_sorted(space.M, a, hi) > 1.0; ++i) hi *= 1.0 + 1e-10;

  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (modular_sorted(space.M, a, mid) >= 1.0 ? lo : hi) = mid;
  }

  double rho = 0.5 * (lo + hi);
  for (int i = 0; i < 3; ++i) {
    const double r = modular_sorted(space.M, a, rho) - 1.0;
    if (r == 0.0) break;
    const double d = dmodular_sorted(space.M, a, rho);
    if (!(d < 0.0)) break;
    const double next = rho - r / d;
    if (!(next > 0.0) || !std::isfinite(next)) break;
    rho = std::clamp(next, lo, hi);
  }

  if (std::abs(modular_sorted(space.M, a, rho) - 1.0) > space.tol) {
    throw std::runtime_error("luxemburg_norm: root residual exceeds tolerance");
  }
  return rho;
}

Vec normalize(const LuxemburgSpace& space, const Vec& f) {
  const double n = luxemburg_norm(space, f);
  require(n > 0.0, "normalize: zero vector");
  return f / n;
}

bool disjoint(const Vec& f, const Vec& g) {
  require(f.size() == g.size(), "disjoint: dimension mismatch");
  for (Index k = 0; k < f.size(); ++k) {
    if (f[k] != 0.0 && g[k] != 0.0) return false;
  }
  return true;
}

std::vector<Index> support(const Vec& f) {
  std::vector<Index> s;
  for (Index k = 0; k < f.size(); ++k) {
    if (f[k] != 0.0) s.push_back(k);
  }
  return s;
}

}  // namespace orlicz
