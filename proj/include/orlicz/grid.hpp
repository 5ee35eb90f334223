#pragma once

#include <cmath>
#include <vector>

#include "orlicz/core.hpp"

namespace orlicz {

// Sampling grid for sup/inf estimation of growth ratios.  Log spacing keeps
// resolution near 0, where the interesting behaviour of M(t)/t^q lives.
struct GridSpec {
  double lo = 1e-8;
  double hi = 1.0;
  int points = 4096;
  bool log_spaced = true;

  std::vector<double> make() const {
    require(lo > 0.0 && hi > lo && points >= 2, "GridSpec: need 0 < lo < hi, points >= 2");
    std::vector<double> xs(static_cast<size_t>(points));
    const double n1 = static_cast<double>(points - 1);
    for (int i = 0; i < points; ++i) {
      const double u = static_cast<double>(i) / n1;
      xs[static_cast<size_t>(i)] =
          log_spaced ? lo * std::pow(hi / lo, u) : lo + (hi - lo) * u;
    }
    // Endpoints exact: suprema attained on the boundary must not be lost to rounding.
    xs.front() = lo;
    xs.back() = hi;
    return xs;
  }
};

inline GridSpec default_good_grid() { return GridSpec{1e-8, 15.0, 4096, true}; }
inline GridSpec default_ratio_grid() { return GridSpec{1e-8, 1.0, 4096, true}; }

// Compensated (Neumaier) summation; the running correction keeps long
// accumulations of heterogeneous magnitudes faithful to the last ulp.
class NeumaierSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace orlicz
