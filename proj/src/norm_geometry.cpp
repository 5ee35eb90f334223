#include "orlicz/norm_geometry.hpp"

#include <cmath>

#include "orlicz/grid.hpp"

namespace orlicz {
namespace {

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

void check_box(double alpha, double eta) {
  if (!(alpha > -0.5 && alpha < 0.5)) {
    throw std::domain_error("NormSurface: alpha outside (-1/2, 1/2)");
  }
  if (!(eta > 0.125 && eta < 2.0)) {
    throw std::domain_error("NormSurface: eta outside (1/8, 2)");
  }
}

}  // namespace

NormSurface::NormSurface(LuxemburgSpace space, Vec f, Vec g)
    : space_(std::move(space)), f_(std::move(f)), g_(std::move(g)) {
  require(f_.size() == g_.size(), "NormSurface: anchor dimension mismatch");
  norm_f_ = luxemburg_norm(space_, f_);
  norm_g_ = luxemburg_norm(space_, g_);
  const double lo = 0.8 * (1.0 - 1e-9), hi = 1.25 * (1.0 + 1e-9);
  if (!(norm_f_ >= lo && norm_f_ <= hi && norm_g_ >= lo && norm_g_ <= hi)) {
    throw std::domain_error("NormSurface: anchor norms must lie in [4/5, 5/4]");
  }
}

double NormSurface::partial(double alpha, double eta, int i, int j) const {
  check_box(alpha, eta);
  require(i >= 0 && j >= 0 && i + j <= 3, "NormSurface: partial order must satisfy i+j <= 3");

  const OrliczFunction& M = space_.M;
  NeumaierSum sum;
  for (Index k = 0; k < f_.size(); ++k) {
    const double g = g_[k];
    const double u = f_[k] + alpha * g;
    const double au = std::abs(u);
    const double s = sgn(u);
    const double w = au / eta;

    double term = 0.0;
    if (i == 0 && j == 0) {
      term = M(w);
    } else if (i == 1 && j == 0) {
      term = (g / eta) * s * M.deriv1(w);
    } else if (i == 0 && j == 1) {
      term = -(au / (eta * eta)) * M.deriv1(w);
    } else if (i == 2 && j == 0) {
      term = (g * g / (eta * eta)) * M.deriv2(w);
    } else if (i == 1 && j == 1) {
      const double e2 = eta * eta;
      term = -(g / e2) * s * M.deriv1(w) - (g / e2) * (u / eta) * M.deriv2(w);
    } else if (i == 0 && j == 2) {
      const double e3 = eta * eta * eta;
      term = 2.0 * (au / e3) * M.deriv1(w) + (au * au / (e3 * eta)) * M.deriv2(w);
    } else if (i == 3 && j == 0) {
      const double e3 = eta * eta * eta;
      term = (g * g * g / e3) * s * M.deriv3(w);
    } else if (i == 2 && j == 1) {
      const double e3 = eta * eta * eta;
      term = -2.0 * (g * g / e3) * M.deriv2(w) - (g * g / (e3 * eta)) * au * M.deriv3(w);
    } else if (i == 1 && j == 2) {
      const double e3 = eta * eta * eta;
      const double e4 = e3 * eta;
      const double e5 = e4 * eta;
      term = (2.0 / e3) * g * s * M.deriv1(w) + (4.0 / e4) * g * u * M.deriv2(w) +
             (1.0 / e5) * g * au * au * s * M.deriv3(w);
    } else {  // i == 0 && j == 3
      const double e4 = eta * eta * eta * eta;
      const double e5 = e4 * eta;
      const double e6 = e5 * eta;
      term = -6.0 * (au / e4) * M.deriv1(w) - 6.0 * (au * au / e5) * M.deriv2(w) -
             (au * au * au / e6) * M.deriv3(w);
    }
    sum.add(term);
  }
  return (i == 0 && j == 0) ? sum.value() - 1.0 : sum.value();
}

double NormSurface::norm_at(double alpha) const {
  if (!(alpha > -0.5 && alpha < 0.5)) {
    throw std::domain_error("NormSurface: alpha outside (-1/2, 1/2)");
  }
  return luxemburg_norm(space_, f_ + alpha * g_);
}

double NormCurve::eta_checked(double alpha, double* feta) const {
  const double eta = s_->norm_at(alpha);
  const double fe = s_->partial(alpha, eta, 0, 1);
  if (!(fe < -0.5)) {
    throw std::logic_error("NormCurve: d F / d eta above -1/2 at the norm; invariant broken");
  }
  if (feta) *feta = fe;
  return eta;
}

double NormCurve::prime(double alpha) const {
  double fe = 0.0;
  const double eta = eta_checked(alpha, &fe);
  const double fa = s_->partial(alpha, eta, 1, 0);
  return -fa / fe;
}

double NormCurve::second(double alpha) const {
  double fe = 0.0;
  const double eta = eta_checked(alpha, &fe);
  const double fa = s_->partial(alpha, eta, 1, 0);
  const double np = -fa / fe;
  const double faa = s_->partial(alpha, eta, 2, 0);
  const double fae = s_->partial(alpha, eta, 1, 1);
  const double fee = s_->partial(alpha, eta, 0, 2);
  return -(faa + 2.0 * np * fae + np * np * fee) / fe;
}

double NormCurve::taylor_defect(double alpha) const {
  const double n0 = value(0.0);
  const double n1 = prime(0.0);
  const double n2 = second(0.0);
  return std::abs(value(alpha) - n0 - alpha * n1 - 0.5 * alpha * alpha * n2);
}

}  // namespace orlicz
