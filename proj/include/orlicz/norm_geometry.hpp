#pragma once

#include "orlicz/core.hpp"
#include "orlicz/luxemburg.hpp"

namespace orlicz {

// Two-variable surface
//
//   F(alpha, eta) = sum_k M(|f_k + alpha g_k| / eta) - 1
//
// on the open box (-1/2, 1/2) x (1/8, 2), for anchor vectors with
// 4/5 <= ||f||, ||g|| <= 5/4.  The perturbed norm eta = N(alpha) is the zero
// level set of F, and every derivative of N used downstream comes from the
// closed-form partials of F assembled coordinate-wise here.
//
// Per-coordinate partials of a_k = M(|u| / eta), u = f_k + alpha g_k,
// s = sgn(u) with sgn(0) = 0, w = |u| / eta:
//
//   d_a       =  (g/eta) s M'(w)
//   d_e       = -(|u|/eta^2) M'(w)
//   d_aa      =  (g^2/eta^2) M''(w)
//   d_ae      = -(g/eta^2) s M'(w) - (g/eta^2)(u/eta) M''(w)
//   d_ee      =  2(|u|/eta^3) M'(w) + (|u|^2/eta^4) M''(w)
//   d_aaa     =  (g^3/eta^3) s M'''(w)
//   d_aae     = -2(g^2/eta^3) M''(w) - (g^2/eta^4)|u| M'''(w)
//   d_aee     =  (2/eta^3) g s M'(w) + (4/eta^4) g u M''(w) + (1/eta^5) g |u|^2 s M'''(w)
//   d_eee     = -6(|u|/eta^4) M'(w) - 6(|u|^2/eta^5) M''(w) - (|u|^3/eta^6) M'''(w)
class NormSurface {
 public:
  // Computes and caches ||f|| and ||g||; rejects anchors outside [4/5, 5/4].
  NormSurface(LuxemburgSpace space, Vec f, Vec g);

  // Mixed partial d^(i+j) F / d alpha^i d eta^j, i + j <= 3; (0,0) is F itself.
  // Arguments must lie in the open domain box.
  double partial(double alpha, double eta, int i, int j) const;

  double operator()(double alpha, double eta) const { return partial(alpha, eta, 0, 0); }

  // N(alpha) = ||f + alpha g||.
  double norm_at(double alpha) const;

  const LuxemburgSpace& space() const { return space_; }
  const Vec& f() const { return f_; }
  const Vec& g() const { return g_; }
  double norm_f() const { return norm_f_; }
  double norm_g() const { return norm_g_; }

 private:
  LuxemburgSpace space_;
  Vec f_, g_;
  double norm_f_ = 0.0, norm_g_ = 0.0;
};

// The implicit curve alpha -> N(alpha) over a surface, with derivatives from
// the implicit function theorem:
//
//   N'  = - F_a / F_e                        at (alpha, N(alpha))
//   N'' = - (F_aa + 2 N' F_ae + N'^2 F_ee) / F_e
//
// F_e(alpha, N(alpha)) <= -1/N(alpha) < -1/2 on the whole domain; a value
// above -1/2 would mean a broken invariant upstream and throws logic_error.
class NormCurve {
 public:
  explicit NormCurve(const NormSurface& surface) : s_(&surface) {}

  double value(double alpha) const { return s_->norm_at(alpha); }
  double prime(double alpha) const;
  double second(double alpha) const;

  // | N(alpha) - N(0) - alpha N'(0) - alpha^2/2 N''(0) |
  double taylor_defect(double alpha) const;

 private:
  const NormSurface* s_;
  double eta_checked(double alpha, double* feta) const;
};

}  // namespace orlicz
