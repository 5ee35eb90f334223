#include "doctest.h"

#include <cmath>

#include "orlicz/rigidity_disjoint.hpp"

using namespace orlicz;

namespace {

Vec unit_vec(Index dim, Index i, double scale = 1.0) {
  Vec v = Vec::Zero(dim);
  v[i] = scale;
  return v;
}

}  // namespace

TEST_CASE("cascade recurrences from a unit seed") {
  const CascadeConstants c = cascade_from_C0(1.0L);
  CHECK(static_cast<double>(c.C1) == 2.0);
  CHECK(static_cast<double>(c.C2) == 18.0);
  CHECK(static_cast<double>(c.C3) == 310.0);
  CHECK(static_cast<double>(c.C_taylor) == doctest::Approx(310.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("certified cascade for exp-weighted p=4") {
  const OrliczFunction M = OrliczFunction::exp_weighted(4.0);
  const CascadeConstants c = cascade_constants(M);
  CHECK(c.K == doctest::Approx(19.0).epsilon(1e-9));
  CHECK(c.C_5_4 == doctest::Approx(std::pow(1.25, 4) * std::exp(0.25)).epsilon(1e-12));
  CHECK(c.C_15 == doctest::Approx(std::pow(15.0, 4) * std::exp(14.0)).epsilon(1e-12));
  // C0 = 3584 K^3 (C(5/4) + C(15))
  const long double want = 3584.0L * static_cast<long double>(c.K) * c.K * c.K *
                           (static_cast<long double>(c.C_5_4) + c.C_15);
  CHECK(static_cast<double>(c.C0) == doctest::Approx(static_cast<double>(want)).epsilon(1e-12));
  CHECK(c.C1 == 2.0L * c.C0);
  CHECK(c.C3 > c.C2);
  CHECK(c.C2 > c.C1);
}

TEST_CASE("band threshold h(eps) closed forms") {
  const OrliczFunction P = OrliczFunction::power(4.0);
  // C(l) = l^4 exactly, so h(0.2) = (4 eps / 5)^4 at l = 5/(4 eps) = 6.25
  CHECK(static_cast<double>(h_of_eps(P, 0.2)) ==
        doctest::Approx(1.0 / std::pow(6.25, 4)).epsilon(1e-12));
  const OrliczFunction E = OrliczFunction::exp_weighted(4.0);
  const double h = static_cast<double>(h_of_eps(E, 0.1));
  // 1 / (12.5^4 e^{11.5}) = 4.149e-10
  CHECK(h > 4.0e-10);
  CHECK(h < 4.3e-10);
}

TEST_CASE("certified budget at eps = 0.2 for exp-weighted p=4") {
  const OrliczFunction M = OrliczFunction::exp_weighted(4.0);
  const RigidityBudget b = delta_of_eps(M, M, 0.2);
  CHECK(b.mode == BudgetMode::Certified);
  // chained ordering of the cascade quantities
  CHECK(b.h1 < b.h_target);
  CHECK(b.alpha0 < b.h1);
  CHECK(b.alpha0 < 0.125L);
  CHECK(b.delta > 0.0L);
  CHECK(b.delta <= b.delta1);
  CHECK(b.delta <= b.delta2);
  CHECK(b.delta <= 0.25L);
  // value and structural log agree while the value is representable
  CHECK(b.log10_delta ==
        doctest::Approx(static_cast<double>(log10l(b.delta))).epsilon(1e-9));
  CHECK(b.log10_h_target ==
        doctest::Approx(static_cast<double>(log10l(b.h_target))).epsilon(1e-9));
  // frozen regression value for the full pipeline
  CHECK(b.log10_delta == doctest::Approx(-259.767).epsilon(1e-4));
}

TEST_CASE("certified budget for the power family stays representable") {
  const OrliczFunction P = OrliczFunction::power(4.0);
  const RigidityBudget b = delta_of_eps(P, P, 0.2);
  CHECK(b.delta > 0.0L);
  CHECK(std::isfinite(b.log10_delta));
  CHECK(b.log10_delta ==
        doctest::Approx(static_cast<double>(log10l(b.delta))).epsilon(1e-9));
}

TEST_CASE("structural logs survive when the values flush to zero") {
  // The basis pipeline hands eps of order 1e-20 to this stage; every value
  // field underflows even long double, and the log10 companions are the
  // only remaining record.
  const OrliczFunction M = OrliczFunction::exp_weighted(4.0);
  const RigidityBudget b = delta_of_eps(M, M, 2.5e-20);
  CHECK(b.h_target == 0.0L);
  CHECK(b.delta == 0.0L);
  CHECK(std::isfinite(b.log10_delta));
  CHECK(b.log10_h_target < -1e19);
  CHECK(b.log10_delta < b.log10_h_target);
  CHECK(b.log10_delta < -6e19);
  CHECK(b.log10_delta > -7e19);
}

TEST_CASE("audit failures are refused") {
  const OrliczFunction bad = OrliczFunction::power(2.0);
  CHECK_THROWS_AS(delta_of_eps(bad, bad, 0.2), HypothesisViolation);
}

TEST_CASE("witness split: dominated coordinates and ties") {
  const LuxemburgSpace space{OrliczFunction::exp_weighted(4.0), 2, 1e-10};
  Vec f(2), g(2);
  f << 1.0, 0.1;
  g << 0.1, 1.0;
  const WitnessPair w = witness_split(space, f, g);
  CHECK(w.A == std::vector<Index>{0});
  CHECK(w.B == std::vector<Index>{1});
  CHECK(w.f_part[0] == 1.0);
  CHECK(w.f_part[1] == 0.0);
  CHECK(w.err_f == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(w.err_g == doctest::Approx(0.1).epsilon(1e-12));

  // ties go to the first vector
  Vec t1(2), t2(2);
  t1 << 0.5, 0.5;
  t2 << 0.5, 0.5;
  const WitnessPair wt = witness_split(space, t1, t2);
  CHECK(wt.A == std::vector<Index>{0, 1});
  CHECK(wt.B.empty());
  CHECK(wt.err_f == 0.0);
}

TEST_CASE("curvature criterion: disjoint pairs have witnesses, parallel pairs curve") {
  const LuxemburgSpace space{OrliczFunction::exp_weighted(4.0), 3, 1e-10};
  const Vec u = unit_vec(3, 0), v = unit_vec(3, 1);
  const NormSurface disjoint_surface(space, u, v);
  const CurvatureCriterion cd = criterion_second_derivative(disjoint_surface, 0.2);
  CHECK_FALSE(cd.holds);

  const NormSurface parallel_surface(space, u, u);
  const CurvatureCriterion cp = criterion_second_derivative(parallel_surface, 0.2);
  CHECK(cp.holds);
  CHECK(cp.second_partial > static_cast<double>(cp.threshold));
}

TEST_CASE("discriminating alpha certificate for a curving pair") {
  const OrliczFunction M = OrliczFunction::exp_weighted(4.0);
  const RigidityBudget budget = delta_of_eps(M, M, 0.2);
  const LuxemburgSpace space{M, 3, 1e-10};
  const Vec u = unit_vec(3, 0), v = unit_vec(3, 1);
  const AlphaCertificate cert = discriminating_alpha(budget, space, u, v, u, u);
  CHECK(cert.certified);
  CHECK(cert.dichotomy_holds);
  CHECK(cert.n_prime0 == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(static_cast<double>(cert.alpha) > 0.0);

  // a disjoint (f, g) has a perfect witness: nothing to discriminate
  CHECK_THROWS_AS(discriminating_alpha(budget, space, u, v, u, v), std::invalid_argument);
}
