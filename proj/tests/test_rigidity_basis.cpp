#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "orlicz/rigidity_basis.hpp"

using namespace orlicz;

namespace {

Vec unit_at(Index n, Index k, double sign = 1.0) {
  Vec v = Vec::Zero(n);
  v[k] = sign;
  return v;
}

}  // namespace

TEST_CASE("compute_r solves M(1/r) = 1/2") {
  const OrliczFunction P = OrliczFunction::power(4.0);
  CHECK(compute_r(P) == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-12));

  const OrliczFunction E = OrliczFunction::exp_weighted(4.0);
  const double r = compute_r(E);
  CHECK(r > 1.149);
  CHECK(r < 1.153);
  CHECK(std::abs(E(1.0 / r) - 0.5) <= 1e-10);
}

TEST_CASE("compute_h matches the linearized root of M(t) + tail(t) = 1/C(1/eps)") {
  const OrliczFunction E = OrliczFunction::exp_weighted(4.0);

  // C(10) = 10^4 e^9, phi(t) ~ M'(1) t = 5t near 0, so h ~ 1/(5 C(10)).
  const double h = compute_h(E, 0.1);
  CHECK(h == doctest::Approx(2.468196094526764e-9).epsilon(1e-9));
  CHECK(std::abs(E(h) + E.tail_near_one(h) - 1.0 / (1e4 * std::exp(9.0))) <= 1e-17);

  // Regression: the tail term evaluated literally as 1 - M(1-t) quantizes at
  // double spacing and a bisection lands on t = 2^-54 ~ 5.55e-17 regardless
  // of eps.  The true root at eps = 0.025 is ~9.0e-25, many decades below.
  const double h_small = compute_h(E, 0.025);
  CHECK(h_small == doctest::Approx(9.022050135168623e-25).epsilon(1e-9));
  CHECK(h_small < 1e-20);
  CHECK(h_small > 1e-30);

  // Power family: C(1/eps) = eps^-p exactly, no tail subtlety at eps = 0.2.
  const OrliczFunction P = OrliczFunction::power(4.0);
  const double hp = compute_h(P, 0.2);
  CHECK(P(hp) + P.tail_near_one(hp) == doctest::Approx(std::pow(0.2, 4.0)).epsilon(1e-10));
}

TEST_CASE("snap_to_basis finds the dominating coordinate") {
  const OrliczFunction E = OrliczFunction::exp_weighted(4.0);
  const LuxemburgSpace space{E, 0, 1e-10};

  const double h = 1e-6;
  Vec x = unit_at(4, 2, -1.0);
  x[2] = -(1.0 - 1e-8);
  const auto snap = snap_to_basis(space, x, h);
  REQUIRE(snap.has_value());
  CHECK(snap->index == 2);
  CHECK(snap->sign == -1);

  // No coordinate near 1: nothing to snap to.
  Vec flat(4);
  flat << 0.8, 0.6, 0.0, 0.0;
  const Vec unit = normalize(space, flat);
  CHECK(!snap_to_basis(space, unit, h).has_value());

  // Two qualifying coordinates contradict the unit-ball hypothesis.
  Vec two(4);
  two << 0.5, 0.5, 0.0, 0.0;
  CHECK_THROWS_AS((void)snap_to_basis(space, two, 0.95), std::domain_error);

  Vec big = unit_at(4, 0, 2.0);
  CHECK_THROWS_AS((void)snap_to_basis(space, big, h), std::invalid_argument);
}

TEST_CASE("basis budget at eps = 0.2, exp-weighted p = 4") {
  const OrliczFunction E = OrliczFunction::exp_weighted(4.0);
  const BasisBudget b = basis_delta_of_eps(E, 0.2);

  CHECK(b.eps == 0.2);
  CHECK(b.r > 1.149);
  CHECK(b.r < 1.153);
  CHECK(b.h_snap == doctest::Approx(2.468196094526764e-9).epsilon(1e-9));
  CHECK(b.h_snap == compute_h(E, 0.1));

  // alpha - 1 ~ h^2 sits far below the double ulp at 1; the log carries it.
  CHECK(b.alpha == 1.0);
  CHECK(b.log_alpha == doctest::Approx(6.091991961037171e-18).epsilon(1e-6));
  CHECK(b.log_alpha == doctest::Approx(b.h_snap * b.h_snap).epsilon(1e-6));

  // Largest eps' with M(1/(1+2eps')) > 2/(1+alpha): of order (alpha-1)/4.
  CHECK(static_cast<double>(b.eps_prime) ==
        doctest::Approx(1.5229979902592924e-19).epsilon(1e-6));
  CHECK(b.lemma.eps_stage == b.eps_prime / 2.0L);
  CHECK(b.lemma.eps_disjoint == b.eps_prime / 6.0L);
  CHECK(b.lemma.delta_cap < b.lemma.eps_disjoint);

  // The disjointness cascade at eps'/6 ~ 2.5e-20 lands some 6e19 decades
  // down: the value field underflows to 0 and only the log survives.
  CHECK(b.delta == 0.0L);
  CHECK(b.log10_delta == doctest::Approx(-6.416046446101701e19).epsilon(1e-9));
  CHECK(b.log10_delta == b.lemma.log10_delta);
  CHECK(b.log10_delta == b.lemma.disjoint.log10_delta);
  CHECK(b.log10_delta < static_cast<double>(log10l(b.lemma.eps_disjoint)));
}

TEST_CASE("basis budget refusals") {
  // Pure powers have alpha = 1 identically: no strict excess to work with.
  CHECK_THROWS_AS((void)basis_delta_of_eps(OrliczFunction::power(4.0), 0.2),
                  HypothesisViolation);
  // p = 2 already fails the structural audit.
  CHECK_THROWS_AS((void)basis_delta_of_eps(OrliczFunction::power(2.0), 0.2),
                  HypothesisViolation);

  // Below eps ~ 0.006 the feasibility threshold for eps' leaves the double
  // range.  That is a representability failure, not a hypothesis failure.
  const OrliczFunction E = OrliczFunction::exp_weighted(4.0);
  bool representability = false;
  try {
    (void)basis_delta_of_eps(E, 0.004);
  } catch (const HypothesisViolation&) {
  } catch (const std::runtime_error&) {
    representability = true;
  }
  CHECK(representability);
}

TEST_CASE("witness extraction snaps images to distinct signed basis vectors") {
  const OrliczFunction E = OrliczFunction::exp_weighted(4.0);
  const LuxemburgSpace space{E, 0, 1e-10};
  const BasisBudget b = basis_delta_of_eps(E, 0.2);

  SUBCASE("exact signed basis images") {
    const std::vector<Vec> images = {unit_at(4, 1), unit_at(4, 2, -1.0)};
    const auto ws = extract_basis_witnesses(space, b, images);
    REQUIRE(ws.size() == 2);
    CHECK(ws[0].ok);
    CHECK(ws[0].index == 1);
    CHECK(ws[0].sign == 1);
    CHECK(ws[0].error <= 1e-12);
    CHECK(ws[1].ok);
    CHECK(ws[1].index == 2);
    CHECK(ws[1].sign == -1);
    CHECK(ws[1].error <= 1e-12);
  }

  SUBCASE("collision is a distinctness violation") {
    const std::vector<Vec> images = {unit_at(3, 0), unit_at(3, 0)};
    CHECK_THROWS_AS((void)extract_basis_witnesses(space, b, images), DistinctnessViolation);
  }

  SUBCASE("disjointification rescues an image the direct snap misses") {
    // ||(1, 0.02, 0)|| = 1 + d with d ~ M(0.02)/M'(1) ~ 1.2e-8, so the
    // normalized top coordinate misses 1 - h_snap (h_snap ~ 2.5e-9).
    Vec x1(3);
    x1 << 1.0, 0.02, 0.0;
    const Vec u1 = normalize(space, x1);
    CHECK(!snap_to_basis(space, u1, b.h_snap).has_value());

    // Stripping the coordinate dominated by the second image leaves e_0.
    const std::vector<Vec> images = {x1, unit_at(3, 1)};
    const auto ws = extract_basis_witnesses(space, b, images);
    REQUIRE(ws.size() == 2);
    CHECK(ws[0].ok);
    CHECK(ws[0].index == 0);
    CHECK(ws[0].sign == 1);
    CHECK(ws[0].error == doctest::Approx(0.02).epsilon(1e-8));
    CHECK(ws[1].ok);
    CHECK(ws[1].index == 1);
  }

  SUBCASE("zero image is reported not-ok, without throwing") {
    const std::vector<Vec> images = {unit_at(3, 2), Vec::Zero(3)};
    const auto ws = extract_basis_witnesses(space, b, images);
    CHECK(ws[0].ok);
    CHECK(!ws[1].ok);
    CHECK(ws[1].index == -1);
  }
}

TEST_CASE("two-image path splits, normalizes, and snaps one part") {
  const OrliczFunction E = OrliczFunction::exp_weighted(4.0);
  const LuxemburgSpace space{E, 0, 1e-10};
  const BasisBudget b = basis_delta_of_eps(E, 0.2);

  const Vec x1 = unit_at(4, 0);
  const Vec x2 = unit_at(4, 1);
  const LemmaWitnesses lw = lemma_witnesses(space, b, x1, x2);
  CHECK(lw.snapped == 0);
  CHECK(lw.f_tilde[0] == 1.0);
  CHECK(lw.err1 <= 1e-10);
  CHECK(lw.err2 <= 1e-10);
  CHECK(disjoint(lw.f_tilde, lw.g_tilde));
}

TEST_CASE("contradiction modular exceeds 1 for spread-out disjoint units") {
  const OrliczFunction E = OrliczFunction::exp_weighted(4.0);
  const LuxemburgSpace space{E, 0, 1e-10};
  const BasisBudget b = basis_delta_of_eps(E, 0.2);

  // f1, g1 disjoint units with all coordinates 1/r, well below 1 - h_snap.
  const double a = 1.0 / b.r;
  Vec f1 = Vec::Zero(4), g1 = Vec::Zero(4);
  f1[0] = f1[1] = a;
  g1[2] = g1[3] = a;
  CHECK(luxemburg_norm(space, f1) == doctest::Approx(1.0).epsilon(1e-9));

  const double m = basis_contradiction_modular(space, b, f1, g1);
  const double scale =
      static_cast<double>(b.eps_prime) + (1.0 + static_cast<double>(b.delta)) * b.r;
  CHECK(m == doctest::Approx(4.0 * E(a / scale)).epsilon(1e-12));
  CHECK(m > 1.0);
}
