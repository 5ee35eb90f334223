// Acceptance gate: thirteen end-to-end criteria, one line each, always on.
// argv[1] names the CLI binary used by the process-level checks.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "orlicz/embeddings.hpp"
#include "orlicz/norm_geometry.hpp"
#include "orlicz/reports.hpp"
#include "orlicz/rng.hpp"
#include "orlicz/spectra_age.hpp"

using namespace orlicz;

namespace {

struct Fail : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define REQUIRE(cond, msg)                  \
  do {                                      \
    if (!(cond)) throw Fail(std::string(msg)); \
  } while (0)

std::string fmtd(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Vec random_vec(Rng& rng, Index dim, double lo, double hi) {
  Vec v(dim);
  for (Index k = 0; k < dim; ++k) v[k] = rng.uniform(lo, hi);
  return v;
}

Vec random_unit(const LuxemburgSpace& space, Rng& rng, Index dim) {
  for (;;) {
    Vec v = random_vec(rng, dim, -1.0, 1.0);
    if (v.cwiseAbs().maxCoeff() > 1e-3) return normalize(space, v);
  }
}

// Random surface with both anchors inside the admissible norm band.
NormSurface random_surface(const LuxemburgSpace& space, Rng& rng, Index dim) {
  const Vec f = random_unit(space, rng, dim) * rng.uniform(0.85, 1.2);
  const Vec g = random_unit(space, rng, dim) * rng.uniform(0.85, 1.2);
  return NormSurface(space, f, g);
}

// --- criterion 7 runner, reused by criterion 13 ------------------------------

struct EmbeddingRun {
  std::string report;
  double max_err = 0.0;
};

EmbeddingRun run_embedding_experiment(std::uint64_t seed, int trials, double eps) {
  const OrliczFunction E = OrliczFunction::exp_weighted(4.0);
  const LuxemburgSpace source{E, 2, 1e-10};
  const LuxemburgSpace target{E, 6, 1e-10};
  const RigidityBudget budget = delta_of_eps(E, E, eps);
  const double delta = static_cast<double>(budget.delta);

  EmbeddingRun out;
  json rows = json::array();
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t s = seed * 1000003ULL + static_cast<std::uint64_t>(t);
    DistortionEstimate est;
    const EmbeddingMap T = perturb(random_disjoint_isometry(source, target, s), delta,
                                   s ^ 0xabcdULL, &est);
    REQUIRE(est.distortion <= 1.0 + delta, "sampled map leaves the 1+delta class");

    const Vec tu = T.A.col(0), tv = T.A.col(1);
    const WitnessPair wp = witness_split(target, tu, tv);
    REQUIRE(disjoint(wp.f_part, wp.g_part), "witness parts are not disjoint");
    out.max_err = std::max({out.max_err, wp.err_f, wp.err_g});
    rows.push_back({{"seed", s},
                    {"distortion", est.distortion},
                    {"err_f", wp.err_f},
                    {"err_g", wp.err_g}});
  }

  json payload;
  payload["trials"] = rows;
  payload["max_witness_error"] = out.max_err;
  put_scaled(payload, "delta", budget.delta, budget.log10_delta);
  out.report = dump_json(report_envelope(
      "acceptance-embedding", json{{"eps", eps}, {"seed", seed}, {"n_trials", trials}},
      payload));
  return out;
}

// --- criteria ----------------------------------------------------------------

void c1_norm_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(101);
  for (double p : {2.0, 4.0, 7.0}) {
    const OrliczFunction M = OrliczFunction::power(p);
    const LuxemburgSpace space{M, 0, 1e-10};
    for (int t = 0; t < 500; ++t) {
      const Index dim = 1 + static_cast<Index>(rng.uniform_index(50));
      const Vec v = random_vec(rng, dim, -1.0, 1.0);
      if (v.cwiseAbs().maxCoeff() == 0.0) continue;
      long double s = 0.0L;
      for (Index k = 0; k < dim; ++k) s += powl(fabsl(v[k]), static_cast<long double>(p));
      const double oracle = static_cast<double>(powl(s, 1.0L / static_cast<long double>(p)));
      const double got = luxemburg_norm(space, v);
      REQUIRE(std::abs(got - oracle) <= 1e-10,
              "p = " + fmtd(p) + ": |norm - p-norm| = " + fmtd(std::abs(got - oracle)));
    }
  }
  REQUIRE(seconds_since(t0) < 5.0, "runtime above 5 s");
}

void c2_modular_identity() {
  Rng rng(202);
  for (int t = 0; t < 500; ++t) {
    const double p = rng.uniform(3.2, 8.0);
    const OrliczFunction M =
        (t % 2 == 0) ? OrliczFunction::exp_weighted(p) : OrliczFunction::power(p);
    const LuxemburgSpace space{M, 0, 1e-10};
    const Index dim = 1 + static_cast<Index>(rng.uniform_index(30));
    const Vec v = random_vec(rng, dim, -2.0, 2.0);
    if (v.cwiseAbs().maxCoeff() == 0.0) continue;
    const double residual = std::abs(modular(space, v, luxemburg_norm(space, v)) - 1.0);
    REQUIRE(residual <= 1e-9, "modular residual " + fmtd(residual));
  }
}

void c3_implicit_derivatives() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(303);
  const OrliczFunction E = OrliczFunction::exp_weighted(4.0);
  const LuxemburgSpace space{E, 6, 1e-10};
  for (int s = 0; s < 50; ++s) {
    const NormSurface S = random_surface(space, rng, 6);
    const NormCurve N(S);
    for (int i = 0; i < 20; ++i) {
      const double a = rng.uniform(-0.3, 0.3);
      const double h1 = 1e-5;
      const double fd1 = (N.value(a + h1) - N.value(a - h1)) / (2.0 * h1);
      REQUIRE(std::abs(N.prime(a) - fd1) <= 1e-6,
              "|N' - fd| = " + fmtd(std::abs(N.prime(a) - fd1)));
      const double h2 = 2e-4;
      const double fd2 = (N.value(a + h2) - 2.0 * N.value(a) + N.value(a - h2)) / (h2 * h2);
      REQUIRE(std::abs(N.second(a) - fd2) <= 1e-5,
              "|N'' - fd| = " + fmtd(std::abs(N.second(a) - fd2)));
    }
  }
  REQUIRE(seconds_since(t0) < 30.0, "runtime above 30 s");
}

void c4_partials_below_C0() {
  Rng rng(404);
  const OrliczFunction E = OrliczFunction::exp_weighted(4.0);
  const LuxemburgSpace space{E, 6, 1e-10};
  const RigidityBudget b = delta_of_eps(E, E, 0.2);
  const double C0 = static_cast<double>(b.target.C0);
  for (int s = 0; s < 10; ++s) {
    const NormSurface S = random_surface(space, rng, 6);
    for (int t = 0; t < 100; ++t) {
      const double a = rng.uniform(-0.45, 0.45);
      const double eta = rng.uniform(0.15, 1.95);
      for (int i = 0; i <= 3; ++i) {
        for (int j = 0; i + j <= 3; ++j) {
          if (i + j == 0) continue;
          const double v = S.partial(a, eta, i, j);
          REQUIRE(std::isfinite(v) && std::abs(v) <= C0,
                  "partial (" + std::to_string(i) + "," + std::to_string(j) +
                      ") = " + fmtd(v) + " above C0");
        }
      }
    }
  }
}

void c5_taylor_bound() {
  Rng rng(505);
  const OrliczFunction E = OrliczFunction::exp_weighted(4.0);
  const LuxemburgSpace space{E, 6, 1e-10};
  const RigidityBudget b = delta_of_eps(E, E, 0.2);
  for (int s = 0; s < 50; ++s) {
    const NormSurface S = random_surface(space, rng, 6);
    const NormCurve N(S);
    for (int i = 0; i < 20; ++i) {
      const double a = rng.uniform(-0.3, 0.3);
      const Budget rhs = b.C * static_cast<Budget>(std::abs(a) * std::abs(a) * std::abs(a));
      REQUIRE(static_cast<Budget>(N.taylor_defect(a)) <= rhs,
              "defect above (C3/6)|alpha|^3 at alpha = " + fmtd(a));
    }
  }
}

void c6_disjoint_expansion() {
  Rng rng(606);
  const OrliczFunction E = OrliczFunction::exp_weighted(4.0);
  const LuxemburgSpace space{E, 8, 1e-10};
  const RigidityBudget b = delta_of_eps(E, E, 0.2);
  const double a0 = static_cast<double>(b.alpha0);
  REQUIRE(a0 > 0.0, "alpha0 underflowed double range");
  for (int t = 0; t < 100; ++t) {
    Vec u = Vec::Zero(8), v = Vec::Zero(8);
    for (Index k = 0; k < 4; ++k) u[k] = rng.uniform(-1.0, 1.0);
    for (Index k = 4; k < 8; ++k) v[k] = rng.uniform(-1.0, 1.0);
    if (u.cwiseAbs().maxCoeff() < 1e-3 || v.cwiseAbs().maxCoeff() < 1e-3) continue;
    u = normalize(space, u);
    v = normalize(space, v);
    const double a = (t < 2 ? (t == 0 ? a0 : -a0) : rng.uniform(-a0, a0));
    const double lhs = luxemburg_norm(space, u + a * v);
    const double rhs =
        1.0 + static_cast<double>(b.C * static_cast<Budget>(std::abs(a) * std::abs(a) *
                                                            std::abs(a)));
    // 1e-12 absorbs the norm solver's own residual on the left side.
    REQUIRE(lhs <= rhs + 1e-12, "N(alpha) = " + fmtd(lhs) + " above 1 + C|alpha|^3");
  }
}

void c7_disjointness_end_to_end() {
  const auto t0 = std::chrono::steady_clock::now();
  const EmbeddingRun run = run_embedding_experiment(4242, 100, 0.2);
  REQUIRE(run.max_err <= 0.2, "max witness error " + fmtd(run.max_err));
  REQUIRE(seconds_since(t0) < 120.0, "runtime above 120 s");
}

void c8_basis_end_to_end() {
  const OrliczFunction E = OrliczFunction::exp_weighted(4.0);
  const LuxemburgSpace source{E, 2, 1e-10};
  const LuxemburgSpace target{E, 6, 1e-10};
  const BasisBudget bb = basis_delta_of_eps(E, 0.2);
  const double delta = static_cast<double>(bb.delta);
  for (int t = 0; t < 100; ++t) {
    const std::uint64_t s = 880000ULL + static_cast<std::uint64_t>(t);
    const EmbeddingMap T1 =
        perturb(random_disjoint_isometry(source, target, 2 * s), delta, 3 * s);
    const EmbeddingMap T2 =
        perturb(random_disjoint_isometry(source, target, 2 * s + 1), delta, 3 * s + 1);
    std::vector<Vec> im1, im2;
    for (Index c = 0; c < 2; ++c) {
      im1.push_back(T1.A.col(c));
      im2.push_back(T2.A.col(c));
    }
    const auto w1 = extract_basis_witnesses(target, bb, im1);
    const auto w2 = extract_basis_witnesses(target, bb, im2);
    for (Index c = 0; c < 2; ++c) {
      REQUIRE(w1[static_cast<size_t>(c)].ok && w2[static_cast<size_t>(c)].ok,
              "image failed to snap");
      REQUIRE(w1[static_cast<size_t>(c)].error <= 0.2 &&
                  w2[static_cast<size_t>(c)].error <= 0.2,
              "snap error above eps");
    }
    REQUIRE(w1[0].index != w1[1].index && w2[0].index != w2[1].index,
            "witness coordinates collide");
    const AlignResult R = align(T1, T2, w1, w2);
    REQUIRE(R.defect <= 0.2, "align defect " + fmtd(R.defect));
  }
}

double brute_force_defect(const EmbeddingMap& T1, const EmbeddingMap& T2) {
  const Index n = T1.target.dim, k = T1.source.dim;
  std::vector<Index> perm(static_cast<size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  double best = std::numeric_limits<double>::infinity();
  do {
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      SignedPermutation U;
      U.target_of = perm;
      U.sign.assign(static_cast<size_t>(n), 1);
      for (Index l = 0; l < n; ++l) {
        if (mask & (1u << l)) U.sign[static_cast<size_t>(l)] = -1;
      }
      double defect = 0.0;
      for (Index c = 0; c < k; ++c) {
        defect += luxemburg_norm(T2.target, U.apply(T1.A.col(c)) - Vec(T2.A.col(c)));
      }
      best = std::min(best, defect);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

void c9_alignment_oracle() {
  const OrliczFunction E = OrliczFunction::exp_weighted(4.0);
  const LuxemburgSpace source{E, 2, 1e-10};
  const LuxemburgSpace target{E, 4, 1e-10};
  const BasisBudget bb = basis_delta_of_eps(E, 0.2);
  // The derived generation budget is 0 in double, which would make every
  // alignment trivially exact; 1e-11 keeps the perturbations well inside the
  // snapping threshold (~2.5e-9) while leaving genuine work to do.
  const double gen = 1e-11;
  for (int t = 0; t < 50; ++t) {
    const std::uint64_t s = 990000ULL + static_cast<std::uint64_t>(t);
    const EmbeddingMap T1 =
        perturb(random_disjoint_isometry(source, target, 2 * s), gen, 5 * s);
    const EmbeddingMap T2 =
        perturb(random_disjoint_isometry(source, target, 2 * s + 1), gen, 5 * s + 1);
    std::vector<Vec> im1, im2;
    for (Index c = 0; c < 2; ++c) {
      im1.push_back(T1.A.col(c));
      im2.push_back(T2.A.col(c));
    }
    const AlignResult R = align(T1, T2, extract_basis_witnesses(target, bb, im1),
                                extract_basis_witnesses(target, bb, im2));
    const double best = brute_force_defect(T1, T2);
    REQUIRE(R.defect <= best + 1e-9,
            "defect " + fmtd(R.defect) + " exceeds exhaustive minimum " + fmtd(best));
  }
}

void c10_boyd_indices() {
  for (double p : {4.0, 5.0, 7.5}) {
    const BoydIndices b = boyd_indices(OrliczFunction::exp_weighted(p));
    REQUIRE(std::abs(b.alpha_M - p) <= 1e-3,
            "p = " + fmtd(p) + ": alpha_M = " + fmtd(b.alpha_M));
    REQUIRE(std::abs(b.beta_M - p) <= 1e-3,
            "p = " + fmtd(p) + ": beta_M = " + fmtd(b.beta_M));
  }
}

void c11_age_signature() {
  const auto t0 = std::chrono::steady_clock::now();
  const OrliczFunction E = OrliczFunction::exp_weighted(4.0);
  const LuxemburgSpace s2{E, 2, 1e-10};
  Vec e1 = Vec::Zero(2), e2 = Vec::Zero(2);
  e1[0] = 1.0;
  e2[1] = 1.0;
  const double margin = non_embedding_certificate(s2, 4.0, e1, e2);
  REQUIRE(margin > 0.01, "margin " + fmtd(margin));

  double prev = std::numeric_limits<double>::infinity(), last = 0.0;
  for (Index N : {10, 100, 1000, 10000}) {
    last = block_copy_distortion(E, 4.0, N);
    REQUIRE(last < prev, "distortion not decreasing at N = " + std::to_string(N));
    prev = last;
  }
  REQUIRE(last <= 1.005, "distortion at N = 10^4 is " + fmtd(last));
  REQUIRE(seconds_since(t0) < 60.0, "runtime above 60 s");
}

int run_cli(const std::string& cli, const std::string& args) {
  const std::string cmd = "\"" + cli + "\" " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1 && WIFEXITED(rc), "CLI did not exit normally");
  return WEXITSTATUS(rc);
}

void c12_cli_gates(const std::string& cli) {
  REQUIRE(!cli.empty(), "no CLI path on the command line");
  std::filesystem::create_directories("acceptance-cli-out");
  const std::string out = " --out acceptance-cli-out";
  int rc = run_cli(cli, "check-good --family exp_weighted --p 4" + out);
  REQUIRE(rc == 0, "exp-weighted audit exited " + std::to_string(rc));
  rc = run_cli(cli, "check-good --family power --p 2" + out);
  REQUIRE(rc == 3, "t^2 audit exited " + std::to_string(rc) + ", want 3");
  rc = run_cli(cli, "delta --basis --family power --p 4 --eps 0.2" + out);
  REQUIRE(rc == 3, "t^4 basis pipeline exited " + std::to_string(rc) + ", want 3");
}

void c13_determinism() {
  const EmbeddingRun a = run_embedding_experiment(777, 100, 0.2);
  const EmbeddingRun b = run_embedding_experiment(777, 100, 0.2);
  REQUIRE(a.report == b.report, "same-seed reports differ");
  REQUIRE(!a.report.empty(), "empty report");
}

int run(int idx, const char* label, const std::function<void()>& body) {
  try {
    body();
    std::printf("[PASS] %2d. %s\n", idx, label);
    return 0;
  } catch (const std::exception& e) {
    std::printf("[FAIL] %2d. %s: %s\n", idx, label, e.what());
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  int failures = 0;
  failures += run(1, "Luxemburg norm matches the p-norm for t^p, p in {2,4,7} (1500 vectors, 1e-10)",
                  c1_norm_oracle);
  failures += run(2, "modular at the computed norm is 1 within 1e-9 (500 samples)",
                  c2_modular_identity);
  failures += run(3, "implicit N' and N'' match finite differences within 1e-6 / 1e-5",
                  c3_implicit_derivatives);
  failures += run(4, "all surface partials to order 3 stay below the certified C0 (1000 points)",
                  c4_partials_below_C0);
  failures += run(5, "Taylor defect bounded by (C3/6)|alpha|^3 (1000 samples)", c5_taylor_bound);
  failures += run(6, "disjoint-pair norm expansion: N(alpha) <= 1 + C|alpha|^3 for |alpha| <= alpha0",
                  c6_disjoint_expansion);
  failures += run(7, "disjointness pipeline at eps = 0.2: witness errors <= eps over 100 seeded maps",
                  c7_disjointness_end_to_end);
  failures += run(8, "basis pipeline: distinct snaps, errors <= eps, align defect <= eps (100 pairs)",
                  c8_basis_end_to_end);
  failures += run(9, "align defect within 1e-9 of the exhaustive 4!*2^4 minimum (50 pairs)",
                  c9_alignment_oracle);
  failures += run(10, "Boyd indices recover p within 1e-3 for p in {4, 5, 7.5}", c10_boyd_indices);
  failures += run(11, "non-embedding margin > 0.01 while block distortion falls to <= 1.005 at 10^4",
                  c11_age_signature);
  failures += run(12, "CLI gates: audit accepts t^4 e^(t-1), rejects t^2; basis pipeline rejects t^4",
                  [&] { c12_cli_gates(cli); });
  failures += run(13, "same seed reproduces the embedding report byte for byte",
                  c13_determinism);

  std::printf("%d/13 criteria passed\n", 13 - failures);
  return failures;
}
