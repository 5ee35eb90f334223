#include "orlicz/embeddings.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "orlicz/rng.hpp"

namespace orlicz {
namespace {

double ratio(const EmbeddingMap& T, const Vec& x) {
  const double nx = luxemburg_norm(T.source, x);
  if (nx == 0.0) return 1.0;
  return luxemburg_norm(T.target, T.A * x) / nx;
}

// Hill-climb of sign * ratio via per-coordinate steps with geometric cooling.
Vec polish(const EmbeddingMap& T, Vec x, double direction) {
  double best = direction * ratio(T, x);
  for (double step = 0.25; step >= 1e-7; step *= 0.5) {
    for (Index i = 0; i < x.size(); ++i) {
      for (double s : {step, -step}) {
        Vec y = x;
        y[i] += s;
        if (y.cwiseAbs().maxCoeff() == 0.0) continue;
        const double v = direction * ratio(T, y);
        if (v > best) {
          best = v;
          x = y;
        }
      }
    }
  }
  return x;
}

void check_embedding(const EmbeddingMap& T) {
  require(T.A.rows() == T.target.dim && T.A.cols() == T.source.dim,
          "EmbeddingMap: matrix shape disagrees with the spaces");
  Eigen::ColPivHouseholderQR<Mat> qr(T.A);
  if (qr.rank() < T.A.cols()) {
    throw std::invalid_argument("distortion: rank-deficient matrix is not an embedding");
  }
}

}  // namespace

DistortionEstimate distortion(const EmbeddingMap& T, int samples, std::uint64_t seed) {
  check_embedding(T);
  const Index k = T.source.dim;
  Rng rng(seed);

  DistortionEstimate est;
  est.sup_ratio = 0.0;
  est.inf_ratio = std::numeric_limits<double>::infinity();
  Vec arg_max, arg_min;

  auto consider = [&](const Vec& x) {
    const double r = ratio(T, x);
    ++est.samples;
    if (r > est.sup_ratio) {
      est.sup_ratio = r;
      arg_max = x;
    }
    if (r < est.inf_ratio) {
      est.inf_ratio = r;
      arg_min = x;
    }
  };

  for (Index i = 0; i < k; ++i) {
    Vec e = Vec::Zero(k);
    e[i] = 1.0;
    consider(e);
    consider(-e);
  }
  for (int s = 0; s < samples; ++s) {
    Vec x(k);
    for (Index i = 0; i < k; ++i) x[i] = rng.normal();
    if (x.cwiseAbs().maxCoeff() == 0.0) continue;
    consider(x / luxemburg_norm(T.source, x));
  }

  arg_max = polish(T, arg_max, +1.0);
  arg_min = polish(T, arg_min, -1.0);
  est.sup_ratio = std::max(est.sup_ratio, ratio(T, arg_max));
  est.inf_ratio = std::min(est.inf_ratio, ratio(T, arg_min));
  est.distortion = std::max(est.sup_ratio, 1.0 / est.inf_ratio);
  return est;
}

EmbeddingMap random_disjoint_isometry(const LuxemburgSpace& source,
                                      const LuxemburgSpace& target, std::uint64_t seed,
                                      IsometryMode mode) {
  const Index k = source.dim, n = target.dim;
  require(k >= 1 && n >= k, "random_disjoint_isometry: need 1 <= k <= n");
  Rng rng(seed);
  EmbeddingMap T{Mat::Zero(n, k), source, target, {}};

  if (mode == IsometryMode::SignedBasis) {
    // Random injection via a Fisher-Yates prefix.
    std::vector<Index> idx(static_cast<size_t>(n));
    std::iota(idx.begin(), idx.end(), Index{0});
    for (Index i = 0; i < k; ++i) {
      const auto j = i + static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(n - i)));
      std::swap(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)]);
      T.A(idx[static_cast<size_t>(i)], i) = rng.sign();
    }
    T.method = "signed-basis-injection";
    return T;
  }

  // Disjoint equal blocks with random coefficients of unit norm per block;
  // an exact isometry only under p-additivity of the modular (the power family).
  require(source.M.family() == OrliczFamily::Power,
          "disjoint-blocks mode is exact only for the power family");
  const Index b = n / k;
  require(b >= 1, "random_disjoint_isometry: target too small for k blocks");
  for (Index i = 0; i < k; ++i) {
    Vec block(b);
    for (Index j = 0; j < b; ++j) {
      block[j] = rng.normal();
      if (block[j] == 0.0) block[j] = 1.0;
    }
    LuxemburgSpace block_space{target.M, b, target.tol};
    block /= luxemburg_norm(block_space, block);
    for (Index j = 0; j < b; ++j) T.A(i * b + j, i) = block[j];
  }
  T.method = "disjoint-blocks";
  return T;
}

EmbeddingMap perturb(const EmbeddingMap& T, double delta, std::uint64_t seed,
                     DistortionEstimate* achieved) {
  require(delta >= 0.0 && std::isfinite(delta), "perturb: delta must be finite and >= 0");
  if (delta == 0.0) {
    if (achieved) *achieved = distortion(T);
    return T;
  }
  Rng rng(seed);
  Mat G(T.A.rows(), T.A.cols());
  for (Index i = 0; i < G.rows(); ++i) {
    for (Index j = 0; j < G.cols(); ++j) G(i, j) = rng.normal();
  }

  double c = delta;
  for (int iter = 0; iter < 1200; ++iter) {
    EmbeddingMap P = T;
    P.A = T.A + c * G;
    P.method = T.method + "+gaussian";
    Eigen::ColPivHouseholderQR<Mat> qr(P.A);
    if (qr.rank() == P.A.cols()) {
      const DistortionEstimate est = distortion(P, 128, seed ^ 0x9e37ULL);
      if (est.distortion <= 1.0 + delta) {
        if (achieved) *achieved = est;
        return P;
      }
    }
    c *= 0.5;
    if (c < 1e-300) break;
  }
  // Perturbation vanished below every representable resolution.
  if (achieved) *achieved = distortion(T);
  return T;
}

AlignResult align(const EmbeddingMap& T1, const EmbeddingMap& T2,
                  const std::vector<BasisWitness>& w1, const std::vector<BasisWitness>& w2) {
  const Index k = T1.source.dim, n = T1.target.dim;
  require(T2.source.dim == k && T2.target.dim == n, "align: embedding shapes disagree");
  require(w1.size() == static_cast<size_t>(k) && w2.size() == static_cast<size_t>(k),
          "align: need one witness per source basis vector");
  for (Index i = 0; i < k; ++i) {
    require(w1[static_cast<size_t>(i)].ok && w2[static_cast<size_t>(i)].ok,
            "align: witness extraction failed for some source vector");
  }

  std::vector<Index> tau(static_cast<size_t>(n), Index{-1});
  std::vector<int> sg(static_cast<size_t>(n), 0);
  std::vector<bool> target_used(static_cast<size_t>(n), false);
  for (Index i = 0; i < k; ++i) {
    const auto& a = w1[static_cast<size_t>(i)];
    const auto& b = w2[static_cast<size_t>(i)];
    if (tau[static_cast<size_t>(a.index)] != -1 || target_used[static_cast<size_t>(b.index)]) {
      throw DistinctnessViolation("align: witness coordinates collide");
    }
    tau[static_cast<size_t>(a.index)] = b.index;
    sg[static_cast<size_t>(a.index)] = a.sign * b.sign;
    target_used[static_cast<size_t>(b.index)] = true;
  }
  // Canonical completion: remaining coordinates in increasing order, sign +1.
  std::vector<Index> free_targets;
  for (Index j = 0; j < n; ++j) {
    if (!target_used[static_cast<size_t>(j)]) free_targets.push_back(j);
  }
  size_t next = 0;
  for (Index l = 0; l < n; ++l) {
    if (tau[static_cast<size_t>(l)] == -1) {
      tau[static_cast<size_t>(l)] = free_targets[next++];
      sg[static_cast<size_t>(l)] = 1;
    }
  }

  AlignResult res;
  res.U.target_of = std::move(tau);
  res.U.sign = std::move(sg);
  NeumaierSum defect;
  for (Index i = 0; i < k; ++i) {
    const double c =
        luxemburg_norm(T1.target, res.U.apply(T1.A.col(i)) - static_cast<Vec>(T2.A.col(i)));
    res.column_errors.push_back(c);
    defect.add(c);
  }
  res.defect = defect.value();
  return res;
}

TransitivityReport eps_transitivity_experiment(const OrliczFunction& M, Index k, Index n,
                                               double eps, int trials, std::uint64_t seed,
                                               const TransitivityOptions& opts) {
  require(k >= 2 && n >= k && trials >= 1, "eps_transitivity_experiment: bad shape");
  TransitivityReport rep;
  rep.family = M.name();
  rep.p = M.exponent();
  rep.k = k;
  rep.n = n;
  rep.eps = eps;
  rep.trials = trials;
  rep.seed = seed;
  rep.mode = opts.mode;

  const LuxemburgSpace target{M, n, 1e-10};
  const LuxemburgSpace source{M, k, 1e-10};

  // Snap thresholds at the eps budget; generation at the per-vector budget
  // eps / (2k), which the alignment bound distributes over the columns.
  const BasisBudget snap_budget =
      basis_delta_of_eps(M, eps, opts.mode, opts.good_grid, opts.ratio_grid);
  const BasisBudget gen_budget = basis_delta_of_eps(M, eps / (2.0 * static_cast<double>(k)),
                                                    opts.mode, opts.good_grid, opts.ratio_grid);
  rep.snap_threshold = snap_budget.h_snap;
  rep.log10_delta = gen_budget.log10_delta;
  double delta_gen = opts.delta_override >= 0.0 ? opts.delta_override
                                                : static_cast<double>(gen_budget.delta);
  rep.delta_generation = delta_gen;

  NeumaierSum defect_sum;
  for (int t = 0; t < trials; ++t) {
    TransitivityTrial trial;
    Rng trial_rng = Rng::substream(seed, static_cast<std::uint64_t>(t));
    trial.seed = static_cast<std::uint64_t>(t);
    try {
      DistortionEstimate d1, d2;
      const std::uint64_t s1 = seed * 2654435761ULL + 2ULL * t;
      const std::uint64_t s2 = seed * 2654435761ULL + 2ULL * t + 1ULL;
      EmbeddingMap T1 = perturb(random_disjoint_isometry(source, target, s1), delta_gen, s1, &d1);
      EmbeddingMap T2 = perturb(random_disjoint_isometry(source, target, s2), delta_gen, s2, &d2);
      trial.distortion1 = d1.distortion;
      trial.distortion2 = d2.distortion;

      std::vector<Vec> img1, img2;
      for (Index i = 0; i < k; ++i) {
        img1.push_back(T1.A.col(i));
        img2.push_back(T2.A.col(i));
      }
      const auto w1 = extract_basis_witnesses(target, snap_budget, img1);
      const auto w2 = extract_basis_witnesses(target, snap_budget, img2);
      for (const auto& w : w1) trial.max_witness_error = std::max(trial.max_witness_error, w.error);
      for (const auto& w : w2) trial.max_witness_error = std::max(trial.max_witness_error, w.error);

      const AlignResult ar = align(T1, T2, w1, w2);
      trial.defect = ar.defect;
      defect_sum.add(ar.defect);
      rep.max_defect = std::max(rep.max_defect, ar.defect);
    } catch (const std::exception& e) {
      trial.failed = true;
      trial.failure = e.what();
      ++rep.failures;
    }
    (void)trial_rng;
    rep.results.push_back(std::move(trial));
  }
  const int succeeded = trials - rep.failures;
  rep.mean_defect = succeeded > 0 ? defect_sum.value() / succeeded : 0.0;
  return rep;
}

}  // namespace orlicz
