#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "orlicz/core.hpp"
#include "orlicz/rigidity_basis.hpp"

namespace orlicz {

// Linear map between Orlicz spaces; columns are the images of the source
// basis vectors.
struct EmbeddingMap {
  Mat A;  // target.dim x source.dim
  LuxemburgSpace source, target;
  std::string method;
};

// Signed permutation of the target coordinates: e_l -> sign[l] * e_{target_of[l]}.
// An exact isometry of any Orlicz space over those coordinates.
struct SignedPermutation {
  std::vector<Index> target_of;
  std::vector<int> sign;

  Vec apply(const Vec& x) const {
    Vec y = Vec::Zero(x.size());
    for (Index l = 0; l < x.size(); ++l) {
      y[target_of[static_cast<size_t>(l)]] = sign[static_cast<size_t>(l)] * x[l];
    }
    return y;
  }
};

struct DistortionEstimate {
  double distortion = 0.0;  // max(sup_ratio, 1 / inf_ratio); a lower bound on the truth
  double sup_ratio = 0.0;   // largest observed ||T x|| / ||x||
  double inf_ratio = 0.0;   // smallest observed ||T x|| / ||x||
  int samples = 0;
};

inline constexpr std::uint64_t kDistortionSeed = 0xd15704715eedULL;

// Sphere sampling (Gaussian directions normalized in the source norm, plus the
// signed basis directions) followed by coordinate-descent polish of both the
// max and the min ratio.  Ratios are quotients of two computed norms, so a
// map that permutes magnitudes reproduces 1.0 exactly.  Rank-deficient
// matrices are not embeddings and are rejected.
DistortionEstimate distortion(const EmbeddingMap& T, int samples = 256,
                              std::uint64_t seed = kDistortionSeed);

enum class IsometryMode {
  SignedBasis,     // e_i -> +-e_{sigma(i)}, an isometry for every M
  DisjointBlocks,  // disjoint blocks of equal p-mass; exact only for t^p
};

// Random disjointly supported isometric embedding of the source into the target.
EmbeddingMap random_disjoint_isometry(const LuxemburgSpace& source,
                                      const LuxemburgSpace& target, std::uint64_t seed,
                                      IsometryMode mode = IsometryMode::SignedBasis);

// T + c G for Gaussian G, with c halved from delta until the distortion
// estimate stays within 1 + delta.  delta = 0 returns T unchanged; a c that
// underflows all coordinate resolutions yields T exactly, which still lies in
// the (1 + delta) class.  The achieved estimate lands in `achieved`.
EmbeddingMap perturb(const EmbeddingMap& T, double delta, std::uint64_t seed,
                     DistortionEstimate* achieved = nullptr);

struct AlignResult {
  SignedPermutation U;
  double defect = 0.0;  // sum over source k of || U T1 e_k - T2 e_k ||
  std::vector<double> column_errors;
};

// Builds the signed permutation sending witness coordinate sigma_1(k) to
// sigma_2(k) with sign theta^1_k theta^2_k, completed order-preservingly with
// +1 signs off the witness set.  The defect bound comes from
// 1-unconditionality: for unit x, ||U T1 x - T2 x|| <= sum_k |x_k| c_k with
// c_k the column errors, and |x_k| <= 1 because basis vectors have norm one.
AlignResult align(const EmbeddingMap& T1, const EmbeddingMap& T2,
                  const std::vector<BasisWitness>& w1, const std::vector<BasisWitness>& w2);

struct TransitivityTrial {
  std::uint64_t seed = 0;
  bool failed = false;
  std::string failure;
  double defect = 0.0;
  double max_witness_error = 0.0;
  double distortion1 = 0.0, distortion2 = 0.0;
};

struct TransitivityReport {
  std::string family;
  double p = 0.0;
  Index k = 0, n = 0;
  double eps = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
  BudgetMode mode = BudgetMode::Certified;
  double delta_generation = 0.0;   // double-rounded perturbation budget
  double log10_delta = 0.0;        // log10 of the long double budget
  double snap_threshold = 0.0;
  std::vector<TransitivityTrial> results;
  double max_defect = 0.0;
  double mean_defect = 0.0;
  int failures = 0;
};

struct TransitivityOptions {
  BudgetMode mode = BudgetMode::Certified;
  double delta_override = -1.0;  // >= 0 replaces the derived generation budget
  GridSpec good_grid = default_good_grid();
  GridSpec ratio_grid = default_ratio_grid();
  int distortion_samples = 96;
};

// Monte-Carlo transitivity pipeline: sample pairs of (1 + delta)-embeddings,
// extract basis witnesses for both, align, and record the defect.  The
// generation budget is the basis budget at per-vector tolerance eps / (2k);
// witnesses are snapped at the eps-level threshold and every reported error
// and defect is a computed norm.
TransitivityReport eps_transitivity_experiment(const OrliczFunction& M, Index k, Index n,
                                               double eps, int trials, std::uint64_t seed,
                                               const TransitivityOptions& opts = {});

}  // namespace orlicz
