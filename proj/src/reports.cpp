#include "orlicz/reports.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace orlicz {

const char* mode_name(BudgetMode mode) {
  return mode == BudgetMode::Certified ? "certified" : "empirical";
}

json grid_json(const GridSpec& g) {
  return {{"lo", g.lo}, {"hi", g.hi}, {"points", g.points}, {"log_spaced", g.log_spaced}};
}

json vec_json(const Vec& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

void put_budget(json& j, const std::string& key, Budget v) {
  j[key] = static_cast<double>(v);
  if (v > 0.0L) {
    j[key + "_log10"] = static_cast<double>(log10l(v));
  } else {
    j[key + "_log10"] = nullptr;
  }
}

void put_scaled(json& j, const std::string& key, Budget v, double log10_v) {
  j[key] = static_cast<double>(v);
  j[key + "_log10"] = log10_v;
}

json good_report_json(const GoodReport& r) {
  return {{"is_good", r.is_good},
          {"K", r.K},
          {"violations", r.violations},
          {"grid", grid_json(r.grid)}};
}

json cascade_json(const CascadeConstants& c) {
  json j{{"K", c.K}, {"C_5_4", c.C_5_4}, {"C_15", c.C_15}};
  put_budget(j, "C0", c.C0);
  put_budget(j, "C1", c.C1);
  put_budget(j, "C2", c.C2);
  put_budget(j, "C3", c.C3);
  put_budget(j, "C_taylor", c.C_taylor);
  return j;
}

json rigidity_budget_json(const RigidityBudget& b) {
  json j{{"eps", b.eps},
         {"mode", mode_name(b.mode)},
         {"source_constants", cascade_json(b.source)},
         {"target_constants", cascade_json(b.target)},
         {"good_grid", grid_json(b.good_grid)},
         {"ratio_grid", grid_json(b.ratio_grid)}};
  put_budget(j, "C", b.C);
  put_scaled(j, "h_target", b.h_target, b.log10_h_target);
  put_scaled(j, "h1", b.h1, b.log10_h1);
  put_scaled(j, "alpha0", b.alpha0, b.log10_alpha0);
  put_scaled(j, "delta1", b.delta1, b.log10_delta1);
  put_scaled(j, "delta2", b.delta2, b.log10_delta2);
  put_scaled(j, "delta", b.delta, b.log10_delta);
  if (b.mode == BudgetMode::Empirical) j["empirical_C0"] = b.empirical_C0;
  return j;
}

json alpha_certificate_json(const AlphaCertificate& c) {
  json j{{"lhs", c.lhs},
         {"rhs", c.rhs},
         {"direct_inequality", c.direct_inequality},
         {"n_prime_at_0", c.n_prime0},
         {"n_second_at_0", c.n_second0},
         {"dichotomy_holds", c.dichotomy_holds},
         {"demo_alpha", c.demo_alpha},
         {"demo_lhs", c.demo_lhs},
         {"demo_rhs", c.demo_rhs},
         {"certified", c.certified}};
  put_budget(j, "alpha", c.alpha);
  return j;
}

json basis_budget_json(const BasisBudget& b) {
  json lemma{{"disjoint", rigidity_budget_json(b.lemma.disjoint)}};
  put_budget(lemma, "eps_stage", b.lemma.eps_stage);
  put_budget(lemma, "eps_disjoint", b.lemma.eps_disjoint);
  put_budget(lemma, "delta_cap", b.lemma.delta_cap);
  put_scaled(lemma, "delta", b.lemma.delta, b.lemma.log10_delta);
  json j{{"eps", b.eps},
         {"r", b.r},
         {"h_snap", b.h_snap},
         {"alpha", b.alpha},
         {"log_alpha", b.log_alpha},
         {"lemma", std::move(lemma)},
         {"good_grid", grid_json(b.good_grid)},
         {"ratio_grid", grid_json(b.ratio_grid)}};
  put_budget(j, "eps_prime", b.eps_prime);
  put_scaled(j, "delta", b.delta, b.log10_delta);
  return j;
}

json witness_pair_json(const WitnessPair& w) {
  return {{"support_f", w.A},    {"support_g", w.B},    {"f_part", vec_json(w.f_part)},
          {"g_part", vec_json(w.g_part)}, {"err_f", w.err_f}, {"err_g", w.err_g}};
}

json basis_witness_json(const BasisWitness& w) {
  return {{"index", w.index}, {"sign", w.sign}, {"error", w.error}, {"ok", w.ok}};
}

json distortion_json(const DistortionEstimate& d) {
  return {{"distortion", d.distortion},
          {"sup_ratio", d.sup_ratio},
          {"inf_ratio", d.inf_ratio},
          {"samples", d.samples}};
}

json ratio_bounds_json(const RatioBounds& rb) {
  return {{"c_low", rb.c_low},
          {"c_high", rb.c_high},
          {"hypothesis_ok", rb.hypothesis_ok},
          {"p", rb.p},
          {"grid", grid_json(rb.grid)}};
}

json boyd_json(const BoydIndices& b) {
  return {{"alpha_M", b.alpha_M},
          {"beta_M", b.beta_M},
          {"alpha_bracket", {b.alpha_lo, b.alpha_hi}},
          {"beta_bracket", {b.beta_lo, b.beta_hi}},
          {"band", b.band},
          {"resolution", b.resolution},
          {"ratio_bounds", ratio_bounds_json(b.ratio)},
          {"base_grid", grid_json(b.base_grid)},
          {"refined_grid", grid_json(b.refined_grid)}};
}

json age_json(const AgeReport& r) {
  json blocks = json::array();
  for (size_t i = 0; i < r.block_sizes.size(); ++i) {
    blocks.push_back({{"N", r.block_sizes[i]}, {"distortion", r.block_distortions[i]}});
  }
  return {{"family", r.family},
          {"p_estimate", r.p_estimate},
          {"boyd", boyd_json(r.boyd)},
          {"basis_margin", r.basis_margin},
          {"pair_margins", r.pair_margins},
          {"min_pair_margin", r.min_pair_margin},
          {"inconclusive_pairs", r.inconclusive_pairs},
          {"blocks", std::move(blocks)},
          {"block_monotone", r.block_monotone},
          {"pairs", r.pairs},
          {"pair_dim", r.pair_dim},
          {"seed", r.seed}};
}

json transitivity_json(const TransitivityReport& r) {
  json trials = json::array();
  for (const auto& t : r.results) {
    trials.push_back({{"trial", t.seed},
                      {"failed", t.failed},
                      {"failure", t.failure},
                      {"defect", t.defect},
                      {"max_witness_error", t.max_witness_error},
                      {"distortion1", t.distortion1},
                      {"distortion2", t.distortion2}});
  }
  return {{"family", r.family},
          {"p", r.p},
          {"k", r.k},
          {"n", r.n},
          {"eps", r.eps},
          {"trials", r.trials},
          {"seed", r.seed},
          {"mode", mode_name(r.mode)},
          {"delta_generation", r.delta_generation},
          {"log10_delta_budget", r.log10_delta},
          {"snap_threshold", r.snap_threshold},
          {"results", std::move(trials)},
          {"max_defect", r.max_defect},
          {"mean_defect", r.mean_defect},
          {"failures", r.failures}};
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string age_csv(const AgeReport& r) {
  std::string out = "N,distortion\n";
  for (size_t i = 0; i < r.block_sizes.size(); ++i) {
    out += std::to_string(r.block_sizes[i]) + "," + num(r.block_distortions[i]) + "\n";
  }
  return out;
}

std::string transitivity_csv(const TransitivityReport& r) {
  std::string out = "trial,failed,distortion1,distortion2,max_witness_error,defect\n";
  for (const auto& t : r.results) {
    out += std::to_string(t.seed) + "," + (t.failed ? "1" : "0") + "," + num(t.distortion1) +
           "," + num(t.distortion2) + "," + num(t.max_witness_error) + "," + num(t.defect) +
           "\n";
  }
  return out;
}

json report_envelope(const std::string& command, const json& config, json payload) {
  json j = std::move(payload);
  j["toolkit_version"] = kVersion;
  j["command"] = command;
  j["config"] = config;
  return j;
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace orlicz
