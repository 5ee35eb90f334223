// Command-line front end: every pipeline behind one binary, JSON/CSV reports,
// deterministic for a fixed seed.  Exit protocol: 0 ok, 2 bad input, 3 failed
// mathematical hypothesis, 4 I/O failure.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "orlicz/reports.hpp"
#include "orlicz/rng.hpp"

namespace {

using namespace orlicz;

struct Opts {
  std::string family = "exp_weighted";
  double p = 4.0;
  double eps = 0.2;
  long long k = 2, n = 6;
  int trials = 100;
  std::uint64_t seed = 7;
  std::string mode = "certified";
  std::string out = ".";
  int grid_points = 4096;
  std::string vec, vec_g, vec_file;
  double delta_override = -1.0;
  bool basis = false;
  int pairs = 100;
  std::string blocks = "10,100,1000,10000";
  long long dim = 6;
  int samples = 96;
  std::string config_path;
};

std::string fmt(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

OrliczFunction make_family(const std::string& family, double p) {
  if (family == "power") return OrliczFunction::power(p);
  if (family == "exp_weighted") return OrliczFunction::exp_weighted(p);
  throw std::invalid_argument("unknown family: " + family + " (use power | exp_weighted)");
}

BudgetMode make_mode(const std::string& mode) {
  if (mode == "certified") return BudgetMode::Certified;
  if (mode == "empirical") return BudgetMode::Empirical;
  throw std::invalid_argument("unknown mode: " + mode + " (use certified | empirical)");
}

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> out;
  std::istringstream ss(csv);
  std::string token;
  while (std::getline(ss, token, ',')) {
    const auto b = token.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = token.find_last_not_of(" \t");
    out.push_back(token.substr(b, e - b + 1));
  }
  return out;
}

Vec parse_vec(const std::string& csv) {
  const auto tokens = split_csv(csv);
  Vec v(static_cast<Index>(tokens.size()));
  for (size_t i = 0; i < tokens.size(); ++i) {
    size_t pos = 0;
    double x = 0.0;
    try {
      x = std::stod(tokens[i], &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("not a number: '" + tokens[i] + "'");
    }
    if (pos != tokens[i].size()) throw std::invalid_argument("not a number: '" + tokens[i] + "'");
    v[static_cast<Index>(i)] = x;
  }
  return v;
}

std::vector<Index> parse_blocks(const std::string& csv) {
  std::vector<Index> out;
  for (const auto& t : split_csv(csv)) {
    const long long n = std::stoll(t);
    if (n < 1) throw std::invalid_argument("block sizes must be >= 1");
    out.push_back(static_cast<Index>(n));
  }
  if (out.empty()) throw std::invalid_argument("empty block list");
  return out;
}

Vec load_vec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read vector file: " + path);
  const json j = json::parse(in);  // parse_error propagates as bad input
  if (!j.is_array()) throw std::invalid_argument("vector file must hold a JSON array");
  Vec v(static_cast<Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) v[static_cast<Index>(i)] = j.at(i).get<double>();
  return v;
}

Vec input_vec(const Opts& o) {
  if (!o.vec_file.empty()) return load_vec(o.vec_file);
  return parse_vec(o.vec);
}

json config_echo(const Opts& o) {
  return {{"family", o.family},   {"p", o.p},
          {"eps", o.eps},         {"k", o.k},
          {"n", o.n},             {"trials", o.trials},
          {"seed", o.seed},       {"mode", o.mode},
          {"grid_points", o.grid_points},
          {"delta_override", o.delta_override}, {"basis", o.basis},
          {"pairs", o.pairs},     {"blocks", o.blocks},
          {"dim", o.dim},         {"samples", o.samples},
          {"vec", o.vec},         {"vec_g", o.vec_g},
          {"vec_file", o.vec_file}};
}

void emit(const Opts& o, const std::string& cmd, json payload, const std::string& name,
          const std::string* csv = nullptr, const std::string& csv_name = "") {
  std::filesystem::create_directories(o.out);
  write_text(o.out + "/" + name, dump_json(report_envelope(cmd, config_echo(o), std::move(payload))));
  if (csv) write_text(o.out + "/" + csv_name, *csv);
}

GridSpec good_grid_of(const Opts& o) { return {1e-8, 15.0, o.grid_points, true}; }
GridSpec ratio_grid_of(const Opts& o) { return {1e-8, 1.0, o.grid_points, true}; }

int cmd_norm(const Opts& o) {
  const OrliczFunction M = make_family(o.family, o.p);
  const Vec v = input_vec(o);
  const LuxemburgSpace space{M, v.size(), 1e-10};
  const double nrm = luxemburg_norm(space, v);
  std::cout << "norm = " << fmt(nrm) << "\n";
  std::cout << "modular_at_norm = " << fmt(nrm > 0.0 ? modular(space, v, nrm) : 0.0) << "\n";
  return 0;
}

int cmd_check_good(const Opts& o) {
  const OrliczFunction M = make_family(o.family, o.p);
  const GoodReport r = check_good(M, good_grid_of(o));
  emit(o, "check-good", good_report_json(r), "good-report.json");
  std::cout << "is_good = " << (r.is_good ? "true" : "false") << "\n";
  std::cout << "K = " << fmt(r.K) << "\n";
  if (!r.is_good) {
    for (const auto& v : r.violations) std::cerr << "violation: " << v << "\n";
    return 3;
  }
  return 0;
}

int cmd_constants(const Opts& o) {
  const OrliczFunction M = make_family(o.family, o.p);
  const GridSpec gg = good_grid_of(o), rg = ratio_grid_of(o);
  const CascadeConstants c = cascade_constants(M, gg, rg);
  const SubmultResult sub = submult_constant(M, o.eps, o.grid_points);
  json payload{{"cascade", cascade_json(c)},
               {"submult",
                {{"eps", o.eps},
                 {"alpha", sub.alpha},
                 {"log_alpha", static_cast<double>(sub.log_alpha)},
                 {"hypothesis_ok", sub.hypothesis_ok}}},
               {"good_grid", grid_json(gg)},
               {"ratio_grid", grid_json(rg)}};
  emit(o, "constants", std::move(payload), "constants-report.json");
  std::cout << "K = " << fmt(c.K) << "\n";
  std::cout << "C0 = " << fmt(static_cast<double>(c.C0))
            << " (log10 = " << fmt(static_cast<double>(log10l(c.C0))) << ")\n";
  return 0;
}

int cmd_delta(const Opts& o) {
  const OrliczFunction M = make_family(o.family, o.p);
  const BudgetMode mode = make_mode(o.mode);
  const GridSpec gg = good_grid_of(o), rg = ratio_grid_of(o);
  if (o.basis) {
    const BasisBudget b = basis_delta_of_eps(M, o.eps, mode, gg, rg);
    json payload = basis_budget_json(b);
    payload["mode"] = mode_name(mode);
    emit(o, "delta", std::move(payload), "basis-report.json");
    std::cout << "delta = " << fmt(static_cast<double>(b.delta))
              << " (log10 = " << fmt(b.log10_delta) << ")\n";
  } else {
    const RigidityBudget b = delta_of_eps(M, M, o.eps, mode, {}, gg, rg);
    emit(o, "delta", rigidity_budget_json(b), "rigidity-report.json");
    std::cout << "delta = " << fmt(static_cast<double>(b.delta))
              << " (log10 = " << fmt(b.log10_delta) << ")\n";
  }
  return 0;
}

int cmd_witness(const Opts& o) {
  const OrliczFunction M = make_family(o.family, o.p);
  Vec f, g;
  if (!o.vec.empty() || !o.vec_file.empty()) {
    f = input_vec(o);
    g = parse_vec(o.vec_g);
    if (f.size() != g.size()) throw std::invalid_argument("witness: vectors differ in length");
  } else {
    Rng rng(o.seed);
    f = Vec(o.dim);
    g = Vec(o.dim);
    for (Index i = 0; i < f.size(); ++i) f[i] = rng.normal();
    for (Index i = 0; i < g.size(); ++i) g[i] = rng.normal();
  }
  const LuxemburgSpace space{M, f.size(), 1e-10};
  f = normalize(space, f);
  g = normalize(space, g);
  const WitnessPair w = witness_split(space, f, g);
  const CurvatureCriterion crit =
      criterion_second_derivative(NormSurface(space, f, g), o.eps, ratio_grid_of(o));
  json cj{{"second_partial", crit.second_partial}, {"holds", crit.holds}};
  put_budget(cj, "threshold", crit.threshold);
  json payload = witness_pair_json(w);
  payload["criterion"] = std::move(cj);
  payload["is_eps_witness"] = std::max(w.err_f, w.err_g) <= o.eps;
  emit(o, "witness", std::move(payload), "witness-report.json");
  std::cout << "err_f = " << fmt(w.err_f) << "\n";
  std::cout << "err_g = " << fmt(w.err_g) << "\n";
  std::cout << "is_eps_witness = " << (std::max(w.err_f, w.err_g) <= o.eps ? "true" : "false")
            << "\n";
  return 0;
}

int cmd_snap(const Opts& o) {
  const OrliczFunction M = make_family(o.family, o.p);
  const Vec v = input_vec(o);
  if (v.size() == 0) throw std::invalid_argument("snap: empty vector");
  const LuxemburgSpace space{M, v.size(), 1e-10};
  const double h = compute_h(M, o.eps, ratio_grid_of(o));
  const Vec x = normalize(space, v);
  const auto s = snap_to_basis(space, x, h);
  json payload{{"h", h}, {"snapped", s.has_value()}};
  if (s) {
    Vec e = Vec::Zero(x.size());
    e[s->index] = s->sign;
    payload["index"] = s->index;
    payload["sign"] = s->sign;
    payload["error"] = luxemburg_norm(space, x - e);
    std::cout << "snapped to " << (s->sign > 0 ? "+" : "-") << "e_" << s->index << "\n";
  } else {
    std::cout << "no dominating coordinate (h = " << fmt(h) << ")\n";
  }
  emit(o, "snap", std::move(payload), "snap-report.json");
  return 0;
}

int cmd_align(const Opts& o) {
  const OrliczFunction M = make_family(o.family, o.p);
  const BudgetMode mode = make_mode(o.mode);
  const GridSpec gg = good_grid_of(o), rg = ratio_grid_of(o);
  const auto k = static_cast<Index>(o.k);
  const auto n = static_cast<Index>(o.n);
  const LuxemburgSpace source{M, k, 1e-10}, target{M, n, 1e-10};
  const BasisBudget snap_budget = basis_delta_of_eps(M, o.eps, mode, gg, rg);
  const double delta_gen =
      o.delta_override >= 0.0
          ? o.delta_override
          : static_cast<double>(
                basis_delta_of_eps(M, o.eps / (2.0 * static_cast<double>(k)), mode, gg, rg).delta);

  DistortionEstimate d1, d2;
  const std::uint64_t s1 = o.seed * 2654435761ULL;
  const std::uint64_t s2 = o.seed * 2654435761ULL + 1ULL;
  const EmbeddingMap T1 = perturb(random_disjoint_isometry(source, target, s1), delta_gen, s1, &d1);
  const EmbeddingMap T2 = perturb(random_disjoint_isometry(source, target, s2), delta_gen, s2, &d2);
  std::vector<Vec> img1, img2;
  for (Index i = 0; i < k; ++i) {
    img1.push_back(T1.A.col(i));
    img2.push_back(T2.A.col(i));
  }
  const auto w1 = extract_basis_witnesses(target, snap_budget, img1);
  const auto w2 = extract_basis_witnesses(target, snap_budget, img2);
  const AlignResult ar = align(T1, T2, w1, w2);

  json jw1 = json::array(), jw2 = json::array();
  for (const auto& w : w1) jw1.push_back(basis_witness_json(w));
  for (const auto& w : w2) jw2.push_back(basis_witness_json(w));
  json payload{{"witnesses1", std::move(jw1)},
               {"witnesses2", std::move(jw2)},
               {"permutation", {{"target_of", ar.U.target_of}, {"sign", ar.U.sign}}},
               {"column_errors", ar.column_errors},
               {"defect", ar.defect},
               {"delta_generation", delta_gen},
               {"snap_threshold", snap_budget.h_snap},
               {"distortion1", distortion_json(d1)},
               {"distortion2", distortion_json(d2)}};
  emit(o, "align", std::move(payload), "align-report.json");
  std::cout << "defect = " << fmt(ar.defect) << "\n";
  return 0;
}

int cmd_transitivity(const Opts& o) {
  const OrliczFunction M = make_family(o.family, o.p);
  TransitivityOptions topts;
  topts.mode = make_mode(o.mode);
  topts.delta_override = o.delta_override;
  topts.good_grid = good_grid_of(o);
  topts.ratio_grid = ratio_grid_of(o);
  topts.distortion_samples = o.samples;
  const TransitivityReport rep =
      eps_transitivity_experiment(M, static_cast<Index>(o.k), static_cast<Index>(o.n), o.eps,
                                  o.trials, o.seed, topts);
  const std::string csv = transitivity_csv(rep);
  emit(o, "transitivity", transitivity_json(rep), "transitivity-report.json", &csv,
       "transitivity-report.csv");
  std::cout << "max_defect = " << fmt(rep.max_defect) << "\n";
  std::cout << "mean_defect = " << fmt(rep.mean_defect) << "\n";
  std::cout << "failures = " << rep.failures << " / " << rep.trials << "\n";
  return topts.mode == BudgetMode::Certified && rep.failures > 0 ? 3 : 0;
}

int cmd_boyd(const Opts& o) {
  const OrliczFunction M = make_family(o.family, o.p);
  const BoydIndices b = boyd_indices(M);
  emit(o, "boyd", boyd_json(b), "boyd-report.json");
  std::cout << "alpha_M = " << fmt(b.alpha_M) << "\n";
  std::cout << "beta_M = " << fmt(b.beta_M) << "\n";
  return 0;
}

int cmd_age(const Opts& o) {
  const OrliczFunction M = make_family(o.family, o.p);
  const AgeReport rep = age_experiment(M, o.pairs, o.seed, parse_blocks(o.blocks));
  const std::string csv = age_csv(rep);
  emit(o, "age", age_json(rep), "age-report.json", &csv, "age-report.csv");
  std::cout << "basis_margin = " << fmt(rep.basis_margin) << "\n";
  std::cout << "min_pair_margin = " << fmt(rep.min_pair_margin) << "\n";
  std::cout << "final_block_distortion = " << fmt(rep.block_distortions.back()) << "\n";
  std::cout << "block_monotone = " << (rep.block_monotone ? "true" : "false") << "\n";
  return 0;
}

void apply_config(const json& cfg, Opts& o) {
  if (!cfg.is_object()) throw std::invalid_argument("config must be a JSON object");
  const auto get = [&cfg](const char* key, auto& slot) {
    if (cfg.contains(key)) slot = cfg.at(key).get<std::decay_t<decltype(slot)>>();
  };
  get("family", o.family);
  get("p", o.p);
  get("eps", o.eps);
  get("k", o.k);
  get("n", o.n);
  get("trials", o.trials);
  get("seed", o.seed);
  get("mode", o.mode);
  get("out", o.out);
  get("grid_points", o.grid_points);
  get("vec", o.vec);
  get("vec_g", o.vec_g);
  get("vec_file", o.vec_file);
  get("delta_override", o.delta_override);
  get("basis", o.basis);
  get("pairs", o.pairs);
  get("blocks", o.blocks);
  get("dim", o.dim);
  get("samples", o.samples);
}

int run(int argc, char** argv) {
  Opts o;
  if (const char* env_out = std::getenv("ORLICZ_OUT_DIR")) o.out = env_out;

  // The config file loads before flag parsing so that flags override it.
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    std::string path;
    if (a == "--config" && i + 1 < argc) {
      path = argv[i + 1];
    } else if (a.rfind("--config=", 0) == 0) {
      path = a.substr(9);
    }
    if (!path.empty()) {
      std::ifstream in(path);
      if (!in) throw IoError("cannot read config: " + path);
      apply_config(json::parse(in), o);
    }
  }

  CLI::App app{"Numerical toolkit for finite-dimensional Orlicz sequence spaces"};
  app.require_subcommand(1);

  std::vector<CLI::App*> subs;
  const auto common = [&](const std::string& name, const std::string& desc) {
    CLI::App* s = app.add_subcommand(name, desc);
    s->add_option("--family", o.family, "Orlicz family: power | exp_weighted");
    s->add_option("--p", o.p, "family exponent");
    s->add_option("--config", o.config_path, "JSON config file; flags override it");
    s->add_option("--out", o.out, "output directory (default env ORLICZ_OUT_DIR or .)");
    s->add_option("--grid-points", o.grid_points, "points per grid dimension");
    subs.push_back(s);
    return s;
  };

  CLI::App* s_norm = common("norm", "Luxemburg norm of a vector");
  s_norm->add_option("--vec", o.vec, "comma-separated coordinates");
  s_norm->add_option("--vec-file", o.vec_file, "JSON array file");

  common("check-good", "structural audit of the Orlicz function");

  CLI::App* s_const = common("constants", "growth constants and the derivative-bound cascade");
  s_const->add_option("--eps", o.eps, "submultiplicativity band parameter");

  CLI::App* s_delta = common("delta", "eps -> delta budget pipeline");
  s_delta->add_option("--eps", o.eps, "target tolerance");
  s_delta->add_flag("--basis", o.basis, "basis-preservation pipeline instead of disjointness");
  s_delta->add_option("--mode", o.mode, "certified | empirical");

  CLI::App* s_wit = common("witness", "disjoint witness split for a pair of vectors");
  s_wit->add_option("--eps", o.eps, "witness tolerance");
  s_wit->add_option("--vec", o.vec, "first vector (comma-separated)");
  s_wit->add_option("--vec-file", o.vec_file, "first vector from JSON array file");
  s_wit->add_option("--vec-g", o.vec_g, "second vector (comma-separated)");
  s_wit->add_option("--seed", o.seed, "seed for random pair when no vectors given");
  s_wit->add_option("--dim", o.dim, "dimension of the random pair");

  CLI::App* s_snap = common("snap", "snap a vector to a signed basis vector");
  s_snap->add_option("--eps", o.eps, "snap tolerance");
  s_snap->add_option("--vec", o.vec, "comma-separated coordinates");
  s_snap->add_option("--vec-file", o.vec_file, "JSON array file");

  CLI::App* s_align = common("align", "extract witnesses for two embeddings and align them");
  s_align->add_option("--eps", o.eps, "witness tolerance");
  s_align->add_option("--k", o.k, "source dimension");
  s_align->add_option("--n", o.n, "target dimension");
  s_align->add_option("--seed", o.seed, "seed");
  s_align->add_option("--delta", o.delta_override, "generation perturbation override");
  s_align->add_option("--mode", o.mode, "certified | empirical");
  s_align->add_option("--samples", o.samples, "distortion sample budget");

  CLI::App* s_trans = common("transitivity", "Monte-Carlo witness + alignment experiment");
  s_trans->add_option("--eps", o.eps, "witness tolerance");
  s_trans->add_option("--k", o.k, "source dimension");
  s_trans->add_option("--n", o.n, "target dimension");
  s_trans->add_option("--trials", o.trials, "number of trials");
  s_trans->add_option("--seed", o.seed, "seed");
  s_trans->add_option("--delta", o.delta_override, "generation perturbation override");
  s_trans->add_option("--mode", o.mode, "certified | empirical");
  s_trans->add_option("--samples", o.samples, "distortion sample budget");

  common("boyd", "Boyd indices by bisection with grid-stability surrogate");

  CLI::App* s_age = common("age", "non-embedding margins and block-copy distortions");
  s_age->add_option("--pairs", o.pairs, "random disjoint unit pairs");
  s_age->add_option("--seed", o.seed, "seed");
  s_age->add_option("--blocks", o.blocks, "comma-separated block sizes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (app.got_subcommand("norm")) return cmd_norm(o);
  if (app.got_subcommand("check-good")) return cmd_check_good(o);
  if (app.got_subcommand("constants")) return cmd_constants(o);
  if (app.got_subcommand("delta")) return cmd_delta(o);
  if (app.got_subcommand("witness")) return cmd_witness(o);
  if (app.got_subcommand("snap")) return cmd_snap(o);
  if (app.got_subcommand("align")) return cmd_align(o);
  if (app.got_subcommand("transitivity")) return cmd_transitivity(o);
  if (app.got_subcommand("boyd")) return cmd_boyd(o);
  if (app.got_subcommand("age")) return cmd_age(o);
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const HypothesisViolation& e) {
    std::cerr << "hypothesis violation: " << e.what() << "\n";
    return 3;
  } catch (const DistinctnessViolation& e) {
    std::cerr << "distinctness violation: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const nlohmann::json::parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
