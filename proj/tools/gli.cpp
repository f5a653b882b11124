// gli: generate, fit, and measure correlated multiplex exchangeable graphs.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <sstream>

#include "gli/exper.hpp"
#include "gli/ingest.hpp"
#include "gli/io.hpp"
#include "gli/mimat.hpp"

namespace fs = std::filesystem;
using gli::io::json;

namespace {

struct CommonOpts {
  std::uint64_t seed = 0;
  int quad_m = 512;
  int bandwidth = 0;
  double alpha = 1.0;
  int threads = 0;
  std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool need_out = true) {
  cmd->add_option("--seed", o.seed, "root seed");
  cmd->add_option("--quad-m", o.quad_m, "quadrature grid resolution")->check(CLI::PositiveNumber);
  cmd->add_option("--bandwidth", o.bandwidth, "block size h (0 = automatic)");
  cmd->add_option("--alpha", o.alpha, "assumed Hoelder exponent in (0,1]");
  cmd->add_option("--threads", o.threads, "worker threads (0 = all cores / GLI_THREADS)");
  auto* opt = cmd->add_option("--out", o.out, "output path");
  if (need_out) opt->required();
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(tok);
  return out;
}

std::vector<int> split_ints(const std::string& s) {
  std::vector<int> out;
  for (const auto& tok : split_list(s)) out.push_back(std::stoi(tok));
  return out;
}

int run_gen(const CommonOpts& o, const std::string& recipe_name, const std::string& recipe_file, int n) {
  gli::GenRecipe recipe;
  if (!recipe_file.empty())
    recipe = gli::io::recipe_from_json(json::parse(gli::io::read_text(recipe_file)));
  else
    recipe = gli::GenRecipe::preset(recipe_name, n, o.seed);
  if (n > 0) recipe.n = n;
  recipe.seed = o.seed;
  recipe.check();

  gli::MultiplexGraph g = recipe.sample();
  json prov;
  prov["recipe"] = gli::io::recipe_to_json(recipe);
  prov["seed"] = o.seed;
  prov["version"] = gli::kArtifactVersion;
  prov["config_hash"] = gli::io::config_hash(prov["recipe"]);
  std::string manifest = gli::io::write_multiplex(o.out, g, prov);

  bool has_truth = true;
  try {
    auto sys = recipe.true_system();
    gli::io::write_text((fs::path(o.out) / "system.json").string(),
                        gli::io::system_to_json(sys, &recipe).dump(2) + "\n");
  } catch (const gli::Error&) {
    has_truth = false;
  }
  std::fprintf(stdout, "wrote %s (n=%d, d=%d%s)\n", manifest.c_str(), g.n, g.d(),
               has_truth ? ", system.json" : "");
  return 0;
}

int run_fit(const CommonOpts& o, const std::string& manifest, const std::string& layers_csv, int restarts,
            int max_sweeps, const std::string& fit_out) {
  gli::MultiplexGraph g = gli::io::read_manifest(manifest);
  if (!layers_csv.empty()) {
    std::vector<gli::AdjacencyMatrix> keep;
    for (int l : split_ints(layers_csv)) {
      if (l < 1 || l > g.d()) gli::fail(gli::Errc::invalid_argument, "--layers index out of range");
      keep.push_back(g.layers[l - 1]);
    }
    g.layers = std::move(keep);
  }
  gli::FitConfig fc;
  fc.bandwidth = o.bandwidth;
  fc.alpha = o.alpha;
  fc.restarts = restarts;
  fc.max_sweeps = max_sweeps;
  fc.seed = o.seed;
  gli::FitResult fit = gli::fit_community(g, fc);

  json sys_json = gli::io::system_to_json(fit.system);
  gli::io::write_text(o.out, sys_json.dump(2) + "\n");
  json config = {{"manifest", manifest}, {"layers", layers_csv}, {"bandwidth", o.bandwidth},
                 {"alpha", o.alpha},     {"restarts", restarts}, {"seed", o.seed}};
  json report = gli::io::wrap_report("fit", config, gli::io::fit_to_json(fit));
  std::string fpath = fit_out.empty() ? o.out + ".fit.json" : fit_out;
  gli::io::write_text(fpath, report.dump(2) + "\n");
  std::fprintf(stdout, "fit: n=%d d=%d h=%d k=%d loglik=%.6f -> %s\n", g.n, g.d(), fit.assignment.h,
               fit.assignment.k, fit.log_likelihood, o.out.c_str());
  return 0;
}

int run_measure(const CommonOpts& o, const std::string& system_path, const std::string& measures_csv,
                int cond) {
  gli::GraphonSystem sys = gli::io::system_from_json(json::parse(gli::io::read_text(system_path)));
  auto names = split_list(measures_csv);
  if (names.empty()) gli::fail(gli::Errc::invalid_argument, "--measures is empty");
  gli::QuadratureSpec q{o.quad_m};
  json results = json::array();
  for (const auto& name : names)
    results.push_back(gli::io::measure_to_json(gli::compute_measure(name, sys, q, cond)));
  json config = {{"system", system_path},      {"system_hash", gli::io::system_hash(sys)},
                 {"measures", measures_csv},   {"cond", cond},
                 {"quad_m", o.quad_m},         {"seed", o.seed}};
  json report = gli::io::wrap_report("measure", config, results);
  gli::io::write_text(o.out, report.dump(2) + "\n");
  std::fprintf(stdout, "wrote %s\n", o.out.c_str());
  return 0;
}

int run_mimatrix(const CommonOpts& o, const std::string& system_path, const std::string& manifest, int restarts) {
  gli::MiMatrix mi;
  json config = {{"quad_m", o.quad_m}, {"seed", o.seed}, {"bandwidth", o.bandwidth}, {"alpha", o.alpha}};
  if (!system_path.empty()) {
    gli::GraphonSystem sys = gli::io::system_from_json(json::parse(gli::io::read_text(system_path)));
    mi = gli::mi_matrix(sys, gli::QuadratureSpec{o.quad_m});
    config["system"] = system_path;
    config["system_hash"] = gli::io::system_hash(sys);
  } else {
    gli::MultiplexGraph g = gli::io::read_manifest(manifest);
    config["manifest"] = manifest;
    gli::FitConfig fc;
    fc.bandwidth = o.bandwidth;
    fc.alpha = o.alpha;
    fc.restarts = restarts;
    fc.seed = o.seed;
    if (g.d() <= gli::kMaxLayers) {
      gli::FitResult fit = gli::fit_community(g, fc);
      mi = gli::mi_matrix(fit.system, gli::QuadratureSpec{o.quad_m});
    } else {
      // Too many layers for one joint fit: fit each pair with its own shared
      // assignment, diagonal from univariate fits. Pair-specific assignments
      // make exact marginal agreement unattainable, so the check is skipped.
      std::vector<gli::Graphon> marginals;
      for (int l = 0; l < g.d(); ++l) {
        gli::MultiplexGraph single;
        single.n = g.n;
        single.layers = {g.layers[l]};
        gli::FitConfig fs = fc;
        fs.seed = gli::derive_seed(o.seed, {0x756e69, static_cast<std::uint64_t>(l)});
        marginals.push_back(gli::fit_community(single, fs).system.subset(1));
      }
      auto pair_source = [&](int i, int j) {
        gli::MultiplexGraph pair;
        pair.n = g.n;
        pair.layers = {g.layers[i], g.layers[j]};
        gli::FitConfig fp = fc;
        fp.seed = gli::derive_seed(o.seed, {0x7061, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j)});
        return gli::fit_community(pair, fp).system;
      };
      mi = gli::mi_matrix(marginals, pair_source, gli::QuadratureSpec{o.quad_m},
                          std::numeric_limits<double>::infinity());
    }
  }
  gli::VnEntropy vn = gli::von_neumann_entropy(mi);
  json report = gli::io::wrap_report("mimatrix", config, gli::io::mimatrix_to_json(mi, &vn));
  gli::io::write_text(o.out + ".json", report.dump(2) + "\n");
  gli::io::write_text(o.out + ".csv", gli::io::matrix_to_csv(mi.raw, mi.d));
  std::fprintf(stdout, "d=%d von Neumann entropy %.6f (normalized %.6f) -> %s.{json,csv}\n", mi.d, vn.value,
               vn.normalized, o.out.c_str());
  return 0;
}

int run_rmse(const CommonOpts& o, const std::string& scenario, const std::string& measures_csv, int trials,
             const std::string& n_csv, bool svg) {
  gli::ExperimentConfig cfg;
  cfg.scenario = scenario;
  cfg.measures = split_list(measures_csv);
  cfg.trials = trials;
  if (!n_csv.empty()) cfg.n_values = split_ints(n_csv);
  cfg.seed = o.seed;
  cfg.alpha = o.alpha;
  cfg.threads = o.threads;
  auto curves = gli::run_rmse(cfg);

  json results = json::array();
  for (const auto& c : curves) {
    std::string base = o.out + "_" + c.measure;
    gli::io::write_text(base + ".csv", c.to_csv());
    std::vector<double> xs(c.n_values.begin(), c.n_values.end());
    double slope = gli::io::log_log_slope(xs, c.rmse);
    if (svg)
      gli::io::write_text(base + ".svg",
                          gli::io::log_log_svg(xs, c.rmse, "RMSE(" + c.measure + ") vs n, " + scenario));
    json cj;
    cj["measure"] = c.measure;
    cj["truth"] = c.truth;
    cj["n"] = c.n_values;
    cj["rmse"] = c.rmse;
    cj["slope"] = slope;
    results.push_back(cj);
    std::fprintf(stdout, "%s: truth=%.6f slope=%.3f rmse[%d]=%.5f rmse[%d]=%.5f\n", c.measure.c_str(), c.truth,
                 slope, c.n_values.front(), c.rmse.front(), c.n_values.back(), c.rmse.back());
  }
  json config = {{"scenario", scenario}, {"measures", measures_csv}, {"trials", trials},
                 {"n", n_csv},           {"seed", o.seed},           {"alpha", o.alpha}};
  gli::io::write_text(o.out + ".json", gli::io::wrap_report("rmse", config, results).dump(2) + "\n");
  return 0;
}

int run_scenario_cmd(const CommonOpts& o, const std::string& name, int n) {
  json report = gli::run_scenario(name, o.seed, n, o.quad_m, o.threads);
  json config = {{"scenario", name}, {"seed", o.seed}, {"n", n}, {"quad_m", o.quad_m}};
  gli::io::write_text(o.out, gli::io::wrap_report("scenario", config, report).dump(2) + "\n");
  const auto& est = report["estimated"];
  std::fprintf(stdout, "%s (n=%d, seed=%llu): estimated TC^N=%s", name.c_str(), n,
               static_cast<unsigned long long>(o.seed), est["tc"].value("normalized", 0.0) >= 0 ? "" : "");
  std::fprintf(stdout, "%.4f", est["tc"].value("normalized", 0.0));
  if (est.contains("ii")) {
    double ii = est["ii"]["value"].get<double>();
    auto b = est["ii"]["bounds"];
    std::fprintf(stdout, " II=%.4f in [%.4f, %.4f]", ii, b[0].get<double>(), b[1].get<double>());
  }
  std::fprintf(stdout, " -> %s\n", o.out.c_str());
  return 0;
}

int run_ingest(const CommonOpts& o, const std::string& input, long long window, int min_events, bool strict,
               bool keep_empty) {
  std::string text = gli::io::read_text_auto(input);
  std::istringstream in(text);
  std::vector<std::string> errors;
  auto events = gli::parse_contacts(in, strict, &errors);
  for (const auto& e : errors) std::fprintf(stderr, "ingest: %s\n", e.c_str());
  gli::SnapshotSpec spec;
  spec.window = window;
  spec.min_events = min_events;
  spec.keep_empty = keep_empty;
  std::vector<long long> starts;
  gli::MultiplexGraph g = gli::aggregate_snapshots(events, spec, &starts);
  std::vector<std::string> labels;
  for (long long s : starts) labels.push_back(std::to_string(s));
  json prov = {{"input", fs::path(input).filename().string()},
               {"window", window},
               {"min_events", min_events},
               {"events", events.size()},
               {"parse_errors", errors.size()},
               {"version", gli::kArtifactVersion}};
  std::string manifest = gli::io::write_multiplex(o.out, g, prov, labels);
  std::fprintf(stdout, "wrote %s (n=%d, d=%d, %zu events)\n", manifest.c_str(), g.n, g.d(), events.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"correlated multiplex graph generation, fitting, and graphon information measures"};
  app.require_subcommand(1);

  CommonOpts gen_o, fit_o, measure_o, mim_o, rmse_o, scen_o, ingest_o;

  auto* gen = app.add_subcommand("gen", "sample a multiplex graph from a recipe");
  std::string gen_recipe = "chain_xy", gen_recipe_file;
  int gen_n = 256;
  gen->add_option("--recipe", gen_recipe, "recipe preset name");
  gen->add_option("--recipe-file", gen_recipe_file, "recipe JSON file");
  gen->add_option("--n", gen_n, "node count")->check(CLI::PositiveNumber);
  add_common(gen, gen_o);

  auto* fit = app.add_subcommand("fit", "fit a correlated block model to a manifest");
  std::string fit_manifest, fit_layers, fit_out2;
  int fit_restarts = 1, fit_sweeps = 50;
  fit->add_option("--manifest", fit_manifest, "multiplex manifest")->required();
  fit->add_option("--layers", fit_layers, "1-based layer subset, e.g. 1,2,3");
  fit->add_option("--restarts", fit_restarts, "local search restarts");
  fit->add_option("--max-sweeps", fit_sweeps, "swap sweeps per restart");
  fit->add_option("--fit-out", fit_out2, "assignment report path (default <out>.fit.json)");
  add_common(fit, fit_o);

  auto* measure = app.add_subcommand("measure", "information measures of a graphon system");
  std::string m_system, m_measures = "entropy";
  int m_cond = 0;
  measure->add_option("--system", m_system, "system JSON")->required();
  measure->add_option("--measures", m_measures, "comma list: entropy,mi,distance,ii,cmi,tc,ctc,dtc,oinfo");
  measure->add_option("--cond", m_cond, "conditioning layer for cmi/ctc (1-based)");
  add_common(measure, measure_o);

  auto* mim = app.add_subcommand("mimatrix", "pairwise MI matrix and von Neumann entropy");
  std::string mim_system, mim_manifest;
  int mim_restarts = 1;
  mim->add_option("--system", mim_system, "system JSON (analytic route)");
  mim->add_option("--manifest", mim_manifest, "multiplex manifest (estimated route)");
  mim->add_option("--restarts", mim_restarts, "fit restarts");
  add_common(mim, mim_o);

  auto* rmse = app.add_subcommand("rmse", "RMSE convergence curves over n");
  std::string r_scenario = "chain_xy", r_measures = "tc,ii,dtc", r_n;
  int r_trials = 50;
  bool r_svg = false;
  rmse->add_option("--scenario", r_scenario, "recipe preset with a closed-form system");
  rmse->add_option("--measures", r_measures, "comma list of measures");
  rmse->add_option("--trials", r_trials, "trials per n")->check(CLI::PositiveNumber);
  rmse->add_option("--n", r_n, "comma list of node counts");
  rmse->add_flag("--svg", r_svg, "emit log-log SVG plots");
  add_common(rmse, rmse_o);

  auto* scen = app.add_subcommand("scenario", "named redundancy/synergy analyses");
  std::string s_name;
  int s_n = 2048;
  scen->add_option("name", s_name, "scenario name")->required();
  scen->add_option("--n", s_n, "node count")->check(CLI::PositiveNumber);
  add_common(scen, scen_o);

  auto* ingest = app.add_subcommand("ingest", "aggregate a contact stream into hourly snapshots");
  std::string i_input;
  long long i_window = 3600;
  int i_min = 1;
  bool i_strict = false, i_keep_empty = false;
  ingest->add_option("--input", i_input, "contact file (plain or .gz)")->required();
  ingest->add_option("--window", i_window, "window length in seconds");
  ingest->add_option("--min-events", i_min, "contacts required per edge");
  ingest->add_flag("--strict", i_strict, "fail on the first malformed line");
  ingest->add_flag("--keep-empty", i_keep_empty, "retain windows without events");
  add_common(ingest, ingest_o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << e.what() << "\n" << app.help() << std::flush;
    return 2;
  }

  try {
    if (gen->parsed()) return run_gen(gen_o, gen_recipe, gen_recipe_file, gen_n);
    if (fit->parsed()) return run_fit(fit_o, fit_manifest, fit_layers, fit_restarts, fit_sweeps, fit_out2);
    if (measure->parsed()) return run_measure(measure_o, m_system, m_measures, m_cond);
    if (mim->parsed()) {
      if (mim_system.empty() == mim_manifest.empty())
        gli::fail(gli::Errc::invalid_argument, "mimatrix needs exactly one of --system / --manifest");
      return run_mimatrix(mim_o, mim_system, mim_manifest, mim_restarts);
    }
    if (rmse->parsed()) return run_rmse(rmse_o, r_scenario, r_measures, r_trials, r_n, r_svg);
    if (scen->parsed()) return run_scenario_cmd(scen_o, s_name, s_n);
    if (ingest->parsed()) return run_ingest(ingest_o, i_input, i_window, i_min, i_strict, i_keep_empty);
  } catch (const gli::Error& e) {
    std::cerr << "gli: " << e.what() << "\n";
    return e.is_validation() ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "gli: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
