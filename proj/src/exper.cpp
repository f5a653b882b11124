#include "gli/exper.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "gli/io.hpp"
#include "gli/mimat.hpp"

namespace gli {

using nlohmann::json;

namespace {

double measure_value(const std::string& name, const EntropyProfile& p) {
  if (name == "mi") return mutual_information(p).value;
  if (name == "tc") return total_correlation(p).value;
  if (name == "ii") return interaction_information(p).value;
  if (name == "dtc") return dual_total_correlation(p).value;
  if (name == "entropy") return p.full();
  if (name == "oinfo") return o_information(p).value;
  fail(Errc::invalid_argument, "unsupported RMSE measure '" + name + "'");
}

}  // namespace

std::string RmseCurve::to_csv() const {
  std::ostringstream out;
  out.precision(12);
  out << "n,rmse,stderr\n";
  for (std::size_t i = 0; i < n_values.size(); ++i)
    out << n_values[i] << "," << rmse[i] << "," << stderr_of_sq[i] << "\n";
  return out.str();
}

std::vector<RmseCurve> run_rmse(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) fail(Errc::invalid_argument, "trials must be >= 1");
  if (cfg.measures.empty()) fail(Errc::invalid_argument, "no measures configured");
  for (int n : cfg.n_values)
    if (n < 16) fail(Errc::invalid_argument, "RMSE grid n values must be >= 16");

  GenRecipe proto = GenRecipe::preset(cfg.scenario, 16, cfg.seed);
  GraphonSystem truth_sys = proto.true_system();  // throws NoTruthAvailable when absent
  EntropyProfile truth_profile = entropy_profile(truth_sys, QuadratureSpec{cfg.truth_quad_m});

  std::map<std::string, double> truths;
  for (const auto& m : cfg.measures) truths[m] = measure_value(m, truth_profile);

  int threads = cfg.threads > 0 ? cfg.threads : default_threads();
  std::vector<RmseCurve> curves;
  for (const auto& m : cfg.measures) {
    RmseCurve c;
    c.measure = m;
    c.n_values = cfg.n_values;
    c.truth = truths[m];
    c.estimates.assign(cfg.n_values.size(), std::vector<double>(cfg.trials, 0.0));
    curves.push_back(std::move(c));
  }

  for (std::size_t ni = 0; ni < cfg.n_values.size(); ++ni) {
    int n = cfg.n_values[ni];
    std::vector<std::vector<double>> per_trial(cfg.trials);
    parallel_for(static_cast<std::size_t>(cfg.trials), threads, [&](std::size_t trial) {
      GenRecipe r = GenRecipe::preset(cfg.scenario, n, derive_seed(cfg.seed, {static_cast<std::uint64_t>(n), trial}));
      MultiplexGraph g = r.sample();
      FitConfig fc;
      fc.alpha = cfg.alpha;
      fc.seed = derive_seed(cfg.seed, {static_cast<std::uint64_t>(n), trial, 0x666974});
      FitResult fit = fit_community(g, fc);
      EntropyProfile p = entropy_profile(fit.system);
      std::vector<double> vals;
      vals.reserve(cfg.measures.size());
      for (const auto& m : cfg.measures) vals.push_back(measure_value(m, p));
      per_trial[trial] = std::move(vals);
    });
    for (std::size_t mi = 0; mi < cfg.measures.size(); ++mi) {
      double sum_sq = 0.0, sum_sq2 = 0.0;
      for (int t = 0; t < cfg.trials; ++t) {
        double err = per_trial[t][mi] - curves[mi].truth;
        curves[mi].estimates[ni][t] = per_trial[t][mi];
        sum_sq += err * err;
        sum_sq2 += err * err * err * err;
      }
      double mean_sq = sum_sq / cfg.trials;
      curves[mi].rmse.push_back(std::sqrt(mean_sq));
      double var_sq = cfg.trials > 1 ? (sum_sq2 / cfg.trials - mean_sq * mean_sq) / (cfg.trials - 1) : 0.0;
      curves[mi].stderr_of_sq.push_back(std::sqrt(std::max(0.0, var_sq)));
    }
  }

  json prov;
  prov["scenario"] = cfg.scenario;
  prov["seed"] = cfg.seed;
  prov["trials"] = cfg.trials;
  prov["truth_quad_m"] = cfg.truth_quad_m;
  prov["recipe"] = io::recipe_to_json(proto);
  for (auto& c : curves) {
    prov["truth"] = c.truth;
    c.provenance = prov;
  }
  return curves;
}

std::vector<std::string> scenario_names() {
  return {"percolation_redundancy", "mixed_blocks", "xor_synergy", "blocks_redundancy", "appendix_case1",
          "appendix_case2"};
}

namespace {

json measures_block(const EntropyProfile& p) {
  json j;
  j["tc"] = io::measure_to_json(total_correlation(p));
  if (p.d == 3) {
    j["ii"] = io::measure_to_json(interaction_information(p));
    j["dtc"] = io::measure_to_json(dual_total_correlation(p));
    j["oinfo"] = io::measure_to_json(o_information(p));
  }
  json pairwise;
  for (int i = 0; i < p.d; ++i)
    for (int jdx = i + 1; jdx < p.d; ++jdx) {
      double mi = p.single(i) + p.single(jdx) - p.at((1u << i) | (1u << jdx));
      double denom = std::min(p.single(i), p.single(jdx));
      json entry;
      entry["value"] = mi;
      if (denom > 0) entry["normalized"] = mi / denom;
      pairwise[std::to_string(i + 1) + std::to_string(jdx + 1)] = entry;
    }
  j["pairwise_mi"] = pairwise;
  return j;
}

json mimatrix_block(const GraphonSystem& sys, const QuadratureSpec& q) {
  MiMatrix mi = mi_matrix(sys, q);
  VnEntropy vn = von_neumann_entropy(mi);
  return io::mimatrix_to_json(mi, &vn);
}

}  // namespace

json run_scenario(const std::string& name, std::uint64_t seed, int n, int quad_m, int threads) {
  (void)threads;
  std::string preset;
  bool appendix = false;
  if (name == "percolation_redundancy")
    preset = "sbm_percolated";
  else if (name == "mixed_blocks")
    preset = "sbm_mixed";
  else if (name == "xor_synergy")
    preset = "sbm_xor";
  else if (name == "blocks_redundancy")
    preset = "sbm_blocks";
  else if (name == "appendix_case1") {
    preset = "appendix_case1";
    appendix = true;
  } else if (name == "appendix_case2") {
    preset = "appendix_case2";
    appendix = true;
  } else {
    fail(Errc::unknown_scenario, "unknown scenario '" + name + "' (known: percolation_redundancy, mixed_blocks, "
                                 "xor_synergy, blocks_redundancy, appendix_case1, appendix_case2)");
  }

  GenRecipe recipe = GenRecipe::preset(preset, n, seed);
  QuadratureSpec q{quad_m};

  json report;
  report["scenario"] = name;
  report["seed"] = seed;
  report["n"] = n;
  report["recipe"] = io::recipe_to_json(recipe);

  GraphonSystem truth = recipe.true_system();
  EntropyProfile truth_profile = entropy_profile(truth, q);
  report["truth"] = measures_block(truth_profile);

  MultiplexGraph g = recipe.sample();
  FitConfig fc;
  fc.seed = derive_seed(seed, {0x736365});
  FitResult fit = fit_community(g, fc);
  EntropyProfile est_profile = entropy_profile(fit.system);
  report["estimated"] = measures_block(est_profile);
  report["fit"] = {{"h", fit.assignment.h}, {"k", fit.assignment.k}, {"log_likelihood", fit.log_likelihood}};

  if (appendix) {
    report["truth"]["mi_matrix"] = mimatrix_block(truth, q);
    report["estimated"]["mi_matrix"] = mimatrix_block(fit.system, QuadratureSpec{});
  }
  return report;
}

}  // namespace gli
