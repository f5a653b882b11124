// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.
// Usage: gli_acceptance [path-to-gli-cli]

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "gli/exper.hpp"
#include "gli/io.hpp"
#include "gli/mimat.hpp"
#include "oracles.hpp"

using namespace gli;
namespace fs = std::filesystem;
using gli::io::json;

namespace {

int g_failures = 0;

void report(int idx, bool pass, const std::string& name, const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", idx, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* pattern, ...) {
  char buf[512];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof(buf), pattern, args);
  va_end(args);
  return buf;
}

// ---- 1. closed-form entropy -------------------------------------------------

void criterion1() {
  auto t0 = std::chrono::steady_clock::now();
  double h = graphon_entropy(Graphon::from_registry("product", {}), QuadratureSpec{512});
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  double series = oracle::product_entropy_series();
  bool pass = std::abs(h - series) <= 1e-3 && std::abs(h - 0.4275) <= 1.1e-3 && secs < 1.0;
  report(1, pass, "closed-form entropy of the product graphon",
         fmt("H=%.6f series=%.6f |diff|=%.2e runtime=%.3fs", h, series, std::abs(h - series), secs));
}

// ---- 2. exact identities ----------------------------------------------------

GenRecipe random_coupled_triple(std::uint64_t seed) {
  Rng rng(seed);
  GenRecipe r;
  r.kind = GenRecipe::Kind::coupled;
  r.rho = rng.uniform();
  r.n = 8;
  r.seed = seed;
  r.graphons = {Graphon::from_registry("scaled_product", {0.2 + 0.7 * rng.uniform()}),
                Graphon::from_registry("affine", {0.05 + 0.4 * rng.uniform()}),
                Graphon::from_registry("expdecay", {0.2 + 0.6 * rng.uniform(), 1.5 * rng.uniform()})};
  return r;
}

void criterion2() {
  double worst = 0.0;
  std::string worst_id = "none";
  auto track = [&](double err, const std::string& id) {
    if (err > worst) {
      worst = err;
      worst_id = id;
    }
  };
  const QuadratureSpec q{64};
  for (std::uint64_t s = 1; s <= 20; ++s) {
    // MI = 0 under pointwise cell factorization
    Rng rng(s * 13);
    auto ind = GraphonSystem::independent(
        {Graphon::from_registry("scaled_product", {0.2 + 0.7 * rng.uniform()}),
         Graphon::from_registry("affine", {0.05 + 0.4 * rng.uniform()})});
    track(std::abs(mutual_information(ind, q).value), "mi_independent");

    // TC = DTC = MI at d=2 on a coupled pair
    GenRecipe pair;
    pair.kind = GenRecipe::Kind::coupled;
    pair.rho = rng.uniform();
    pair.n = 8;
    pair.graphons = {Graphon::from_registry("scaled_product", {0.3 + 0.6 * rng.uniform()}),
                     Graphon::from_registry("affine", {0.1 + 0.3 * rng.uniform()})};
    auto p2 = entropy_profile(pair.true_system(), q);
    double mi = mutual_information(p2).value;
    track(std::abs(total_correlation(p2).value - mi), "tc_eq_mi");
    track(std::abs(dual_total_correlation(p2).value - mi), "dtc_eq_mi");

    // trivariate identities
    auto p3 = entropy_profile(random_coupled_triple(s).true_system(), q);
    track(std::abs(o_information(p3).value - interaction_information(p3).value), "oinfo_eq_ii");
    double mi12 = p3.single(0) + p3.single(1) - p3.at(0b011);
    track(std::abs(interaction_information(p3).value - (mi12 - conditional_mutual_information(p3, 3))),
          "chain_rule");

    // cells sum to one
    auto sys = random_coupled_triple(s + 100).true_system();
    Rng grid(s);
    for (int rep = 0; rep < 8; ++rep) {
      auto cells = system_cells(sys, grid.uniform(), grid.uniform());
      double sum = 0.0;
      for (double c : cells) sum += c;
      track(std::abs(sum - 1.0), "cell_sum");
    }
  }
  report(2, worst <= 1e-12, "exact identities on randomized systems",
         fmt("worst |err|=%.2e at %s over 20 seeds", worst, worst_id.c_str()));
}

// ---- 3. interaction-information sandwich ------------------------------------

void criterion3() {
  std::vector<std::pair<std::string, GraphonSystem>> systems;
  for (const char* preset : {"chain_xy", "appendix_case1", "appendix_case2", "sbm_percolated", "sbm_mixed",
                             "sbm_xor", "sbm_blocks", "independent_mix"})
    systems.emplace_back(std::string("truth:") + preset, GenRecipe::preset(preset, 16, 1).true_system());
  for (const char* preset : {"chain_xy", "sbm_percolated", "sbm_xor", "appendix_case2"}) {
    auto g = GenRecipe::preset(preset, 512, 7).sample();
    systems.emplace_back(std::string("fit:") + preset, fit_community(g, FitConfig{}).system);
  }
  for (std::uint64_t s = 1; s <= 10; ++s)
    systems.emplace_back("random:" + std::to_string(s), random_coupled_triple(s * 31).true_system());

  double worst_violation = -1e300;
  std::string worst_id;
  for (const auto& [id, sys] : systems) {
    auto p = entropy_profile(sys, QuadratureSpec{256});
    double ii = interaction_information(p).value;
    auto [lo, hi] = interaction_bounds(p);
    double violation = std::max(lo - ii, ii - hi);
    if (violation > worst_violation) {
      worst_violation = violation;
      worst_id = id;
    }
  }
  report(3, worst_violation <= 1e-6, "interaction information within its bounds",
         fmt("worst bound violation %.2e at %s over %zu systems", worst_violation, worst_id.c_str(),
             systems.size()));
}

// ---- 4. RMSE decay ----------------------------------------------------------

void criterion4() {
  bool pass = true;
  std::string detail;
  auto run = [&](const std::string& scenario, const std::vector<std::string>& measures) {
    ExperimentConfig cfg;
    cfg.scenario = scenario;
    cfg.measures = measures;
    cfg.trials = 50;
    cfg.seed = 20240817;
    auto curves = run_rmse(cfg);
    for (const auto& c : curves) {
      std::vector<double> xs(c.n_values.begin(), c.n_values.end());
      double slope = io::log_log_slope(xs, c.rmse);
      bool ok = c.rmse.back() < 0.5 * c.rmse.front() && slope < 0.0;
      pass = pass && ok;
      detail += fmt("%s/%s rmse64=%.4f rmse2048=%.4f slope=%.2f%s ", scenario.c_str(), c.measure.c_str(),
                    c.rmse.front(), c.rmse.back(), slope, ok ? "" : "(FAIL)");
    }
  };
  run("io_xy", {"mi"});
  run("chain_xy", {"tc", "ii", "dtc"});
  report(4, pass, "RMSE halves from n=64 to n=2048 with negative log-log slope", detail);
}

// ---- 5. scenario regression -------------------------------------------------

struct ScenarioStats {
  double tcn = 0, ii = 0, lo = 0, hi = 0;
  int negative_ii = 0;
};

ScenarioStats scenario_average(const std::string& name, int seeds, int n) {
  std::vector<json> reports(seeds);
  parallel_for(static_cast<std::size_t>(seeds), default_threads(), [&](std::size_t s) {
    reports[s] = run_scenario(name, 1000 + s, n, 512, 1);
  });
  ScenarioStats st;
  for (const auto& r : reports) {
    const auto& est = r.at("estimated");
    st.tcn += est.at("tc").value("normalized", 0.0) / seeds;
    if (est.contains("ii")) {
      double ii = est.at("ii").at("value").get<double>();
      st.ii += ii / seeds;
      st.lo += est.at("ii").at("bounds")[0].get<double>() / seeds;
      st.hi += est.at("ii").at("bounds")[1].get<double>() / seeds;
      if (ii < 0) ++st.negative_ii;
    }
  }
  return st;
}

void criterion5() {
  const int seeds = 10, n = 2048;
  auto perc = scenario_average("percolation_redundancy", seeds, n);
  bool p1 = std::abs(perc.tcn - 0.869) <= 0.05 && std::abs(perc.ii - 0.285) <= 0.05 &&
            std::abs(perc.hi - 0.289) <= 0.05;
  auto mixed = scenario_average("mixed_blocks", seeds, n);
  bool p2 = std::abs(mixed.tcn - 0.370) <= 0.07 && std::abs(mixed.ii - 0.097) <= 0.05;
  auto xs = scenario_average("xor_synergy", seeds, n);
  bool p3 = std::abs(xs.ii + 0.17) <= 0.05 && std::abs(xs.lo + 0.203) <= 0.05 &&
            std::abs(xs.hi - 0.07) <= 0.05 && xs.negative_ii >= 9;
  report(5, p1 && p2 && p3, "scenario regressions at n=2048 over 10 seeds",
         fmt("perc TCN=%.3f II=%.3f hi=%.3f%s | mixed TCN=%.3f II=%.3f%s | xor II=%.3f lo=%.3f hi=%.3f "
             "neg=%d/10%s",
             perc.tcn, perc.ii, perc.hi, p1 ? "" : "(FAIL)", mixed.tcn, mixed.ii, p2 ? "" : "(FAIL)", xs.ii,
             xs.lo, xs.hi, xs.negative_ii, p3 ? "" : "(FAIL)"));
}

// ---- 6. density-matrix regression -------------------------------------------

void criterion6() {
  auto vn = von_neumann_entropy_of_spectrum({0.6484, 0.2296, 0.1220}, 3);
  bool p_spec = std::abs(vn.value - 0.8754) <= 1e-4 && std::abs(vn.normalized - 0.7968) <= 1e-4;

  json c1 = run_scenario("appendix_case1", 2601, 2048, 512, 1);
  double vn1 = c1.at("estimated").at("mi_matrix").at("von_neumann").at("normalized").get<double>();
  json c2 = run_scenario("appendix_case2", 2602, 2048, 512, 1);
  double vn2 = c2.at("estimated").at("mi_matrix").at("von_neumann").at("normalized").get<double>();
  bool p_e2e = std::abs(vn1 - 0.377) <= 0.05 && std::abs(vn2 - 0.7968) <= 0.05;

  report(6, p_spec && p_e2e, "density-matrix entropies",
         fmt("spectrum vn=%.6f norm=%.6f%s | end-to-end case1=%.4f case2=%.4f%s", vn.value, vn.normalized,
             p_spec ? "" : "(FAIL)", vn1, vn2, p_e2e ? "" : "(FAIL)"));
}

// ---- 7. Monte-Carlo convergence ---------------------------------------------

void criterion7() {
  std::vector<std::pair<std::string, GraphonSystem>> systems;
  {
    GenRecipe dep;
    dep.kind = GenRecipe::Kind::coupled;
    dep.rho = 1.0;
    dep.n = 8;
    dep.graphons = {Graphon::from_registry("product", {}), Graphon::from_registry("product", {})};
    systems.emplace_back("dependent_product", dep.true_system());
  }
  systems.emplace_back("independent", GraphonSystem::independent({Graphon::from_registry("product", {}),
                                                                  Graphon::from_registry("affine", {0.3})}));
  {
    GenRecipe perc;
    perc.kind = GenRecipe::Kind::percolation;
    perc.base = Graphon::from_registry("product", {});
    perc.keeps = {1.0, 0.95};
    perc.n = 8;
    systems.emplace_back("percolated", perc.true_system());
  }
  systems.emplace_back("io_pair", GenRecipe::preset("io_xy", 8, 1).true_system());

  double worst = 0;
  std::string worst_id;
  for (const auto& [id, sys] : systems) {
    double mc = monte_carlo_joint_entropy(sys, 512, 20, 4242);
    double exact = joint_graphon_entropy(sys, QuadratureSpec{1024});
    double err = std::abs(mc - exact);
    if (err > worst) {
      worst = err;
      worst_id = id;
    }
  }
  report(7, worst <= 0.01, "Monte-Carlo joint entropy matches quadrature",
         fmt("worst |mc-exact|=%.4f at %s (n=512, 20 trials)", worst, worst_id.c_str()));
}

// ---- 8. mixed and pure states -----------------------------------------------

double estimated_vn(const std::string& preset, std::uint64_t seed) {
  auto g = GenRecipe::preset(preset, 2048, seed).sample();
  auto fit = fit_community(g, FitConfig{});
  auto mi = mi_matrix(fit.system);
  return von_neumann_entropy(mi).normalized;
}

void criterion8() {
  double mixed = estimated_vn("independent_mix", 81);
  double pure = estimated_vn("dependent_3", 82);
  bool pass = mixed >= 0.95 && pure <= 0.05;
  report(8, pass, "completely-mixed and pure-state limits",
         fmt("independent layers vn=%.4f (>=0.95), dependent layers vn=%.4f (<=0.05)", mixed, pure));
}

// ---- 9. planted-partition recovery ------------------------------------------

void criterion9() {
  int recovered = 0;
  for (std::uint64_t s = 1; s <= 10; ++s) {
    auto recipe = GenRecipe::preset("planted_2block", 128, 9000 + s);
    auto g = recipe.sample();
    FitConfig cfg;
    cfg.bandwidth = 64;
    cfg.restarts = 3;
    cfg.seed = s;
    auto fit = fit_community(g, cfg);
    int agree = 0;
    for (int i = 0; i < g.n; ++i)
      if (fit.assignment.z[i] == recipe.sbm_z[i]) ++agree;
    if (std::max(agree, g.n - agree) == g.n) ++recovered;
  }
  report(9, recovered >= 9, "planted 2-block recovery",
         fmt("%d/10 seeds exactly recovered (theta 0.8/0.1, n=128)", recovered));
}

// ---- 10. CLI determinism ----------------------------------------------------

std::string slurp_tree(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir))
    if (entry.is_regular_file()) files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::string all;
  for (const auto& f : files) {
    all += f.lexically_relative(dir).string() + "\n";
    all += io::read_text(f.string());
  }
  return all;
}

void criterion10(const std::string& cli) {
  if (cli.empty()) {
    report(10, false, "CLI determinism", "no CLI path supplied");
    return;
  }
  fs::path work = fs::temp_directory_path() / "gli_acceptance_cli";
  fs::remove_all(work);
  fs::create_directories(work);
  auto sh = [&](const std::string& cmd) {
    int rc = std::system((cmd + " >/dev/null 2>&1").c_str());
    return rc == 0;
  };
  bool ran = true;
  std::vector<std::string> digests;
  for (int round = 1; round <= 2; ++round) {
    fs::path dir = work / ("round" + std::to_string(round));
    fs::create_directories(dir);
    std::string d = dir.string();
    ran = ran && sh(cli + " gen --recipe chain_xy --n 256 --seed 1 --out " + d + "/gen");
    ran = ran && sh(cli + " measure --system " + d + "/gen/system.json --measures tc,ii,dtc --out " + d +
                    "/measures.json");
    ran = ran && sh(cli + " fit --manifest " + d + "/gen/manifest.json --seed 2 --out " + d + "/fitted.json");
    ran = ran && sh(cli + " scenario xor_synergy --seed 3 --n 256 --out " + d + "/xor.json");
    ran = ran && sh(cli + " mimatrix --system " + d + "/gen/system.json --out " + d + "/mim");
    if (!ran) break;
    digests.push_back(fnv1a_hex(slurp_tree(dir)));
  }
  bool pass = ran && digests.size() == 2 && digests[0] == digests[1];
  report(10, pass, "CLI re-runs are byte-identical",
         ran ? fmt("digest %s == %s", digests[0].c_str(), digests.size() > 1 ? digests[1].c_str() : "?")
             : "a CLI invocation failed");
  fs::remove_all(work);
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli = argc > 1 ? argv[1] : "";
  auto t0 = std::chrono::steady_clock::now();
  criterion1();
  criterion2();
  criterion3();
  criterion7();
  criterion9();
  criterion10(cli);
  criterion8();
  criterion6();
  criterion5();
  criterion4();
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s: %d criterion(s) failed, total %.1fs\n", g_failures == 0 ? "OK" : "FAILED", g_failures, secs);
  return g_failures == 0 ? 0 : 1;
}
