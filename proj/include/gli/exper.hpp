#pragma once

// Reproducible experiment harness: RMSE convergence curves over n, and the
// named redundancy/synergy scenarios with their regression targets.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "gli/estim.hpp"
#include "gli/infom.hpp"
#include "gli/synth.hpp"

namespace gli {

struct ExperimentConfig {
  std::string scenario;            // recipe preset name (chain_xy, io_xy, ...)
  std::vector<int> n_values = {64, 128, 256, 512, 1024, 2048};
  int trials = 50;
  std::vector<std::string> measures;  // mi | tc | ii | dtc | entropy
  std::uint64_t seed = 0;
  double alpha = 1.0;
  int truth_quad_m = 4096;
  int threads = 0;  // 0 = default
};

struct RmseCurve {
  std::string measure;
  std::vector<int> n_values;
  std::vector<double> rmse;
  std::vector<double> stderr_of_sq;               // standard error of the squared-error mean
  std::vector<std::vector<double>> estimates;     // [n_index][trial]
  double truth = 0.0;
  nlohmann::json provenance;

  std::string to_csv() const;
};

// One multiplex sample + fit per (n, trial); every configured measure is
// read off the same fitted system. Deterministic per (scenario, seed).
std::vector<RmseCurve> run_rmse(const ExperimentConfig& cfg);

// Named analyses: percolation_redundancy, mixed_blocks, xor_synergy,
// blocks_redundancy, appendix_case1, appendix_case2. Emits truth and
// estimated measures (TC normalized, interaction information with bounds,
// pairwise normalized MI; appendix cases add MI/density matrices,
// eigenvalues, and von Neumann entropies).
nlohmann::json run_scenario(const std::string& name, std::uint64_t seed, int n = 2048, int quad_m = 512,
                            int threads = 0);

std::vector<std::string> scenario_names();

}  // namespace gli
