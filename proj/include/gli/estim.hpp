#pragma once

// Correlated d-layer stochastic block model fit: one shared community
// assignment maximizing the 2^d-cell profile log-likelihood, then block
// averages for every layer subset assembled into a step graphon system (the
// multivariate network histogram).

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "gli/core.hpp"

namespace gli {

struct FitConfig {
  int bandwidth = 0;       // 0 = automatic (k = ceil(n^{1/(alpha+1)}))
  double alpha = 1.0;      // assumed Hoelder exponent, in (0,1]
  int restarts = 1;        // local searches from shuffled initial orders
  int max_sweeps = 50;     // full swap passes per restart
  std::uint64_t seed = 0;  // restart shuffling
  double tolerance = 1e-9; // minimum accepted likelihood improvement
};

struct FitResult {
  CommunityAssignment assignment;
  GraphonSystem system;  // shared-partition step system
  double log_likelihood = 0.0;
  // Block averages of the subset-product adjacency, keyed by layer mask.
  std::map<unsigned, std::vector<double>> block_means;
  std::vector<double> pair_counts;  // k*k pairs available per block pair
};

// k = ceil(n^{1/(min(alpha,1)+1)}), h = floor(n/k); k is reduced until
// h >= 2; the remainder r = n - h*k joins the last block.
std::pair<int, int> auto_bandwidth(int n, double alpha);  // (h, k)

// Mean of the per-layer automatic bandwidths, floored at 2.
int shared_bandwidth(const MultiplexGraph& g, double alpha);

// Profile log-likelihood of an assignment: block-cell probabilities set to
// within-block empirical frequencies; 0 log 0 = 0. Accepts any label vector
// with values in [0, k).
double profile_log_likelihood(const MultiplexGraph& g, std::span<const int> z, int k);

double profile_log_likelihood(const MultiplexGraph& g, const CommunityAssignment& z);

// Local maximum of the profile likelihood under pairwise label swaps:
// degree-sorted contiguous initialization, first-improvement scan of node
// pairs in index order, best of cfg.restarts restarts.
FitResult fit_community(const MultiplexGraph& g, const FitConfig& cfg = {});

// Mean of the subset-product adjacency over node pairs in each block pair.
std::vector<double> block_averages(const MultiplexGraph& g, const CommunityAssignment& z, unsigned mask);

// Block-constant graphon on the fitted partition: boundaries at multiples of
// h/n with the remainder absorbed into the last block.
Graphon step_graphon(const std::vector<double>& values, const CommunityAssignment& z);

}  // namespace gli
