#pragma once

// Domain types for multivariate graph limit models and the subset-cell
// algebra shared by every other module.
//
// A graphon system over d layers stores one graphon per nonempty layer
// subset S: W^(S)(x,y) = P(all layers in S have the edge | latents x,y).
// The 2^d joint cell probabilities follow by inclusion-exclusion; cells are
// nonnegative and sum to one pointwise for any consistent system.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gli/common.hpp"

namespace gli {

class Graphon {
 public:
  using EvalFn = std::function<double(double, double)>;

  Graphon() = default;

  // Analytic registry. Known keys:
  //   constant(p), product, scaled_product(c), poly(p,q), affine(a),
  //   expdecay(a,b), sbm(theta..., sizes...)
  // poly symmetrizes (x^p y^q + x^q y^p)/2 so every registry graphon is
  // symmetric as evaluated.
  static Graphon from_registry(const std::string& name, const std::vector<double>& params);

  // Text form "name" or "name:p1,p2". sbm is not expressible here; use JSON.
  static Graphon parse(const std::string& text);

  // Block-constant graphon. edges = k+1 ascending boundaries from 0 to 1,
  // values = row-major k*k symmetric matrix in [0,1].
  static Graphon step(std::vector<double> edges, std::vector<double> values);

  static Graphon sbm(const std::vector<double>& theta, const std::vector<double>& sizes);

  // Composed analytic form (closures built by recipes). label is descriptive
  // only; such graphons serialize through their owning recipe.
  static Graphon analytic(std::string label, std::vector<double> params, EvalFn fn);

  double operator()(double x, double y) const;

  bool is_step() const { return !edges_.empty(); }
  int blocks() const { return is_step() ? static_cast<int>(edges_.size()) - 1 : 0; }
  const std::vector<double>& edges() const { return edges_; }
  const std::vector<double>& values() const { return values_; }
  double block_value(int a, int b) const { return values_[static_cast<std::size_t>(a) * blocks() + b]; }
  int block_index(double x) const;

  const std::string& label() const { return label_; }
  const std::vector<double>& params() const { return params_; }
  bool from_recipe() const { return !fn_ && !is_step() && label_.empty(); }

  // Invariant violations ("not symmetric", "value out of [0,1]") observed on
  // an m x m midpoint grid; empty when valid.
  std::vector<std::string> check(int grid_m = 32) const;

 private:
  std::string label_;
  std::vector<double> params_;
  EvalFn fn_;                   // empty for step graphons
  std::vector<double> edges_;   // step only
  std::vector<double> values_;  // step only
};

class GraphonSystem {
 public:
  GraphonSystem() = default;

  // Conditionally independent layers: W^(S) = prod_{l in S} W^(l).
  static GraphonSystem independent(std::vector<Graphon> marginals);

  // Explicit subsets, indexed by mask (index 0 ignored, size must be 2^d).
  static GraphonSystem from_subsets(int d, std::vector<Graphon> by_mask);

  int dim() const { return d_; }
  const Graphon& subset(unsigned mask) const;

  // True when every member is block-constant on one shared partition, in
  // which case all integrals downstream are exact block sums.
  bool step_shared() const { return step_shared_; }
  const std::vector<double>& shared_edges() const;

  // w[mask] = W^(mask)(x,y) for all masks, w[0] = 1.
  void subset_values_at(double x, double y, std::span<double> w) const;

  // Provenance notes attached by builders (recipes); used for serialization.
  const std::string& family() const { return family_; }
  void set_family(std::string f) { family_ = std::move(f); }

 private:
  int d_ = 0;
  std::vector<Graphon> by_mask_;
  bool step_shared_ = false;
  std::string family_;
};

struct LatentVector {
  std::vector<double> xi;  // entries strictly in (0,1)
  std::uint64_t seed = 0;
};

class AdjacencyMatrix {
 public:
  AdjacencyMatrix() = default;
  explicit AdjacencyMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, 0) {
    if (n < 0) fail(Errc::invalid_argument, "negative node count");
  }

  int n() const { return n_; }
  bool at(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j] != 0; }

  void set(int i, int j, bool v) {
    if (i == j) fail(Errc::invalid_argument, "self-loops are not representable");
    a_[static_cast<std::size_t>(i) * n_ + j] = v;
    a_[static_cast<std::size_t>(j) * n_ + i] = v;
  }

  std::size_t edge_count() const;
  std::vector<std::pair<int, int>> edges() const;  // i<j, lexicographic

  const std::uint8_t* raw() const { return a_.data(); }

 private:
  int n_ = 0;
  std::vector<std::uint8_t> a_;
};

struct MultiplexGraph {
  int n = 0;
  std::vector<AdjacencyMatrix> layers;
  std::optional<std::vector<std::string>> node_ids;

  int d() const { return static_cast<int>(layers.size()); }
  void check() const;  // aligned n, unique ids
};

// Block labels are 0-based in memory; the remainder r is absorbed by the
// last block (label k-1), which has size h+r.
struct CommunityAssignment {
  std::vector<int> z;
  int h = 0;
  int k = 0;
  int r = 0;

  void check() const;
};

// Pointwise combination of graphons. When every member is block-constant on
// one shared partition the result is the block-constant combination (exact
// downstream block sums); otherwise an evaluating closure.
Graphon combine_graphons(std::vector<Graphon> members, std::string label,
                         std::function<double(std::span<const double>)> fn);

// Joint cell probabilities at (x,y), indexed by edge pattern mask (bit l set
// means layer l+1 has an edge). Cells within clamp_tol of [0,1] are clamped;
// anything more negative raises CellNegative.
std::vector<double> system_cells(const GraphonSystem& sys, double x, double y);

// In-place Moebius transform: on input w[mask] = W^(mask) with w[0]=1, on
// output w[b] = cell probability of exact pattern b. No clamping.
void cells_from_subset_values(std::span<double> w, int d);

inline constexpr double kCellClampTol = 1e-9;
inline constexpr double kCellSumTol = 1e-12;

// Restriction to a layer subset. Subset graphons are shared with the input;
// cells of the result equal sums of input cells over dropped-layer bits.
GraphonSystem marginalize(const GraphonSystem& sys, unsigned keep_mask);

// Invariant check on an m x m midpoint grid; returns human-readable
// violations (empty iff valid). Violations are data, not errors.
std::vector<std::string> validate(const GraphonSystem& sys, int grid_m);

}  // namespace gli
