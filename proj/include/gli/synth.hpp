#pragma once

// Seeded generation of single and correlated multiplex exchangeable graphs,
// plus the closed-form graphon system implied by each generation recipe.
//
// All samplers draw the lower triangle (i > j) and mirror, so asymmetric
// ingredients act through their cell-level symmetrization; truth systems
// report exactly that symmetrized form.

#include <cstdint>
#include <string>
#include <vector>

#include "gli/core.hpp"

namespace gli {

// Conditional edge-retention function h(x,y) applied along an input-output
// chain. Registry keys:
//   io_ratio      min{(x+y)/(2y), 1}   (capped so it is a valid probability)
//   product       x*y
//   coord_y       y
//   constant(c)   c
struct Link {
  std::string name;
  std::vector<double> params;

  double operator()(double x, double y) const;
  static Link parse(const std::string& text);
};

class GenRecipe {
 public:
  enum class Kind {
    independent,   // fresh uniform per (pair, layer)
    coupled,       // each layer reuses one shared pair uniform with prob. rho
    percolation,   // layer 1 from base, children keep edges via one shared survival uniform
    input_output,  // chain: layer l+1 subset of layer l via link l
    xor_pair,      // two coupled layers plus their edgewise xor as layer 3
    sbm_layers,    // explicit block model layers over a planted assignment
  };

  Kind kind = Kind::independent;
  std::vector<Graphon> graphons;  // independent/coupled marginals; xor_pair: the two sources
  double rho = 1.0;               // coupled / xor_pair coupling weight
  Graphon base;                   // percolation / input_output layer 1
  std::vector<double> keeps;      // percolation: keep probability per layer, keeps[0] = 1
  std::vector<Link> links;        // input_output: d-1 chain links
  std::vector<double> sbm_theta;  // sbm_layers: d concatenated k*k matrices
  int sbm_k = 0;
  std::vector<int> sbm_z;  // 0-based planted labels
  int n = 0;
  std::uint64_t seed = 0;

  int dim() const;
  void check() const;
  MultiplexGraph sample() const;

  // Closed-form system of the generating mechanism; NoTruthAvailable when the
  // recipe has none.
  GraphonSystem true_system() const;

  // Named configurations used by the experiment harness and the CLI:
  //   chain_xy, io_xy, io_poly, appendix_case1, appendix_case2,
  //   independent_mix, dependent_3, sbm_percolated, sbm_mixed, sbm_xor,
  //   sbm_blocks, planted_2block
  static GenRecipe preset(const std::string& name, int n, std::uint64_t seed);
  static std::vector<std::string> preset_names();
};

LatentVector sample_latents(int n, std::uint64_t seed);

AdjacencyMatrix sample_graph(const Graphon& w, const LatentVector& xi, std::uint64_t seed);

// Child edges exist only where the parent has an edge; conditional on that,
// each lower-triangle edge survives with probability h(xi_i, xi_j), i > j.
AdjacencyMatrix sample_conditional(const Link& h, const AdjacencyMatrix& parent, const LatentVector& xi,
                                   std::uint64_t seed);

AdjacencyMatrix percolate(const AdjacencyMatrix& a, double keep, std::uint64_t seed);

AdjacencyMatrix xor_combine(const AdjacencyMatrix& a, const AdjacencyMatrix& b);

AdjacencyMatrix elementwise_product(const std::vector<AdjacencyMatrix>& layers);

// Subset-product layer A^(S): entrywise AND over the layers in mask.
AdjacencyMatrix subset_product(const MultiplexGraph& g, unsigned mask);

}  // namespace gli
