#include "gli/synth.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace gli {

double Link::operator()(double x, double y) const {
  if (name == "io_ratio") return std::min(1.0, (x + y) / (2.0 * y));
  if (name == "product") return x * y;
  if (name == "coord_y") return y;
  if (name == "constant") return params.at(0);
  fail(Errc::invalid_argument, "unknown link '" + name + "'");
}

Link Link::parse(const std::string& text) {
  Link l;
  auto colon = text.find(':');
  l.name = text.substr(0, colon);
  if (colon != std::string::npos) {
    try {
      l.params.push_back(std::stod(text.substr(colon + 1)));
    } catch (const std::exception&) {
      fail(Errc::parse_error, "bad link parameter in '" + text + "'");
    }
  }
  if (l.name != "io_ratio" && l.name != "product" && l.name != "coord_y" && l.name != "constant")
    fail(Errc::invalid_argument, "unknown link '" + l.name + "'");
  if (l.name == "constant" && (l.params.size() != 1 || l.params[0] < 0.0 || l.params[0] > 1.0))
    fail(Errc::link_out_of_range, "constant link needs one value in [0,1]");
  return l;
}

LatentVector sample_latents(int n, std::uint64_t seed) {
  if (n < 1) fail(Errc::invalid_argument, "latent vector needs n >= 1");
  LatentVector out;
  out.seed = seed;
  out.xi.resize(n);
  Rng rng(derive_seed(seed, {0x7869}));  // "xi"
  for (int i = 0; i < n; ++i) out.xi[i] = rng.uniform();
  return out;
}

AdjacencyMatrix sample_graph(const Graphon& w, const LatentVector& xi, std::uint64_t seed) {
  int n = static_cast<int>(xi.xi.size());
  AdjacencyMatrix a(n);
  Rng rng(derive_seed(seed, {0x6772}));
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i; ++j)
      if (rng.bernoulli(w(xi.xi[i], xi.xi[j]))) a.set(i, j, true);
  return a;
}

AdjacencyMatrix sample_conditional(const Link& h, const AdjacencyMatrix& parent, const LatentVector& xi,
                                   std::uint64_t seed) {
  int n = parent.n();
  if (static_cast<int>(xi.xi.size()) != n) fail(Errc::dimension_mismatch, "latent vector length differs from n");
  AdjacencyMatrix child(n);
  Rng rng(derive_seed(seed, {0x636f6e64}));
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i; ++j) {
      double u = rng.uniform();  // always drawn: stream independent of parent pattern
      if (!parent.at(i, j)) continue;
      double p = h(xi.xi[i], xi.xi[j]);
      if (p < -1e-12 || p > 1.0 + 1e-12)
        fail(Errc::link_out_of_range, "link evaluates to " + std::to_string(p) + " outside [0,1]");
      if (u < p) child.set(i, j, true);
    }
  return child;
}

AdjacencyMatrix percolate(const AdjacencyMatrix& a, double keep, std::uint64_t seed) {
  if (keep < 0.0 || keep > 1.0) fail(Errc::domain_error, "keep probability outside [0,1]");
  int n = a.n();
  AdjacencyMatrix out(n);
  Rng rng(derive_seed(seed, {0x70657263}));
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i; ++j) {
      double u = rng.uniform();
      if (a.at(i, j) && u < keep) out.set(i, j, true);
    }
  return out;
}

AdjacencyMatrix xor_combine(const AdjacencyMatrix& a, const AdjacencyMatrix& b) {
  if (a.n() != b.n()) fail(Errc::dimension_mismatch, "xor_combine needs equal node counts");
  AdjacencyMatrix out(a.n());
  for (int i = 1; i < a.n(); ++i)
    for (int j = 0; j < i; ++j)
      if (a.at(i, j) != b.at(i, j)) out.set(i, j, true);
  return out;
}

AdjacencyMatrix elementwise_product(const std::vector<AdjacencyMatrix>& layers) {
  if (layers.empty()) fail(Errc::empty_subset, "elementwise product needs at least one layer");
  int n = layers.front().n();
  for (const auto& l : layers)
    if (l.n() != n) fail(Errc::dimension_mismatch, "elementwise product needs equal node counts");
  AdjacencyMatrix out(n);
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i; ++j) {
      bool v = true;
      for (const auto& l : layers) v = v && l.at(i, j);
      if (v) out.set(i, j, true);
    }
  return out;
}

AdjacencyMatrix subset_product(const MultiplexGraph& g, unsigned mask) {
  if (mask == 0) fail(Errc::empty_subset, "subset product needs a nonempty mask");
  std::vector<AdjacencyMatrix> members;
  for (int l = 0; l < g.d(); ++l)
    if (mask >> l & 1u) members.push_back(g.layers[l]);
  return elementwise_product(members);
}

int GenRecipe::dim() const {
  switch (kind) {
    case Kind::independent:
    case Kind::coupled:
      return static_cast<int>(graphons.size());
    case Kind::percolation:
      return static_cast<int>(keeps.size());
    case Kind::input_output:
      return static_cast<int>(links.size()) + 1;
    case Kind::xor_pair:
      return 3;
    case Kind::sbm_layers:
      return sbm_k > 0 ? static_cast<int>(sbm_theta.size() / (static_cast<std::size_t>(sbm_k) * sbm_k)) : 0;
  }
  return 0;
}

void GenRecipe::check() const {
  if (n < 1) fail(Errc::invalid_argument, "recipe needs n >= 1");
  int d = dim();
  if (d < 1) fail(Errc::invalid_argument, "recipe produces no layers");
  if (d > kMaxLayers) fail(Errc::invalid_argument, "recipe exceeds the supported layer count");
  if (kind == Kind::coupled || kind == Kind::xor_pair) {
    if (rho < 0.0 || rho > 1.0) fail(Errc::domain_error, "coupling weight outside [0,1]");
  }
  if (kind == Kind::xor_pair && graphons.size() != 2)
    fail(Errc::invalid_argument, "xor recipe needs exactly two source graphons");
  if (kind == Kind::percolation) {
    if (keeps.empty() || std::abs(keeps[0] - 1.0) > 1e-12)
      fail(Errc::invalid_argument, "percolation keeps must start with 1.0 for the base layer");
    for (double kp : keeps)
      if (kp < 0.0 || kp > 1.0) fail(Errc::domain_error, "keep probability outside [0,1]");
  }
  if (kind == Kind::sbm_layers) {
    if (sbm_k < 1 || static_cast<int>(sbm_z.size()) != n)
      fail(Errc::invalid_argument, "sbm recipe needs k >= 1 and a length-n assignment");
    for (int label : sbm_z)
      if (label < 0 || label >= sbm_k) fail(Errc::invalid_argument, "sbm label out of range");
  }
}

namespace {

// Samples layers that each reuse one shared pair uniform with probability
// rho and draw fresh otherwise. rho = 1 makes layers comonotone.
MultiplexGraph sample_coupled(const std::vector<Graphon>& ws, double rho, int n, std::uint64_t seed) {
  LatentVector xi = sample_latents(n, seed);
  int d = static_cast<int>(ws.size());
  MultiplexGraph g;
  g.n = n;
  g.layers.assign(d, AdjacencyMatrix(n));
  Rng shared(derive_seed(seed, {0x7368, 0}));
  std::vector<Rng> per_layer;
  per_layer.reserve(d);
  for (int l = 0; l < d; ++l) per_layer.emplace_back(derive_seed(seed, {0x6c79, static_cast<std::uint64_t>(l)}));
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i; ++j) {
      double us = shared.uniform();
      for (int l = 0; l < d; ++l) {
        bool copy = rho >= 1.0 || per_layer[l].bernoulli(rho);
        double u = copy ? us : per_layer[l].uniform();
        if (u < ws[l](xi.xi[i], xi.xi[j])) g.layers[l].set(i, j, true);
      }
    }
  return g;
}

Graphon min_over_subset(std::vector<Graphon> members) {
  return combine_graphons(std::move(members), "coupled_min", [](std::span<const double> w) {
    double v = 1.0;
    for (double x : w) v = std::min(v, x);
    return v;
  });
}

// W^(S) under the rho-mixture coupling: each layer in S independently copies
// the shared uniform (prob rho) or draws fresh; copiers are comonotone.
Graphon coupled_subset(std::vector<Graphon> members, double rho) {
  return combine_graphons(std::move(members), "coupled_subset", [rho](std::span<const double> w) {
    std::size_t s = w.size();
    double total = 0.0;
    for (unsigned copy_mask = 0; copy_mask < (1u << s); ++copy_mask) {
      double prob = 1.0, mn = 1.0, prod = 1.0;
      bool any_copy = false;
      for (std::size_t q = 0; q < s; ++q) {
        if (copy_mask >> q & 1u) {
          prob *= rho;
          mn = std::min(mn, w[q]);
          any_copy = true;
        } else {
          prob *= 1.0 - rho;
          prod *= w[q];
        }
      }
      total += prob * (any_copy ? mn : 1.0) * prod;
    }
    return total;
  });
}

}  // namespace

MultiplexGraph GenRecipe::sample() const {
  check();
  switch (kind) {
    case Kind::independent: {
      LatentVector xi = sample_latents(n, seed);
      MultiplexGraph g;
      g.n = n;
      for (int l = 0; l < dim(); ++l)
        g.layers.push_back(sample_graph(graphons[l], xi, derive_seed(seed, {0x696e64, static_cast<std::uint64_t>(l)})));
      return g;
    }
    case Kind::coupled:
      return sample_coupled(graphons, rho, n, seed);
    case Kind::percolation: {
      LatentVector xi = sample_latents(n, seed);
      MultiplexGraph g;
      g.n = n;
      AdjacencyMatrix base_layer = sample_graph(base, xi, derive_seed(seed, {0x62617365}));
      Rng survival(derive_seed(seed, {0x73757276}));
      int d = dim();
      g.layers.assign(d, AdjacencyMatrix(n));
      for (int i = 1; i < n; ++i)
        for (int j = 0; j < i; ++j) {
          double u = survival.uniform();
          if (!base_layer.at(i, j)) continue;
          for (int l = 0; l < d; ++l)
            if (u < keeps[l]) g.layers[l].set(i, j, true);
        }
      return g;
    }
    case Kind::input_output: {
      LatentVector xi = sample_latents(n, seed);
      MultiplexGraph g;
      g.n = n;
      g.layers.push_back(sample_graph(base, xi, derive_seed(seed, {0x62617365})));
      for (std::size_t l = 0; l < links.size(); ++l)
        g.layers.push_back(
            sample_conditional(links[l], g.layers.back(), xi, derive_seed(seed, {0x696f, static_cast<std::uint64_t>(l)})));
      return g;
    }
    case Kind::xor_pair: {
      MultiplexGraph g = sample_coupled(graphons, rho, n, seed);
      g.layers.push_back(xor_combine(g.layers[0], g.layers[1]));
      return g;
    }
    case Kind::sbm_layers: {
      MultiplexGraph g;
      g.n = n;
      int d = dim();
      int k = sbm_k;
      for (int l = 0; l < d; ++l) {
        AdjacencyMatrix a(n);
        Rng rng(derive_seed(seed, {0x73626d, static_cast<std::uint64_t>(l)}));
        const double* theta = sbm_theta.data() + static_cast<std::size_t>(l) * k * k;
        for (int i = 1; i < n; ++i)
          for (int j = 0; j < i; ++j)
            if (rng.uniform() < theta[sbm_z[i] * k + sbm_z[j]]) a.set(i, j, true);
        g.layers.push_back(std::move(a));
      }
      return g;
    }
  }
  fail(Errc::invalid_argument, "unhandled recipe kind");
}

GraphonSystem GenRecipe::true_system() const {
  check();
  int d = dim();
  unsigned size = 1u << d;
  std::vector<Graphon> by_mask(size);
  switch (kind) {
    case Kind::independent: {
      auto sys = GraphonSystem::independent(graphons);
      return sys;
    }
    case Kind::coupled: {
      for (unsigned mask = 1; mask < size; ++mask) {
        std::vector<Graphon> members;
        for (int l = 0; l < d; ++l)
          if (mask >> l & 1u) members.push_back(graphons[l]);
        if (members.size() == 1)
          by_mask[mask] = members[0];
        else if (rho >= 1.0)
          by_mask[mask] = min_over_subset(std::move(members));
        else
          by_mask[mask] = coupled_subset(std::move(members), rho);
      }
      auto sys = GraphonSystem::from_subsets(d, std::move(by_mask));
      sys.set_family("coupled");
      return sys;
    }
    case Kind::percolation: {
      for (unsigned mask = 1; mask < size; ++mask) {
        double keep = 1.0;
        for (int l = 0; l < d; ++l)
          if (mask >> l & 1u) keep = std::min(keep, keeps[l]);
        by_mask[mask] = combine_graphons({base}, "percolated",
                                         [keep](std::span<const double> w) { return keep * w[0]; });
      }
      auto sys = GraphonSystem::from_subsets(d, std::move(by_mask));
      sys.set_family("percolation");
      return sys;
    }
    case Kind::input_output: {
      // Nested chain: P(all layers in S) = P(top layer of S). Links may be
      // asymmetric; the exchangeable system is the cell symmetrization.
      Graphon b = base;
      std::vector<Link> chain = links;
      for (unsigned mask = 1; mask < size; ++mask) {
        int top = 0;
        for (int l = 0; l < d; ++l)
          if (mask >> l & 1u) top = l;
        by_mask[mask] = Graphon::analytic("io_chain_level", {static_cast<double>(top)},
                                          [b, chain, top](double x, double y) {
                                            auto lower = [&](double a, double c) {
                                              double p = b(a, c);
                                              for (int l = 0; l < top; ++l)
                                                p *= std::min(1.0, std::max(0.0, chain[l](a, c)));
                                              return p;
                                            };
                                            return 0.5 * (lower(x, y) + lower(y, x));
                                          });
      }
      auto sys = GraphonSystem::from_subsets(d, std::move(by_mask));
      sys.set_family("input_output");
      return sys;
    }
    case Kind::xor_pair: {
      // With both copy decisions independent at rate rho, the sources are
      // comonotone with probability rho^2 and independent otherwise. The xor
      // layer is then determined: W3 = W1 + W2 - 2 W12, W123 = 0.
      double r2 = rho * rho;
      auto pair12 = [r2](std::span<const double> w) {
        return r2 * std::min(w[0], w[1]) + (1.0 - r2) * w[0] * w[1];
      };
      std::vector<Graphon> uv = {graphons[0], graphons[1]};
      by_mask[0b001] = graphons[0];
      by_mask[0b010] = graphons[1];
      by_mask[0b011] = combine_graphons(uv, "xor_w12", pair12);
      by_mask[0b100] = combine_graphons(uv, "xor_w3", [pair12](std::span<const double> w) {
        return w[0] + w[1] - 2.0 * pair12(w);
      });
      by_mask[0b101] = combine_graphons(uv, "xor_w13", [pair12](std::span<const double> w) {
        return w[0] - pair12(w);
      });
      by_mask[0b110] = combine_graphons(uv, "xor_w23", [pair12](std::span<const double> w) {
        return w[1] - pair12(w);
      });
      by_mask[0b111] = combine_graphons(uv, "xor_w123", [](std::span<const double>) { return 0.0; });
      auto sys = GraphonSystem::from_subsets(3, std::move(by_mask));
      sys.set_family("xor_pair");
      return sys;
    }
    case Kind::sbm_layers: {
      std::vector<int> counts(sbm_k, 0);
      for (int label : sbm_z) ++counts[label];
      std::vector<double> sizes(counts.begin(), counts.end());
      std::vector<Graphon> marginals;
      for (int l = 0; l < d; ++l) {
        std::vector<double> theta(sbm_theta.begin() + static_cast<std::size_t>(l) * sbm_k * sbm_k,
                                  sbm_theta.begin() + static_cast<std::size_t>(l + 1) * sbm_k * sbm_k);
        marginals.push_back(Graphon::sbm(theta, sizes));
      }
      return GraphonSystem::independent(std::move(marginals));
    }
  }
  fail(Errc::no_truth_available, "recipe has no closed-form system");
}

namespace {

Graphon sbm3(double thin, double thout) {
  return Graphon::sbm({thin, thout, thout, thout, thin, thout, thout, thout, thin}, {1.0, 1.0, 1.0});
}

}  // namespace

GenRecipe GenRecipe::preset(const std::string& name, int n, std::uint64_t seed) {
  GenRecipe r;
  r.n = n;
  r.seed = seed;
  if (name == "chain_xy") {
    r.kind = Kind::percolation;
    r.base = Graphon::from_registry("product", {});
    r.keeps = {1.0, 0.8, 0.5};
  } else if (name == "io_xy") {
    r.kind = Kind::input_output;
    r.base = Graphon::from_registry("product", {});
    r.links = {Link{"io_ratio", {}}};
  } else if (name == "io_poly") {
    r.kind = Kind::input_output;
    r.base = Graphon::from_registry("product", {});
    r.links = {Link{"product", {}}, Link{"coord_y", {}}};
  } else if (name == "appendix_case1") {
    r.kind = Kind::percolation;
    r.base = Graphon::from_registry("product", {});
    r.keeps = {1.0, 0.95, 0.90};
  } else if (name == "appendix_case2") {
    r.kind = Kind::coupled;
    r.rho = 1.0;
    r.graphons = {Graphon::from_registry("product", {}), Graphon::from_registry("expdecay", {0.3, 1.5}),
                  Graphon::from_registry("affine", {0.3})};
  } else if (name == "independent_mix") {
    r.kind = Kind::independent;
    r.graphons = {Graphon::from_registry("product", {}), Graphon::from_registry("expdecay", {0.3, 1.5}),
                  Graphon::from_registry("affine", {0.3})};
  } else if (name == "dependent_3") {
    r.kind = Kind::coupled;
    r.rho = 1.0;
    r.graphons = {Graphon::from_registry("product", {}), Graphon::from_registry("product", {}),
                  Graphon::from_registry("product", {})};
  } else if (name == "sbm_percolated") {
    r.kind = Kind::percolation;
    r.base = sbm3(0.45, 0.05);
    r.keeps = {1.0, 0.95, 0.90};
  } else if (name == "sbm_mixed") {
    r.kind = Kind::coupled;
    r.rho = 0.90;
    r.graphons = {sbm3(0.55, 0.05), sbm3(0.45, 0.10), sbm3(0.35, 0.15)};
  } else if (name == "sbm_xor") {
    r.kind = Kind::xor_pair;
    r.rho = 0.78;
    r.graphons = {sbm3(0.75, 0.10), sbm3(0.05, 0.10)};
  } else if (name == "sbm_blocks") {
    r.kind = Kind::coupled;
    r.rho = 0.95;
    r.graphons = {sbm3(0.50, 0.08), sbm3(0.45, 0.10), sbm3(0.40, 0.12)};
  } else if (name == "planted_2block") {
    r.kind = Kind::sbm_layers;
    r.sbm_k = 2;
    r.sbm_theta = {0.8, 0.1, 0.1, 0.8};
    r.sbm_z.resize(n);
    for (int i = 0; i < n; ++i) r.sbm_z[i] = i < n / 2 ? 0 : 1;
  } else {
    fail(Errc::unknown_scenario, "unknown recipe preset '" + name + "'");
  }
  return r;
}

std::vector<std::string> GenRecipe::preset_names() {
  return {"chain_xy",        "io_xy",      "io_poly",  "appendix_case1", "appendix_case2", "independent_mix",
          "dependent_3",     "sbm_percolated", "sbm_mixed", "sbm_xor",    "sbm_blocks",     "planted_2block"};
}

}  // namespace gli
