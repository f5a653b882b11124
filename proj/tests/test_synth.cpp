#include <doctest.h>

#include <cmath>

#include "gli/infom.hpp"
#include "gli/synth.hpp"
#include "oracles.hpp"

using namespace gli;

namespace {

bool same_graph(const AdjacencyMatrix& a, const AdjacencyMatrix& b) {
  if (a.n() != b.n()) return false;
  for (int i = 0; i < a.n(); ++i)
    for (int j = i + 1; j < a.n(); ++j)
      if (a.at(i, j) != b.at(i, j)) return false;
  return true;
}

double density(const AdjacencyMatrix& a) {
  return static_cast<double>(a.edge_count()) / (0.5 * a.n() * (a.n() - 1));
}

}  // namespace

TEST_CASE("latent sampling: determinism, range, moments") {
  auto a = sample_latents(5, 42);
  auto b = sample_latents(5, 42);
  CHECK(a.xi == b.xi);
  for (double v : a.xi) {
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
  CHECK_THROWS_AS(sample_latents(0, 1), Error);

  auto big = sample_latents(10000, 7);
  double mean = 0.0;
  for (double v : big.xi) mean += v;
  mean /= big.xi.size();
  CHECK(std::abs(mean - 0.5) < 0.02);
}

TEST_CASE("graph sampling: degenerate graphons and density") {
  auto xi = sample_latents(64, 3);
  auto complete = sample_graph(Graphon::from_registry("constant", {1.0}), xi, 1);
  CHECK(complete.edge_count() == 64u * 63 / 2);
  auto empty = sample_graph(Graphon::from_registry("constant", {0.0}), xi, 1);
  CHECK(empty.edge_count() == 0);

  auto big_xi = sample_latents(2048, 1);
  auto g = sample_graph(Graphon::from_registry("product", {}), big_xi, 2);
  CHECK(std::abs(density(g) - 0.25) < 0.01);
}

TEST_CASE("conditional sampling: subset property and effective child density") {
  auto xi = sample_latents(2048, 4);
  auto parent = sample_graph(Graphon::from_registry("product", {}), xi, 5);

  auto copy = sample_conditional(Link{"constant", {1.0}}, parent, xi, 6);
  CHECK(same_graph(copy, parent));
  auto none = sample_conditional(Link{"constant", {0.0}}, parent, xi, 6);
  CHECK(none.edge_count() == 0);

  auto child = sample_conditional(Link{"io_ratio", {}}, parent, xi, 7);
  for (int i = 0; i < parent.n(); ++i)
    for (int j = i + 1; j < parent.n(); ++j)
      if (child.at(i, j)) CHECK(parent.at(i, j));
  // quadrature of the symmetrized capped child marginal: 11/48
  CHECK(std::abs(density(child) - oracle::frozen::io_child_density) < 0.01);
}

TEST_CASE("percolation: limits and binomial count") {
  auto xi = sample_latents(512, 10);
  auto a = sample_graph(Graphon::from_registry("constant", {0.3}), xi, 11);
  CHECK(same_graph(percolate(a, 1.0, 12), a));
  CHECK(percolate(a, 0.0, 12).edge_count() == 0);

  auto big_xi = sample_latents(600, 13);
  auto dense = sample_graph(Graphon::from_registry("constant", {0.2}), big_xi, 14);
  double m = static_cast<double>(dense.edge_count());
  auto kept = percolate(dense, 0.9, 15);
  double sigma = std::sqrt(m * 0.9 * 0.1);
  CHECK(std::abs(static_cast<double>(kept.edge_count()) - 0.9 * m) < 3 * sigma);
}

TEST_CASE("xor and elementwise product on hand graphs") {
  AdjacencyMatrix a(3), b(3);
  a.set(0, 1, true);
  b.set(0, 1, true);
  b.set(1, 2, true);
  auto x = xor_combine(a, b);
  CHECK(x.edge_count() == 1);
  CHECK(x.at(1, 2));
  CHECK(xor_combine(a, a).edge_count() == 0);
  CHECK(same_graph(xor_combine(a, AdjacencyMatrix(3)), a));
  CHECK_THROWS_AS(xor_combine(a, AdjacencyMatrix(4)), Error);

  AdjacencyMatrix c(3), d(3);
  c.set(0, 1, true);
  c.set(0, 2, true);
  d.set(0, 2, true);
  d.set(1, 2, true);
  auto prod = elementwise_product({c, d});
  CHECK(prod.edge_count() == 1);
  CHECK(prod.at(0, 2));
  CHECK(same_graph(elementwise_product({c}), c));
  CHECK(elementwise_product({c, AdjacencyMatrix(3)}).edge_count() == 0);
}

TEST_CASE("recipes are deterministic and produce valid layers") {
  for (const auto& name : GenRecipe::preset_names()) {
    int n = name == "planted_2block" ? 32 : 48;
    auto r = GenRecipe::preset(name, n, 99);
    auto g1 = r.sample();
    auto g2 = r.sample();
    REQUIRE(g1.d() == r.dim());
    g1.check();
    for (int l = 0; l < g1.d(); ++l) {
      CHECK(same_graph(g1.layers[l], g2.layers[l]));
      for (int i = 0; i < g1.n; ++i) CHECK(!g1.layers[l].at(i, i));
    }
  }
}

TEST_CASE("chain recipe: layers are nested and subset products collapse") {
  auto r = GenRecipe::preset("chain_xy", 256, 21);
  auto g = r.sample();
  for (int l = 1; l < g.d(); ++l)
    for (int i = 0; i < g.n; ++i)
      for (int j = i + 1; j < g.n; ++j)
        if (g.layers[l].at(i, j)) CHECK(g.layers[l - 1].at(i, j));
  // A^(1..j) == A^(j) for the chain
  auto prod = subset_product(g, 0b111);
  CHECK(same_graph(prod, g.layers[2]));
}

TEST_CASE("input-output recipe: child never leaves the parent") {
  auto g = GenRecipe::preset("io_xy", 512, 31).sample();
  for (int i = 0; i < g.n; ++i)
    for (int j = i + 1; j < g.n; ++j)
      if (g.layers[1].at(i, j)) CHECK(g.layers[0].at(i, j));
}

TEST_CASE("coupled recipe with equal graphons duplicates the layer") {
  GenRecipe r;
  r.kind = GenRecipe::Kind::coupled;
  r.rho = 1.0;
  r.n = 64;
  r.seed = 8;
  r.graphons = {Graphon::from_registry("product", {}), Graphon::from_registry("product", {}),
                Graphon::from_registry("product", {})};
  auto g = r.sample();
  CHECK(same_graph(g.layers[0], g.layers[1]));
  CHECK(same_graph(g.layers[0], g.layers[2]));
}

TEST_CASE("every preset truth system passes validation") {
  for (const auto& name : GenRecipe::preset_names()) {
    auto r = GenRecipe::preset(name, 24, 5);
    auto sys = r.true_system();
    INFO(name);
    CHECK(validate(sys, 24).empty());
  }
}

TEST_CASE("xor truth: top cell vanishes and marginals match sampled densities") {
  auto r = GenRecipe::preset("sbm_xor", 2048, 17);
  auto sys = r.true_system();
  for (double x : {0.2, 0.5, 0.8}) CHECK(sys.subset(0b111)(x, x) == 0.0);

  auto g = r.sample();
  QuadratureSpec q{64};
  for (int l = 0; l < 3; ++l) {
    double want = oracle::integrate([&](double x, double y) { return sys.subset(1u << l)(x, y); }, 64);
    CHECK(std::abs(density(g.layers[l]) - want) < 0.02);
  }
}

TEST_CASE("percolation truth: subset graphons scale by the smallest keep") {
  auto sys = GenRecipe::preset("appendix_case1", 16, 1).true_system();
  for (double x : {0.3, 0.7})
    for (double y : {0.4, 0.9}) {
      double base = x * y;
      CHECK(sys.subset(0b001)(x, y) == doctest::Approx(base));
      CHECK(sys.subset(0b010)(x, y) == doctest::Approx(0.95 * base));
      CHECK(sys.subset(0b100)(x, y) == doctest::Approx(0.90 * base));
      CHECK(sys.subset(0b011)(x, y) == doctest::Approx(0.95 * base));
      CHECK(sys.subset(0b110)(x, y) == doctest::Approx(0.90 * base));
      CHECK(sys.subset(0b111)(x, y) == doctest::Approx(0.90 * base));
    }
}

TEST_CASE("recipe validation rejects bad inputs") {
  GenRecipe r;
  r.kind = GenRecipe::Kind::coupled;
  r.rho = 1.4;
  r.n = 8;
  r.graphons = {Graphon::from_registry("product", {})};
  CHECK_THROWS_AS(r.check(), Error);

  GenRecipe p;
  p.kind = GenRecipe::Kind::percolation;
  p.base = Graphon::from_registry("product", {});
  p.keeps = {0.9, 0.5};  // must start at 1.0
  p.n = 8;
  CHECK_THROWS_AS(p.check(), Error);
}
