#include "gli/estim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

namespace gli {

std::pair<int, int> auto_bandwidth(int n, double alpha) {
  if (n < 4) fail(Errc::too_few_nodes, "automatic bandwidth needs n >= 4");
  if (!(alpha > 0.0) || alpha > 1.0) fail(Errc::invalid_argument, "alpha must be in (0,1]");
  double a = std::min(alpha, 1.0);
  int k = static_cast<int>(std::ceil(std::pow(static_cast<double>(n), 1.0 / (a + 1.0))));
  k = std::max(1, std::min(k, n / 2));
  while (k >= 1 && n / k < 2) --k;
  if (k < 1) fail(Errc::too_few_nodes, "no bandwidth h >= 2 exists");
  return {n / k, k};
}

int shared_bandwidth(const MultiplexGraph& g, double alpha) {
  g.check();
  double sum = 0.0;
  for (int l = 0; l < g.d(); ++l) sum += auto_bandwidth(g.n, alpha).first;
  int h = static_cast<int>(std::lround(sum / g.d()));
  return std::max(2, h);
}

namespace {

struct Partition {
  int h = 0, k = 0, r = 0;
};

Partition partition_for(int n, int h) {
  if (h < 2 || h > n) fail(Errc::invalid_argument, "bandwidth must satisfy 2 <= h <= n");
  Partition p;
  p.h = h;
  p.k = n / h;
  p.r = n - p.h * p.k;
  return p;
}

inline std::size_t tri_index(int a, int b, int k) {
  if (a > b) std::swap(a, b);
  return static_cast<std::size_t>(a) * k - static_cast<std::size_t>(a) * (a - 1) / 2 + (b - a);
}

// Pattern of each node pair: bit l set when layer l+1 has the edge.
std::vector<std::uint8_t> pattern_matrix(const MultiplexGraph& g) {
  int n = g.n, d = g.d();
  std::vector<std::uint8_t> pat(static_cast<std::size_t>(n) * n, 0);
  for (int l = 0; l < d; ++l) {
    const std::uint8_t* raw = g.layers[l].raw();
    std::uint8_t bit = static_cast<std::uint8_t>(1u << l);
    for (std::size_t idx = 0; idx < pat.size(); ++idx)
      if (raw[idx]) pat[idx] |= bit;
  }
  return pat;
}

// Swap-search state over fixed block sizes. Bucket counts C[pair(a,b)][pat]
// are maintained exactly; the likelihood term sum C log C is tracked
// incrementally (the block-pair totals never change under swaps).
class SwapSearch {
 public:
  SwapSearch(const MultiplexGraph& g, const std::vector<std::uint8_t>& pat, Partition part)
      : n_(g.n), d_(g.d()), q_(1u << g.d()), k_(part.k), part_(part), pat_(pat) {}

  void init(const std::vector<int>& order) {
    z_.assign(n_, 0);
    for (int pos = 0; pos < n_; ++pos) z_[order[pos]] = std::min(pos / part_.h, k_ - 1);
    buckets_.assign(tri_index(k_ - 1, k_ - 1, k_) + 1, std::vector<std::uint32_t>(q_, 0));
    profiles_.assign(static_cast<std::size_t>(n_) * k_ * q_, 0);
    for (int i = 0; i < n_; ++i) {
      const std::uint8_t* row = pat_.data() + static_cast<std::size_t>(i) * n_;
      std::uint32_t* prof = profiles_.data() + static_cast<std::size_t>(i) * k_ * q_;
      for (int j = 0; j < n_; ++j) {
        if (j == i) continue;
        ++prof[static_cast<std::size_t>(z_[j]) * q_ + row[j]];
        if (j > i) ++buckets_[tri_index(z_[i], z_[j], k_)][row[j]];
      }
    }
    int cap = (part_.h + part_.r) * (part_.h + part_.r) + 1;
    if (static_cast<int>(xlogx_.size()) < cap) {
      xlogx_.resize(cap);
      xlogx_[0] = 0.0;
      for (int c = 1; c < cap; ++c) xlogx_[c] = c * std::log(static_cast<double>(c));
    }
    sum_clogc_ = 0.0;
    for (const auto& bucket : buckets_)
      for (std::uint32_t c : bucket) sum_clogc_ += xlogx_[c];
    const_term_ = 0.0;
    std::vector<int> sizes(k_, part_.h);
    sizes[k_ - 1] += part_.r;
    for (int a = 0; a < k_; ++a)
      for (int b = a; b < k_; ++b) {
        std::size_t pairs = (a == b) ? static_cast<std::size_t>(sizes[a]) * (sizes[a] - 1) / 2
                                     : static_cast<std::size_t>(sizes[a]) * sizes[b];
        if (pairs > 0) const_term_ += static_cast<double>(pairs) * std::log(static_cast<double>(pairs));
      }
  }

  double log_likelihood() const { return sum_clogc_ - const_term_; }

  // Enumerates every bucket-cell count change induced by swapping the labels
  // of u and v. Each affected (bucket, pattern) cell is visited exactly once,
  // so callers can both score (via xlogx differences) and apply the changes.
  template <typename Visit>
  void for_each_change(int u, int v, Visit&& visit) const {
    int a = z_[u], b = z_[v];
    std::uint8_t puv = pat_[static_cast<std::size_t>(u) * n_ + v];
    const std::uint32_t* pu = profiles_.data() + static_cast<std::size_t>(u) * k_ * q_;
    const std::uint32_t* pv = profiles_.data() + static_cast<std::size_t>(v) * k_ * q_;
    for (int c = 0; c < k_; ++c) {
      if (c == a || c == b) continue;
      const std::uint32_t* mu = pu + static_cast<std::size_t>(c) * q_;
      const std::uint32_t* mv = pv + static_cast<std::size_t>(c) * q_;
      std::size_t iac = tri_index(a, c, k_), ibc = tri_index(b, c, k_);
      for (unsigned p = 0; p < q_; ++p) {
        int dlt = static_cast<int>(mv[p]) - static_cast<int>(mu[p]);
        if (dlt == 0) continue;
        visit(iac, p, dlt);
        visit(ibc, p, -dlt);
      }
    }
    // Blocks a and b interact through three buckets; their changes must be
    // merged before scoring because {a,b} is touched from both sides.
    const std::uint32_t* mu_a = pu + static_cast<std::size_t>(a) * q_;
    const std::uint32_t* mu_b = pu + static_cast<std::size_t>(b) * q_;
    const std::uint32_t* mv_a = pv + static_cast<std::size_t>(a) * q_;
    const std::uint32_t* mv_b = pv + static_cast<std::size_t>(b) * q_;
    std::size_t iaa = tri_index(a, a, k_), iab = tri_index(a, b, k_), ibb = tri_index(b, b, k_);
    for (unsigned p = 0; p < q_; ++p) {
      int m1a = static_cast<int>(mu_a[p]);
      int m2a = static_cast<int>(mv_a[p]) - (p == puv);
      int m1b = static_cast<int>(mu_b[p]) - (p == puv);
      int m2b = static_cast<int>(mv_b[p]);
      int daa = m2a - m1a;
      int dbb = m1b - m2b;
      int dab = -daa - dbb;
      if (daa) visit(iaa, p, daa);
      if (dbb) visit(ibb, p, dbb);
      if (dab) visit(iab, p, dab);
    }
  }

  double swap_delta(int u, int v) const {
    double delta = 0.0;
    for_each_change(u, v, [&](std::size_t bucket, unsigned p, int dlt) {
      int c = static_cast<int>(buckets_[bucket][p]);
      delta += xlogx_[c + dlt] - xlogx_[c];
    });
    return delta;
  }

  void apply_swap(int u, int v, double delta) {
    int a = z_[u], b = z_[v];
    std::uint8_t puv = pat_[static_cast<std::size_t>(u) * n_ + v];
    for_each_change(u, v, [&](std::size_t bucket, unsigned p, int dlt) {
      buckets_[bucket][p] = static_cast<std::uint32_t>(static_cast<int>(buckets_[bucket][p]) + dlt);
    });
    // Other nodes see u and v exchange blocks.
    for (int w = 0; w < n_; ++w) {
      if (w == u || w == v) continue;
      std::uint32_t* prof = profiles_.data() + static_cast<std::size_t>(w) * k_ * q_;
      std::uint8_t pw_u = pat_[static_cast<std::size_t>(w) * n_ + u];
      std::uint8_t pw_v = pat_[static_cast<std::size_t>(w) * n_ + v];
      --prof[static_cast<std::size_t>(a) * q_ + pw_u];
      ++prof[static_cast<std::size_t>(b) * q_ + pw_u];
      --prof[static_cast<std::size_t>(b) * q_ + pw_v];
      ++prof[static_cast<std::size_t>(a) * q_ + pw_v];
    }
    std::uint32_t* prof_u = profiles_.data() + static_cast<std::size_t>(u) * k_ * q_;
    std::uint32_t* prof_v = profiles_.data() + static_cast<std::size_t>(v) * k_ * q_;
    --prof_u[static_cast<std::size_t>(b) * q_ + puv];
    ++prof_u[static_cast<std::size_t>(a) * q_ + puv];
    --prof_v[static_cast<std::size_t>(a) * q_ + puv];
    ++prof_v[static_cast<std::size_t>(b) * q_ + puv];
    z_[u] = b;
    z_[v] = a;
    sum_clogc_ += delta;
  }

  // First-improvement sweeps over node pairs in index order; stops after a
  // sweep with no accepted swap or after max_sweeps.
  void run(int max_sweeps, double tol) {
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
      std::size_t accepts = 0;
      for (int u = 0; u + 1 < n_; ++u)
        for (int v = u + 1; v < n_; ++v) {
          if (z_[u] == z_[v]) continue;
          double delta = swap_delta(u, v);
          if (delta > tol) {
            apply_swap(u, v, delta);
            ++accepts;
          }
        }
      if (accepts == 0) break;
    }
  }

  const std::vector<int>& labels() const { return z_; }
  const std::vector<std::vector<std::uint32_t>>& buckets() const { return buckets_; }

 private:
  int n_, d_;
  unsigned q_;
  int k_;
  Partition part_;
  const std::vector<std::uint8_t>& pat_;
  std::vector<int> z_;
  std::vector<std::vector<std::uint32_t>> buckets_;
  std::vector<std::uint32_t> profiles_;
  std::vector<double> xlogx_;
  double sum_clogc_ = 0.0;
  double const_term_ = 0.0;
};

std::vector<int> degree_sorted_order(const MultiplexGraph& g) {
  std::vector<long long> degree(g.n, 0);
  for (const auto& layer : g.layers)
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j)
        if (i != j && layer.at(i, j)) ++degree[i];
  std::vector<int> order(g.n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return degree[a] < degree[b]; });
  return order;
}

}  // namespace

double profile_log_likelihood(const MultiplexGraph& g, std::span<const int> z, int k) {
  g.check();
  if (static_cast<int>(z.size()) != g.n) fail(Errc::dimension_mismatch, "assignment length differs from n");
  int d = g.d();
  unsigned q = 1u << d;
  auto pat = pattern_matrix(g);
  std::vector<std::vector<std::uint32_t>> counts(tri_index(k - 1, k - 1, k) + 1,
                                                 std::vector<std::uint32_t>(q, 0));
  for (int i = 0; i < g.n; ++i) {
    if (z[i] < 0 || z[i] >= k) fail(Errc::invalid_argument, "block label out of range");
    for (int j = i + 1; j < g.n; ++j)
      ++counts[tri_index(z[i], z[j], k)][pat[static_cast<std::size_t>(i) * g.n + j]];
  }
  double ll = 0.0;
  for (const auto& bucket : counts) {
    std::uint64_t total = 0;
    for (std::uint32_t c : bucket) total += c;
    if (total == 0) continue;
    for (std::uint32_t c : bucket)
      if (c > 0) ll += static_cast<double>(c) * std::log(static_cast<double>(c) / total);
  }
  return ll;
}

double profile_log_likelihood(const MultiplexGraph& g, const CommunityAssignment& z) {
  return profile_log_likelihood(g, z.z, z.k);
}

std::vector<double> block_averages(const MultiplexGraph& g, const CommunityAssignment& z, unsigned mask) {
  g.check();
  z.check();
  if (mask == 0) fail(Errc::empty_subset, "block averages need a nonempty layer subset");
  if (mask >= (1u << g.d())) fail(Errc::dimension_mismatch, "layer mask out of range");
  int k = z.k;
  std::vector<double> num(static_cast<std::size_t>(k) * k, 0.0), den(static_cast<std::size_t>(k) * k, 0.0);
  for (int i = 0; i < g.n; ++i)
    for (int j = i + 1; j < g.n; ++j) {
      bool all = true;
      for (int l = 0; l < g.d() && all; ++l)
        if (mask >> l & 1u) all = g.layers[l].at(i, j);
      int a = z.z[i], b = z.z[j];
      num[static_cast<std::size_t>(a) * k + b] += all;
      den[static_cast<std::size_t>(a) * k + b] += 1.0;
      if (a != b) {
        num[static_cast<std::size_t>(b) * k + a] += all;
        den[static_cast<std::size_t>(b) * k + a] += 1.0;
      }
    }
  std::vector<double> avg(static_cast<std::size_t>(k) * k, 0.0);
  for (std::size_t idx = 0; idx < avg.size(); ++idx) avg[idx] = den[idx] > 0 ? num[idx] / den[idx] : 0.0;
  return avg;
}

Graphon step_graphon(const std::vector<double>& values, const CommunityAssignment& z) {
  int n = static_cast<int>(z.z.size());
  std::vector<double> edges(z.k + 1, 0.0);
  for (int a = 1; a < z.k; ++a) edges[a] = static_cast<double>(a) * z.h / n;
  edges[z.k] = 1.0;
  return Graphon::step(std::move(edges), values);
}

FitResult fit_community(const MultiplexGraph& g, const FitConfig& cfg) {
  g.check();
  if (g.n < 4) fail(Errc::too_few_nodes, "fit needs n >= 4");
  if (g.d() > kMaxLayers) fail(Errc::layer_mismatch, "too many layers for a joint fit");
  if (cfg.restarts < 1) fail(Errc::invalid_argument, "restarts must be >= 1");

  int h = cfg.bandwidth > 0 ? cfg.bandwidth : shared_bandwidth(g, cfg.alpha);
  Partition part = partition_for(g.n, h);
  auto pat = pattern_matrix(g);
  std::vector<int> base_order = degree_sorted_order(g);

  SwapSearch search(g, pat, part);
  std::vector<int> best_z;
  double best_ll = -std::numeric_limits<double>::infinity();

  for (int restart = 0; restart < cfg.restarts; ++restart) {
    std::vector<int> order = base_order;
    if (restart > 0) {
      Rng rng(derive_seed(cfg.seed, {0x72657374, static_cast<std::uint64_t>(restart)}));
      for (int i = g.n - 1; i > 0; --i) {
        int j = static_cast<int>(rng.next() % static_cast<std::uint64_t>(i + 1));
        std::swap(order[i], order[j]);
      }
    }
    search.init(order);
    search.run(cfg.max_sweeps, cfg.tolerance);
    double ll = search.log_likelihood();
    if (ll > best_ll) {
      best_ll = ll;
      best_z = search.labels();
    }
  }

  FitResult result;
  result.assignment.z = std::move(best_z);
  result.assignment.h = part.h;
  result.assignment.k = part.k;
  result.assignment.r = part.r;
  result.assignment.check();
  result.log_likelihood = best_ll;

  int d = g.d();
  std::vector<Graphon> by_mask(std::size_t{1} << d);
  for (unsigned mask = 1; mask < by_mask.size(); ++mask) {
    auto avg = block_averages(g, result.assignment, mask);
    result.block_means[mask] = avg;
    by_mask[mask] = step_graphon(avg, result.assignment);
  }
  result.system = GraphonSystem::from_subsets(d, std::move(by_mask));
  result.system.set_family("fitted_step");

  int k = part.k;
  result.pair_counts.assign(static_cast<std::size_t>(k) * k, 0.0);
  std::vector<int> sizes(k, part.h);
  sizes[k - 1] += part.r;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      result.pair_counts[static_cast<std::size_t>(a) * k + b] =
          (a == b) ? 0.5 * sizes[a] * (sizes[a] - 1) : static_cast<double>(sizes[a]) * sizes[b];
  return result;
}

}  // namespace gli
