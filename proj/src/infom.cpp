#include "gli/infom.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "gli/synth.hpp"

namespace gli {

namespace {

inline double plogp(double p) { return p > 0.0 ? -p * std::log(p) : 0.0; }

// Entropy of the cell vector obtained from subset values w (w[0]=1),
// accumulated per subset S into hs[S]. Cells of a marginal subsystem are
// sums of full cells over the dropped bits.
void accumulate_cell_entropies(std::vector<double>& w, std::vector<double>& cells, std::vector<KahanSum>& hs,
                               double weight, int d) {
  unsigned size = 1u << d;
  std::copy(w.begin(), w.end(), cells.begin());
  cells_from_subset_values(cells, d);
  for (unsigned b = 0; b < size; ++b) {
    double c = cells[b];
    if (c < -kCellClampTol)
      fail(Errc::cell_negative, "cell probability " + std::to_string(c) + " while integrating; invalid system");
    cells[b] = std::min(1.0, std::max(0.0, c));
  }
  // Full joint first, then every proper subset by aggregation.
  for (unsigned S = 1; S < size; ++S) {
    double h;
    if (S == size - 1) {
      h = 0.0;
      for (unsigned b = 0; b < size; ++b) h += plogp(cells[b]);
    } else {
      // Aggregate cells over bits outside S. Patterns sharing b & S land in
      // one bin; enumerate bins by submasks of S and sum their fibers.
      h = 0.0;
      unsigned rest = (size - 1u) & ~S;
      unsigned bin = 0;
      while (true) {
        double p = 0.0;
        unsigned fib = rest;
        while (true) {
          p += cells[bin | fib];
          if (fib == 0) break;
          fib = (fib - 1) & rest;
        }
        h += plogp(p);
        if (bin == S) break;
        bin = (bin - S) & S;  // next submask of S in increasing order
      }
    }
    hs[S].add(weight * h);
  }
}

}  // namespace

double binary_entropy(double x) {
  if (x < 0.0 || x > 1.0) fail(Errc::domain_error, "binary entropy argument outside [0,1]");
  return plogp(x) + plogp(1.0 - x);
}

EntropyProfile entropy_profile(const GraphonSystem& sys, const QuadratureSpec& q) {
  int d = sys.dim();
  unsigned size = 1u << d;
  std::vector<KahanSum> hs(size);
  std::vector<double> w(size), cells(size);

  if (sys.step_shared()) {
    const auto& edges = sys.shared_edges();
    int k = static_cast<int>(edges.size()) - 1;
    for (int a = 0; a < k; ++a) {
      double xa = 0.5 * (edges[a] + edges[a + 1]);
      double wa = edges[a + 1] - edges[a];
      for (int b = 0; b < k; ++b) {
        double xb = 0.5 * (edges[b] + edges[b + 1]);
        double wb = edges[b + 1] - edges[b];
        sys.subset_values_at(xa, xb, w);
        accumulate_cell_entropies(w, cells, hs, wa * wb, d);
      }
    }
  } else {
    if (q.m < 2) fail(Errc::invalid_argument, "quadrature grid must have m >= 2");
    double cell_w = 1.0 / (static_cast<double>(q.m) * q.m);
    for (int i = 0; i < q.m; ++i) {
      double x = (i + 0.5) / q.m;
      for (int j = 0; j < q.m; ++j) {
        double y = (j + 0.5) / q.m;
        sys.subset_values_at(x, y, w);
        accumulate_cell_entropies(w, cells, hs, cell_w, d);
      }
    }
  }

  EntropyProfile profile;
  profile.d = d;
  profile.H.resize(size, 0.0);
  for (unsigned S = 1; S < size; ++S) profile.H[S] = hs[S].value();
  return profile;
}

double graphon_entropy(const Graphon& w, const QuadratureSpec& q) {
  if (w.is_step()) {
    const auto& edges = w.edges();
    int k = w.blocks();
    KahanSum h;
    for (int a = 0; a < k; ++a) {
      double wa = edges[a + 1] - edges[a];
      for (int b = 0; b < k; ++b) {
        double wb = edges[b + 1] - edges[b];
        h.add(wa * wb * binary_entropy(w.block_value(a, b)));
      }
    }
    return h.value();
  }
  if (q.m < 2) fail(Errc::invalid_argument, "quadrature grid must have m >= 2");
  KahanSum h;
  double cell_w = 1.0 / (static_cast<double>(q.m) * q.m);
  for (int i = 0; i < q.m; ++i) {
    double x = (i + 0.5) / q.m;
    for (int j = 0; j < q.m; ++j) {
      double y = (j + 0.5) / q.m;
      double v = w(x, y);
      if (v < 0.0 || v > 1.0) {
        if (v < -kCellClampTol || v > 1.0 + kCellClampTol)
          fail(Errc::domain_error, "graphon value outside [0,1]");
        v = std::min(1.0, std::max(0.0, v));
      }
      h.add(cell_w * binary_entropy(v));
    }
  }
  return h.value();
}

double joint_graphon_entropy(const GraphonSystem& sys, const QuadratureSpec& q) {
  return entropy_profile(sys, q).full();
}

namespace {

// Floors tiny quadrature negativity on measures that are nonnegative in
// exact arithmetic.
double floor_measure(double v, bool& clamped, const char* what) {
  if (v >= 0.0) return v;
  if (v < -kEpsHard)
    fail(Errc::cell_negative, std::string(what) + " = " + std::to_string(v) + " is too negative; invalid system");
  clamped = true;
  return 0.0;
}

void require_dim(const EntropyProfile& p, int lo, const char* what) {
  if (p.d < lo) fail(Errc::dimension_mismatch, std::string(what) + " needs at least " + std::to_string(lo) + " layers");
}

}  // namespace

MeasureReport mutual_information(const EntropyProfile& p, bool require_normalized) {
  if (p.d != 2) fail(Errc::dimension_mismatch, "mutual information is defined for layer pairs");
  MeasureReport r;
  r.name = "mi";
  double raw = p.single(0) + p.single(1) - p.full();
  r.value = floor_measure(raw, r.clamped, "mutual information");
  double denom = std::min(p.single(0), p.single(1));
  if (denom > 0.0)
    r.normalized = r.value / denom;
  else if (require_normalized)
    fail(Errc::degenerate_marginal, "normalized MI undefined: a marginal entropy is zero");
  return r;
}

MeasureReport mutual_information(const GraphonSystem& sys, const QuadratureSpec& q, bool require_normalized) {
  return mutual_information(entropy_profile(sys, q), require_normalized);
}

double graphon_distance(const EntropyProfile& p) {
  if (p.d != 2) fail(Errc::dimension_mismatch, "graphon distance is defined for layer pairs");
  double mi = p.single(0) + p.single(1) - p.full();
  return p.full() - mi;
}

double graphon_distance(const GraphonSystem& sys, const QuadratureSpec& q) {
  return graphon_distance(entropy_profile(sys, q));
}

MeasureReport interaction_information(const EntropyProfile& p) {
  require_dim(p, 3, "interaction information");
  MeasureReport r;
  r.name = "ii";
  double v = 0.0;
  unsigned full = (1u << p.d) - 1u;
  for (unsigned S = 1; S <= full; ++S) {
    int sign = (std::popcount(S) % 2 == 1) ? 1 : -1;
    v += sign * p.at(S);
  }
  r.value = v;
  if (p.d == 3) r.bounds = interaction_bounds(p);
  return r;
}

MeasureReport interaction_information(const GraphonSystem& sys, const QuadratureSpec& q) {
  return interaction_information(entropy_profile(sys, q));
}

double conditional_mutual_information(const EntropyProfile& p, int cond_layer) {
  if (p.d != 3) fail(Errc::dimension_mismatch, "conditional MI implemented for three layers");
  if (cond_layer < 1 || cond_layer > 3) fail(Errc::invalid_argument, "cond layer must be in {1,2,3}");
  int c = cond_layer - 1;
  int a = -1, b = -1;
  for (int l = 0; l < 3; ++l) {
    if (l == c) continue;
    (a < 0 ? a : b) = l;
  }
  unsigned mc = 1u << c;
  double v = p.at((1u << a) | mc) + p.at((1u << b) | mc) - p.at(mc) - p.full();
  bool clamped = false;
  return floor_measure(v, clamped, "conditional mutual information");
}

double conditional_mutual_information(const GraphonSystem& sys, int cond_layer, const QuadratureSpec& q) {
  return conditional_mutual_information(entropy_profile(sys, q), cond_layer);
}

std::pair<double, double> interaction_bounds(const EntropyProfile& p) {
  if (p.d != 3) fail(Errc::dimension_mismatch, "interaction bounds implemented for three layers");
  double lo = std::min({conditional_mutual_information(p, 1), conditional_mutual_information(p, 2),
                        conditional_mutual_information(p, 3)});
  double mi12 = p.single(0) + p.single(1) - p.at(0b011);
  double mi13 = p.single(0) + p.single(2) - p.at(0b101);
  double mi23 = p.single(1) + p.single(2) - p.at(0b110);
  return {-lo, std::min({mi12, mi13, mi23})};
}

std::pair<double, double> interaction_bounds(const GraphonSystem& sys, const QuadratureSpec& q) {
  return interaction_bounds(entropy_profile(sys, q));
}

MeasureReport total_correlation(const EntropyProfile& p, bool require_normalized) {
  require_dim(p, 2, "total correlation");
  MeasureReport r;
  r.name = "tc";
  double sum = 0.0, maxh = 0.0;
  for (int l = 0; l < p.d; ++l) {
    sum += p.single(l);
    maxh = std::max(maxh, p.single(l));
  }
  r.value = floor_measure(sum - p.full(), r.clamped, "total correlation");
  double denom = sum - maxh;
  if (denom > 0.0)
    r.normalized = std::min(1.0, r.value / denom);
  else if (require_normalized)
    fail(Errc::degenerate_marginal, "normalized TC undefined: degenerate marginal entropies");
  return r;
}

MeasureReport total_correlation(const GraphonSystem& sys, const QuadratureSpec& q, bool require_normalized) {
  return total_correlation(entropy_profile(sys, q), require_normalized);
}

MeasureReport conditional_total_correlation(const EntropyProfile& p, int cond_layer) {
  require_dim(p, 3, "conditional total correlation");
  if (cond_layer < 1 || cond_layer > p.d) fail(Errc::invalid_argument, "cond layer out of range");
  int c = cond_layer - 1;
  unsigned mc = 1u << c;
  MeasureReport r;
  r.name = "ctc";
  double sum_pairs = 0.0, denom = 0.0;
  bool first = true;
  for (int l = 0; l < p.d; ++l) {
    if (l == c) continue;
    double hp = p.at((1u << l) | mc);
    sum_pairs += hp;
    double bound = hp - p.at(mc);  // conditional entropy H(W_l | W_c)
    denom = first ? bound : std::min(denom, bound);
    first = false;
  }
  double v = sum_pairs - p.full() - (p.d - 2) * p.at(mc);
  r.value = floor_measure(v, r.clamped, "conditional total correlation");
  if (denom > 0.0) r.normalized = std::min(1.0, r.value / denom);
  return r;
}

MeasureReport conditional_total_correlation(const GraphonSystem& sys, int cond_layer, const QuadratureSpec& q) {
  return conditional_total_correlation(entropy_profile(sys, q), cond_layer);
}

MeasureReport dual_total_correlation(const EntropyProfile& p) {
  require_dim(p, 2, "dual total correlation");
  MeasureReport r;
  r.name = "dtc";
  unsigned full = (1u << p.d) - 1u;
  double v = p.full();
  for (int l = 0; l < p.d; ++l) v -= p.full() - p.at(full & ~(1u << l));
  r.value = floor_measure(v, r.clamped, "dual total correlation");
  if (p.full() > 0.0) r.normalized = std::min(1.0, r.value / p.full());
  return r;
}

MeasureReport dual_total_correlation(const GraphonSystem& sys, const QuadratureSpec& q) {
  return dual_total_correlation(entropy_profile(sys, q));
}

MeasureReport o_information(const EntropyProfile& p) {
  require_dim(p, 3, "o-information");
  MeasureReport r;
  r.name = "oinfo";
  MeasureReport tc = total_correlation(p);
  MeasureReport dtc = dual_total_correlation(p);
  r.value = tc.value - dtc.value;
  if (p.d == 3) r.bounds = interaction_bounds(p);
  return r;
}

MeasureReport o_information(const GraphonSystem& sys, const QuadratureSpec& q) {
  return o_information(entropy_profile(sys, q));
}

double monte_carlo_joint_entropy(const GraphonSystem& sys, int n, int trials, std::uint64_t seed) {
  if (n < 2) fail(Errc::invalid_argument, "Monte Carlo joint entropy needs n >= 2");
  if (trials < 1) fail(Errc::invalid_argument, "need at least one trial");
  int d = sys.dim();
  unsigned size = 1u << d;
  KahanSum total;
  std::vector<double> w(size), cells(size);
  for (int t = 0; t < trials; ++t) {
    LatentVector xi = sample_latents(n, derive_seed(seed, {static_cast<std::uint64_t>(t), 0x6d63}));
    KahanSum per_trial;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        sys.subset_values_at(xi.xi[i], xi.xi[j], w);
        std::copy(w.begin(), w.end(), cells.begin());
        cells_from_subset_values(cells, d);
        double h = 0.0;
        for (unsigned b = 0; b < size; ++b) {
          double c = cells[b];
          if (c < -kCellClampTol) fail(Errc::cell_negative, "negative cell during Monte Carlo evaluation");
          h += plogp(std::min(1.0, std::max(0.0, c)));
        }
        per_trial.add(h);
      }
    }
    total.add(per_trial.value() / (0.5 * n * (n - 1)));
  }
  return total.value() / trials;
}

MeasureReport compute_measure(const std::string& name, const GraphonSystem& sys, const QuadratureSpec& q,
                              int cond_layer) {
  if (name == "entropy") {
    MeasureReport r;
    r.name = "entropy";
    r.value = joint_graphon_entropy(sys, q);
    return r;
  }
  EntropyProfile p = entropy_profile(sys, q);
  if (name == "mi") return mutual_information(p);
  if (name == "distance") {
    MeasureReport r;
    r.name = "distance";
    r.value = graphon_distance(p);
    return r;
  }
  if (name == "ii") return interaction_information(p);
  if (name == "cmi") {
    MeasureReport r;
    r.name = "cmi";
    r.value = conditional_mutual_information(p, cond_layer ? cond_layer : 3);
    return r;
  }
  if (name == "tc") return total_correlation(p);
  if (name == "ctc") return conditional_total_correlation(p, cond_layer ? cond_layer : p.d);
  if (name == "dtc") return dual_total_correlation(p);
  if (name == "oinfo") return o_information(p);
  fail(Errc::invalid_argument, "unknown measure '" + name + "'");
}

}  // namespace gli
