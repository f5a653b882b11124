#include "gli/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <set>

namespace gli {

Graphon Graphon::from_registry(const std::string& name, const std::vector<double>& params) {
  auto need = [&](std::size_t n) {
    if (params.size() != n)
      fail(Errc::invalid_argument, "registry graphon '" + name + "' expects " + std::to_string(n) + " parameter(s)");
  };
  if (name == "constant") {
    need(1);
    double p = params[0];
    if (p < 0.0 || p > 1.0) fail(Errc::domain_error, "constant graphon level outside [0,1]");
    return analytic(name, params, [p](double, double) { return p; });
  }
  if (name == "product") {
    need(0);
    return analytic(name, {}, [](double x, double y) { return x * y; });
  }
  if (name == "scaled_product") {
    need(1);
    double c = params[0];
    if (c < 0.0 || c > 1.0) fail(Errc::domain_error, "scaled_product factor outside [0,1]");
    return analytic(name, params, [c](double x, double y) { return c * x * y; });
  }
  if (name == "poly") {
    need(2);
    double p = params[0], q = params[1];
    if (p < 0.0 || q < 0.0) fail(Errc::domain_error, "poly exponents must be nonnegative");
    // x^p y^q sampled over the lower triangle is effectively its
    // symmetrization; the registry stores that form.
    return analytic(name, params, [p, q](double x, double y) {
      return 0.5 * (std::pow(x, p) * std::pow(y, q) + std::pow(x, q) * std::pow(y, p));
    });
  }
  if (name == "affine") {
    need(1);
    double a = params[0];
    if (a < 0.0 || a > 0.5) fail(Errc::domain_error, "affine slope outside [0,0.5]");
    return analytic(name, params, [a](double x, double y) { return a * (x + y); });
  }
  if (name == "expdecay") {
    need(2);
    double a = params[0], b = params[1];
    if (a < 0.0 || a > 1.0 || b < 0.0) fail(Errc::domain_error, "expdecay parameters out of range");
    return analytic(name, params, [a, b](double x, double y) { return a * std::exp(-b * (x + y)); });
  }
  fail(Errc::invalid_argument, "unknown registry graphon '" + name + "'");
}

Graphon Graphon::parse(const std::string& text) {
  auto colon = text.find(':');
  std::string name = text.substr(0, colon);
  std::vector<double> params;
  if (colon != std::string::npos) {
    std::string rest = text.substr(colon + 1);
    std::size_t pos = 0;
    while (pos < rest.size()) {
      std::size_t comma = rest.find(',', pos);
      std::string tok = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      try {
        params.push_back(std::stod(tok));
      } catch (const std::exception&) {
        fail(Errc::parse_error, "bad graphon parameter '" + tok + "' in '" + text + "'");
      }
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  return from_registry(name, params);
}

Graphon Graphon::step(std::vector<double> edges, std::vector<double> values) {
  if (edges.size() < 2) fail(Errc::invalid_argument, "step graphon needs at least one block");
  int k = static_cast<int>(edges.size()) - 1;
  if (std::abs(edges.front()) > 1e-12 || std::abs(edges.back() - 1.0) > 1e-12)
    fail(Errc::invalid_argument, "step boundaries must start at 0 and end at 1");
  for (int i = 0; i + 1 < static_cast<int>(edges.size()); ++i)
    if (!(edges[i] < edges[i + 1]))
      fail(Errc::invalid_argument, "step boundaries must be strictly increasing");
  if (values.size() != static_cast<std::size_t>(k) * k)
    fail(Errc::dimension_mismatch, "step values must be k*k");
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      double v = values[static_cast<std::size_t>(a) * k + b];
      if (v < 0.0 || v > 1.0) fail(Errc::domain_error, "step value outside [0,1]");
      if (std::abs(v - values[static_cast<std::size_t>(b) * k + a]) > 1e-12)
        fail(Errc::not_symmetric, "step values matrix is not symmetric");
    }
  Graphon g;
  g.label_ = "step";
  g.edges_ = std::move(edges);
  g.values_ = std::move(values);
  g.edges_.front() = 0.0;
  g.edges_.back() = 1.0;
  return g;
}

Graphon Graphon::sbm(const std::vector<double>& theta, const std::vector<double>& sizes) {
  if (sizes.empty()) fail(Errc::invalid_argument, "sbm needs block sizes");
  int k = static_cast<int>(sizes.size());
  if (theta.size() != static_cast<std::size_t>(k) * k) fail(Errc::dimension_mismatch, "sbm theta must be k*k");
  double total = 0.0;
  for (double s : sizes) {
    if (s <= 0.0) fail(Errc::invalid_argument, "sbm block sizes must be positive");
    total += s;
  }
  std::vector<double> edges(k + 1, 0.0);
  double acc = 0.0;
  for (int i = 0; i < k; ++i) {
    acc += sizes[i] / total;
    edges[i + 1] = acc;
  }
  edges[k] = 1.0;
  return step(std::move(edges), theta);
}

Graphon Graphon::analytic(std::string label, std::vector<double> params, EvalFn fn) {
  Graphon g;
  g.label_ = std::move(label);
  g.params_ = std::move(params);
  g.fn_ = std::move(fn);
  return g;
}

int Graphon::block_index(double x) const {
  // First boundary strictly above x, clamped into [0, k-1].
  int k = blocks();
  int lo = 0, hi = k - 1;
  while (lo < hi) {
    int mid = (lo + hi) / 2;
    if (x < edges_[mid + 1])
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

double Graphon::operator()(double x, double y) const {
  if (is_step()) return block_value(block_index(x), block_index(y));
  if (!fn_) fail(Errc::invalid_argument, "empty graphon");
  return fn_(x, y);
}

std::vector<std::string> Graphon::check(int grid_m) const {
  std::vector<std::string> out;
  const Graphon& g = *this;
  for (int i = 0; i < grid_m && out.size() < 8; ++i) {
    double x = (i + 0.5) / grid_m;
    for (int j = i; j < grid_m && out.size() < 8; ++j) {
      double y = (j + 0.5) / grid_m;
      double v = g(x, y), w = g(y, x);
      if (std::abs(v - w) > 1e-9)
        out.push_back("not symmetric at (" + std::to_string(x) + "," + std::to_string(y) + ")");
      if (v < -1e-12 || v > 1.0 + 1e-12)
        out.push_back("value " + std::to_string(v) + " outside [0,1]");
    }
  }
  return out;
}

std::size_t AdjacencyMatrix::edge_count() const {
  std::size_t m = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) m += at(i, j);
  return m;
}

std::vector<std::pair<int, int>> AdjacencyMatrix::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if (at(i, j)) out.emplace_back(i, j);
  return out;
}

void MultiplexGraph::check() const {
  if (layers.empty()) fail(Errc::layer_mismatch, "multiplex graph has no layers");
  for (const auto& layer : layers)
    if (layer.n() != n) fail(Errc::layer_mismatch, "layer node counts differ");
  if (node_ids) {
    if (static_cast<int>(node_ids->size()) != n) fail(Errc::dimension_mismatch, "node_ids length differs from n");
    std::set<std::string> uniq(node_ids->begin(), node_ids->end());
    if (static_cast<int>(uniq.size()) != n) fail(Errc::invalid_argument, "node_ids are not unique");
  }
}

void CommunityAssignment::check() const {
  int n = static_cast<int>(z.size());
  if (h < 2) fail(Errc::invalid_argument, "bandwidth h must be >= 2");
  if (k < 1 || h * k + r != n || r < 0 || r >= h)
    fail(Errc::invalid_argument, "assignment does not respect n = h*k + r");
  std::vector<int> counts(k, 0);
  for (int label : z) {
    if (label < 0 || label >= k) fail(Errc::invalid_argument, "block label out of range");
    ++counts[label];
  }
  for (int a = 0; a < k; ++a) {
    int want = (a == k - 1) ? h + r : h;
    if (counts[a] != want)
      fail(Errc::invalid_argument, "block " + std::to_string(a + 1) + " has size " + std::to_string(counts[a]) +
                                       ", expected " + std::to_string(want));
  }
}

Graphon combine_graphons(std::vector<Graphon> members, std::string label,
                         std::function<double(std::span<const double>)> fn) {
  if (members.empty()) fail(Errc::empty_subset, "combination needs at least one graphon");
  bool steps_shared = true;
  for (const auto& g : members) {
    if (!g.is_step() || g.edges().size() != members.front().edges().size() ||
        !std::equal(g.edges().begin(), g.edges().end(), members.front().edges().begin(),
                    [](double a, double b) { return std::abs(a - b) <= 1e-12; })) {
      steps_shared = false;
      break;
    }
  }
  if (steps_shared) {
    int k = members.front().blocks();
    std::vector<double> values(static_cast<std::size_t>(k) * k);
    std::vector<double> w(members.size());
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) {
        for (std::size_t l = 0; l < members.size(); ++l) w[l] = members[l].block_value(a, b);
        values[static_cast<std::size_t>(a) * k + b] = fn(w);
      }
    return Graphon::step(members.front().edges(), std::move(values));
  }
  return Graphon::analytic(std::move(label), {},
                           [members = std::move(members), fn = std::move(fn)](double x, double y) {
                             std::vector<double> w(members.size());
                             for (std::size_t l = 0; l < members.size(); ++l) w[l] = members[l](x, y);
                             return fn(w);
                           });
}

GraphonSystem GraphonSystem::independent(std::vector<Graphon> marginals) {
  int d = static_cast<int>(marginals.size());
  if (d < 1) fail(Errc::empty_subset, "system needs at least one layer");
  if (d > kMaxLayers)
    fail(Errc::invalid_argument, "layer count " + std::to_string(d) + " exceeds the supported maximum of " +
                                     std::to_string(kMaxLayers) + " (cells grow as 2^d)");
  std::vector<Graphon> by_mask(std::size_t{1} << d);
  for (unsigned mask = 1; mask < by_mask.size(); ++mask) {
    if (std::popcount(mask) == 1) {
      by_mask[mask] = marginals[std::countr_zero(mask)];
      continue;
    }
    std::vector<Graphon> members;
    for (int l = 0; l < d; ++l)
      if (mask >> l & 1u) members.push_back(marginals[l]);
    by_mask[mask] = combine_graphons(std::move(members), "independent_product", [](std::span<const double> w) {
      double p = 1.0;
      for (double v : w) p *= v;
      return p;
    });
  }
  auto sys = from_subsets(d, std::move(by_mask));
  sys.set_family("independent");
  return sys;
}

GraphonSystem GraphonSystem::from_subsets(int d, std::vector<Graphon> by_mask) {
  if (d < 1) fail(Errc::empty_subset, "system needs at least one layer");
  if (d > kMaxLayers)
    fail(Errc::invalid_argument, "layer count " + std::to_string(d) + " exceeds the supported maximum of " +
                                     std::to_string(kMaxLayers));
  if (by_mask.size() != (std::size_t{1} << d)) fail(Errc::dimension_mismatch, "subset vector must have 2^d entries");
  GraphonSystem sys;
  sys.d_ = d;
  sys.by_mask_ = std::move(by_mask);
  sys.step_shared_ = true;
  const std::vector<double>* edges = nullptr;
  for (unsigned mask = 1; mask < sys.by_mask_.size(); ++mask) {
    const Graphon& g = sys.by_mask_[mask];
    if (!g.is_step()) {
      sys.step_shared_ = false;
      break;
    }
    if (!edges) {
      edges = &g.edges();
    } else if (g.edges().size() != edges->size() ||
               !std::equal(edges->begin(), edges->end(), g.edges().begin(),
                           [](double a, double b) { return std::abs(a - b) <= 1e-12; })) {
      fail(Errc::invalid_argument, "step system members must share one boundary partition");
    }
  }
  return sys;
}

const Graphon& GraphonSystem::subset(unsigned mask) const {
  if (mask == 0 || mask >= by_mask_.size()) fail(Errc::empty_subset, "subset mask out of range");
  return by_mask_[mask];
}

const std::vector<double>& GraphonSystem::shared_edges() const {
  if (!step_shared_) fail(Errc::invalid_argument, "system is not in shared step form");
  return by_mask_[1].edges();
}

void GraphonSystem::subset_values_at(double x, double y, std::span<double> w) const {
  w[0] = 1.0;
  for (unsigned mask = 1; mask < by_mask_.size(); ++mask) w[mask] = by_mask_[mask](x, y);
}

void cells_from_subset_values(std::span<double> w, int d) {
  // Superset Moebius transform: p[b] = sum_{T >= b} (-1)^{|T\b|} W^(T).
  unsigned size = 1u << d;
  for (int l = 0; l < d; ++l)
    for (unsigned mask = 0; mask < size; ++mask)
      if (!(mask >> l & 1u)) w[mask] -= w[mask | (1u << l)];
}

std::vector<double> system_cells(const GraphonSystem& sys, double x, double y) {
  int d = sys.dim();
  std::vector<double> w(std::size_t{1} << d);
  sys.subset_values_at(x, y, w);
  cells_from_subset_values(w, d);
  for (double& c : w) {
    if (c < -kCellClampTol)
      fail(Errc::cell_negative,
           "cell probability " + std::to_string(c) + " at (" + std::to_string(x) + "," + std::to_string(y) +
               "): the supplied subset graphons are inconsistent");
    c = std::min(1.0, std::max(0.0, c));
  }
  return w;
}

GraphonSystem marginalize(const GraphonSystem& sys, unsigned keep_mask) {
  int d = sys.dim();
  unsigned full = (1u << d) - 1u;
  keep_mask &= full;
  if (keep_mask == 0) fail(Errc::empty_subset, "marginalize requires a nonempty layer subset");
  std::vector<int> kept;
  for (int l = 0; l < d; ++l)
    if (keep_mask >> l & 1u) kept.push_back(l);
  int dk = static_cast<int>(kept.size());
  std::vector<Graphon> by_mask(std::size_t{1} << dk);
  for (unsigned sub = 1; sub < by_mask.size(); ++sub) {
    unsigned orig = 0;
    for (int i = 0; i < dk; ++i)
      if (sub >> i & 1u) orig |= 1u << kept[i];
    by_mask[sub] = sys.subset(orig);
  }
  auto out = GraphonSystem::from_subsets(dk, std::move(by_mask));
  out.set_family(sys.family());
  return out;
}

namespace {

// Cell pattern name, layer 1 first: mask 0b01 over d=2 -> "10".
std::string pattern_name(unsigned b, int d) {
  std::string s(static_cast<std::size_t>(d), '0');
  for (int l = 0; l < d; ++l)
    if (b >> l & 1u) s[l] = '1';
  return s;
}

}  // namespace

std::vector<std::string> validate(const GraphonSystem& sys, int grid_m) {
  if (grid_m < 2) fail(Errc::invalid_argument, "validation grid must have m >= 2");
  std::vector<std::string> out;
  int d = sys.dim();
  unsigned size = 1u << d;
  std::vector<double> w(size), cells(size);
  auto note = [&](const std::string& s) {
    if (std::find(out.begin(), out.end(), s) == out.end() && out.size() < 64) out.push_back(s);
  };
  for (int i = 0; i < grid_m; ++i) {
    double x = (i + 0.5) / grid_m;
    for (int j = i; j < grid_m; ++j) {
      double y = (j + 0.5) / grid_m;
      sys.subset_values_at(x, y, w);
      for (unsigned mask = 1; mask < size; ++mask) {
        double v = w[mask];
        if (v < -1e-12 || v > 1.0 + 1e-12)
          note("W^(" + subset_name(mask, d) + ") value outside [0,1]");
        double sym = sys.subset(mask)(y, x);
        if (std::abs(v - sym) > 1e-9) note("W^(" + subset_name(mask, d) + ") not symmetric");
        // Monotone under subset inclusion: adding a layer cannot raise the
        // all-edges probability.
        for (int l = 0; l < d; ++l) {
          if (mask >> l & 1u) continue;
          if (w[mask | (1u << l)] > v + 1e-9)
            note("W^(" + subset_name(mask | (1u << l), d) + ") exceeds W^(" + subset_name(mask, d) + ")");
        }
      }
      std::copy(w.begin(), w.end(), cells.begin());
      cells_from_subset_values(cells, d);
      double sum = 0.0;
      for (unsigned b = 0; b < size; ++b) {
        if (cells[b] < -kCellClampTol) note("cell p" + pattern_name(b, d) + " negative");
        sum += cells[b];
      }
      if (std::abs(sum - 1.0) > kCellSumTol) note("cells do not sum to 1");
    }
  }
  return out;
}

}  // namespace gli
