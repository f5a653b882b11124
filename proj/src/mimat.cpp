#include "gli/mimat.hpp"

#include <algorithm>
#include <cmath>

namespace gli {

namespace {

void check_marginal_agreement(const Graphon& a, const Graphon& b, double tol, int layer) {
  if (!std::isfinite(tol)) return;
  const int grid = 16;
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      double x = (i + 0.5) / grid, y = (j + 0.5) / grid;
      if (std::abs(a(x, y) - b(x, y)) > tol)
        fail(Errc::inconsistent_marginals,
             "marginal W^(" + std::to_string(layer + 1) + ") differs between pair systems");
    }
}

}  // namespace

MiMatrix mi_matrix(const std::vector<Graphon>& marginals,
                   const std::function<GraphonSystem(int, int)>& pair_source, const QuadratureSpec& q,
                   double marginal_tol) {
  int d = static_cast<int>(marginals.size());
  if (d < 2) fail(Errc::dimension_mismatch, "MI matrix needs at least two layers");
  MiMatrix mi;
  mi.d = d;
  mi.raw.assign(static_cast<std::size_t>(d) * d, 0.0);
  for (int i = 0; i < d; ++i) mi.raw[static_cast<std::size_t>(i) * d + i] = graphon_entropy(marginals[i], q);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      GraphonSystem pair = pair_source(i, j);
      if (pair.dim() != 2) fail(Errc::dimension_mismatch, "pair source must produce d=2 systems");
      check_marginal_agreement(pair.subset(0b01), marginals[i], marginal_tol, i);
      check_marginal_agreement(pair.subset(0b10), marginals[j], marginal_tol, j);
      double v = mutual_information(pair, q).value;
      mi.raw[static_cast<std::size_t>(i) * d + j] = v;
      mi.raw[static_cast<std::size_t>(j) * d + i] = v;
    }

  mi.normalized.assign(mi.raw.size(), 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (i == j) {
        mi.normalized[static_cast<std::size_t>(i) * d + j] = 1.0;
        continue;
      }
      double denom = std::min(mi.raw[static_cast<std::size_t>(i) * d + i],
                              mi.raw[static_cast<std::size_t>(j) * d + j]);
      if (denom <= 0.0)
        fail(Errc::degenerate_marginal, "normalized MI undefined: marginal entropy is zero");
      // MI <= min marginal entropy holds for exact inputs; estimated pair
      // systems can exceed it by estimation noise, which is clamped.
      mi.normalized[static_cast<std::size_t>(i) * d + j] =
          std::min(1.0, mi.raw[static_cast<std::size_t>(i) * d + j] / denom);
    }
  mi.density.assign(mi.raw.size(), 0.0);
  for (std::size_t idx = 0; idx < mi.density.size(); ++idx) mi.density[idx] = mi.normalized[idx] / d;
  mi.eigenvalues = sym_eigenvalues(mi.density, d);
  return mi;
}

MiMatrix mi_matrix(const GraphonSystem& sys, const QuadratureSpec& q) {
  int d = sys.dim();
  std::vector<Graphon> marginals;
  for (int l = 0; l < d; ++l) marginals.push_back(sys.subset(1u << l));
  return mi_matrix(
      marginals, [&sys](int i, int j) { return marginalize(sys, (1u << i) | (1u << j)); }, q);
}

std::vector<double> sym_eigenvalues(const std::vector<double>& m, int n) {
  if (static_cast<int>(m.size()) != n * n) fail(Errc::dimension_mismatch, "matrix size is not n*n");
  std::vector<double> a = m;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (std::abs(a[static_cast<std::size_t>(i) * n + j] - a[static_cast<std::size_t>(j) * n + i]) > 1e-10)
        fail(Errc::not_symmetric, "matrix is not symmetric");

  auto off_norm = [&]() {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        double v = a[static_cast<std::size_t>(i) * n + j];
        s += 2.0 * v * v;
      }
    return std::sqrt(s);
  };

  const int max_sweeps = 100;
  int sweep = 0;
  while (off_norm() > 1e-12 && sweep < max_sweeps) {
    for (int p = 0; p < n - 1; ++p)
      for (int qi = p + 1; qi < n; ++qi) {
        double apq = a[static_cast<std::size_t>(p) * n + qi];
        if (std::abs(apq) < 1e-300) continue;
        double app = a[static_cast<std::size_t>(p) * n + p];
        double aqq = a[static_cast<std::size_t>(qi) * n + qi];
        double theta = 0.5 * (aqq - app) / apq;
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int i = 0; i < n; ++i) {
          double aip = a[static_cast<std::size_t>(i) * n + p];
          double aiq = a[static_cast<std::size_t>(i) * n + qi];
          a[static_cast<std::size_t>(i) * n + p] = c * aip - s * aiq;
          a[static_cast<std::size_t>(i) * n + qi] = s * aip + c * aiq;
        }
        for (int j = 0; j < n; ++j) {
          double apj = a[static_cast<std::size_t>(p) * n + j];
          double aqj = a[static_cast<std::size_t>(qi) * n + j];
          a[static_cast<std::size_t>(p) * n + j] = c * apj - s * aqj;
          a[static_cast<std::size_t>(qi) * n + j] = s * apj + c * aqj;
        }
      }
    ++sweep;
  }
  if (off_norm() > 1e-12) fail(Errc::no_convergence, "Jacobi iteration did not converge", false);

  std::vector<double> lambda(n);
  for (int i = 0; i < n; ++i) lambda[i] = a[static_cast<std::size_t>(i) * n + i];
  std::sort(lambda.begin(), lambda.end(), std::greater<double>());
  return lambda;
}

VnEntropy von_neumann_entropy_of_spectrum(std::vector<double> lambda, int d) {
  if (d < 2) fail(Errc::dimension_mismatch, "von Neumann entropy needs d >= 2");
  for (double l : lambda)
    if (l < -1e-8)
      fail(Errc::not_psd, "density matrix has eigenvalue " + std::to_string(l) +
                              "; verify positive semi-definiteness before computing entropy");
  double sum = 0.0;
  for (double& l : lambda) {
    l = std::max(0.0, l);
    sum += l;
  }
  if (sum <= 0.0) fail(Errc::not_psd, "density spectrum sums to zero");
  for (double& l : lambda) l /= sum;
  VnEntropy out;
  for (double l : lambda)
    if (l > 0.0) out.value -= l * std::log(l);
  out.normalized = out.value / std::log(static_cast<double>(d));
  out.spectrum = std::move(lambda);
  return out;
}

VnEntropy von_neumann_entropy(const MiMatrix& mi) {
  std::vector<double> lambda = mi.eigenvalues ? *mi.eigenvalues : sym_eigenvalues(mi.density, mi.d);
  return von_neumann_entropy_of_spectrum(std::move(lambda), mi.d);
}

}  // namespace gli
