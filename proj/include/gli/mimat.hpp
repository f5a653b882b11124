#pragma once

// Pairwise graphon MI matrix over d layers, its normalizations, and the von
// Neumann entropy of the induced density matrix.

#include <functional>
#include <optional>
#include <vector>

#include "gli/infom.hpp"

namespace gli {

struct MiMatrix {
  int d = 0;
  std::vector<double> raw;         // d*d, diagonal = marginal graphon entropies
  std::vector<double> normalized;  // raw / min marginal entropy, diagonal 1
  std::vector<double> density;     // normalized / d, unit trace
  std::optional<std::vector<double>> eigenvalues;  // descending, of density

  double at(const std::vector<double>& m, int i, int j) const { return m[static_cast<std::size_t>(i) * d + j]; }
};

// Assembles the matrix from marginals (diagonal) and a source of d=2 systems
// for each pair i<j (0-based). Marginals appearing inside pair systems must
// agree with the supplied marginals within marginal_tol on a test grid;
// pass infinity to skip (pairwise fits have pair-specific assignments).
MiMatrix mi_matrix(const std::vector<Graphon>& marginals,
                   const std::function<GraphonSystem(int, int)>& pair_source, const QuadratureSpec& q = {},
                   double marginal_tol = 1e-9);

// Pairs obtained by marginalizing one joint system.
MiMatrix mi_matrix(const GraphonSystem& sys, const QuadratureSpec& q = {});

// Full spectrum of a symmetric matrix via cyclic Jacobi rotations,
// descending. Off-diagonal Frobenius norm is driven below 1e-12.
std::vector<double> sym_eigenvalues(const std::vector<double>& m, int n);

struct VnEntropy {
  double value = 0.0;       // -sum lambda log lambda
  double normalized = 0.0;  // value / log d
  std::vector<double> spectrum;
};

// Von Neumann entropy of the density matrix. Eigenvalues below -1e-8 raise
// NotPSD; negative dust is clamped and the spectrum renormalized to sum 1.
VnEntropy von_neumann_entropy(const MiMatrix& mi);
VnEntropy von_neumann_entropy_of_spectrum(std::vector<double> lambda, int d);

}  // namespace gli
