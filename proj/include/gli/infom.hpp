#pragma once

// Graphon information-theoretic measures. Analytic systems are integrated by
// midpoint quadrature on the unit square; shared-partition step systems are
// integrated exactly by area-weighted block sums.
//
// All measures are algebraic combinations of subset joint entropies, so a
// single integration pass (entropy_profile) feeds every measure; identities
// such as o_information == interaction_information at d=3 then hold to
// floating-point exactness.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gli/core.hpp"

namespace gli {

struct QuadratureSpec {
  int m = 512;  // midpoint grid resolution per axis
};

struct MeasureReport {
  std::string name;
  double value = 0.0;
  std::optional<double> normalized;
  std::optional<std::pair<double, double>> bounds;  // (lo, hi), d=3 interaction information
  bool clamped = false;  // true when quadrature dust below 0 was floored
};

// Joint graphon entropy H(W_S) for every nonempty layer subset S.
struct EntropyProfile {
  int d = 0;
  std::vector<double> H;  // indexed by subset mask; H[0] = 0

  double at(unsigned mask) const { return H[mask]; }
  double single(int layer) const { return H[1u << layer]; }
  double full() const { return H[(1u << d) - 1u]; }
};

// Nonnegative measures may come out a hair negative under quadrature; values
// in (-eps_floor, 0) are reported as 0 with the clamped flag, anything below
// -eps_hard signals an invalid system.
inline constexpr double kEpsFloor = 1e-9;
inline constexpr double kEpsHard = 1e-6;

double binary_entropy(double x);  // natural log; h(0) = h(1) = 0

EntropyProfile entropy_profile(const GraphonSystem& sys, const QuadratureSpec& q = {});

double graphon_entropy(const Graphon& w, const QuadratureSpec& q = {});
double joint_graphon_entropy(const GraphonSystem& sys, const QuadratureSpec& q = {});

// d=2: I = H(W1) + H(W2) - H(W_{1,2}); normalized by min marginal entropy.
MeasureReport mutual_information(const EntropyProfile& p, bool require_normalized = false);
MeasureReport mutual_information(const GraphonSystem& sys, const QuadratureSpec& q = {},
                                 bool require_normalized = false);

// Variation-of-information distance D = H(W_{1,2}) - I(W1;W2).
double graphon_distance(const EntropyProfile& p);
double graphon_distance(const GraphonSystem& sys, const QuadratureSpec& q = {});

// Alternating-sign sum of subset joint entropies; positive = redundancy,
// negative = synergy. Bounds populated for d=3.
MeasureReport interaction_information(const EntropyProfile& p);
MeasureReport interaction_information(const GraphonSystem& sys, const QuadratureSpec& q = {});

// I(Wa;Wb|Wc) for d=3, cond_layer in {1,2,3} selecting c.
double conditional_mutual_information(const EntropyProfile& p, int cond_layer);
double conditional_mutual_information(const GraphonSystem& sys, int cond_layer, const QuadratureSpec& q = {});

// (lo, hi): -min conditional MI and min pairwise MI (d=3).
std::pair<double, double> interaction_bounds(const EntropyProfile& p);
std::pair<double, double> interaction_bounds(const GraphonSystem& sys, const QuadratureSpec& q = {});

// TC = sum_i H(W_i) - H(joint); normalized by sum_i H(W_i) - max_i H(W_i).
MeasureReport total_correlation(const EntropyProfile& p, bool require_normalized = false);
MeasureReport total_correlation(const GraphonSystem& sys, const QuadratureSpec& q = {},
                                bool require_normalized = false);

// TC of the remaining layers given cond_layer:
//   sum_{i != c} H(W_{i,c}) - H(joint) - (d-2) H(W_c),
// normalized by min_{i != c} (H(W_{i,c}) - H(W_c)).
MeasureReport conditional_total_correlation(const EntropyProfile& p, int cond_layer);
MeasureReport conditional_total_correlation(const GraphonSystem& sys, int cond_layer,
                                            const QuadratureSpec& q = {});

// DTC = sum_i H(leave-one-out) - (d-1) H(joint); normalized by H(joint).
MeasureReport dual_total_correlation(const EntropyProfile& p);
MeasureReport dual_total_correlation(const GraphonSystem& sys, const QuadratureSpec& q = {});

// O-information = TC - DTC; equals interaction information at d=3.
MeasureReport o_information(const EntropyProfile& p);
MeasureReport o_information(const GraphonSystem& sys, const QuadratureSpec& q = {});

// Finite-n proxy of the joint entropy: average per-pair cell entropy at
// sampled latents, normalized by C(n,2), averaged over trials. Converges to
// joint_graphon_entropy as n grows.
double monte_carlo_joint_entropy(const GraphonSystem& sys, int n, int trials, std::uint64_t seed);

// Convenience dispatch used by the CLI: names are entropy, mi, distance, ii,
// cmi, tc, ctc, dtc, oinfo. cond_layer applies to cmi/ctc.
MeasureReport compute_measure(const std::string& name, const GraphonSystem& sys, const QuadratureSpec& q,
                              int cond_layer = 0);

}  // namespace gli
