#pragma once

// Brute-force reference implementations used to pin expected values. These
// deliberately avoid the library's Moebius/profile machinery: entropies are
// evaluated from the explicit cell formulas of the bivariate and trivariate
// Bernoulli models with plain accumulation loops.

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

using Fn2 = std::function<double(double, double)>;

inline double plogp(double p) { return p > 0.0 ? -p * std::log(p) : 0.0; }

inline double hbin(double t) { return plogp(t) + plogp(1.0 - t); }

// Midpoint quadrature of an arbitrary integrand over the unit square.
inline double integrate(const Fn2& f, int m) {
  double sum = 0.0;
  for (int i = 0; i < m; ++i) {
    double x = (i + 0.5) / m;
    for (int j = 0; j < m; ++j) sum += f(x, (j + 0.5) / m);
  }
  return sum / (static_cast<double>(m) * m);
}

inline double graphon_entropy(const Fn2& w, int m) {
  return integrate([&](double x, double y) { return hbin(w(x, y)); }, m);
}

// Bivariate joint entropy from the four cells (w12, w1-w12, w2-w12, 1-w1-w2+w12).
inline double joint_entropy2(const Fn2& w1, const Fn2& w2, const Fn2& w12, int m) {
  return integrate(
      [&](double x, double y) {
        double a = w1(x, y), b = w2(x, y), ab = w12(x, y);
        return plogp(ab) + plogp(a - ab) + plogp(b - ab) + plogp(1.0 - a - b + ab);
      },
      m);
}

// Trivariate joint entropy from the eight closed-form cells.
struct Triple {
  Fn2 w1, w2, w3, w12, w13, w23, w123;
};

inline double joint_entropy3(const Triple& t, int m) {
  return integrate(
      [&](double x, double y) {
        double a = t.w1(x, y), b = t.w2(x, y), c = t.w3(x, y);
        double ab = t.w12(x, y), ac = t.w13(x, y), bc = t.w23(x, y), abc = t.w123(x, y);
        double p111 = abc;
        double p110 = ab - abc;
        double p101 = ac - abc;
        double p011 = bc - abc;
        double p100 = a - ab - ac + abc;
        double p010 = b - ab - bc + abc;
        double p001 = c - ac - bc + abc;
        double p000 = 1.0 - a - b - c + ab + ac + bc - abc;
        return plogp(p111) + plogp(p110) + plogp(p101) + plogp(p011) + plogp(p100) + plogp(p010) +
               plogp(p001) + plogp(p000);
      },
      m);
}

// Independent series for the entropy of W(x,y) = xy:
//   1/4 + sum_{k>=1} 1/(k (k+2)^2).
inline double product_entropy_series(int terms = 200000) {
  double tail = 0.0;
  for (int k = terms; k >= 1; --k) {
    double kk = static_cast<double>(k);
    tail += 1.0 / (kk * (kk + 2.0) * (kk + 2.0));
  }
  return 0.25 + tail;
}

// Frozen reference values. Sources: the series above, and m=4096 midpoint
// evaluations of the closed-form systems via the oracles in this header.
namespace frozen {

// entropy of xy (series limit 5/4 - pi^2/12)
inline constexpr double entropy_product = 0.4275329666;

// entropy of 0.3(x+y)
inline constexpr double entropy_affine03 = 0.5727544446;

// chain system (xy, 0.8xy, 0.5xy) with W12=W2, W13=W23=W123=W3, m=4096
inline constexpr double chain_H1 = 0.4275329967;
inline constexpr double chain_H2 = 0.4015843951;
inline constexpr double chain_H3 = 0.3211858970;
inline constexpr double chain_H12 = 0.5526336025;
inline constexpr double chain_H13 = 0.6008197918;
inline constexpr double chain_H23 = 0.5338970427;
inline constexpr double chain_H123 = 0.6849462502;
inline constexpr double chain_TC = 0.4653570385;
inline constexpr double chain_II = 0.1478991018;
inline constexpr double chain_DTC = 0.3174579367;
inline constexpr double chain_CMI_cond1 = 0.0409741475;
inline constexpr double chain_CMI_cond2 = 0.0;
inline constexpr double chain_CMI_cond3 = 0.1285846874;
inline constexpr double chain_MI12 = 0.2764837892;
inline constexpr double chain_MI13 = 0.1478991018;
inline constexpr double chain_MI23 = 0.1888732493;

// input-output pair: W1 = xy, W2 = W12 = [xy + min(x,y)(x+y)/2]/2 (the
// capped ratio link symmetrized), m=4096
inline constexpr double io_child_density = 11.0 / 48.0;  // 0.2291666667
inline constexpr double io_H2 = 0.4074369976;
inline constexpr double io_Hjoint = 0.4932352792;
inline constexpr double io_MI = 0.3417347150;
inline constexpr double io_distance = 0.1515005642;

// percolated product chain (xy, 0.95, 0.90 shared survival), m=4096
inline constexpr double case1_H2 = 0.4231479348;
inline constexpr double case1_H3 = 0.4173249434;
inline constexpr double case1_MI12 = 0.373519;
inline constexpr double case1_MI13 = 0.336054;
inline constexpr double case1_MI23 = 0.368354;

}  // namespace frozen

// The effective child marginal of the capped ratio link on W1 = xy.
inline double io_child(double x, double y) {
  return 0.5 * (x * y + std::min(x, y) * (x + y) / 2.0);
}

}  // namespace oracle
