#pragma once

// Small numerical building blocks shared by the modules: sinc, fixed-order
// Gauss-Legendre panels, Wynn's epsilon accelerator, and a least-squares
// slope fit.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "lis/types.hpp"

namespace lis {

/// Normalized sinc, sin(pi x) / (pi x).
inline double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - (kPi * x) * (kPi * x) / 6.0;
  const double px = kPi * x;
  return std::sin(px) / px;
}

namespace quad {

/// Gauss-Legendre rule on [-1, 1], nodes in ascending order.
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached rule for n points. Supported n: 4, 8, 10, 16, 20, 30, 64.
const Rule& gauss_legendre(int n);

/// Integrates f over [a, b] with one application of `rule`.
template <class F>
auto panel(F&& f, double a, double b, const Rule& rule) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  decltype(f(mid)) acc{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return acc * half;
}

/// Integrates f over [a, b] split into `panels` equal panels.
template <class F>
auto composite(F&& f, double a, double b, int panels, const Rule& rule) {
  const double h = (b - a) / panels;
  decltype(f(a)) acc{};
  for (int p = 0; p < panels; ++p) acc += panel(f, a + p * h, a + (p + 1) * h, rule);
  return acc;
}

/// Wynn's epsilon algorithm on a stream of partial sums. Keeps the full
/// table; sequences here are short (tens of terms).
class WynnEpsilon {
 public:
  void push(double partial_sum);
  /// Best current estimate of the limit (last even column entry).
  double estimate() const { return estimate_; }
  std::size_t size() const { return count_; }

 private:
  std::vector<double> diag_;  // last anti-diagonal of the epsilon table
  std::size_t count_ = 0;
  double estimate_ = 0.0;
};

}  // namespace quad

/// Ordinary least-squares slope of y against x.
double ols_slope(std::span<const double> x, std::span<const double> y);

}  // namespace lis
