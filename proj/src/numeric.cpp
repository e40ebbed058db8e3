#include "lis/numeric.hpp"

#include <map>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

namespace lis {
namespace quad {
namespace {

template <unsigned N>
Rule make_rule() {
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& xs = G::abscissa();
  const auto& ws = G::weights();
  Rule r;
  // Boost stores the non-negative half of a symmetric rule.
  for (std::size_t i = xs.size(); i-- > 0;) {
    if (xs[i] == 0.0) continue;
    r.nodes.push_back(-xs[i]);
    r.weights.push_back(ws[i]);
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    r.nodes.push_back(xs[i]);
    r.weights.push_back(ws[i]);
  }
  return r;
}

}  // namespace

const Rule& gauss_legendre(int n) {
  static const std::map<int, Rule> rules = {
      {4, make_rule<4>()},   {8, make_rule<8>()},   {10, make_rule<10>()},
      {16, make_rule<16>()}, {20, make_rule<20>()}, {30, make_rule<30>()},
      {64, make_rule<64>()}};
  const auto it = rules.find(n);
  if (it == rules.end()) throw std::invalid_argument("unsupported Gauss-Legendre order");
  return it->second;
}

void WynnEpsilon::push(double s) {
  std::vector<double> next(diag_.size() + 1);
  next[0] = s;
  estimate_ = s;
  std::size_t k = 1;
  for (; k < next.size(); ++k) {
    const double diff = next[k - 1] - diag_[k - 1];
    if (diff == 0.0 || !std::isfinite(diff)) break;
    next[k] = (k >= 2 ? diag_[k - 2] : 0.0) + 1.0 / diff;
    if (k % 2 == 0) estimate_ = next[k];
  }
  next.resize(k);
  diag_ = std::move(next);
  ++count_;
}

}  // namespace quad

double ols_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("ols_slope needs at least two paired points");
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw std::invalid_argument("ols_slope: x values are all equal");
  return sxy / sxx;
}

}  // namespace lis
