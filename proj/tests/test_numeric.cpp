#include <doctest.h>

#include <cmath>
#include <vector>

#include "lis/numeric.hpp"

using namespace lis;

TEST_CASE("sinc") {
  CHECK(sinc(0.0) == 1.0);
  CHECK(std::abs(sinc(1.0)) < 1e-15);
  CHECK(std::abs(sinc(-3.0)) < 1e-15);
  CHECK(sinc(0.5) == doctest::Approx(2.0 / kPi).epsilon(1e-14));
  CHECK(sinc(1e-9) == doctest::Approx(1.0));
}

TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
  for (int n : {4, 8, 10, 16, 20, 30, 64}) {
    CAPTURE(n);
    const auto& r = quad::gauss_legendre(n);
    REQUIRE(r.nodes.size() == static_cast<std::size_t>(n));
    double wsum = 0.0;
    for (double w : r.weights) wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    const int deg = 2 * n - 1;
    const double got = quad::panel([&](double x) { return std::pow(x, deg - 1); }, 0.0, 1.0, r);
    CHECK(got == doctest::Approx(1.0 / deg).epsilon(1e-12));
  }
}

TEST_CASE("composite rule on an oscillatory integrand") {
  const auto& r = quad::gauss_legendre(16);
  const double got = quad::composite([](double x) { return std::cos(40.0 * x); }, 0.0, 2.0, 20, r);
  CHECK(got == doctest::Approx(std::sin(80.0) / 40.0).epsilon(1e-12));
}

TEST_CASE("Wynn epsilon accelerates an alternating series") {
  // log 2 = 1 - 1/2 + 1/3 - ...
  quad::WynnEpsilon w;
  double s = 0.0;
  for (int k = 1; k <= 14; ++k) {
    s += (k % 2 ? 1.0 : -1.0) / k;
    w.push(s);
  }
  CHECK(std::abs(s - std::log(2.0)) > 1e-2);
  CHECK(std::abs(w.estimate() - std::log(2.0)) < 1e-10);
  CHECK(w.size() == 14);
}

TEST_CASE("ols_slope recovers a line") {
  std::vector<double> x{0, 1, 2, 3, 4}, y;
  for (double v : x) y.push_back(3.5 * v - 2.0);
  CHECK(ols_slope(x, y) == doctest::Approx(3.5).epsilon(1e-14));
}
