#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "lis/capacity.hpp"
#include "lis/em_channel.hpp"
#include "lis/error.hpp"
#include "lis/numeric.hpp"
#include "lis/scenario.hpp"

using namespace lis;

namespace {

// Uniform line Gram matrix zeta P sinc(2 (k - l) dx / lambda).
RMatrix line_gram(int k, double theta, double zeta, double p) {
  RMatrix g(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) g(i, j) = zeta * p * sinc((i - j) / theta);
  return g;
}

}  // namespace

TEST_CASE("folding parameters") {
  auto f = FoldingParams::from_theta(0.8);
  CHECK(f.beta == 1);
  CHECK(f.alpha == doctest::Approx(0.25));
  f = FoldingParams::from_theta(1.0 / 3.0);
  CHECK(f.beta == 3);
  CHECK(f.alpha == 0.0);
  f = FoldingParams::from_spacing(0.5, 1.0);
  CHECK(f.theta == doctest::Approx(0.25));
  CHECK_THROWS_AS(FoldingParams::from_theta(0.0), DomainError);
}

TEST_CASE("log-det capacity") {
  CMatrix g = CMatrix::Zero(2, 2);
  g(0, 0) = 3.0;
  g(1, 1) = 1.0;
  CHECK(logdet_sum(g, 1.0) == doctest::Approx(std::log(4.0) + std::log(2.0)));
  CHECK(capacity_logdet(g, 1.0) == doctest::Approx((std::log(4.0) + std::log(2.0)) / 2));
  g(0, 1) = g(1, 0) = 5.0;
  CHECK_THROWS_AS(capacity_logdet(g, 1.0), NotPsdError);
  CMatrix nonsq(2, 3);
  CHECK_THROWS(logdet_sum(nonsq, 1.0));
}

TEST_CASE("matched-filter rates from a Gram matrix") {
  CMatrix g(2, 2);
  g << 2.0, cplx(0.0, 1.0), cplx(0.0, -1.0), 1.0;
  const auto r = capacity_mf_from_gram(g, 0.5);
  CHECK(r[0] == doctest::Approx(std::log1p(2.0 / (0.5 + 0.5))));
  CHECK(r[1] == doctest::Approx(std::log1p(1.0 / (0.5 + 1.0))));
}

TEST_CASE("line closed form matches the Toeplitz log-det limit") {
  const double zeta = 0.5, p = 2.0, n0 = 1.0;
  for (double theta : {0.4, 0.8, 1.3}) {
    CAPTURE(theta);
    const int k = 1200;
    const auto g = line_gram(k, theta, zeta, p);
    Eigen::LLT<RMatrix> llt(g + n0 * RMatrix::Identity(k, k));
    double ld = 0.0;
    for (int i = 0; i < k; ++i) ld += 2 * std::log(llt.matrixL()(i, i));
    const double lam = 1.0, dx = lam / (2 * theta);
    const double closed = capacity_1d_optimal(theta, zeta, p / dx, lam, n0);
    CHECK(ld / k - std::log(n0) == doctest::Approx(closed).epsilon(5e-3));
  }
}

TEST_CASE("folded spectrum oracle agrees with the closed form") {
  const double zeta = 0.1, lam = 0.5, p_hat = 10.0, n0 = 1.0;
  for (double theta : {0.3, 0.55, 1.0, 2.4}) {
    const double p = p_hat * lam / (2 * theta);
    CHECK(folded_spectrum_capacity(theta, zeta, p, n0) ==
          doctest::Approx(capacity_1d_optimal(theta, zeta, p_hat, lam, n0)).epsilon(1e-4));
  }
}

TEST_CASE("integer 1/theta: optimal equals matched filter equals single-user") {
  const double zeta = 0.1, p_hat = 10.0, lam = 0.5, n0 = 1.0;
  for (int m : {1, 2, 3}) {
    const double theta = 1.0 / m;
    const double p = p_hat * lam / (2 * theta);
    const double su = std::log1p(zeta * p / n0);
    CHECK(std::abs(capacity_1d_optimal(theta, zeta, p_hat, lam, n0) - su) < 1e-12);
    CHECK(std::abs(capacity_1d_mf(theta, zeta, p, n0) - su) < 1e-12);
    CHECK(mf_interference_1d(theta, zeta, p) == 0.0);
  }
}

TEST_CASE("matched-filter interference equals the sinc-squared lattice sum") {
  const double zeta = 0.3, p = 2.0;
  for (double theta : {0.8, 0.45, 1.7}) {
    CAPTURE(theta);
    const double a = 1.0 / theta;
    const int n = 200000;
    double s = 0.0;
    for (int m = 1; m <= n; ++m) s += 2 * std::pow(sinc(a * m), 2);
    s += 1.0 / (kPi * kPi * a * a * n);  // tail, sin^2 averaged to 1/2
    CHECK(mf_interference_1d(theta, zeta, p) == doctest::Approx(zeta * p * s).epsilon(1e-5));
  }
  CHECK(mf_interference_1d(0.8, 1.0, 1.0) == doctest::Approx(0.12).epsilon(1e-12));
}

TEST_CASE("matched filter never beats the optimal receiver on the line") {
  for (double theta = 0.2; theta < 3.0; theta += 0.13) {
    const double lam = 0.5, p_hat = 40.0, zeta = 0.5, n0 = 0.05;
    const double p = p_hat * lam / (2 * theta);
    CHECK(capacity_1d_mf(theta, zeta, p, n0) <= capacity_1d_optimal(theta, zeta, p_hat, lam, n0) + 1e-12);
  }
}

TEST_CASE("plane closed form matches radial integration of the power spectrum") {
  for (double lam : {0.25, 0.5, 1.0}) {
    const double p_hat = 7.0, n0 = 0.5;
    // s = sin(t) / lambda removes the edge singularity of the spectrum.
    auto f = [&](double t) {
      const double s = std::sin(t) / lam;
      const double g = (lam / (4 * kPi)) * lam / std::cos(t);
      return 2 * kPi * s * std::log1p(p_hat * g / n0) * std::cos(t) / lam;
    };
    const double ref = quad::composite(f, 0.0, kPi / 2, 400, quad::gauss_legendre(30));
    CHECK(capacity_2d_closed(lam, p_hat, n0) == doctest::Approx(ref).epsilon(1e-6));
    CHECK(psd_2d(0.0, lam) == doctest::Approx(lam * lam / (4 * kPi)));
    CHECK(psd_2d(2.0 / lam, lam) == 0.0);
  }
}

TEST_CASE("low-SNR limits") {
  const double lam = 1e-3;
  const double c1 = normalized_capacity(capacity_1d_optimal(1.0, 0.1, 10.0, lam, 1.0), {lam / 2});
  CHECK(c1 == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(capacity_2d_closed(lam, 10.0, 1.0) == doctest::Approx(5.0).epsilon(5e-3));
}

TEST_CASE("pre-log estimates") {
  CHECK(signal_dims_1d(1.5, 0.5) == doctest::Approx(4.0));
  CHECK(signal_dims_1d(0.5, 0.5) == doctest::Approx(2.0));
  CHECK(signal_dims_2d(0.5) == doctest::Approx(4 * kPi));
  for (double lam : {0.4, 0.5}) {
    std::vector<double> snr;
    for (int k = 3; k <= 6; ++k) snr.push_back(4 * kPi / (lam * lam) * std::pow(10.0, k));
    const double s = signal_dims_estimate([&](double x) { return capacity_2d_closed(lam, x, 1.0); }, snr);
    CHECK(s == doctest::Approx(signal_dims_2d(lam)).epsilon(2e-3));
  }
  std::vector<double> narrow{10.0, 20.0};
  CHECK_THROWS_AS(signal_dims_estimate([](double) { return 0.0; }, narrow), DomainError);
}

TEST_CASE("spacing spec") {
  SpacingSpec s{0.5, 0.25, Dimension::Two};
  CHECK(s.measure() == doctest::Approx(0.125));
  CHECK(normalized_capacity(1.0, s) == doctest::Approx(8.0));
  SpacingSpec bad{-1.0};
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("optimal dominates the matched filter on random Gram matrices") {
  std::mt19937_64 g(12);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int k = 2 + trial % 6;
    CMatrix a(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) a(i, j) = cplx(n(g), n(g));
    const CMatrix gram = a * a.adjoint();
    const auto mf = capacity_mf_from_gram(gram, 0.5);
    double mean = 0.0;
    for (double r : mf) mean += r / k;
    CHECK(capacity_logdet(gram, 0.5) > mean);
  }
  CMatrix diag = CMatrix::Zero(3, 3);
  diag.diagonal() << 1.0, 2.0, 3.0;
  const auto mf = capacity_mf_from_gram(diag, 1.0);
  CHECK(capacity_logdet(diag, 1.0) == doctest::Approx((mf[0] + mf[1] + mf[2]) / 3).epsilon(1e-14));
}

TEST_CASE("line closed form is monotone in power and noise and continuous at integer 1/theta") {
  const double lam = 0.5, zeta = 0.2;
  for (double theta : {0.3, 0.8, 1.7}) {
    double prev = 0.0;
    for (double p : {1.0, 2.0, 5.0, 20.0}) {
      const double c = capacity_1d_optimal(theta, zeta, p, lam, 1.0);
      CHECK(c >= prev);
      prev = c;
    }
    prev = kInf;
    for (double n0 : {0.1, 0.5, 1.0, 4.0}) {
      const double c = capacity_1d_optimal(theta, zeta, 10.0, lam, n0);
      CHECK(c <= prev);
      prev = c;
    }
  }
  for (int m : {1, 2, 3}) {
    const double at = capacity_1d_optimal(1.0 / m, zeta, 10.0, lam, 1.0);
    for (double eps : {1e-7, -1e-7}) {
      const double theta = 1.0 / (m + eps);
      CHECK(capacity_1d_optimal(theta, zeta, 10.0, lam, 1.0) == doctest::Approx(at).epsilon(1e-6));
    }
  }
}

TEST_CASE("low-SNR limits are approached monotonically from below") {
  const double lambdas[] = {1.0, 0.5, 0.1, 0.01, 0.001};
  double prev1 = 0.0, prev2 = 0.0;
  for (double lam : lambdas) {
    const double c1 = capacity_1d_optimal(1.0, 0.1, 10.0, lam, 1.0) / (lam / 2);
    const double c2 = capacity_2d_closed(lam, 10.0, 1.0);
    CHECK(c1 > prev1);
    CHECK(c1 < 1.0);
    CHECK(c2 > prev2);
    CHECK(c2 < 5.0);
    prev1 = c1;
    prev2 = c2;
  }
}

TEST_CASE("room terminals projected to a plane have the plane pre-log") {
  // Same window and terminal count; the finite window adds an edge term to
  // both estimates, so they are compared with each other.
  const double lam = 0.5, side = 4.0;
  const int k = 500;
  auto estimate = [&](Deployment d) {
    std::vector<double> snr;
    for (int e = 6; e <= 9; ++e) snr.push_back(std::pow(10.0, e));
    const double area = side * side;
    return signal_dims_estimate(
        [&](double s) {
          for (auto& p : d.powers) p = s * area / k;
          return logdet_sum(gram_matrix(d, SurfaceSpec::infinite_plane(), GramMethod::Sinc2d).g, 1.0) / area;
        },
        snr);
  };
  Scenario room;
  room.kind = ScenarioKind::Room;
  room.length = room.width = room.height = side;
  room.wavelength = lam;
  room.density = k / (side * side * side);
  room.method = GramMethod::Sinc2d;
  auto dr = deploy(room, 0).deployment;
  REQUIRE(dr.size() == static_cast<std::size_t>(k));
  for (auto& t : dr.terminals) t.z = 2.0;

  Scenario plane = room;
  plane.kind = ScenarioKind::Plane;
  plane.density = k / (side * side);
  const auto dp = deploy(plane, 1).deployment;

  const double e3 = estimate(dr), e2 = estimate(dp);
  CHECK(e3 == doctest::Approx(e2).epsilon(0.05));
  CHECK(e2 > signal_dims_2d(lam));
}
