#include <doctest.h>

#include <cmath>

#include <boost/math/special_functions/bessel.hpp>

#include "lis/error.hpp"
#include "lis/numeric.hpp"
#include "lis/spectrum.hpp"

using namespace lis;

namespace {

// Phi(f) by contour deformation: a real segment [-X, X] plus two vertical
// rays on which the integrand decays exponentially.
cplx spectrum_oracle(double f, double lam) {
  const double X = 4.0;
  auto F = [&](cplx z) {
    const cplx q = 1.0 + z * z;
    return std::pow(q, -0.75) * std::exp(cplx(0, -2 * kPi) * (std::sqrt(q) / lam + f * z));
  };
  const auto& r = quad::gauss_legendre(64);
  cplx mid = quad::composite([&](double x) { return F(cplx(x, 0)); }, -X, X, 400, r);

  const double c_right = 1.0 / lam + f;  // growth rate along +x
  const double c_left = 1.0 / lam - f;   // along -x
  auto ray = [&](double x0, double dir, double rate) {
    // Integral from x0 to +-inf along the real axis, moved to the ray
    // x0 + s j y with s chosen so that the phase term decays.
    const double s = (dir * rate > 0) ? -1.0 : 1.0;
    const double y_max = 40.0 / (2 * kPi * std::abs(rate));
    const cplx leg = quad::composite([&](double y) { return F(cplx(x0, s * y)); }, 0.0, y_max, 400, r);
    return dir * cplx(0, s) * leg;
  };
  const cplx right = ray(X, 1.0, c_right);
  // For the left ray the asymptotic phase is (1/lam - f) |x|.
  const cplx left = -ray(-X, 1.0, -c_left);
  return mid + right + left;
}

}  // namespace

TEST_CASE("numeric spectrum agrees with the contour-deformation oracle") {
  for (double lam : {0.5, 1.0}) {
    for (double f : {0.0, 0.3, -0.7, 1.4, 2.6 / lam, -2.6 / lam}) {
      CAPTURE(lam);
      CAPTURE(f);
      const cplx ref = spectrum_oracle(f, lam);
      const cplx got = spectrum_numeric(f, lam);
      CHECK(std::abs(got - ref) < 2e-4 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST_CASE("spectrum is even in magnitude") {
  for (double f : {0.2, 0.9, 1.7}) {
    CHECK(std::abs(spectrum_numeric(f, 0.8)) ==
          doctest::Approx(std::abs(spectrum_numeric(-f, 0.8))).epsilon(1e-4));
  }
}

TEST_CASE("Bessel approximation of the evanescent tail") {
  const double lam = 0.5;
  for (double f : {2.5, 3.0, 4.0}) {
    const double k = 2 * kPi * std::sqrt(f * f - 1 / (lam * lam));
    CHECK(channel_spectrum(f, lam, SpectrumMode::BesselApprox) ==
          doctest::Approx(2.0 * boost::math::cyl_bessel_k(0, k)).epsilon(1e-12));
    // Both decay fast outside the disc; the approximation tracks the exact tail.
    const double exact = channel_spectrum(f, lam, SpectrumMode::Numeric);
    CHECK(exact < 0.05);
  }
}

TEST_CASE("brick-wall power spectrum") {
  CHECK(channel_spectrum(0.5, 0.5, SpectrumMode::RectPsd) == doctest::Approx(0.5));
  CHECK(channel_spectrum(2.5, 0.5, SpectrumMode::RectPsd) == 0.0);
}

TEST_CASE("spectral capacities") {
  for (double lam : {0.1, 0.5, 1.0, 2.0}) {
    CHECK(spectral_capacity(lam, SpectralCapacityMode::Sinc) ==
          doctest::Approx(2.0 / lam * std::log1p(lam)).epsilon(1e-12));
  }
  // Numeric and brick-wall values approach each other as lambda shrinks.
  const double gap_small = std::abs(spectral_capacity(0.1, SpectralCapacityMode::Numeric) /
                                        spectral_capacity(0.1, SpectralCapacityMode::Sinc) - 1);
  const double gap_large = std::abs(spectral_capacity(2.0, SpectralCapacityMode::Numeric) /
                                        spectral_capacity(2.0, SpectralCapacityMode::Sinc) - 1);
  CHECK(gap_small < gap_large);
  CHECK_THROWS_AS(spectral_capacity(-1.0, SpectralCapacityMode::Numeric), DomainError);
}

TEST_CASE("spectrum falls by 20 dB just outside the disc") {
  for (double lam : {0.25, 0.5, 1.0}) {
    CAPTURE(lam);
    const double in_band = channel_spectrum(0.0, lam, SpectrumMode::Numeric);
    double outside = 0.0;
    for (double f = 1.5 / lam; f >= 1.0 / lam; f -= 0.05 / lam) {
      outside = channel_spectrum(f, lam, SpectrumMode::Numeric);
      if (outside <= 0.1 * in_band) break;
    }
    CHECK(outside <= 0.1 * in_band);
    CHECK(channel_spectrum(1.5 / lam, lam, SpectrumMode::Numeric) <= 0.1 * in_band);
  }
}
