#include "lis/spectrum.hpp"

#include <cmath>

#include <boost/math/tools/roots.hpp>

#include "lis/error.hpp"
#include "lis/numeric.hpp"

namespace lis {

namespace {

// One-sided integral of (1 + x^2)^(-3/4) exp(-2 pi j psi(x)) over x >= 0 with
//   psi(x) = sqrt(1 + x^2) / lambda + s x
//          = 1 / (lambda (sqrt(1 + x^2) + x)) + c x,   c = 1/lambda + s.
// The second form keeps full precision when c is close to zero.
class OneSided {
 public:
  OneSided(double s, double wavelength, const SpectrumOptions& opt)
      : s_(s), lam_(wavelength), c_(1.0 / wavelength + s), opt_(opt) {}

  cplx integrate() const {
    double x0 = 0.0;
    cplx head{0.0, 0.0};
    if (s_ < 0.0 && c_ > 0.0) {
      // Phase decreases until the stationary point, then increases.
      const double one_minus = lam_ * c_;  // 1 - lambda |s|
      const double xs = lam_ * (-s_) / std::sqrt(one_minus * (1.0 + lam_ * (-s_)));
      head = bounded(0.0, xs);
      x0 = xs;
      return head + unbounded(x0, +1.0);
    }
    if (s_ < 0.0) return unbounded(0.0, -1.0);
    return unbounded(0.0, +1.0);
  }

 private:
  double psi(double x) const {
    return 1.0 / (lam_ * (std::sqrt(1.0 + x * x) + x)) + c_ * x;
  }

  cplx integrand(double x) const {
    const double p = psi(x);
    const double frac = p - std::nearbyint(p);
    return std::polar(std::pow(1.0 + x * x, -0.75), -2.0 * kPi * frac);
  }

  // Gauss-Legendre on [a, b], split so that no piece is longer than the
  // larger of 1 and its left end (the amplitude varies on that scale).
  cplx piece(double a, double b) const {
    if (b - a > std::max(1.0, a)) {
      const double m = 0.5 * (a + b);
      return piece(a, m) + piece(m, b);
    }
    return quad::panel([this](double x) { return integrand(x); }, a, b,
                       quad::gauss_legendre(16));
  }

  // Solves psi(x) = v for x in [lo, hi] (hi may be infinite) on a monotone
  // stretch of psi with direction dir.
  double solve(double v, double lo, double hi, double dir) const {
    auto g = [&](double x) { return dir * (psi(x) - v); };
    double b = std::isinf(hi) ? std::max(2.0 * lo, lo + 1.0) : hi;
    if (std::isinf(hi)) {
      while (g(b) < 0.0) {
        b *= 2.0;
        if (b > 1e300) throw ConvergenceError("spectrum: phase level not bracketed");
      }
    }
    boost::uintmax_t iters = 200;
    const auto r = boost::math::tools::toms748_solve(
        g, lo, b, g(lo), g(b), boost::math::tools::eps_tolerance<double>(50), iters);
    return 0.5 * (r.first + r.second);
  }

  // Sum over the finite monotone stretch [a, b] where psi decreases.
  cplx bounded(double a, double b) const {
    cplx sum{0.0, 0.0};
    const double end_level = psi(b);
    double level = psi(a);
    double x = a;
    while (true) {
      level -= 0.5;
      if (level <= end_level) break;
      const double next = solve(level, x, b, -1.0);
      sum += piece(x, next);
      x = next;
    }
    return sum + piece(x, b);
  }

  cplx unbounded(double a, double dir) const {
    quad::WynnEpsilon re, im;
    double level = psi(a);
    double x = a;
    cplx partial{0.0, 0.0};
    double prev_re = 0.0, prev_im = 0.0;
    int agree = 0;
    for (int n = 0; n < opt_.max_half_periods; ++n) {
      level += 0.5 * dir;
      const double next = solve(level, x, kInf, dir);
      partial += piece(x, next);
      x = next;
      re.push(partial.real());
      im.push(partial.imag());
      const double er = re.estimate();
      const double ei = im.estimate();
      if (n >= 6 && std::abs(er - prev_re) < opt_.tolerance &&
          std::abs(ei - prev_im) < opt_.tolerance) {
        if (++agree >= 2) return {er, ei};
      } else {
        agree = 0;
      }
      prev_re = er;
      prev_im = ei;
    }
    throw ConvergenceError("spectrum: accelerated partial sums did not settle");
  }

  double s_, lam_, c_;
  const SpectrumOptions& opt_;
};

}  // namespace

cplx spectrum_numeric(double f, double wavelength, const SpectrumOptions& opt) {
  if (!(wavelength > 0.0)) throw DomainError("wavelength must be positive");
  if (!(opt.tolerance > 0.0)) throw DomainError("spectrum tolerance must be positive");
  f = std::abs(f);
  // At the band edge exactly the phase flattens out; nudge inside.
  const double edge = 1.0 / wavelength;
  if (std::abs(f - edge) < 1e-12 * edge) f = edge * (1.0 - 1e-12);
  // 2 cos(2 pi f x) = exp(2 pi j f x) + exp(-2 pi j f x).
  return OneSided(f, wavelength, opt).integrate() + OneSided(-f, wavelength, opt).integrate();
}

double channel_spectrum(double f, double wavelength, SpectrumMode mode,
                        const SpectrumOptions& opt) {
  if (!(wavelength > 0.0)) throw DomainError("wavelength must be positive");
  const double edge = 1.0 / wavelength;
  switch (mode) {
    case SpectrumMode::Numeric:
      return std::abs(spectrum_numeric(f, wavelength, opt));
    case SpectrumMode::BesselApprox: {
      const double d = f * f - edge * edge;
      if (d == 0.0) return kInf;
      if (d > 0.0) return 2.0 * std::cyl_bessel_k(0.0, 2.0 * kPi * std::sqrt(d));
      // K0(j y) = -(pi/2) j H0^(2)(y), so |K0(j y)| = (pi/2) |H0(y)|.
      const double y = 2.0 * kPi * std::sqrt(-d);
      return kPi * std::hypot(std::cyl_bessel_j(0.0, y), std::cyl_neumann(0.0, y));
    }
    case SpectrumMode::RectPsd:
      return std::abs(f) < edge ? wavelength : 0.0;
  }
  return 0.0;
}

namespace {

// Panel edges on [a, b] graded geometrically towards b, where the spectrum
// has its band-edge singularity, with uniform panels of width <= hmax
// elsewhere.
std::vector<double> graded_to_right(double a, double b, double hmax) {
  std::vector<double> edges{a};
  const double len = b - a;
  const double split = b - std::min(0.5 * len, hmax);
  const int n = std::max(1, static_cast<int>(std::ceil((split - a) / hmax)));
  for (int i = 1; i <= n; ++i) edges.push_back(a + (split - a) * i / n);
  double d = b - split;
  while (d > 1e-10 * len) {
    d *= 0.5;
    edges.push_back(b - d);
  }
  edges.push_back(b);
  return edges;
}

}  // namespace

double spectral_capacity(double wavelength, SpectralCapacityMode mode,
                         const SpectrumOptions& opt) {
  if (!(wavelength > 0.0) || wavelength > 4.0) {
    throw DomainError("spectral_capacity needs wavelength in (0, 4]");
  }
  if (mode == SpectralCapacityMode::Sinc) {
    return 2.0 / wavelength * std::log1p(wavelength);
  }
  const double edge = 1.0 / wavelength;
  const auto& rule = quad::gauss_legendre(16);
  auto density = [&](double f) { return std::log1p(std::norm(spectrum_numeric(f, wavelength, opt))); };

  double total = 0.0;
  // In band, graded towards the edge.
  const auto in = graded_to_right(0.0, edge, 0.5);
  for (std::size_t i = 0; i + 1 < in.size(); ++i) total += quad::panel(density, in[i], in[i + 1], rule);
  // Out of band, mirrored grading away from the edge. The spectrum decays
  // like exp(-2 pi sqrt(f^2 - 1/lambda^2)); 8 / m past the edge is plenty.
  const double tail = 8.0;
  const auto out = graded_to_right(0.0, tail, 0.5);
  for (std::size_t i = 0; i + 1 < out.size(); ++i) {
    total += quad::panel(density, edge + tail - out[i + 1], edge + tail - out[i], rule);
  }
  return 2.0 * total;
}

}  // namespace lis
