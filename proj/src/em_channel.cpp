#include "lis/em_channel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "lis/error.hpp"
#include "lis/kernels.hpp"
#include "lis/numeric.hpp"

namespace lis {

namespace {

constexpr int kPanelOrder = 8;

// (1 / 4 pi) atan(x y / (z sqrt(x^2 + y^2 + z^2))), with the limits taken
// when x or y is infinite.
double corner(double x, double y, double z) {
  double ratio;
  if (std::isinf(x) && std::isinf(y)) {
    ratio = std::copysign(1.0, x) * std::copysign(1.0, y) * kInf;
  } else if (std::isinf(x)) {
    ratio = std::copysign(1.0, x) * y / z;
  } else if (std::isinf(y)) {
    ratio = std::copysign(1.0, y) * x / z;
  } else {
    ratio = x * y / (z * std::sqrt(x * x + y * y + z * z));
  }
  return std::atan(ratio) / (4.0 * kPi);
}

struct AxisPlan {
  double lo, hi;              // integration limits, finite after truncation
  double core_lo, core_hi;    // terminal span along this axis
  double scale;               // distance at which panels start to widen
  std::vector<double> feet;   // terminal feet needing local refinement
  std::vector<double> depth;  // matching terminal heights
};

double local_width(const AxisPlan& p, double x, double h0) {
  const double d = std::max({0.0, p.core_lo - x, x - p.core_hi});
  double h = h0 * std::max(1.0, d / p.scale);
  for (std::size_t i = 0; i < p.feet.size(); ++i) {
    if (std::abs(x - p.feet[i]) <= 10.0 * p.depth[i]) h = std::min(h, p.depth[i]);
  }
  return h;
}

// March outward from `start` to `end` (either direction) placing panel edges.
void march(const AxisPlan& p, double start, double end, double h0, std::vector<double>& edges) {
  const double dir = end > start ? 1.0 : -1.0;
  double x = start;
  while (dir * (end - x) > 0.0) {
    const double h = local_width(p, x, h0);
    double next = x + dir * h;
    // Avoid a sliver at the end.
    if (dir * (end - next) < 0.25 * h) next = end;
    edges.push_back(next);
    x = next;
  }
}

std::vector<double> axis_edges(const AxisPlan& p, double h0) {
  const double a0 = std::clamp(p.core_lo, p.lo, p.hi);
  const double a1 = std::clamp(p.core_hi, p.lo, p.hi);
  std::vector<double> right{a0};
  if (a1 > a0) {
    const int n = std::max(1, static_cast<int>(std::ceil((a1 - a0) / h0)));
    std::vector<double> core;
    // Uniform core, then split further where a low terminal needs it.
    for (int i = 1; i <= n; ++i) core.push_back(a0 + (a1 - a0) * i / n);
    double x = a0;
    for (double c : core) {
      march(p, x, c, (c - x), right);
      x = c;
    }
  }
  march(p, a1, p.hi, h0, right);
  std::vector<double> left;
  march(p, a0, p.lo, h0, left);
  std::vector<double> edges(left.rbegin(), left.rend());
  edges.insert(edges.end(), right.begin(), right.end());
  return edges;
}

std::vector<double> axis_nodes(const std::vector<double>& edges, std::vector<double>& weights) {
  const auto& rule = quad::gauss_legendre(kPanelOrder);
  std::vector<double> nodes;
  nodes.reserve((edges.size() - 1) * rule.nodes.size());
  for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
    const double half = 0.5 * (edges[e + 1] - edges[e]);
    const double mid = 0.5 * (edges[e + 1] + edges[e]);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      nodes.push_back(mid + half * rule.nodes[i]);
      weights.push_back(half * rule.weights[i]);
    }
  }
  return nodes;
}

// Half-window needed so that the neglected tail of the direct-path power is
// below `tol` relative to the captured power.
double tail_radius(const SurfaceSpec& s, double z, double tol) {
  if (s.regime() == SurfaceSpec::Regime::Plane) {
    // Outside a square of half-side R the power is at most z / (2 R),
    // against zeta = 1/2.
    return z / tol;
  }
  // Strip of half-width B: tail beyond |x| > R is B z / (2 pi R^2) for the
  // centred terminal, against zeta = atan(B / z) / pi.
  const double b = std::isinf(s.half_length()) ? s.half_width() : s.half_length();
  return std::sqrt(b * z / (2.0 * tol * std::atan(b / z)));
}

}  // namespace

void QuadratureConfig::validate() const {
  if (points_per_wavelength < 8) {
    throw ResolutionError("points_per_wavelength must be at least 8 to resolve the phase");
  }
  if (truncation_radius < 0.0 || !std::isfinite(truncation_radius)) {
    throw DomainError("truncation_radius must be non-negative and finite");
  }
  if (!(relative_tolerance > 0.0) || relative_tolerance >= 1.0) {
    throw DomainError("relative_tolerance must lie in (0, 1)");
  }
}

cplx effective_channel(const Position& terminal, double x, double y, double wavelength) {
  if (!(terminal.z > 0.0)) throw DomainError("terminal z must be positive");
  if (!(wavelength > 0.0)) throw DomainError("wavelength must be positive");
  const double r = std::sqrt(eta(terminal, x, y));
  const double amp = std::sqrt(terminal.z) / (2.0 * std::sqrt(kPi) * r * std::sqrt(r));
  const double turns = r / wavelength;
  const double frac = turns - std::nearbyint(turns);
  return std::polar(amp, -2.0 * kPi * frac);
}

double pathloss_fraction(const SurfaceSpec& surface, const Position& t) {
  if (!(t.z > 0.0)) throw DomainError("terminal z must be positive");
  const double a = surface.half_length();
  const double b = surface.half_width();
  return corner(a - t.x, b - t.y, t.z) - corner(-a - t.x, b - t.y, t.z) -
         corner(a - t.x, -b - t.y, t.z) + corner(-a - t.x, -b - t.y, t.z);
}

SurfaceGrid build_surface_grid(std::span<const Position> terminals, const SurfaceSpec& surface,
                               double wavelength, const QuadratureConfig& cfg) {
  cfg.validate();
  if (terminals.empty()) throw DomainError("no terminals");
  if (!(wavelength > 0.0)) throw DomainError("wavelength must be positive");

  double xmin = kInf, xmax = -kInf, ymin = kInf, ymax = -kInf, zmax = 0.0, zmin = kInf;
  for (const auto& t : terminals) {
    if (!(t.z > 0.0)) throw DomainError("terminal z must be positive");
    xmin = std::min(xmin, t.x);
    xmax = std::max(xmax, t.x);
    ymin = std::min(ymin, t.y);
    ymax = std::max(ymax, t.y);
    zmax = std::max(zmax, t.z);
    zmin = std::min(zmin, t.z);
  }

  // One panel of kPanelOrder nodes spans kPanelOrder / ppw wavelengths.
  const double h0 = wavelength * kPanelOrder / cfg.points_per_wavelength;

  double radius = 0.0;
  if (!surface.finite()) {
    radius = cfg.truncation_radius > 0.0 ? cfg.truncation_radius
                                         : std::max(50.0 * zmax, 50.0 * wavelength);
    if (cfg.truncation_radius == 0.0) {
      radius = std::max(radius, tail_radius(surface, zmax, cfg.relative_tolerance));
    }
  }

  const double span = std::max({xmax - xmin, ymax - ymin, zmax, wavelength});
  auto plan = [&](double half, double cmin, double cmax, bool along_x) {
    AxisPlan p;
    p.lo = std::isinf(half) ? cmin - radius : -half;
    p.hi = std::isinf(half) ? cmax + radius : half;
    p.core_lo = cmin;
    p.core_hi = cmax;
    p.scale = span;
    for (const auto& t : terminals) {
      if (t.z < h0) {
        p.feet.push_back(along_x ? t.x : t.y);
        p.depth.push_back(t.z);
      }
    }
    return p;
  };

  std::vector<double> wx, wy;
  const auto nx = axis_nodes(axis_edges(plan(surface.half_length(), xmin, xmax, true), h0), wx);
  const auto ny = axis_nodes(axis_edges(plan(surface.half_width(), ymin, ymax, false), h0), wy);

  const double total = static_cast<double>(nx.size()) * static_cast<double>(ny.size());
  if (total > static_cast<double>(cfg.max_nodes)) {
    throw ResolutionError("surface grid needs " + std::to_string(static_cast<long long>(total)) +
                          " nodes, above the configured budget");
  }

  SurfaceGrid g;
  g.x.reserve(static_cast<std::size_t>(total));
  g.y.reserve(static_cast<std::size_t>(total));
  g.sqrt_w.reserve(static_cast<std::size_t>(total));
  for (std::size_t i = 0; i < nx.size(); ++i) {
    for (std::size_t j = 0; j < ny.size(); ++j) {
      g.x.push_back(nx[i]);
      g.y.push_back(ny[j]);
      g.sqrt_w.push_back(std::sqrt(wx[i] * wy[j]));
    }
  }
  return g;
}

namespace {

struct Samples {
  std::vector<double> re, im;
};

Samples synthesize(const SurfaceGrid& grid, const Position& t, double wavelength) {
  Samples s;
  s.re.resize(grid.size());
  s.im.resize(grid.size());
  kernels::SynthesisArgs args{grid.x.data(), grid.y.data(), grid.sqrt_w.data(), grid.size(),
                              t.x,           t.y,           t.z,                1.0 / wavelength};
  kernels::active().synthesize(args, s.re.data(), s.im.data());
  return s;
}

cplx inner(const Samples& a, const Samples& b) {
  const auto d = kernels::active().conj_dot(a.re.data(), a.im.data(), b.re.data(), b.im.data(),
                                            a.re.size());
  return {d.re, d.im};
}

}  // namespace

cplx gram_entry_numeric(const Position& k, const Position& l, double power_k, double power_l,
                        const SurfaceSpec& surface, double wavelength,
                        const QuadratureConfig& cfg) {
  if (!(power_k > 0.0) || !(power_l > 0.0)) throw DomainError("powers must be positive");
  const Position pair[2] = {k, l};
  const SurfaceGrid grid = build_surface_grid(pair, surface, wavelength, cfg);
  const Samples sk = synthesize(grid, k, wavelength);
  const Samples sl = synthesize(grid, l, wavelength);
  return std::sqrt(power_k * power_l) * inner(sk, sl);
}

double gram_entry_sinc_1d(double x_k, double x_l, double z0, double half_width, double wavelength,
                          double power) {
  if (!(z0 > 0.0)) throw DomainError("terminal z must be positive");
  if (!(half_width > 0.0)) throw DomainError("strip half-width must be positive");
  if (!(wavelength > 0.0)) throw DomainError("wavelength must be positive");
  if (!(power > 0.0)) throw DomainError("power must be positive");
  return power / kPi * std::atan(half_width / z0) * sinc(2.0 * (x_k - x_l) / wavelength);
}

double gram_entry_sinc_2d(double tau, double wavelength, double power) {
  if (!(wavelength > 0.0)) throw DomainError("wavelength must be positive");
  if (!(power > 0.0)) throw DomainError("power must be positive");
  return 0.5 * power * sinc(2.0 * tau / wavelength);
}

bool sinc_regime_validated(double wavelength, double z) {
  return wavelength / z <= 1.0 && wavelength >= 0.05 && wavelength <= 2.0;
}

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

// Returns the smallest eigenvalue (0 when Cholesky succeeds) and, if it is
// negative but within tolerance, floors the spectrum of `m` in place.
template <typename Mat>
double floor_spectrum(Mat& m, double floor_tol) {
  if (Eigen::LLT<Mat>(m).info() == Eigen::Success) return 0.0;
  const Eigen::SelfAdjointEigenSolver<Mat> es(m);
  if (es.info() != Eigen::Success) throw NotPsdError("eigendecomposition of the Gram matrix failed");
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -floor_tol) {
    throw NotPsdError("Gram matrix eigenvalue " + sci(min_eig) +
                      " is below the repair threshold " + sci(-floor_tol));
  }
  if (min_eig < 0.0) {
    const RVector ev = es.eigenvalues().cwiseMax(0.0);
    m = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
    m = 0.5 * (m + m.adjoint()).eval();
  }
  return min_eig;
}

}  // namespace

void repair_psd(GramMatrix& gram) {
  CMatrix& g = gram.g;
  const Eigen::Index k = g.rows();
  g = 0.5 * (g + g.adjoint()).eval();
  for (Eigen::Index i = 0; i < k; ++i) g(i, i) = g(i, i).real();

  const double floor_tol = 1e-8 * g.trace().real() / static_cast<double>(k);
  double min_eig = 0.0;
  // Sinc-form matrices are real; the real solvers are several times faster.
  if (g.imag().cwiseAbs().maxCoeff() == 0.0) {
    RMatrix gr = g.real();
    min_eig = floor_spectrum(gr, floor_tol);
    if (min_eig < 0.0) g = gr.cast<cplx>();
  } else {
    min_eig = floor_spectrum(g, floor_tol);
  }
  if (min_eig < 0.0) {
    gram.repaired = true;
    gram.min_eigenvalue = min_eig;
    gram.warnings.push_back("Gram matrix eigenvalues floored at zero (min " +
                            sci(min_eig) + ")");
  }
}

GramMatrix gram_matrix(const Deployment& dep, const SurfaceSpec& surface, GramMethod method,
                       const QuadratureConfig& cfg) {
  dep.validate();
  const auto k = static_cast<Eigen::Index>(dep.size());
  const double lambda = dep.wavelength;
  GramMatrix out;
  out.g.resize(k, k);

  auto same_height = [&] {
    const double z0 = dep.terminals.front().z;
    for (const auto& t : dep.terminals) {
      if (std::abs(t.z - z0) > 1e-12 * z0) return false;
    }
    return true;
  };
  auto note_regime = [&] {
    const double z0 = dep.terminals.front().z;
    if (!sinc_regime_validated(lambda, z0)) {
      out.warnings.push_back("sinc closed form used outside the validated regime (lambda/z <= 1, "
                             "0.05 <= lambda <= 2)");
    }
  };

  switch (method) {
    case GramMethod::Quadrature: {
      const SurfaceGrid grid = build_surface_grid(dep.terminals, surface, lambda, cfg);
      std::vector<Samples> s;
      s.reserve(dep.size());
      for (const auto& t : dep.terminals) s.push_back(synthesize(grid, t, lambda));
      for (Eigen::Index a = 0; a < k; ++a) {
        for (Eigen::Index b = a; b < k; ++b) {
          const double amp = std::sqrt(dep.powers[a] * dep.powers[b]);
          const cplx v = amp * inner(s[a], s[b]);
          out.g(a, b) = v;
          out.g(b, a) = std::conj(v);
        }
      }
      break;
    }
    case GramMethod::Sinc1d: {
      if (!std::isinf(surface.half_length())) {
        throw RegimeError("sinc-1d needs an infinitely long surface (A = inf)");
      }
      for (const auto& t : dep.terminals) {
        if (std::abs(t.y) > 1e-12) throw RegimeError("sinc-1d needs terminals on the line y = 0");
      }
      if (!same_height()) throw RegimeError("sinc-1d needs all terminals at one height");
      note_regime();
      const double z0 = dep.terminals.front().z;
      for (Eigen::Index a = 0; a < k; ++a) {
        for (Eigen::Index b = 0; b < k; ++b) {
          const double p = std::sqrt(dep.powers[a] * dep.powers[b]);
          out.g(a, b) = gram_entry_sinc_1d(dep.terminals[a].x, dep.terminals[b].x, z0,
                                           surface.half_width(), lambda, p);
        }
      }
      break;
    }
    case GramMethod::Sinc2d: {
      if (surface.regime() != SurfaceSpec::Regime::Plane) {
        throw RegimeError("sinc-2d needs an infinite plane (A = B = inf)");
      }
      if (!same_height()) throw RegimeError("sinc-2d needs all terminals at one height");
      note_regime();
      for (Eigen::Index a = 0; a < k; ++a) {
        for (Eigen::Index b = 0; b < k; ++b) {
          const double p = std::sqrt(dep.powers[a] * dep.powers[b]);
          const double tau = std::hypot(dep.terminals[a].x - dep.terminals[b].x,
                                        dep.terminals[a].y - dep.terminals[b].y);
          out.g(a, b) = gram_entry_sinc_2d(tau, lambda, p);
        }
      }
      break;
    }
  }
  repair_psd(out);
  return out;
}

cplx sinc_autocorr_exact(double delta, double wavelength, double tolerance) {
  if (!(wavelength > 0.0)) throw DomainError("wavelength must be positive");
  if (!(tolerance > 0.0)) throw DomainError("tolerance must be positive");
  // x = tan t maps the real line onto (-pi/2, pi/2); the integrand then
  // vanishes like cos t at both ends.
  auto f = [&](double t) -> cplx {
    const double c = std::cos(t);
    const double x = std::tan(t);
    const double xs = x + delta;
    const double q = 1.0 + xs * xs;
    const double root_q = std::sqrt(q);
    const double amp = std::pow(c, 1.5) * std::pow(q, -0.75) / (c * c);
    // sqrt(1 + x^2) - sqrt(1 + (x + delta)^2) without cancellation.
    const double dphase = -(2.0 * delta * x + delta * delta) / (1.0 / c + root_q);
    return std::polar(amp, -2.0 * kPi * dphase / wavelength);
  };
  const auto& rule = quad::gauss_legendre(16);
  const double a = -kPi / 2, b = kPi / 2;
  int panels = 32;
  cplx prev = quad::composite(f, a, b, panels, rule);
  for (int iter = 0; iter < 10; ++iter) {
    panels *= 2;
    const cplx cur = quad::composite(f, a, b, panels, rule);
    if (std::abs(cur - prev) <= tolerance * 2.0) return cur;
    prev = cur;
  }
  throw ConvergenceError("sinc_autocorr_exact did not converge");
}

double sinc_autocorr_approx(double delta, double wavelength) {
  if (!(wavelength > 0.0)) throw DomainError("wavelength must be positive");
  return 2.0 * sinc(2.0 * delta / wavelength);
}

}  // namespace lis
