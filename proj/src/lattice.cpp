#include "lis/lattice.hpp"

#include <algorithm>
#include <cmath>

#include "lis/error.hpp"
#include "lis/numeric.hpp"
#include "lis/rng.hpp"
#include "lis/types.hpp"

namespace lis {

namespace {

double cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return a.x() * b.y() - a.y() * b.x(); }

// Keeps the part of a convex polygon with x . v <= |v|^2 / 2.
std::vector<Eigen::Vector2d> clip(const std::vector<Eigen::Vector2d>& poly, const Eigen::Vector2d& v) {
  const double c = 0.5 * v.squaredNorm();
  std::vector<Eigen::Vector2d> out;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % poly.size()];
    const double dp = p.dot(v) - c;
    const double dq = q.dot(v) - c;
    if (dp <= 0.0) out.push_back(p);
    if ((dp < 0.0 && dq > 0.0) || (dp > 0.0 && dq < 0.0)) {
      out.push_back(p + (dp / (dp - dq)) * (q - p));
    }
  }
  return out;
}

// Signed area of (triangle O, a, b) intersected with the disc of radius r.
double triangle_disc_area(const Eigen::Vector2d& a, const Eigen::Vector2d& b, double r) {
  const Eigen::Vector2d d = b - a;
  const double qa = d.squaredNorm();
  if (qa == 0.0) return 0.0;
  const double qb = a.dot(d);
  const double qc = a.squaredNorm() - r * r;
  const double disc = qb * qb - qa * qc;
  // The line misses the open disc (or is tangent): the whole piece is a sector.
  if (disc <= 0.0) return 0.5 * r * r * std::atan2(cross(a, b), a.dot(b));
  std::vector<double> ts{0.0};
  {
    const double sq = std::sqrt(disc);
    for (double t : {(-qb - sq) / qa, (-qb + sq) / qa}) {
      if (t > 0.0 && t < 1.0) ts.push_back(t);
    }
  }
  ts.push_back(1.0);
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    const Eigen::Vector2d p = a + ts[i] * d;
    const Eigen::Vector2d q = a + ts[i + 1] * d;
    const Eigen::Vector2d mid = 0.5 * (p + q);
    if (mid.squaredNorm() <= r * r) {
      area += 0.5 * cross(p, q);
    } else {
      area += 0.5 * r * r * std::atan2(cross(p, q), p.dot(q));
    }
  }
  return area;
}

// x - log(1 + x), accurate near zero.
double x_minus_log1p(double x) {
  if (std::abs(x) < 1e-4) return x * x * (0.5 - x * (1.0 / 3.0 - x * (0.25 - x / 5.0)));
  return x - std::log1p(x);
}

// Antiderivative of w log(1 + a / w), shifted so that H(0) = 0.
double radial_antiderivative(double w, double a) {
  if (w <= 0.0) return 0.0;
  const double half_w2 = 0.5 * w * w;
  return half_w2 * (std::log(a) - std::log(w)) + half_w2 * std::log1p(w / a) +
         0.5 * a * a * x_minus_log1p(w / a);
}

double normalize_angle(double u) {
  u = std::fmod(u, 2.0 * kPi);
  return u < 0.0 ? u + 2.0 * kPi : u;
}

}  // namespace

LatticeGenerator::LatticeGenerator(const Eigen::Matrix2d& m) : m_(m) {
  if (!m.allFinite()) throw DomainError("lattice generator must be finite");
  const double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0 || std::abs(m.determinant()) <= 1e-14 * scale * scale) {
    throw DomainError("lattice generator is singular");
  }
}

double VoronoiCell::area() const {
  double a = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    a += cross(vertices[i], vertices[(i + 1) % vertices.size()]);
  }
  return 0.5 * std::abs(a);
}

double VoronoiCell::circumradius() const {
  double r = 0.0;
  for (const auto& v : vertices) r = std::max(r, v.norm());
  return r;
}

DiscSpec::DiscSpec(double r) : radius(r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("disc radius must be positive");
}

LatticeGenerator reciprocal(const LatticeGenerator& s) {
  return LatticeGenerator(s.matrix().inverse().transpose());
}

Eigen::Matrix2d reduce_basis(const Eigen::Matrix2d& basis) {
  Eigen::Vector2d b1 = basis.col(0);
  Eigen::Vector2d b2 = basis.col(1);
  if (b1.squaredNorm() > b2.squaredNorm()) std::swap(b1, b2);
  for (int iter = 0; iter < 200; ++iter) {
    const double mu = std::round(b1.dot(b2) / b1.squaredNorm());
    b2 -= mu * b1;
    if (b2.squaredNorm() >= b1.squaredNorm()) break;
    std::swap(b1, b2);
  }
  Eigen::Matrix2d out;
  out.col(0) = b1;
  out.col(1) = b2;
  return out;
}

VoronoiCell voronoi_cell(const LatticeGenerator& s) {
  const Eigen::Matrix2d r = reduce_basis(s.matrix());
  const Eigen::Vector2d b1 = r.col(0), b2 = r.col(1);
  const double h = 2.0 * (b1.norm() + b2.norm());
  std::vector<Eigen::Vector2d> poly{{-h, -h}, {h, -h}, {h, h}, {-h, h}};
  for (const Eigen::Vector2d& v : {b1, b2, Eigen::Vector2d(b1 + b2), Eigen::Vector2d(b1 - b2)}) {
    poly = clip(poly, v);
    poly = clip(poly, -v);
  }
  // Degenerate hexagon edges collapse to repeated vertices.
  const double tol = 1e-12 * b2.norm();
  VoronoiCell cell;
  for (const auto& p : poly) {
    if (cell.vertices.empty() || (p - cell.vertices.back()).norm() > tol) cell.vertices.push_back(p);
  }
  while (cell.vertices.size() > 1 && (cell.vertices.front() - cell.vertices.back()).norm() <= tol) {
    cell.vertices.pop_back();
  }
  return cell;
}

bool inclusion_in_disc(const VoronoiCell& cell, const DiscSpec& disc) {
  return cell.circumradius() <= disc.radius * (1.0 + 1e-12);
}

double polygon_disc_intersection_area(const VoronoiCell& cell, double radius) {
  double a = 0.0;
  const auto& v = cell.vertices;
  for (std::size_t i = 0; i < v.size(); ++i) a += triangle_disc_area(v[i], v[(i + 1) % v.size()], radius);
  return std::abs(a);
}

double rho_ant(const LatticeGenerator& s, double wavelength) {
  if (!(wavelength > 0.0)) throw DomainError("wavelength must be positive");
  const VoronoiCell cell = voronoi_cell(reciprocal(s));
  const double r = 1.0 / wavelength;
  if (inclusion_in_disc(cell, DiscSpec(r))) return 1.0;
  return polygon_disc_intersection_area(cell, r) / cell.area();
}

double capacity_per_antenna(const LatticeGenerator& s, double wavelength, double p_hat, double n0) {
  if (!(wavelength > 0.0)) throw DomainError("wavelength must be positive");
  if (!(p_hat > 0.0) || !(n0 > 0.0)) throw DomainError("p_hat and n0 must be positive");
  const VoronoiCell cell = voronoi_cell(reciprocal(s));
  const auto& v = cell.vertices;
  const double disc_r = 1.0 / wavelength;
  const double a = p_hat * wavelength * wavelength / (4.0 * kPi * s.cell_area() * n0);

  // Distance from the origin to the polygon boundary along angle u.
  auto boundary = [&](double u) {
    const Eigen::Vector2d d(std::cos(u), std::sin(u));
    double best = kInf;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Eigen::Vector2d e = v[(i + 1) % v.size()] - v[i];
      const Eigen::Vector2d n(e.y(), -e.x());  // outward for CCW order
      const double h = n.dot(v[i]);
      const double nd = n.dot(d);
      if (nd > 0.0) best = std::min(best, h / nd);
    }
    return best;
  };
  const double h_full = radial_antiderivative(1.0, a);
  auto angular = [&](double u) {
    const double r = std::min(disc_r, boundary(u));
    const double lr = wavelength * r;
    const double w = lr >= 1.0 ? 0.0 : std::sqrt((1.0 - lr) * (1.0 + lr));
    return (h_full - radial_antiderivative(w, a)) / (wavelength * wavelength);
  };

  // Break the angular range where the integrand has kinks.
  std::vector<double> cuts;
  for (std::size_t i = 0; i < v.size(); ++i) {
    cuts.push_back(normalize_angle(std::atan2(v[i].y(), v[i].x())));
    const Eigen::Vector2d p = v[i];
    const Eigen::Vector2d d = v[(i + 1) % v.size()] - p;
    const double qa = d.squaredNorm(), qb = p.dot(d), qc = p.squaredNorm() - disc_r * disc_r;
    const double disc = qb * qb - qa * qc;
    if (disc > 0.0) {
      for (double t : {(-qb - std::sqrt(disc)) / qa, (-qb + std::sqrt(disc)) / qa}) {
        if (t > 0.0 && t < 1.0) {
          const Eigen::Vector2d x = p + t * d;
          cuts.push_back(normalize_angle(std::atan2(x.y(), x.x())));
        }
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(cuts.front() + 2.0 * kPi);

  // Cosine map clusters nodes at both ends of each piece, which removes the
  // square-root behaviour where the boundary crosses the disc.
  const auto& rule = quad::gauss_legendre(30);
  auto integrate = [&](int panels) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double u0 = cuts[i], len = cuts[i + 1] - cuts[i];
      if (len <= 0.0) continue;
      auto g = [&](double t) {
        const double u = u0 + len * 0.5 * (1.0 - std::cos(kPi * t));
        return angular(u) * len * 0.5 * kPi * std::sin(kPi * t);
      };
      total += quad::composite(g, 0.0, 1.0, panels, rule);
    }
    return total;
  };
  double prev = integrate(2);
  for (int panels = 4; panels <= 256; panels *= 2) {
    const double cur = integrate(panels);
    if (std::abs(cur - prev) <= 1e-11 * std::abs(cur)) return cur / cell.area();
    prev = cur;
  }
  throw ConvergenceError("capacity_per_antenna: angular quadrature did not converge");
}

std::string_view generator_name(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::Hexagonal: return "hexagonal";
    case GeneratorKind::RectDense: return "rect-dense";
    case GeneratorKind::RectNaive: return "rect-naive";
  }
  return "unknown";
}

LatticeGenerator named_generator(GeneratorKind kind, double wavelength) {
  if (!(wavelength > 0.0)) throw DomainError("wavelength must be positive");
  const double l = wavelength;
  Eigen::Matrix2d m;
  switch (kind) {
    case GeneratorKind::Hexagonal:
      m << 2.0 * l / 3.0, l / 3.0, 0.0, l / std::sqrt(3.0);
      break;
    case GeneratorKind::RectDense:
      m = (l / std::sqrt(2.0)) * Eigen::Matrix2d::Identity();
      break;
    case GeneratorKind::RectNaive:
      m = (l / 2.0) * Eigen::Matrix2d::Identity();
      break;
  }
  return LatticeGenerator(m);
}

double antenna_density(const LatticeGenerator& s) { return 1.0 / s.cell_area(); }

double min_feasible_scale(const LatticeGenerator& s, double wavelength) {
  if (!(wavelength > 0.0)) throw DomainError("wavelength must be positive");
  // The reciprocal of c S is S^-T / c, whose cell shrinks by 1/c.
  return wavelength * voronoi_cell(reciprocal(s)).circumradius();
}

OptimalitySearch random_optimality_search(double wavelength, std::size_t samples,
                                          std::uint64_t seed, double tol) {
  OptimalitySearch out;
  out.samples = samples;
  out.hex_cell_area = named_generator(GeneratorKind::Hexagonal, wavelength).cell_area();
  out.best_competitor_area = kInf;
  for (std::size_t i = 0; i < samples; ++i) {
    Rng rng(seed, i);
    const double angle = rng.uniform(0.0, kPi);
    const double aspect = std::exp(rng.uniform(std::log(0.05), std::log(20.0)));
    const double shear = rng.uniform(-2.0, 2.0);
    Eigen::Matrix2d rot;
    rot << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    Eigen::Matrix2d shape;
    shape << 1.0, shear, 0.0, aspect;
    LatticeGenerator g(rot * shape);
    const double c = min_feasible_scale(g, wavelength);
    const double area = c * c * g.cell_area();
    out.best_competitor_area = std::min(out.best_competitor_area, area);
    if (area < out.hex_cell_area * (1.0 - tol)) ++out.competitors_below_hex;
  }
  return out;
}

}  // namespace lis
