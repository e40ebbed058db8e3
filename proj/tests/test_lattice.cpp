#include <doctest.h>

#include <cmath>
#include <random>

#include "lis/capacity.hpp"
#include "lis/error.hpp"
#include "lis/lattice.hpp"

using namespace lis;
using Eigen::Matrix2d;
using Eigen::Vector2d;

namespace {

constexpr double kPiL = 3.14159265358979323846;

bool inside_convex(const VoronoiCell& c, const Vector2d& p) {
  const auto& v = c.vertices;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vector2d a = v[i], b = v[(i + 1) % v.size()];
    const Vector2d e = b - a, q = p - a;
    if (e.x() * q.y() - e.y() * q.x() < 0) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("named generators") {
  const double lam = 0.5;
  const auto hex = named_generator(GeneratorKind::Hexagonal, lam);
  const auto dense = named_generator(GeneratorKind::RectDense, lam);
  CHECK(std::abs(hex.cell_area() - 2 * lam * lam / (3 * std::sqrt(3.0))) < 1e-12);
  CHECK(std::abs(antenna_density(hex) - 3 * std::sqrt(3.0) / (2 * lam * lam)) < 1e-9);
  CHECK(std::abs(hex.cell_area() / dense.cell_area() - 4 / (3 * std::sqrt(3.0))) < 1e-12);
  CHECK(generator_name(GeneratorKind::RectNaive) == "rect-naive");
}

TEST_CASE("reciprocal lattice") {
  Matrix2d m;
  m << 1.0, 0.3, 0.2, 2.0;
  const auto r = reciprocal(LatticeGenerator(m));
  CHECK((r.matrix().transpose() * m).isApprox(Matrix2d::Identity(), 1e-14));
}

TEST_CASE("Voronoi cell vertices are equidistant to the origin and a lattice point") {
  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix2d m;
    m << u(g), u(g), u(g), u(g);
    if (std::abs(m.determinant()) < 0.05) continue;
    const LatticeGenerator s(m);
    const auto cell = voronoi_cell(s);
    m = reduce_basis(m);  // short vectors: nearby lattice points lie at small indices
    CHECK(cell.area() == doctest::Approx(s.cell_area()).epsilon(1e-10));
    for (const auto& v : cell.vertices) {
      // No lattice point is closer to the vertex than the origin.
      double nearest = kInf;
      int ties = 0;
      for (int i = -6; i <= 6; ++i)
        for (int j = -6; j <= 6; ++j) {
          if (i == 0 && j == 0) continue;
          const double d = (v - m * Vector2d(i, j)).norm();
          nearest = std::min(nearest, d);
        }
      CHECK(nearest >= v.norm() * (1 - 1e-10));
      for (int i = -6; i <= 6; ++i)
        for (int j = -6; j <= 6; ++j)
          if ((i || j) && std::abs((v - m * Vector2d(i, j)).norm() - v.norm()) < 1e-9 * v.norm()) ++ties;
      CHECK(ties >= 2);
    }
  }
}

TEST_CASE("a skewed basis of the same lattice gives the same cell") {
  const auto hex = named_generator(GeneratorKind::Hexagonal, 1.0);
  Matrix2d uni;
  uni << 3, 1, 5, 2;  // det 1
  const LatticeGenerator skew(hex.matrix() * uni);
  CHECK(voronoi_cell(skew).area() == doctest::Approx(voronoi_cell(hex).area()).epsilon(1e-12));
  CHECK(voronoi_cell(skew).circumradius() == doctest::Approx(voronoi_cell(hex).circumradius()).epsilon(1e-12));
  const Matrix2d red = reduce_basis(skew.matrix());
  CHECK(red.col(0).norm() <= red.col(1).norm() + 1e-12);
  CHECK(std::abs(red.col(0).dot(red.col(1))) <= 0.5 * red.col(0).squaredNorm() + 1e-12);
  CHECK(std::abs(red.determinant()) == doctest::Approx(hex.cell_area()));
}

TEST_CASE("polygon-disc intersection area") {
  Matrix2d m = 2.0 * Matrix2d::Identity();
  const auto square = voronoi_cell(LatticeGenerator(m));  // [-1, 1]^2
  CHECK(polygon_disc_intersection_area(square, 0.5) == doctest::Approx(kPiL * 0.25).epsilon(1e-12));
  CHECK(polygon_disc_intersection_area(square, 5.0) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(polygon_disc_intersection_area(square, 1.0) == doctest::Approx(kPiL).epsilon(1e-12));
  const double r = 1.2;
  const double seg = r * r * std::acos(1 / r) - std::sqrt(r * r - 1);
  CHECK(std::abs(polygon_disc_intersection_area(square, r) - (kPiL * r * r - 4 * seg)) < 1e-12);
}

TEST_CASE("antenna efficiency") {
  const double lam = 0.5;
  CHECK(std::abs(rho_ant(named_generator(GeneratorKind::Hexagonal, lam), lam) - 1.0) < 1e-9);
  CHECK(std::abs(rho_ant(named_generator(GeneratorKind::RectDense, lam), lam) - 1.0) < 1e-9);
  CHECK(std::abs(rho_ant(named_generator(GeneratorKind::RectNaive, lam), lam) - kPiL / 4) < 1e-9);
  // Fine sampling: the whole disc fits, ratio is |D| |det S|.
  const LatticeGenerator fine(0.1 * lam * Matrix2d::Identity());
  CHECK(rho_ant(fine, lam) == doctest::Approx(kPiL / (lam * lam) * fine.cell_area()).epsilon(1e-12));
}

TEST_CASE("disc inclusion and minimal feasible scale") {
  const double lam = 0.5;
  const auto hex = named_generator(GeneratorKind::Hexagonal, lam);
  CHECK(inclusion_in_disc(voronoi_cell(reciprocal(hex)), DiscSpec(1 / lam)));
  CHECK(min_feasible_scale(hex, lam) == doctest::Approx(1.0).epsilon(1e-12));
  const auto naive = named_generator(GeneratorKind::RectNaive, lam);
  CHECK_FALSE(inclusion_in_disc(voronoi_cell(reciprocal(naive)), DiscSpec(1 / lam)));
  CHECK(min_feasible_scale(naive, lam) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(DiscSpec(-1.0), DomainError);
}

TEST_CASE("random generators never beat the hexagonal cell") {
  const auto r = random_optimality_search(0.5, 1000, 7);
  CHECK(r.samples == 1000);
  CHECK(r.competitors_below_hex == 0);
  CHECK(r.best_competitor_area >= r.hex_cell_area * (1 - 1e-9));
  CHECK(r.best_competitor_area < r.hex_cell_area * 1.05);
}

TEST_CASE("capacity per antenna matches Monte Carlo over the reciprocal cell") {
  const double lam = 0.5, p_hat = 10.0, n0 = 1.0;
  for (auto kind : {GeneratorKind::Hexagonal, GeneratorKind::RectNaive}) {
    const auto s = named_generator(kind, lam);
    const auto cell = voronoi_cell(reciprocal(s));
    const double R = cell.circumradius();
    std::mt19937_64 g(5);
    std::uniform_real_distribution<double> u(-R, R);
    double acc = 0.0;
    long n = 0;
    while (n < 400000) {
      const Vector2d f(u(g), u(g));
      if (!inside_convex(cell, f)) continue;
      ++n;
      const double rr = f.norm();
      if (rr < 1 / lam) acc += std::log1p(p_hat * psd_2d(rr, lam) / (s.cell_area() * n0));
    }
    CHECK(capacity_per_antenna(s, lam, p_hat, n0) == doctest::Approx(acc / n).epsilon(1e-2));
  }
}

TEST_CASE("fine sampling recovers the plane capacity") {
  // The reciprocal cell of (lambda/4) I contains the whole disc.
  const double lam = 0.5, p = 0.2, n0 = 1.0;
  const LatticeGenerator fine(0.25 * lam * Matrix2d::Identity());
  CHECK(capacity_per_antenna(fine, lam, p, n0) * antenna_density(fine) ==
        doctest::Approx(capacity_2d_closed(lam, p / fine.cell_area(), n0)).epsilon(1e-6));
  // Coarser lattices keep only part of the disc.
  const auto hex = named_generator(GeneratorKind::Hexagonal, lam);
  CHECK(capacity_per_antenna(hex, lam, p, n0) * antenna_density(hex) <
        capacity_2d_closed(lam, p / hex.cell_area(), n0));
}

TEST_CASE("high-SNR slope of the per-antenna capacity equals rho_ant") {
  const double lam = 0.5;
  for (auto kind : {GeneratorKind::Hexagonal, GeneratorKind::RectDense, GeneratorKind::RectNaive}) {
    CAPTURE(generator_name(kind));
    const auto s = named_generator(kind, lam);
    std::vector<double> x, y;
    for (int e = 6; e <= 9; ++e) {
      const double p = std::pow(10.0, e);
      x.push_back(std::log(p));
      y.push_back(capacity_per_antenna(s, lam, p, 1.0));
    }
    const double slope = (y.back() - y.front()) / (x.back() - x.front());
    CHECK(slope == doctest::Approx(rho_ant(s, lam)).epsilon(0.02));
  }
}

TEST_CASE("rho_ant is at most one and equals one exactly under inclusion") {
  std::mt19937_64 g(3);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  const double lam = 0.5;
  for (int t = 0; t < 200; ++t) {
    Matrix2d m;
    m << u(g), u(g), u(g), u(g);
    if (std::abs(m.determinant()) < 1e-3) continue;
    const LatticeGenerator s(m);
    const double r = rho_ant(s, lam);
    CHECK(r <= 1.0 + 1e-12);
    const bool inc = inclusion_in_disc(voronoi_cell(reciprocal(s)), DiscSpec(1 / lam));
    CHECK(inc == (std::abs(r - 1.0) < 1e-9));
  }
}
