#pragma once

// Sampling lattices for placing antennas on the surface. A lattice with
// generator S (columns are basis vectors) samples without aliasing when the
// Voronoi cell of its reciprocal S^-T contains the spectral disc of radius
// 1/lambda.

#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace lis {

class LatticeGenerator {
 public:
  explicit LatticeGenerator(const Eigen::Matrix2d& m);
  const Eigen::Matrix2d& matrix() const { return m_; }
  double det() const { return m_.determinant(); }
  /// |det S|, the area of one fundamental cell.
  double cell_area() const { return std::abs(det()); }

 private:
  Eigen::Matrix2d m_;
};

struct VoronoiCell {
  std::vector<Eigen::Vector2d> vertices;  // counter-clockwise
  double area() const;
  double circumradius() const;  // largest vertex norm
};

struct DiscSpec {
  double radius;
  explicit DiscSpec(double r);
};

/// S^-T.
LatticeGenerator reciprocal(const LatticeGenerator& s);

/// Lagrange-Gauss reduced basis of the same lattice (|b1| <= |b2|,
/// |b1 . b2| <= |b1|^2 / 2).
Eigen::Matrix2d reduce_basis(const Eigen::Matrix2d& basis);

/// Voronoi cell of the lattice around the origin: a centrally symmetric
/// hexagon, or a rectangle (4 vertices) in the degenerate case.
VoronoiCell voronoi_cell(const LatticeGenerator& s);

/// True when every vertex lies within the disc (relative slack 1e-12).
bool inclusion_in_disc(const VoronoiCell& cell, const DiscSpec& disc);

/// Exact area of the intersection of a convex polygon containing the origin
/// with the origin-centred disc of the given radius.
double polygon_disc_intersection_area(const VoronoiCell& cell, double radius);

/// |D(1/lambda) intersect V(S^-T)| / |V(S^-T)|, in (0, 1].
double rho_ant(const LatticeGenerator& s, double wavelength);

/// Capacity per antenna, nats/s/Hz:
///   (1/|V*|) * integral over D intersect V* of
///   log(1 + p_hat G(|f|) / (|V(S)| n0)) df,
/// V* = V(S^-T) and G the plane power spectrum. Radial integrals are in
/// closed form; the angular integral uses Gauss-Legendre panels split at
/// polygon vertices and disc crossings.
double capacity_per_antenna(const LatticeGenerator& s, double wavelength, double p_hat, double n0);

enum class GeneratorKind { Hexagonal, RectDense, RectNaive };

std::string_view generator_name(GeneratorKind kind);
LatticeGenerator named_generator(GeneratorKind kind, double wavelength);

/// Antennas per unit area, 1 / |det S|.
double antenna_density(const LatticeGenerator& s);

/// Smallest scaling c > 0 such that c S satisfies the disc inclusion.
double min_feasible_scale(const LatticeGenerator& s, double wavelength);

struct OptimalitySearch {
  std::size_t samples = 0;
  double hex_cell_area = 0.0;
  double best_competitor_area = 0.0;  // smallest |det| among feasible random generators
  std::size_t competitors_below_hex = 0;
};

/// Draws random generators (rotation, aspect, shear), scales each to the
/// smallest feasible size and compares their cell areas to the hexagonal
/// generator. `tol` is the relative margin for counting a competitor as
/// strictly better.
OptimalitySearch random_optimality_search(double wavelength, std::size_t samples,
                                          std::uint64_t seed, double tol = 1e-9);

}  // namespace lis
