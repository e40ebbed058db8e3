#pragma once

#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace lis {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// A point in 3D space, meters. Terminals live at z > 0; the surface is the
/// plane z = 0.
struct Position {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Squared distance from a terminal to the surface point (x, y, 0).
inline double eta(const Position& t, double x, double y) {
  const double dx = x - t.x;
  const double dy = y - t.y;
  return t.z * t.z + dx * dx + dy * dy;
}

/// Rectangular surface -A <= x <= A, -B <= y <= B. Either half-extent may be
/// infinite.
class SurfaceSpec {
 public:
  enum class Regime { Rectangle, Strip, Plane };

  SurfaceSpec(double half_length, double half_width);

  static SurfaceSpec infinite_plane() { return {kInf, kInf}; }
  static SurfaceSpec strip(double half_width) { return {kInf, half_width}; }

  double half_length() const { return a_; }
  double half_width() const { return b_; }
  Regime regime() const;
  bool finite() const { return regime() == Regime::Rectangle; }

 private:
  double a_;
  double b_;
};

struct Deployment {
  std::vector<Position> terminals;
  std::vector<double> powers;  // per-Hz transmit power of each terminal
  double wavelength = 0.0;

  /// Validates K >= 1, matching sizes, positive powers and wavelength, z > 0.
  void validate() const;
  std::size_t size() const { return terminals.size(); }
};

}  // namespace lis
