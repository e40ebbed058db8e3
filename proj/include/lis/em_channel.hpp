#pragma once

// Line-of-sight channel between single-antenna terminals and a planar
// receiving surface, and the matched-filter Gram matrix built from it.

#include <span>
#include <string>
#include <vector>

#include "lis/types.hpp"

namespace lis {

struct QuadratureConfig {
  int points_per_wavelength = 16;
  // Half-width of the window kept along an infinite axis, measured from the
  // outermost terminal. Zero selects max(50 * z_max, 50 * wavelength).
  double truncation_radius = 0.0;
  double relative_tolerance = 1e-6;
  // Upper bound on tensor-grid nodes; finer grids raise ResolutionError.
  std::size_t max_nodes = std::size_t{1} << 23;

  void validate() const;
};

/// s(x, y) = sqrt(z) / (2 sqrt(pi) eta^(3/4)) * exp(-2 pi j sqrt(eta) / wavelength).
cplx effective_channel(const Position& terminal, double x, double y, double wavelength);

/// Fraction of the isotropically radiated power that lands on the surface.
/// Exact for any terminal offset (four-corner arctan antiderivative).
double pathloss_fraction(const SurfaceSpec& surface, const Position& terminal);

/// Tensor-product Gauss-Legendre grid over the (possibly truncated) surface.
/// Weights are stored as square roots so that channel samples can be
/// pre-weighted and the Gram entries become plain inner products.
struct SurfaceGrid {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> sqrt_w;
  std::size_t size() const { return x.size(); }
};

SurfaceGrid build_surface_grid(std::span<const Position> terminals, const SurfaceSpec& surface,
                               double wavelength, const QuadratureConfig& cfg);

/// g_{k,l} = sqrt(P_k P_l) * integral over the surface of s_l * conj(s_k).
cplx gram_entry_numeric(const Position& k, const Position& l, double power_k, double power_l,
                        const SurfaceSpec& surface, double wavelength,
                        const QuadratureConfig& cfg = {});

/// Closed form for terminals on the line y = 0, z = z0 in front of an
/// infinitely long strip of half-width `half_width` (may be infinite):
/// (P / pi) atan(B / z0) sinc(2 (x_k - x_l) / wavelength).
double gram_entry_sinc_1d(double x_k, double x_l, double z0, double half_width,
                          double wavelength, double power);

/// Closed form on the infinite plane for terminals sharing one z:
/// (P / 2) sinc(2 tau / wavelength), tau the in-plane distance.
double gram_entry_sinc_2d(double tau, double wavelength, double power);

enum class GramMethod { Quadrature, Sinc1d, Sinc2d };

struct GramMatrix {
  CMatrix g;
  bool repaired = false;        // eigenvalues were floored at zero
  double min_eigenvalue = 0.0;  // before repair; only set when repair ran
  std::vector<std::string> warnings;

  Eigen::Index size() const { return g.rows(); }
};

/// Assembles the K x K Gram matrix. The matched-filter noise covariance is
/// N0 * G. Numerical assembly is followed by Hermitian symmetrization and,
/// if needed, an eigenvalue floor (raises NotPsdError when the most negative
/// eigenvalue is below -1e-8 * trace / K).
GramMatrix gram_matrix(const Deployment& deployment, const SurfaceSpec& surface,
                       GramMethod method, const QuadratureConfig& cfg = {});

/// Symmetrize and floor small negative eigenvalues in place.
void repair_psd(GramMatrix& gram);

/// Autocorrelation g(delta) of the unit-distance line integral, evaluated by
/// quadrature. Raises ConvergenceError when two resolutions disagree by more
/// than `tolerance`.
cplx sinc_autocorr_exact(double delta, double wavelength, double tolerance = 1e-9);

/// 2 sinc(2 delta / wavelength).
double sinc_autocorr_approx(double delta, double wavelength);

/// True when wavelength / z <= 1 and wavelength in [0.05, 2] m, the range where
/// the sinc closed forms are validated.
bool sinc_regime_validated(double wavelength, double z);

}  // namespace lis
