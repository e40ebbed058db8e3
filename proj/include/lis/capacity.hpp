#pragma once

// Capacities of the LIS uplink: log-det and matched-filter rates from a Gram
// matrix, the closed forms for uniform line and plane deployments, and
// pre-log (signal dimension) estimation.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "lis/types.hpp"

namespace lis {

struct GramMatrix;

/// theta = lambda / (2 dx), beta = floor(1/theta), alpha = 1/theta - beta.
/// 1/theta within 1e-12 (relative) of an integer is snapped to it.
struct FoldingParams {
  double theta = 1.0;
  int beta = 1;
  double alpha = 0.0;

  static FoldingParams from_theta(double theta);
  static FoldingParams from_spacing(double wavelength, double dx);
};

enum class Dimension { One, Two, Three };

struct SpacingSpec {
  double dx = 0.0;
  std::optional<double> dy;
  Dimension dimension = Dimension::One;

  void validate() const;
  /// dx for 1D; dx * dy otherwise.
  double measure() const;
};

/// (1/K) log det(I + G / N0), nats/s/Hz per terminal. Raises NotPsdError
/// when G is not Hermitian positive semi-definite (relative slack 1e-8).
double capacity_logdet(const CMatrix& g, double n0);
double capacity_logdet(const GramMatrix& g, double n0);

/// Sum-rate form, log det(I + G / N0).
double logdet_sum(const CMatrix& g, double n0);

/// Per-terminal matched-filter rates log(1 + g_kk / (N0 + I_k)) with
/// I_k = sum over l != k of |g_kl|^2 / g_kk.
std::vector<double> capacity_mf_from_gram(const CMatrix& g, double n0);

/// Optimal per-terminal capacity for a uniform line in front of an
/// infinitely long surface.
double capacity_1d_optimal(double theta, double zeta, double p_hat, double wavelength, double n0);

/// (1/theta) times the integral over |f| < theta/2 of log(1 + G(f)/N0), with
/// G(f) = zeta P theta * #{m : |f - m theta| < 1/2}. Midpoint rule on
/// `grid_points` cells.
double folded_spectrum_capacity(double theta, double zeta, double power, double n0,
                                int grid_points = 100000);

/// Interference power of the matched filter on the uniform line.
double mf_interference_1d(double theta, double zeta, double power);

/// Matched-filter per-terminal capacity on the uniform line.
double capacity_1d_mf(double theta, double zeta, double power, double n0);

/// Power spectrum of the plane autocorrelation (1/2) sinc(2 tau / lambda):
/// (lambda / 4 pi) / sqrt(1/lambda^2 - s^2) for s < 1/lambda, +inf at the
/// edge, 0 beyond.
double psd_2d(double s, double wavelength);

/// Space-normalized capacity of the infinite plane, nats/s/Hz/m^2.
double capacity_2d_closed(double wavelength, double p_hat, double n0);

/// C / dx (1D) or C / (dx dy) (2D, 3D projected onto the plane).
double normalized_capacity(double per_terminal_capacity, const SpacingSpec& spacing);

/// Least-squares slope of C_hat against log(P_hat / N0) over `snr_points`.
/// Raises DomainError when the points span less than one decade.
double signal_dims_estimate(const std::function<double(double)>& c_hat_of_snr,
                            std::span<const double> snr_points);

/// Closed-form pre-log of the uniform line: 2/lambda for theta >= 1,
/// 2 theta / lambda otherwise.
double signal_dims_1d(double theta, double wavelength);

/// pi / lambda^2.
double signal_dims_2d(double wavelength);

}  // namespace lis
