#pragma once

// Spatial spectrum of the unit-distance line channel
//   phi(x) = (1 + x^2)^(-3/4) exp(-2 pi j sqrt(1 + x^2) / lambda),
// i.e. Phi(f) = integral of phi(x) exp(-2 pi j f x) dx, and the capacity of a
// channel with power spectrum |Phi(f)|^2.

#include "lis/types.hpp"

namespace lis {

enum class SpectrumMode {
  Numeric,       // |Phi(f)| by oscillatory quadrature
  BesselApprox,  // 2 |K0(2 pi sqrt(f^2 - 1/lambda^2))|
  RectPsd,       // idealized power spectrum: lambda on |f| < 1/lambda, else 0
};

struct SpectrumOptions {
  // Successive accelerated estimates must differ by less than this.
  double tolerance = 1e-4;
  int max_half_periods = 2000;
};

/// Phi(f) itself. Each one-sided integral is split at the points where the
/// phase advances by half a turn; the partial sums are extrapolated with
/// Wynn's epsilon algorithm.
cplx spectrum_numeric(double f, double wavelength, const SpectrumOptions& opt = {});

/// Nonnegative spectrum value for the requested mode. Numeric and
/// BesselApprox return a magnitude |Phi(f)|; RectPsd returns the power
/// spectrum |Phi(f)|^2 of the brick-wall model.
double channel_spectrum(double f, double wavelength, SpectrumMode mode,
                        const SpectrumOptions& opt = {});

enum class SpectralCapacityMode { Numeric, Sinc };

/// Integral over f of log(1 + |Phi(f)|^2), nats/s/Hz. Sinc mode is the
/// brick-wall value (2 / lambda) log(1 + lambda).
double spectral_capacity(double wavelength, SpectralCapacityMode mode,
                         const SpectrumOptions& opt = {});

}  // namespace lis
