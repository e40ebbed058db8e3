#include "lis/capacity.hpp"

#include <algorithm>
#include <cmath>

#include "lis/em_channel.hpp"
#include "lis/error.hpp"
#include "lis/numeric.hpp"

namespace lis {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(name) + " must be positive");
}

template <typename Mat>
void require_hermitian_psd(const Mat& g) {
  if (g.rows() != g.cols() || g.rows() == 0) throw DomainError("Gram matrix must be square");
  const double scale = std::max(1e-300, g.cwiseAbs().maxCoeff());
  if ((g - g.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw NotPsdError("Gram matrix is not Hermitian");
  }
  const double k = static_cast<double>(g.rows());
  const double slack = 1e-8 * std::max(std::real(g.trace()), 0.0) / k + 1e-300;
  Mat shifted = g;
  shifted.diagonal().array() += slack;
  if (Eigen::LLT<Mat>(shifted).info() != Eigen::Success) {
    throw NotPsdError("Gram matrix is not positive semi-definite");
  }
}

template <typename Mat>
double logdet_impl(const Mat& g, double n0) {
  require_hermitian_psd(g);
  Mat m = g / n0;
  m.diagonal().array() += 1.0;
  const Eigen::LLT<Mat> llt(m);
  if (llt.info() != Eigen::Success) throw NotPsdError("I + G/N0 is not positive definite");
  return 2.0 * llt.matrixLLT().diagonal().real().array().log().sum();
}

// x - log(1 + x), accurate for small x.
double x_minus_log1p(double x) {
  if (std::abs(x) < 1e-4) {
    return x * x * (0.5 - x * (1.0 / 3.0 - x * (0.25 - x / 5.0)));
  }
  return x - std::log1p(x);
}

}  // namespace

FoldingParams FoldingParams::from_theta(double theta) {
  require_positive(theta, "theta");
  FoldingParams p;
  p.theta = theta;
  const double inv = 1.0 / theta;
  const double nearest = std::round(inv);
  if (std::abs(inv - nearest) <= 1e-12 * std::max(1.0, inv)) {
    p.beta = static_cast<int>(nearest);
    p.alpha = 0.0;
  } else {
    p.beta = static_cast<int>(std::floor(inv));
    p.alpha = inv - p.beta;
  }
  return p;
}

FoldingParams FoldingParams::from_spacing(double wavelength, double dx) {
  require_positive(wavelength, "wavelength");
  require_positive(dx, "dx");
  return from_theta(wavelength / (2.0 * dx));
}

void SpacingSpec::validate() const {
  require_positive(dx, "dx");
  if (dimension == Dimension::One) {
    if (dy) throw DomainError("dy is only meaningful for 2D/3D spacing");
  } else {
    if (!dy) throw DomainError("dy is required for 2D/3D spacing");
    require_positive(*dy, "dy");
  }
}

double SpacingSpec::measure() const {
  validate();
  return dimension == Dimension::One ? dx : dx * *dy;
}

double logdet_sum(const CMatrix& g, double n0) {
  require_positive(n0, "n0");
  if (g.rows() != g.cols() || g.rows() == 0) throw DomainError("Gram matrix must be square");
  if (g.imag().cwiseAbs().maxCoeff() == 0.0) return logdet_impl(RMatrix(g.real()), n0);
  return logdet_impl(g, n0);
}

double capacity_logdet(const CMatrix& g, double n0) {
  return logdet_sum(g, n0) / static_cast<double>(g.rows());
}

double capacity_logdet(const GramMatrix& g, double n0) { return capacity_logdet(g.g, n0); }

std::vector<double> capacity_mf_from_gram(const CMatrix& g, double n0) {
  require_positive(n0, "n0");
  if (g.rows() != g.cols() || g.rows() == 0) throw DomainError("Gram matrix must be square");
  const Eigen::Index k = g.rows();
  std::vector<double> rates(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) {
    const double gkk = g(i, i).real();
    if (!(gkk > 0.0)) throw DomainError("Gram diagonal must be strictly positive");
    const double row = g.row(i).cwiseAbs2().sum() - std::norm(g(i, i));
    const double interference = std::max(0.0, row) / gkk;
    rates[static_cast<std::size_t>(i)] = std::log1p(gkk / (n0 + interference));
  }
  return rates;
}

double capacity_1d_optimal(double theta, double zeta, double p_hat, double wavelength, double n0) {
  require_positive(zeta, "zeta");
  require_positive(p_hat, "p_hat");
  require_positive(wavelength, "wavelength");
  require_positive(n0, "n0");
  const auto fp = FoldingParams::from_theta(theta);
  const double snr = wavelength * zeta * p_hat / (2.0 * n0);
  return fp.alpha * std::log1p((fp.beta + 1) * snr) + (1.0 - fp.alpha) * std::log1p(fp.beta * snr);
}

double folded_spectrum_capacity(double theta, double zeta, double power, double n0,
                                int grid_points) {
  require_positive(theta, "theta");
  require_positive(zeta, "zeta");
  require_positive(power, "power");
  require_positive(n0, "n0");
  if (grid_points < 1000) throw DomainError("folded_spectrum_capacity needs >= 1000 grid points");
  const double h = theta / grid_points;
  // Only images with |m theta| < 1/2 + theta/2 can cover the fundamental
  // interval.
  const int mmax = static_cast<int>(std::ceil((0.5 + theta) / theta)) + 1;
  double acc = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    const double f = -0.5 * theta + (i + 0.5) * h;
    int count = 0;
    for (int m = -mmax; m <= mmax; ++m) {
      if (std::abs(f - m * theta) < 0.5) ++count;
    }
    acc += std::log1p(zeta * power * theta * count / n0);
  }
  return acc * h / theta;
}

double mf_interference_1d(double theta, double zeta, double power) {
  require_positive(zeta, "zeta");
  require_positive(power, "power");
  const auto fp = FoldingParams::from_theta(theta);
  const double b = fp.beta;
  const double a = fp.alpha;
  const double i = zeta * power * (theta * theta * (b * b + 2.0 * a * b + a) - 1.0);
  // Exactly zero at integer 1/theta; clamp rounding residue.
  return fp.alpha == 0.0 ? 0.0 : std::max(0.0, i);
}

double capacity_1d_mf(double theta, double zeta, double power, double n0) {
  require_positive(n0, "n0");
  const double i = mf_interference_1d(theta, zeta, power);
  return std::log1p(zeta * power / (n0 + i));
}

double psd_2d(double s, double wavelength) {
  require_positive(wavelength, "wavelength");
  if (!(s >= 0.0)) throw DomainError("spatial frequency must be non-negative");
  const double edge = 1.0 / wavelength;
  if (s > edge) return 0.0;
  if (s == edge) return kInf;
  // sqrt(1/lambda^2 - s^2) = sqrt((1/lambda - s)(1/lambda + s))
  return wavelength / (4.0 * kPi) / std::sqrt((edge - s) * (edge + s));
}

double capacity_2d_closed(double wavelength, double p_hat, double n0) {
  require_positive(wavelength, "wavelength");
  require_positive(p_hat, "p_hat");
  require_positive(n0, "n0");
  const double n = wavelength * p_hat / (4.0 * kPi * n0);
  const double nl = n * wavelength;
  // N^2 log(N lambda / (1 + N lambda)) + N / lambda = N^2 (x - log(1 + x)),
  // x = 1 / (N lambda).
  return kPi * (std::log1p(nl) / (wavelength * wavelength) + n * n * x_minus_log1p(1.0 / nl));
}

double normalized_capacity(double per_terminal_capacity, const SpacingSpec& spacing) {
  return per_terminal_capacity / spacing.measure();
}

double signal_dims_estimate(const std::function<double(double)>& c_hat_of_snr,
                            std::span<const double> snr_points) {
  if (snr_points.size() < 2) throw DomainError("need at least two SNR points");
  double lo = kInf, hi = 0.0;
  for (double s : snr_points) {
    require_positive(s, "snr point");
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  if (hi / lo < 10.0) throw DomainError("SNR points span less than one decade; slope fit is ill-conditioned");
  std::vector<double> x, y;
  for (double s : snr_points) {
    x.push_back(std::log(s));
    y.push_back(c_hat_of_snr(s));
  }
  return ols_slope(x, y);
}

double signal_dims_1d(double theta, double wavelength) {
  require_positive(theta, "theta");
  require_positive(wavelength, "wavelength");
  return theta >= 1.0 ? 2.0 / wavelength : 2.0 * theta / wavelength;
}

double signal_dims_2d(double wavelength) {
  require_positive(wavelength, "wavelength");
  return kPi / (wavelength * wavelength);
}

}  // namespace lis
