#include <cmath>

#include "lis/kernels.hpp"

namespace lis::kernels::detail {

void synthesize_scalar(const SynthesisArgs& a, double* re, double* im) {
  const double scale = std::sqrt(a.tz) / (2.0 * std::sqrt(kPi));
  for (std::size_t i = 0; i < a.n; ++i) {
    const double dx = a.x[i] - a.tx;
    const double dy = a.y[i] - a.ty;
    const double e = a.tz * a.tz + dx * dx + dy * dy;
    const double r = std::sqrt(e);
    const double amp = a.sqrt_w[i] * scale / (r * std::sqrt(r));
    // Reduce the phase to whole turns before scaling by 2*pi.
    const double turns = r * a.inv_wavelength;
    const double frac = turns - std::nearbyint(turns);
    const double ang = 2.0 * kPi * frac;
    re[i] = amp * std::cos(ang);
    im[i] = -amp * std::sin(ang);
  }
}

DotResult conj_dot_scalar(const double* are, const double* aim, const double* bre,
                     const double* bim, std::size_t n) {
  double sr = 0.0;
  double si = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sr += are[i] * bre[i] + aim[i] * bim[i];
    si += are[i] * bim[i] - aim[i] * bre[i];
  }
  return {sr, si};
}

}  // namespace lis::kernels::detail
