// Compiled with -mavx2 -mfma; only reached after a CPUID check.

#include <immintrin.h>

#include <cmath>

#include "lis/kernels.hpp"

namespace lis::kernels::detail {
namespace {

inline __m256d poly_sin(__m256d a, __m256d z) {
  // Taylor series through a^17; |a| <= pi/4 keeps the truncation below 1e-16.
  __m256d p = _mm256_set1_pd(1.0 / 355687428096000.0);
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(-1.0 / 1307674368000.0));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.0 / 6227020800.0));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(-1.0 / 39916800.0));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.0 / 362880.0));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(-1.0 / 5040.0));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.0 / 120.0));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(-1.0 / 6.0));
  p = _mm256_mul_pd(p, z);
  return _mm256_fmadd_pd(p, a, a);
}

inline __m256d poly_cos(__m256d z) {
  __m256d p = _mm256_set1_pd(1.0 / 20922789888000.0);
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(-1.0 / 87178291200.0));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.0 / 479001600.0));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(-1.0 / 3628800.0));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.0 / 40320.0));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(-1.0 / 720.0));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.0 / 24.0));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(-0.5));
  return _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.0));
}

// sin and cos of 2*pi*frac for frac in [-0.5, 0.5].
inline void sincos_turns(__m256d frac, __m256d& s, __m256d& c) {
  constexpr int kNearest = _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC;
  const __m256d quarter = _mm256_set1_pd(0.25);
  const __m256d q = _mm256_round_pd(_mm256_mul_pd(frac, _mm256_set1_pd(4.0)), kNearest);
  const __m256d rem = _mm256_fnmadd_pd(q, quarter, frac);
  const __m256d a = _mm256_mul_pd(rem, _mm256_set1_pd(2.0 * kPi));
  const __m256d z = _mm256_mul_pd(a, a);
  const __m256d ps = poly_sin(a, z);
  const __m256d pc = poly_cos(z);

  // Quadrant index in {0,1,2,3}.
  const __m256d four = _mm256_set1_pd(4.0);
  const __m256d qm = _mm256_sub_pd(
      q, _mm256_mul_pd(four, _mm256_floor_pd(_mm256_mul_pd(q, quarter))));
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d three = _mm256_set1_pd(3.0);
  const __m256d is1 = _mm256_cmp_pd(qm, one, _CMP_EQ_OQ);
  const __m256d is2 = _mm256_cmp_pd(qm, two, _CMP_EQ_OQ);
  const __m256d is3 = _mm256_cmp_pd(qm, three, _CMP_EQ_OQ);
  const __m256d swap = _mm256_or_pd(is1, is3);
  const __m256d sin_neg = _mm256_or_pd(is2, is3);
  const __m256d cos_neg = _mm256_or_pd(is1, is2);
  const __m256d sign = _mm256_set1_pd(-0.0);

  __m256d ss = _mm256_blendv_pd(ps, pc, swap);
  __m256d cc = _mm256_blendv_pd(pc, ps, swap);
  ss = _mm256_xor_pd(ss, _mm256_and_pd(sin_neg, sign));
  cc = _mm256_xor_pd(cc, _mm256_and_pd(cos_neg, sign));
  s = ss;
  c = cc;
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

void synthesize_avx2(const SynthesisArgs& a, double* re, double* im) {
  constexpr int kNearest = _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC;
  const __m256d tx = _mm256_set1_pd(a.tx);
  const __m256d ty = _mm256_set1_pd(a.ty);
  const __m256d tz2 = _mm256_set1_pd(a.tz * a.tz);
  const __m256d scale = _mm256_set1_pd(std::sqrt(a.tz) / (2.0 * std::sqrt(kPi)));
  const __m256d inv_wl = _mm256_set1_pd(a.inv_wavelength);
  const __m256d sign = _mm256_set1_pd(-0.0);

  std::size_t i = 0;
  for (; i + 4 <= a.n; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(a.x + i), tx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(a.y + i), ty);
    const __m256d e = _mm256_fmadd_pd(dx, dx, _mm256_fmadd_pd(dy, dy, tz2));
    const __m256d r = _mm256_sqrt_pd(e);
    const __m256d denom = _mm256_mul_pd(r, _mm256_sqrt_pd(r));
    const __m256d amp =
        _mm256_div_pd(_mm256_mul_pd(_mm256_loadu_pd(a.sqrt_w + i), scale), denom);
    const __m256d turns = _mm256_mul_pd(r, inv_wl);
    const __m256d frac = _mm256_sub_pd(turns, _mm256_round_pd(turns, kNearest));
    __m256d s, c;
    sincos_turns(frac, s, c);
    _mm256_storeu_pd(re + i, _mm256_mul_pd(amp, c));
    _mm256_storeu_pd(im + i, _mm256_xor_pd(_mm256_mul_pd(amp, s), sign));
  }
  if (i < a.n) {
    SynthesisArgs tail = a;
    tail.x += i;
    tail.y += i;
    tail.sqrt_w += i;
    tail.n -= i;
    synthesize_scalar(tail, re + i, im + i);
  }
}

DotResult conj_dot_avx2(const double* are, const double* aim, const double* bre,
                   const double* bim, std::size_t n) {
  __m256d sr0 = _mm256_setzero_pd();
  __m256d si0 = _mm256_setzero_pd();
  __m256d sr1 = _mm256_setzero_pd();
  __m256d si1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d ar0 = _mm256_loadu_pd(are + i);
    const __m256d ai0 = _mm256_loadu_pd(aim + i);
    const __m256d br0 = _mm256_loadu_pd(bre + i);
    const __m256d bi0 = _mm256_loadu_pd(bim + i);
    const __m256d ar1 = _mm256_loadu_pd(are + i + 4);
    const __m256d ai1 = _mm256_loadu_pd(aim + i + 4);
    const __m256d br1 = _mm256_loadu_pd(bre + i + 4);
    const __m256d bi1 = _mm256_loadu_pd(bim + i + 4);
    sr0 = _mm256_fmadd_pd(ar0, br0, _mm256_fmadd_pd(ai0, bi0, sr0));
    si0 = _mm256_fmadd_pd(ar0, bi0, _mm256_fnmadd_pd(ai0, br0, si0));
    sr1 = _mm256_fmadd_pd(ar1, br1, _mm256_fmadd_pd(ai1, bi1, sr1));
    si1 = _mm256_fmadd_pd(ar1, bi1, _mm256_fnmadd_pd(ai1, br1, si1));
  }
  double sr = hsum(_mm256_add_pd(sr0, sr1));
  double si = hsum(_mm256_add_pd(si0, si1));
  for (; i < n; ++i) {
    sr += are[i] * bre[i] + aim[i] * bim[i];
    si += are[i] * bim[i] - aim[i] * bre[i];
  }
  return {sr, si};
}

}  // namespace lis::kernels::detail
