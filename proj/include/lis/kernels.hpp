#pragma once

// Data-parallel inner loops of the Gram-matrix quadrature.
//
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2+FMA variant. The variant is picked once at startup from CPUID; the
// LIS_SIMD environment variable ("scalar" or "avx2") overrides the choice.
// Tests compare the variants against each other directly through table().

#include <cstddef>
#include <string_view>

namespace lis::kernels {

// Plain pair so the AVX2 translation unit does not instantiate library inline
// functions that the linker could share with baseline code.
struct DotResult {
  double re;
  double im;
};

inline constexpr double kPi = 3.14159265358979323846;

enum class Isa { Scalar, Avx2 };

struct SynthesisArgs {
  const double* x;       // quadrature node abscissae
  const double* y;
  const double* sqrt_w;  // square roots of the quadrature weights
  std::size_t n;
  double tx, ty, tz;     // terminal position
  double inv_wavelength;
};

// Writes sqrt_w[i] * s(x[i], y[i]) in split real/imaginary form, where s is
// the line-of-sight effective channel of the terminal.
using SynthesizeFn = void (*)(const SynthesisArgs& args, double* re, double* im);

// Returns sum_i conj(a_i) * b_i for split real/imaginary inputs.
using ConjDotFn = DotResult (*)(const double* are, const double* aim, const double* bre,
                           const double* bim, std::size_t n);

struct KernelTable {
  Isa isa;
  SynthesizeFn synthesize;
  ConjDotFn conj_dot;
};

bool isa_supported(Isa isa);
const KernelTable& table(Isa isa);

/// Kernel table selected for this process.
const KernelTable& active();
std::string_view isa_name(Isa isa);

namespace detail {
void synthesize_scalar(const SynthesisArgs& args, double* re, double* im);
DotResult conj_dot_scalar(const double* are, const double* aim, const double* bre,
                     const double* bim, std::size_t n);
#if defined(LIS_HAVE_AVX2_TU)
void synthesize_avx2(const SynthesisArgs& args, double* re, double* im);
DotResult conj_dot_avx2(const double* are, const double* aim, const double* bre,
                   const double* bim, std::size_t n);
#endif
}  // namespace detail

}  // namespace lis::kernels
