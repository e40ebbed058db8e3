#include <cstdlib>
#include <string_view>

#include "lis/kernels.hpp"

namespace lis::kernels {
namespace {

constexpr KernelTable kScalar{Isa::Scalar, &detail::synthesize_scalar,
                              &detail::conj_dot_scalar};
#if defined(LIS_HAVE_AVX2_TU)
constexpr KernelTable kAvx2{Isa::Avx2, &detail::synthesize_avx2, &detail::conj_dot_avx2};
#endif

const KernelTable& select() {
  const char* env = std::getenv("LIS_SIMD");
  if (env != nullptr && std::string_view(env) == "scalar") return kScalar;
  if (isa_supported(Isa::Avx2)) return table(Isa::Avx2);
  return kScalar;
}

}  // namespace

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(LIS_HAVE_AVX2_TU)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Isa isa) {
#if defined(LIS_HAVE_AVX2_TU)
  if (isa == Isa::Avx2 && isa_supported(Isa::Avx2)) return kAvx2;
#else
  (void)isa;
#endif
  return kScalar;
}

const KernelTable& active() {
  static const KernelTable& chosen = select();
  return chosen;
}

std::string_view isa_name(Isa isa) {
  return isa == Isa::Avx2 ? "avx2" : "scalar";
}

}  // namespace lis::kernels
