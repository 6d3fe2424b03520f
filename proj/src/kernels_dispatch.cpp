#include <cstdlib>
#include <cstring>

#include "qtel/kernels.hpp"

namespace qtel::kernels {
namespace {

const Backend* resolve() {
  const char* pref = std::getenv("QTEL_SIMD");
  if (pref != nullptr && std::strcmp(pref, "scalar") == 0) return &scalar_backend();
#if defined(QTEL_HAVE_AVX2)
  const bool cpu_ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  if (pref != nullptr && std::strcmp(pref, "avx2") == 0 && cpu_ok) return &avx2_backend();
  if ((pref == nullptr || std::strcmp(pref, "auto") == 0) && cpu_ok) return &avx2_backend();
#endif
  return &scalar_backend();
}

}  // namespace

const Backend& active() {
  static const Backend* chosen = resolve();
  return *chosen;
}

std::string_view active_name() { return active().name; }

}  // namespace qtel::kernels
