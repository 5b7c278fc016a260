#include "survkit/kernels.hpp"

#include <cstdlib>
#include <stdexcept>

namespace survkit::kernels {

bool avx2_available() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Ops& active() {
  static const Ops& chosen = []() -> const Ops& {
    if (const char* env = std::getenv("SURVKIT_KERNELS")) {
      return by_name(env);
    }
    if (avx2_available())
      return avx2::ops;
    return scalar::ops;
  }();
  return chosen;
}

const Ops& by_name(const std::string& name) {
  if (name == "scalar")
    return scalar::ops;
  if (name == "avx2") {
    if (!avx2_available())
      throw std::out_of_range("avx2 kernels unavailable on this CPU");
    return avx2::ops;
  }
  throw std::out_of_range("unknown kernel set: " + name);
}

} // namespace survkit::kernels
