#pragma once

#include <cstddef>
#include <string>

namespace survkit::kernels {

// Data-parallel inner loops used by the objective assembly and the
// weighted least-squares accumulation. Each kernel has a scalar
// reference implementation and an AVX2 variant; the active one is
// selected at runtime from CPU capabilities. The two variants are
// equivalence-tested against each other.

struct Ops {
  // sum_i a[i]*b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum_i a[i]*b[i]*c[i]
  double (*dot3)(const double* a, const double* b, const double* c,
                 std::size_t n);
  // out[i] = (h[i]/logh[i])^2
  void (*sq_ratio)(const double* h, const double* logh, double* out,
                   std::size_t n);
  // sum_i c[i]*(y[i]-shift)^2
  double (*weighted_sq_residual)(const double* c, const double* y,
                                 double shift, std::size_t n);
  const char* name;
};

namespace scalar {
extern const Ops ops;
}
namespace avx2 {
extern const Ops ops; // present only when compiled in; dispatch checks CPU
}

// Active implementation for this process. Honors SURVKIT_KERNELS=scalar
// for forcing the reference path.
const Ops& active();

// Named lookup, for equivalence tests. Throws std::out_of_range on
// unknown or unavailable names.
const Ops& by_name(const std::string& name);

bool avx2_available();

} // namespace survkit::kernels
