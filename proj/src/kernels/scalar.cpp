#include "survkit/kernels.hpp"

namespace survkit::kernels::scalar {

namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    acc += a[i] * b[i];
  return acc;
}

double dot3(const double* a, const double* b, const double* c, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    acc += a[i] * b[i] * c[i];
  return acc;
}

void sq_ratio(const double* h, const double* logh, double* out,
              std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double r = h[i] / logh[i];
    out[i] = r * r;
  }
}

double weighted_sq_residual(const double* c, const double* y, double shift,
                            std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - shift;
    acc += c[i] * r * r;
  }
  return acc;
}

} // namespace

const Ops ops = {dot, dot3, sq_ratio, weighted_sq_residual, "scalar"};

} // namespace survkit::kernels::scalar
