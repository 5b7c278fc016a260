#include "survkit/kernels.hpp"

#include <immintrin.h>

namespace survkit::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  double s = hsum(acc);
  for (; i < n; ++i)
    s += a[i] * b[i];
  return s;
}

double dot3(const double* a, const double* b, const double* c, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ab =
        _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(ab, _mm256_loadu_pd(c + i), acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i)
    s += a[i] * b[i] * c[i];
  return s;
}

void sq_ratio(const double* h, const double* logh, double* out,
              std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r =
        _mm256_div_pd(_mm256_loadu_pd(h + i), _mm256_loadu_pd(logh + i));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(r, r));
  }
  for (; i < n; ++i) {
    const double r = h[i] / logh[i];
    out[i] = r * r;
  }
}

double weighted_sq_residual(const double* c, const double* y, double shift,
                            std::size_t n) {
  const __m256d vshift = _mm256_set1_pd(shift);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_sub_pd(_mm256_loadu_pd(y + i), vshift);
    acc = _mm256_fmadd_pd(_mm256_mul_pd(r, r), _mm256_loadu_pd(c + i), acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double r = y[i] - shift;
    s += c[i] * r * r;
  }
  return s;
}

} // namespace

const Ops ops = {dot, dot3, sq_ratio, weighted_sq_residual, "avx2"};

} // namespace survkit::kernels::avx2
