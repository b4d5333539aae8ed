#include "spectail/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define SPECTAIL_X86 1
#include <immintrin.h>
#else
#define SPECTAIL_X86 0
#endif

namespace spectail::kernels::avx2 {

#if SPECTAIL_X86

#define SPECTAIL_AVX2 __attribute__((target("avx2,fma")))

namespace {

SPECTAIL_AVX2 inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

}  // namespace

bool available() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

SPECTAIL_AVX2 double dot(const double* x, const double* y, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
    a1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), a1);
  }
  for (; i + 4 <= n; i += 4) a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
  double s = hsum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

SPECTAIL_AVX2 void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

SPECTAIL_AVX2 void scale(double a, double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) x[i] *= a;
}

SPECTAIL_AVX2 double sum_squares(const double* x, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d u = _mm256_loadu_pd(x + i);
    const __m256d v = _mm256_loadu_pd(x + i + 4);
    a0 = _mm256_fmadd_pd(u, u, a0);
    a1 = _mm256_fmadd_pd(v, v, a1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d u = _mm256_loadu_pd(x + i);
    a0 = _mm256_fmadd_pd(u, u, a0);
  }
  double s = hsum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) s += x[i] * x[i];
  return s;
}

// Rows of a sparse graph adjacency are short (degree ~ d), so the gather path
// only kicks in for rows with at least four entries.
SPECTAIL_AVX2 void csr_matvec(const CsrView& m, const double* x, double* y) {
  const std::size_t rows = m.rows();
  const std::int32_t* col = m.col.data();
  const double* val = m.val.data();
  for (std::size_t r = 0; r < rows; ++r) {
    std::int32_t p = m.row_ptr[r];
    const std::int32_t end = m.row_ptr[r + 1];
    double s = 0.0;
    if (end - p >= 4) {
      __m256d acc = _mm256_setzero_pd();
      for (; p + 4 <= end; p += 4) {
        const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(col + p));
        const __m256d xv = _mm256_i32gather_pd(x, idx, 8);
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(val + p), xv, acc);
      }
      s = hsum(acc);
    }
    for (; p < end; ++p) s += val[p] * x[col[p]];
    y[r] = s;
  }
}

#else

bool available() { return false; }
double dot(const double* x, const double* y, std::size_t n) { return scalar::dot(x, y, n); }
void axpy(double a, const double* x, double* y, std::size_t n) { scalar::axpy(a, x, y, n); }
void scale(double a, double* x, std::size_t n) { scalar::scale(a, x, n); }
double sum_squares(const double* x, std::size_t n) { return scalar::sum_squares(x, n); }
void csr_matvec(const CsrView& m, const double* x, double* y) { scalar::csr_matvec(m, x, y); }

#endif

}  // namespace spectail::kernels::avx2
