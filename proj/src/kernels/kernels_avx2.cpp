// AVX2+FMA variants. This translation unit is compiled with -mavx2 -mfma and
// must only be entered after the dispatcher has confirmed CPU support.

#include "moss/kernels/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace moss::kernels {
namespace {

inline double hsum4(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  }
  double acc = hsum4(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double r = hsum4(acc);
  for (; i < n; ++i) r += x[i];
  return r;
}

void add_avx2(const double* x, const double* y, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) out[i] = x[i] + y[i];
}

void sub_avx2(const double* x, const double* y, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) out[i] = x[i] - y[i];
}

void mul_avx2(const double* x, const double* y, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) out[i] = x[i] * y[i];
}

void scale_avx2(const double* x, double a, double* out, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(av, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = a * x[i];
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}

void matmul_acc_avx2(const double* a, const double* b, double* c,
                     std::size_t m, std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = a + i * k;
    double* crow = c + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double av = arow[p];
      if (av == 0.0) continue;
      const double* brow = b + p * n;
      const __m256d avv = _mm256_set1_pd(av);
      std::size_t j = 0;
      for (; j + 4 <= n; j += 4) {
        _mm256_storeu_pd(crow + j,
                         _mm256_fmadd_pd(avv, _mm256_loadu_pd(brow + j),
                                         _mm256_loadu_pd(crow + j)));
      }
      for (; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

void matmul_at_b_acc_avx2(const double* a, const double* b, double* c,
                          std::size_t k, std::size_t m, std::size_t n) {
  for (std::size_t p = 0; p < k; ++p) {
    const double* arow = a + p * m;
    const double* brow = b + p * n;
    for (std::size_t i = 0; i < m; ++i) {
      const double av = arow[i];
      if (av == 0.0) continue;
      double* crow = c + i * n;
      const __m256d avv = _mm256_set1_pd(av);
      std::size_t j = 0;
      for (; j + 4 <= n; j += 4) {
        _mm256_storeu_pd(crow + j,
                         _mm256_fmadd_pd(avv, _mm256_loadu_pd(brow + j),
                                         _mm256_loadu_pd(crow + j)));
      }
      for (; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

void matmul_a_bt_acc_avx2(const double* a, const double* b, double* c,
                          std::size_t m, std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = a + i * k;
    double* crow = c + i * n;
    for (std::size_t j = 0; j < n; ++j) {
      crow[j] += dot_avx2(arow, b + j * k, k);
    }
  }
}

}  // namespace

const Ops& avx2_ops() {
  static const Ops table = {
      dot_avx2,       sum_avx2,          add_avx2,
      sub_avx2,       mul_avx2,          scale_avx2,
      axpy_avx2,      matmul_acc_avx2,   matmul_at_b_acc_avx2,
      matmul_a_bt_acc_avx2,
  };
  return table;
}

}  // namespace moss::kernels

#endif  // x86-64
