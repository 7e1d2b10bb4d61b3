#include "aniso/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

namespace aniso::kernels {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d h = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, h));
}

inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  __m128d h = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_max_sd(lo, h));
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    a0 = _mm256_add_pd(a0, _mm256_loadu_pd(x + i));
    a1 = _mm256_add_pd(a1, _mm256_loadu_pd(x + i + 4));
  }
  double acc = hsum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) acc += x[i];
  return acc;
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
    a1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), a1);
  }
  double acc = hsum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void dot2_avx2(const double* x, const double* c, const double* s, std::size_t n,
               double* vc, double* vs) {
  __m256d ac = _mm256_setzero_pd();
  __m256d as = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    ac = _mm256_fmadd_pd(v, _mm256_loadu_pd(c + i), ac);
    as = _mm256_fmadd_pd(v, _mm256_loadu_pd(s + i), as);
  }
  double rc = hsum(ac), rs = hsum(as);
  for (; i < n; ++i) {
    rc += x[i] * c[i];
    rs += x[i] * s[i];
  }
  *vc = rc;
  *vs = rs;
}

double abs_pow_sum_avx2(const double* x, std::size_t n, double q) {
  const __m256d signmask = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  double acc;
  if (q == 1.0) {
    __m256d a = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4)
      a = _mm256_add_pd(a, _mm256_andnot_pd(signmask, _mm256_loadu_pd(x + i)));
    acc = hsum(a);
    for (; i < n; ++i) acc += std::fabs(x[i]);
  } else if (q == 2.0) {
    __m256d a = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) {
      __m256d v = _mm256_loadu_pd(x + i);
      a = _mm256_fmadd_pd(v, v, a);
    }
    acc = hsum(a);
    for (; i < n; ++i) acc += x[i] * x[i];
  } else {
    // general exponent stays scalar; pow dominates anyway
    acc = 0.0;
    for (; i < n; ++i) {
      double a = std::fabs(x[i]);
      if (a > 0.0) acc += std::pow(a, q);
    }
  }
  return acc;
}

double max_abs_avx2(const double* x, std::size_t n) {
  const __m256d signmask = _mm256_set1_pd(-0.0);
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    m = _mm256_max_pd(m, _mm256_andnot_pd(signmask, _mm256_loadu_pd(x + i)));
  double r = hmax(m);
  for (; i < n; ++i) r = std::max(r, std::fabs(x[i]));
  return r;
}

// Four phase lanes advanced by a rotation recurrence; lane angles are
// recomputed with libm every block to stop rounding drift. Within a block
// the drift is below ~64 ulp rotations, well under the equivalence bound.
std::complex<double> phase_dot_avx2(const double* x, std::size_t n, double phase0,
                                    double dphase) {
  constexpr std::size_t kBlock = 256;  // multiple of 4
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  const double c4 = std::cos(4.0 * dphase);
  const double s4 = std::sin(4.0 * dphase);
  const __m256d rc = _mm256_set1_pd(c4);
  const __m256d rs = _mm256_set1_pd(s4);

  const std::size_t n4 = n - n % 4;
  std::size_t i = 0;
  while (i < n4) {
    std::size_t block_end = std::min(n4, i + kBlock);
    double a0 = phase0 + static_cast<double>(i) * dphase;
    __m256d cos_v = _mm256_set_pd(std::cos(a0 + 3 * dphase), std::cos(a0 + 2 * dphase),
                                  std::cos(a0 + dphase), std::cos(a0));
    __m256d sin_v = _mm256_set_pd(std::sin(a0 + 3 * dphase), std::sin(a0 + 2 * dphase),
                                  std::sin(a0 + dphase), std::sin(a0));
    for (; i + 4 <= block_end; i += 4) {
      __m256d v = _mm256_loadu_pd(x + i);
      acc_re = _mm256_fmadd_pd(v, cos_v, acc_re);
      acc_im = _mm256_fmadd_pd(v, sin_v, acc_im);
      __m256d nc = _mm256_fmsub_pd(cos_v, rc, _mm256_mul_pd(sin_v, rs));
      __m256d ns = _mm256_fmadd_pd(sin_v, rc, _mm256_mul_pd(cos_v, rs));
      cos_v = nc;
      sin_v = ns;
    }
  }
  double re = hsum(acc_re), im = hsum(acc_im);
  for (; i < n; ++i) {
    double ph = phase0 + static_cast<double>(i) * dphase;
    re += x[i] * std::cos(ph);
    im += x[i] * std::sin(ph);
  }
  return {re, im};
}

const Ops kAvx2 = {
    "avx2",           sum_avx2,     dot_avx2, dot2_avx2,
    abs_pow_sum_avx2, max_abs_avx2, phase_dot_avx2,
};

}  // namespace

const Ops* avx2_ops() {
  static const Ops* ops = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")
                              ? &kAvx2
                              : nullptr;
  return ops;
}

}  // namespace aniso::kernels

#endif  // x86-64
