#include "aniso/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>

namespace aniso::kernels {

namespace {

double sum_neon(const double* x, std::size_t n) {
  float64x2_t a0 = vdupq_n_f64(0.0);
  float64x2_t a1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    a0 = vaddq_f64(a0, vld1q_f64(x + i));
    a1 = vaddq_f64(a1, vld1q_f64(x + i + 2));
  }
  double acc = vaddvq_f64(vaddq_f64(a0, a1));
  for (; i < n; ++i) acc += x[i];
  return acc;
}

double dot_neon(const double* x, const double* y, std::size_t n) {
  float64x2_t a0 = vdupq_n_f64(0.0);
  float64x2_t a1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    a0 = vfmaq_f64(a0, vld1q_f64(x + i), vld1q_f64(y + i));
    a1 = vfmaq_f64(a1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
  }
  double acc = vaddvq_f64(vaddq_f64(a0, a1));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void dot2_neon(const double* x, const double* c, const double* s, std::size_t n,
               double* vc, double* vs) {
  float64x2_t ac = vdupq_n_f64(0.0);
  float64x2_t as = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t v = vld1q_f64(x + i);
    ac = vfmaq_f64(ac, v, vld1q_f64(c + i));
    as = vfmaq_f64(as, v, vld1q_f64(s + i));
  }
  double rc = vaddvq_f64(ac), rs = vaddvq_f64(as);
  for (; i < n; ++i) {
    rc += x[i] * c[i];
    rs += x[i] * s[i];
  }
  *vc = rc;
  *vs = rs;
}

double abs_pow_sum_neon(const double* x, std::size_t n, double q) {
  std::size_t i = 0;
  double acc;
  if (q == 1.0) {
    float64x2_t a = vdupq_n_f64(0.0);
    for (; i + 2 <= n; i += 2) a = vaddq_f64(a, vabsq_f64(vld1q_f64(x + i)));
    acc = vaddvq_f64(a);
    for (; i < n; ++i) acc += std::fabs(x[i]);
  } else if (q == 2.0) {
    float64x2_t a = vdupq_n_f64(0.0);
    for (; i + 2 <= n; i += 2) {
      float64x2_t v = vld1q_f64(x + i);
      a = vfmaq_f64(a, v, v);
    }
    acc = vaddvq_f64(a);
    for (; i < n; ++i) acc += x[i] * x[i];
  } else {
    acc = 0.0;
    for (; i < n; ++i) {
      double a = std::fabs(x[i]);
      if (a > 0.0) acc += std::pow(a, q);
    }
  }
  return acc;
}

double max_abs_neon(const double* x, std::size_t n) {
  float64x2_t m = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) m = vmaxq_f64(m, vabsq_f64(vld1q_f64(x + i)));
  double r = vmaxvq_f64(m);
  for (; i < n; ++i) r = std::max(r, std::fabs(x[i]));
  return r;
}

// Same block-rotation scheme as the AVX2 variant, two lanes wide.
std::complex<double> phase_dot_neon(const double* x, std::size_t n, double phase0,
                                    double dphase) {
  constexpr std::size_t kBlock = 256;  // multiple of 2
  float64x2_t acc_re = vdupq_n_f64(0.0);
  float64x2_t acc_im = vdupq_n_f64(0.0);
  const float64x2_t rc = vdupq_n_f64(std::cos(2.0 * dphase));
  const float64x2_t rs = vdupq_n_f64(std::sin(2.0 * dphase));

  const std::size_t n2 = n - n % 2;
  std::size_t i = 0;
  while (i < n2) {
    std::size_t block_end = std::min(n2, i + kBlock);
    double a0 = phase0 + static_cast<double>(i) * dphase;
    double cs[2] = {std::cos(a0), std::cos(a0 + dphase)};
    double sn[2] = {std::sin(a0), std::sin(a0 + dphase)};
    float64x2_t cos_v = vld1q_f64(cs);
    float64x2_t sin_v = vld1q_f64(sn);
    for (; i + 2 <= block_end; i += 2) {
      float64x2_t v = vld1q_f64(x + i);
      acc_re = vfmaq_f64(acc_re, v, cos_v);
      acc_im = vfmaq_f64(acc_im, v, sin_v);
      float64x2_t nc = vfmsq_f64(vmulq_f64(cos_v, rc), sin_v, rs);
      float64x2_t ns = vfmaq_f64(vmulq_f64(sin_v, rc), cos_v, rs);
      cos_v = nc;
      sin_v = ns;
    }
  }
  double re = vaddvq_f64(acc_re), im = vaddvq_f64(acc_im);
  for (; i < n; ++i) {
    double ph = phase0 + static_cast<double>(i) * dphase;
    re += x[i] * std::cos(ph);
    im += x[i] * std::sin(ph);
  }
  return {re, im};
}

const Ops kNeon = {
    "neon",           sum_neon,     dot_neon, dot2_neon,
    abs_pow_sum_neon, max_abs_neon, phase_dot_neon,
};

}  // namespace

const Ops* neon_ops() { return &kNeon; }

}  // namespace aniso::kernels

#endif  // aarch64
