#include "aniso/kernels.hpp"

#include <cmath>

namespace aniso::kernels {

namespace {

double sum_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void dot2_scalar(const double* x, const double* c, const double* s, std::size_t n,
                 double* vc, double* vs) {
  double ac = 0.0, as = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ac += x[i] * c[i];
    as += x[i] * s[i];
  }
  *vc = ac;
  *vs = as;
}

double abs_pow_sum_scalar(const double* x, std::size_t n, double q) {
  double acc = 0.0;
  if (q == 1.0) {
    for (std::size_t i = 0; i < n; ++i) acc += std::fabs(x[i]);
  } else if (q == 2.0) {
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      double a = std::fabs(x[i]);
      if (a > 0.0) acc += std::pow(a, q);
    }
  }
  return acc;
}

double max_abs_scalar(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i]));
  return m;
}

std::complex<double> phase_dot_scalar(const double* x, std::size_t n, double phase0,
                                      double dphase) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double ph = phase0 + static_cast<double>(i) * dphase;
    re += x[i] * std::cos(ph);
    im += x[i] * std::sin(ph);
  }
  return {re, im};
}

const Ops kScalar = {
    "scalar",          sum_scalar,     dot_scalar, dot2_scalar,
    abs_pow_sum_scalar, max_abs_scalar, phase_dot_scalar,
};

const Ops* pick_active() {
  if (const Ops* a = avx2_ops()) return a;
  if (const Ops* v = neon_ops()) return v;
  return &kScalar;
}

}  // namespace

const Ops& scalar_ops() { return kScalar; }

const Ops& active_ops() {
  static const Ops* active = pick_active();
  return *active;
}

#if !(defined(__x86_64__) || defined(_M_X64))
const Ops* avx2_ops() { return nullptr; }
#endif

#if !defined(__aarch64__)
const Ops* neon_ops() { return nullptr; }
#endif

}  // namespace aniso::kernels
