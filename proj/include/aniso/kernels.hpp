#pragma once

#include <complex>
#include <cstddef>

namespace aniso::kernels {

// Data-parallel reduction kernels behind the grid/quadrature layer.
// One scalar reference implementation (the oracle) plus SIMD variants
// (AVX2 on x86-64, NEON on aarch64) selected once at runtime. Every
// variant reduces in a fixed element order for a given vector length,
// so repeated calls are bit-reproducible on the same machine.
struct Ops {
  const char* name;
  double (*sum)(const double* x, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  // vc = sum x[i]*c[i], vs = sum x[i]*s[i] in one pass.
  void (*dot2)(const double* x, const double* c, const double* s, std::size_t n,
               double* vc, double* vs);
  // sum |x[i]|^q; q = 1 and q = 2 take vectorized fast paths.
  double (*abs_pow_sum)(const double* x, std::size_t n, double q);
  double (*max_abs)(const double* x, std::size_t n);
  // sum x[j] * exp(i*(phase0 + j*dphase)), the Fourier quadrature core.
  std::complex<double> (*phase_dot)(const double* x, std::size_t n, double phase0,
                                    double dphase);
};

/// Plain-loop reference implementation; independent oracle for the variants.
const Ops& scalar_ops();

/// Best variant supported by this CPU (falls back to scalar_ops()).
const Ops& active_ops();

/// SIMD variants, or nullptr when the build/CPU does not support them.
const Ops* avx2_ops();
const Ops* neon_ops();

inline double sum(const double* x, std::size_t n) { return active_ops().sum(x, n); }
inline double dot(const double* x, const double* y, std::size_t n) {
  return active_ops().dot(x, y, n);
}
inline double abs_pow_sum(const double* x, std::size_t n, double q) {
  return active_ops().abs_pow_sum(x, n, q);
}
inline double max_abs(const double* x, std::size_t n) {
  return active_ops().max_abs(x, n);
}
inline std::complex<double> phase_dot(const double* x, std::size_t n, double phase0,
                                      double dphase) {
  return active_ops().phase_dot(x, n, phase0, dphase);
}

}  // namespace aniso::kernels
