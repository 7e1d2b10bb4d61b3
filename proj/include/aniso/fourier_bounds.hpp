#pragma once

#include <complex>
#include <vector>

#include "aniso/atoms.hpp"
#include "aniso/common.hpp"
#include "aniso/dilation.hpp"
#include "aniso/grid.hpp"

namespace aniso {

/// Pointwise Fourier envelope E(xi) = max{ rho_*(xi)^{1/q0-1}, rho_*(xi)^{1/p_- -1} }
/// built on the transpose quasi-norm; E(0) = 0.
class Envelope {
 public:
  Envelope(DilationPtr dilation, double q0, double p_minus)
      : rho_star_(std::move(dilation), /*transpose=*/true), q0_(q0), p_minus_(p_minus) {}

  double operator()(const Vector& xi) const {
    auto v = rho_star_(xi);
    if (!v.exponent) return 0.0;
    return std::max(std::pow(v.value, 1.0 / q0_ - 1.0),
                    std::pow(v.value, 1.0 / p_minus_ - 1.0));
  }

  const StepQuasiNorm& rho_star() const { return rho_star_; }
  double q0() const { return q0_; }
  double p_minus() const { return p_minus_; }

 private:
  StepQuasiNorm rho_star_;
  double q0_, p_minus_;
};

/// Frequency samples organized by rho_*-shell: points with exponent m lie on
/// B*_{m+1} \ B*_m, generated by mapping uniform base-shell samples through
/// (A*)^m so the exponent label is exact by homogeneity.
struct FrequencyGrid {
  struct Point {
    Vector xi;
    int m;  // rho_*(xi) = b^m
  };
  std::vector<Point> points;

  static FrequencyGrid shells(const StepQuasiNorm& rho_star, int m_lo, int m_hi,
                              int per_shell, std::uint64_t seed);
};

struct ShellStat {
  int m;
  double rho_star;
  double metric;
};

struct BoundCheck {
  double c_hat = 0.0;
  int shell_at_sup = 0;
  std::vector<ShellStat> profile;  // per-shell sup of the checked ratio
};

/// Lemma-level derivative decay: per multi-index alpha the empirical constant
///   sup_xi |d^alpha (F D_A^{i0} a)(xi)| / (b^{-i0/q} ||a||_q min{1,|xi|^{d-|alpha|+1}}).
struct DerivativeDecayRow {
  std::vector<int> alpha;
  double c_hat;
};

std::vector<DerivativeDecayRow> derivative_decay_check(
    const Atom& a, const std::vector<std::vector<int>>& alphas, const FrequencyGrid& grid);

/// Pointwise bound of the single-atom transform against the envelope.
BoundCheck pointwise_bound_check(const Atom& a, const Envelope& env,
                                 const FrequencyGrid& grid);

/// F(xi) = sum_i lambda_i hat a_i(xi)
std::complex<double> reconstruct_F(const AtomicDecomposition& dec, const Vector& xi);

/// sup |F| / (N_atomic * E) over the grid, N_atomic = atomic_quasi_norm.
BoundCheck theorem31_check(const AtomicDecomposition& dec, const Envelope& env,
                           const FrequencyGrid& grid, double theta0);

/// Near-origin decay profile: R_m = max over the shell with rho_* = b^{-m} of
/// |F(xi)| / rho_*(xi)^{1/q0-1}, for m in [m_lo, m_hi] (positive, counting
/// inward). decayed is R_{m_hi} <= 0.1 R_{m_lo+2}; the fitted log_b-slope is
/// compared against 1 - 1/q0 + (d+1) ln(lambda_-)/ln b by the caller.
struct OriginDecayProfile {
  std::vector<ShellStat> rows;  // metric = R_m, rho_star = b^{-m}
  double fitted_slope = 0.0;    // R_m ~ b^{-slope * m}
  bool decayed = false;
};

OriginDecayProfile origin_decay_profile(const AtomicDecomposition& dec,
                                        const Envelope& env, int m_lo, int m_hi,
                                        int per_shell, std::uint64_t seed);

double theoretical_decay_exponent(double q0, int d, const ExpansiveDilation& dil);

/// Weighted Hardy-Littlewood integral
///   I = ( sum_shells int |F|^{q0} min{rho_*^{q0-q0/p_- -1}, rho_*^{q0-2}} )^{1/q0}
/// over rho_* in (b^-M, b^M), with per-shell sample counts scaling with the
/// shell volume (capped at 2^14). Throws Error("NotConverged") when the tail
/// certificate fails at M = 12.
struct HardyLittlewoodResult {
  double integral = 0.0;
  double ratio = 0.0;           // integral / N_atomic
  double tail_increment = 0.0;  // relative increment from cutoff M-2 to M
  bool converged = false;
  std::vector<ShellStat> shells;
};

HardyLittlewoodResult hardy_littlewood_integral(const AtomicDecomposition& dec,
                                                const Envelope& env, int m_cutoff,
                                                double samples_density,
                                                std::uint64_t seed, double theta0);

}  // namespace aniso
