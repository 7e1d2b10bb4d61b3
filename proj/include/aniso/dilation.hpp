#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "aniso/common.hpp"

namespace aniso {

/// Validated expansive matrix together with the invariant ellipsoid data.
///
/// The ellipsoid quadratic form is the convergent series
///     P = sum_{k>=0} w^{2k} (A^{-k})^T (A^{-k}),   1 < w < min |eigenvalue|,
/// which satisfies |A^{-1}u|_P <= w^{-1} |u|_P for every u. The radius c is
/// chosen so the ellipsoid Delta = {x : x^T P x < c^2} has volume 1, and
/// r in (1, w] keeps Delta subset r Delta subset A Delta.
class ExpansiveDilation {
 public:
  Matrix A, A_inv, A_t;
  int n = 0;
  double b = 0.0;  // |det A|
  double lambda_minus = 0.0, lambda_plus = 0.0;
  double min_eig_mod = 0.0, max_eig_mod = 0.0;
  bool normal = false;  // A A^T == A^T A (within tolerance)
  double w = 0.0;
  Matrix P;
  double c = 0.0;
  double r = 0.0;

  bool ellipsoid_built() const { return c > 0.0; }

  /// A^k for |k| <= kPowerCache (cached once the ellipsoid is built).
  const Matrix& power(int k) const;
  static constexpr int kPowerCache = 62;

  /// sqrt(x^T P x)
  double p_norm(const Vector& x) const { return std::sqrt(x.dot(P * x)); }

  /// Membership of y in B_k = A^k Delta (open, strict inequality).
  bool in_B(int k, const Vector& y) const;

  /// Uniform sample of Delta.
  Vector sample_delta(Rng& rng) const;

  /// Uniform sample of the shell B_{k+1} \ B_k (rejection from B_{k+1}).
  Vector sample_shell(int k, Rng& rng) const;

  /// Axis-aligned half-widths of B_k's bounding box.
  Vector aabb_half_widths(int k) const;

 private:
  friend ExpansiveDilation validate_expansive(const Matrix&, double);
  friend void build_ellipsoid(ExpansiveDilation&, double);
  std::vector<Matrix> powers_;  // index k + kPowerCache
  Matrix sqrt_p_inv_;
};

using DilationPtr = std::shared_ptr<const ExpansiveDilation>;

/// Checks Definition-level expansiveness and fills the spectral data and w.
/// Throws Error("DimensionError" | "Singular" | "NotExpansive").
ExpansiveDilation validate_expansive(const Matrix& M, double delta = 0.05);

/// Fills P, c, r and the power cache. Throws Error("SeriesDivergence") if the
/// series truncation does not reach tol within 10^4 terms.
void build_ellipsoid(ExpansiveDilation& d, double tol = 1e-12);

/// validate + build, shared ownership.
DilationPtr make_dilation(const Matrix& M, double delta = 0.05);

/// Dilation re-derived from the transpose matrix (same eigenvalue moduli,
/// its own ellipsoid).
DilationPtr make_transpose(const DilationPtr& d);

/// Matrix text format "a,b;c,d" (rows ';', entries ',').
Matrix parse_matrix(const std::string& text);
std::string format_matrix(const Matrix& m);

struct DilatedBall {
  Vector center;
  int k = 0;
  DilationPtr dilation;

  double volume() const { return std::pow(dilation->b, k); }
  bool contains(const Vector& x) const { return dilation->in_B(k, x - center); }
  Vector aabb_lo() const { return center - dilation->aabb_half_widths(k); }
  Vector aabb_hi() const { return center + dilation->aabb_half_widths(k); }
};

/// Step homogeneous quasi-norm rho (rho_* in transpose mode): value b^k on
/// the shell B_{k+1} \ B_k, 0 at the origin.
class StepQuasiNorm {
 public:
  struct Value {
    double value = 0.0;
    std::optional<int> exponent;
  };

  StepQuasiNorm(DilationPtr d, bool transpose_mode = false, int k_min = -60,
                int k_max = 60);

  /// Throws Error("OutOfRange") when x falls outside [B_{k_min}, B_{k_max}].
  Value operator()(const Vector& x) const;

  const ExpansiveDilation& dilation() const { return *dil_; }
  DilationPtr dilation_ptr() const { return dil_; }
  bool transpose_mode() const { return transpose_; }
  int k_min() const { return k_min_; }
  int k_max() const { return k_max_; }

 private:
  DilationPtr dil_;  // already transposed when transpose_ is set
  bool transpose_;
  int k_min_, k_max_;
};

/// Empirical extrema of |x| / rho(x)^{ln lambda_pm / ln b} per scale, for the
/// quasi-norm vs Euclidean-norm comparison. Row m holds the large-scale
/// bounds on the shell with exponent m and the mirrored small-scale bounds
/// on the shell with exponent -m.
struct NormComparisonRow {
  int m = 0;
  double large_min_lambda_minus = 0.0;  // min |x|/rho^{ln l-/ln b}, rho = b^m
  double large_max_lambda_plus = 0.0;   // max |x|/rho^{ln l+/ln b}
  double small_min_lambda_plus = 0.0;   // min |x|/rho^{ln l+/ln b}, rho = b^-m
  double small_max_lambda_minus = 0.0;  // max |x|/rho^{ln l-/ln b}
};

std::vector<NormComparisonRow> norm_comparison_profile(const StepQuasiNorm& q,
                                                       int m_lo, int m_hi,
                                                       int samples_per_scale,
                                                       std::uint64_t seed);

/// Monte-Carlo volume of B_k (rejection inside the bounding box).
double monte_carlo_ball_volume(const ExpansiveDilation& d, int k, int samples,
                               std::uint64_t seed);

}  // namespace aniso
