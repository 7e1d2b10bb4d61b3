#include "aniso/dilation.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace aniso {

const Matrix& ExpansiveDilation::power(int k) const {
  if (std::abs(k) > kPowerCache || powers_.empty())
    fail("OutOfRange", "matrix power cache exceeded at k=" + std::to_string(k));
  return powers_[static_cast<std::size_t>(k + kPowerCache)];
}

bool ExpansiveDilation::in_B(int k, const Vector& y) const {
  return p_norm(power(-k) * y) < c;
}

Vector ExpansiveDilation::sample_delta(Rng& rng) const {
  return c * (sqrt_p_inv_ * rng.unit_ball(n));
}

Vector ExpansiveDilation::sample_shell(int k, Rng& rng) const {
  // uniform in B_{k+1}, rejected into the shell; acceptance ratio 1 - 1/b
  for (int tries = 0; tries < 10000; ++tries) {
    Vector x = power(k + 1) * sample_delta(rng);
    if (!in_B(k, x)) return x;
  }
  fail("OutOfRange", "shell rejection sampling failed");
}

Vector ExpansiveDilation::aabb_half_widths(int k) const {
  // B_k = {x : x^T Q x < c^2}, Q = (A^-k)^T P A^-k; the box half-width along
  // axis i is c * sqrt((Q^-1)_ii).
  Matrix ak = power(k);
  Matrix q_inv = ak * P.inverse() * ak.transpose();
  Vector half(n);
  for (int i = 0; i < n; ++i) half[i] = c * std::sqrt(q_inv(i, i));
  return half;
}

ExpansiveDilation validate_expansive(const Matrix& M, double delta) {
  if (M.rows() != M.cols() || M.rows() < 1)
    fail("DimensionError", "matrix must be square and non-empty");
  if (!M.allFinite()) fail("DimensionError", "matrix entries must be finite");

  ExpansiveDilation d;
  d.n = static_cast<int>(M.rows());
  d.A = M;
  d.A_t = M.transpose();

  double det = M.determinant();
  if (std::abs(det) < 1e-14) fail("Singular", "determinant within 1e-14 of zero");
  d.A_inv = M.inverse();
  d.b = std::abs(det);

  Eigen::EigenSolver<Matrix> es(M);
  if (es.info() != Eigen::Success) fail("Singular", "eigenvalue computation failed");
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int i = 0; i < d.n; ++i) {
    double mod = std::abs(es.eigenvalues()[i]);
    lo = std::min(lo, mod);
    hi = std::max(hi, mod);
  }
  if (lo <= 1.0 + 1e-10)
    fail("NotExpansive", "eigenvalue modulus " + std::to_string(lo) + " <= 1");
  d.min_eig_mod = lo;
  d.max_eig_mod = hi;

  Matrix comm = M * M.transpose() - M.transpose() * M;
  d.normal = comm.cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, hi * hi);
  if (d.normal) {
    d.lambda_minus = lo;
    d.lambda_plus = hi;
  } else {
    d.lambda_minus = (1.0 - delta) * lo;
    d.lambda_plus = (1.0 + delta) * hi;
    if (d.lambda_minus <= 1.0) d.lambda_minus = 0.5 * (1.0 + lo);  // keep > 1
  }

  d.w = 0.5 * (1.0 + d.lambda_minus);
  return d;
}

void build_ellipsoid(ExpansiveDilation& d, double tol) {
  const int n = d.n;
  Matrix p = Matrix::Zero(n, n);
  Matrix term = Matrix::Identity(n, n);  // (A^-k)^T A^-k at k = 0
  Matrix a_inv_t = d.A_inv.transpose();
  double w2 = d.w * d.w;
  double scale = 1.0;
  int k = 0;
  for (;; ++k) {
    if (k > 10000)
      fail("SeriesDivergence",
           "ellipsoid series did not reach tol within 1e4 terms (w too close to "
           "min eigenvalue modulus)");
    p += scale * term;
    if (scale * term.norm() < tol && k > 0) break;
    term = a_inv_t * term * d.A_inv;
    scale *= w2;
  }
  d.P = 0.5 * (p + p.transpose());  // exact symmetry

  // volume of {x : x^T P x < c^2} = c^n * omega_n / sqrt(det P) = 1
  double det_p = d.P.determinant();
  d.c = std::pow(std::sqrt(det_p) / unit_ball_volume(n), 1.0 / n);

  Eigen::SelfAdjointEigenSolver<Matrix> saes(d.P);
  d.sqrt_p_inv_ = saes.operatorInverseSqrt();

  d.powers_.resize(2 * ExpansiveDilation::kPowerCache + 1);
  d.powers_[ExpansiveDilation::kPowerCache] = Matrix::Identity(n, n);
  for (int j = 1; j <= ExpansiveDilation::kPowerCache; ++j) {
    d.powers_[ExpansiveDilation::kPowerCache + j] =
        d.A * d.powers_[ExpansiveDilation::kPowerCache + j - 1];
    d.powers_[ExpansiveDilation::kPowerCache - j] =
        d.A_inv * d.powers_[ExpansiveDilation::kPowerCache - j + 1];
  }

  // empirical inflation margin: min over boundary samples of c / |A^-1 x|_P,
  // always >= w by the contraction property; containment re-checked below
  Rng rng(0x9e3779b97f4a7c15ULL);
  double margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 1000; ++i) {
    Vector u = d.sqrt_p_inv_ * rng.unit_ball(n);
    double nu = d.p_norm(u);
    if (nu < 1e-12) continue;
    Vector x = u * (d.c / nu);  // |x|_P = c
    margin = std::min(margin, d.c / d.p_norm(d.A_inv * x));
  }
  d.r = std::min(d.w, margin);
  for (int i = 0; i < 1000; ++i) {
    Vector x = d.sample_delta(rng);
    if (d.p_norm(d.A_inv * (d.r * x)) >= d.c)
      fail("SeriesDivergence", "containment r*Delta in A*Delta failed");
  }
}

DilationPtr make_dilation(const Matrix& M, double delta) {
  auto d = std::make_shared<ExpansiveDilation>(validate_expansive(M, delta));
  build_ellipsoid(*d);
  return d;
}

DilationPtr make_transpose(const DilationPtr& d) { return make_dilation(d->A_t); }

Matrix parse_matrix(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::stringstream row_stream(text);
  std::string row;
  while (std::getline(row_stream, row, ';')) {
    std::vector<double> entries;
    std::stringstream entry_stream(row);
    std::string entry;
    while (std::getline(entry_stream, entry, ',')) {
      try {
        std::size_t pos = 0;
        double v = std::stod(entry, &pos);
        while (pos < entry.size() && std::isspace(static_cast<unsigned char>(entry[pos])))
          ++pos;
        if (pos != entry.size()) throw std::invalid_argument(entry);
        entries.push_back(v);
      } catch (const std::exception&) {
        fail("DimensionError", "bad matrix entry '" + entry + "'");
      }
    }
    if (!entries.empty()) rows.push_back(std::move(entries));
  }
  if (rows.empty()) fail("DimensionError", "empty matrix text");
  std::size_t cols = rows[0].size();
  for (const auto& r : rows)
    if (r.size() != cols) fail("DimensionError", "ragged matrix rows");
  Matrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) m(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
  return m;
}

std::string format_matrix(const Matrix& m) {
  std::string out;
  char buf[32];
  for (int i = 0; i < m.rows(); ++i) {
    if (i) out += ';';
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      out += buf;
    }
  }
  return out;
}

StepQuasiNorm::StepQuasiNorm(DilationPtr d, bool transpose_mode, int k_min, int k_max)
    : dil_(transpose_mode ? make_transpose(d) : std::move(d)),
      transpose_(transpose_mode),
      k_min_(k_min),
      k_max_(k_max) {
  if (!dil_->ellipsoid_built()) fail("OutOfRange", "dilation ellipsoid not built");
}

StepQuasiNorm::Value StepQuasiNorm::operator()(const Vector& x) const {
  if (x.lpNorm<Eigen::Infinity>() < 1e-300) return {0.0, std::nullopt};
  if (!dil_->in_B(k_max_, x))
    fail("OutOfRange", "point outside B_{k_max}");
  if (dil_->in_B(k_min_, x))
    fail("OutOfRange", "point inside B_{k_min}");
  // membership in B_k is monotone in k; find the smallest k with x in B_k
  int lo = k_min_, hi = k_max_;
  while (hi - lo > 1) {
    int mid = lo + (hi - lo) / 2;
    if (dil_->in_B(mid, x))
      hi = mid;
    else
      lo = mid;
  }
  return {std::pow(dil_->b, hi - 1), hi - 1};
}

std::vector<NormComparisonRow> norm_comparison_profile(const StepQuasiNorm& q, int m_lo,
                                                       int m_hi, int samples_per_scale,
                                                       std::uint64_t seed) {
  const ExpansiveDilation& d = q.dilation();
  const double log_b = std::log(d.b);
  const double e_minus = std::log(d.lambda_minus) / log_b;
  const double e_plus = std::log(d.lambda_plus) / log_b;
  Rng rng(seed);
  std::vector<NormComparisonRow> rows;
  for (int m = m_lo; m <= m_hi; ++m) {
    NormComparisonRow row;
    row.m = m;
    row.large_min_lambda_minus = std::numeric_limits<double>::infinity();
    row.small_min_lambda_plus = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples_per_scale; ++i) {
      // exponent(x) == m on the shell B_{m+1} \ B_m, so rho = b^m
      Vector x = d.sample_shell(m, rng);
      double rho = std::pow(d.b, m);
      row.large_min_lambda_minus =
          std::min(row.large_min_lambda_minus, x.norm() / std::pow(rho, e_minus));
      row.large_max_lambda_plus =
          std::max(row.large_max_lambda_plus, x.norm() / std::pow(rho, e_plus));

      Vector y = d.sample_shell(-m, rng);
      double rho_s = std::pow(d.b, -m);
      row.small_min_lambda_plus =
          std::min(row.small_min_lambda_plus, y.norm() / std::pow(rho_s, e_plus));
      row.small_max_lambda_minus =
          std::max(row.small_max_lambda_minus, y.norm() / std::pow(rho_s, e_minus));
    }
    rows.push_back(row);
  }
  return rows;
}

double monte_carlo_ball_volume(const ExpansiveDilation& d, int k, int samples,
                               std::uint64_t seed) {
  Rng rng(seed);
  Vector half = d.aabb_half_widths(k);
  double box_vol = 1.0;
  for (int i = 0; i < d.n; ++i) box_vol *= 2.0 * half[i];
  int inside = 0;
  Vector x(d.n);
  for (int s = 0; s < samples; ++s) {
    for (int i = 0; i < d.n; ++i) x[i] = rng.uniform(-half[i], half[i]);
    if (d.in_B(k, x)) ++inside;
  }
  return box_vol * inside / samples;
}

}  // namespace aniso
