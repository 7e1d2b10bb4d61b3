#include "aniso/grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "aniso/kernels.hpp"

namespace aniso {

GridFunction::GridFunction(Box box, std::vector<int> shape)
    : box_(std::move(box)), shape_(std::move(shape)) {
  const int n = box_.dim();
  if (static_cast<int>(shape_.size()) != n)
    fail("DimensionError", "shape rank does not match box dimension");
  h_ = Vector(n);
  std::size_t total = 1;
  for (int a = 0; a < n; ++a) {
    if (shape_[a] < 2) fail("DimensionError", "shape entries must be >= 2");
    if (box_.hi[a] <= box_.lo[a]) fail("DimensionError", "degenerate box");
    h_[a] = (box_.hi[a] - box_.lo[a]) / shape_[a];
    total *= static_cast<std::size_t>(shape_[a]);
  }
  cell_volume_ = h_.prod();
  values_.assign(total, 0.0);
}

GridFunction GridFunction::sample(Box box, std::vector<int> shape,
                                  const std::function<double(const Vector&)>& f) {
  GridFunction g(std::move(box), std::move(shape));
  for (std::size_t i = 0; i < g.size(); ++i) g.values_[i] = f(g.point(i));
  return g;
}

Vector GridFunction::point(std::size_t i) const {
  const int n = dim();
  Vector x(n);
  std::size_t rest = i;
  for (int a = n - 1; a >= 0; --a) {
    std::size_t idx = rest % static_cast<std::size_t>(shape_[a]);
    rest /= static_cast<std::size_t>(shape_[a]);
    x[a] = box_.lo[a] + (static_cast<double>(idx) + 0.5) * h_[a];
  }
  return x;
}

double GridFunction::evaluate(const Vector& x) const {
  const int n = dim();
  if (n > 8) fail("DimensionError", "evaluate supports dim <= 8");
  // continuous index u with u = j at the center of cell j
  double frac[8];
  int base[8];
  for (int a = 0; a < n; ++a) {
    double u = (x[a] - box_.lo[a]) / h_[a] - 0.5;
    double fl = std::floor(u);
    base[a] = static_cast<int>(fl);
    frac[a] = u - fl;
    if (base[a] < -1 || base[a] > shape_[a] - 1) return 0.0;
  }
  double acc = 0.0;
  for (int corner = 0; corner < (1 << n); ++corner) {
    double wgt = 1.0;
    std::size_t flat = 0;
    bool skip = false;
    for (int a = 0; a < n; ++a) {
      int off = (corner >> a) & 1;
      double wa = off ? frac[a] : 1.0 - frac[a];
      int idx = base[a] + off;
      wgt *= wa;
      // zero weight, or a neighbor outside the box (implicit zero value)
      if (wgt == 0.0 || idx < 0 || idx >= shape_[a]) {
        skip = true;
        break;
      }
      flat = flat * static_cast<std::size_t>(shape_[a]) + static_cast<std::size_t>(idx);
    }
    if (!skip) acc += wgt * values_[flat];
  }
  return acc;
}

double quadrature(const GridFunction& f) {
  return kernels::sum(f.values().data(), f.size()) * f.cell_volume();
}

double lq_norm(const GridFunction& f, double q) {
  if (q <= 0.0) fail("DimensionError", "lq_norm needs q > 0");
  if (std::isinf(q)) return kernels::max_abs(f.values().data(), f.size());
  double s = kernels::abs_pow_sum(f.values().data(), f.size(), q) * f.cell_volume();
  return std::pow(s, 1.0 / q);
}

GridFunction dilate(const GridFunction& f, const ExpansiveDilation& d, int k) {
  if (k == 0) return f;
  const int n = f.dim();
  if (n != d.n) fail("DimensionError", "dilation dimension mismatch");
  const Matrix& a_k = d.power(k);        // g(x) = f(A^k x)
  const Matrix& a_mk = d.power(-k);      // pull-back of the support box
  // bounding box of A^-k * corners(f.box)
  Vector lo = Vector::Constant(n, std::numeric_limits<double>::infinity());
  Vector hi = -lo;
  for (int corner = 0; corner < (1 << n); ++corner) {
    Vector v(n);
    for (int a = 0; a < n; ++a)
      v[a] = ((corner >> a) & 1) ? f.box().hi[a] : f.box().lo[a];
    Vector img = a_mk * v;
    lo = lo.cwiseMin(img);
    hi = hi.cwiseMax(img);
  }
  GridFunction g(Box{lo, hi}, f.shape());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = f.evaluate(a_k * g.point(i));
  return g;
}

std::complex<double> fourier_at(const GridFunction& f, const Vector& xi) {
  const int n = f.dim();
  const auto& shape = f.shape();
  const int last = shape[n - 1];
  const std::size_t rows = f.size() / static_cast<std::size_t>(last);
  const double two_pi = 2.0 * M_PI;
  const double dphase = -two_pi * f.h()[n - 1] * xi[n - 1];
  const double* data = f.values().data();

  std::complex<double> total = 0.0;
  std::vector<std::size_t> idx(static_cast<std::size_t>(n > 1 ? n - 1 : 0), 0);
  for (std::size_t row = 0; row < rows; ++row) {
    double outer = 0.0;
    for (int a = 0; a < n - 1; ++a)
      outer += (f.box().lo[a] + (static_cast<double>(idx[static_cast<std::size_t>(a)]) + 0.5) * f.h()[a]) * xi[a];
    double phase0 =
        -two_pi * (outer + (f.box().lo[n - 1] + 0.5 * f.h()[n - 1]) * xi[n - 1]);
    total += kernels::phase_dot(data + row * static_cast<std::size_t>(last),
                                static_cast<std::size_t>(last), phase0, dphase);
    for (int a = n - 2; a >= 0; --a) {
      if (++idx[static_cast<std::size_t>(a)] < static_cast<std::size_t>(shape[a])) break;
      idx[static_cast<std::size_t>(a)] = 0;
    }
  }
  return total * f.cell_volume();
}

std::vector<std::complex<double>> fourier_on_grid(const GridFunction& f,
                                                  const std::vector<Vector>& xis) {
  std::vector<std::complex<double>> out(xis.size());
  for (std::size_t i = 0; i < xis.size(); ++i) out[i] = fourier_at(f, xis[i]);
  return out;
}

GridFunction monomial_weighted(const GridFunction& f, const std::vector<int>& alpha) {
  if (static_cast<int>(alpha.size()) != f.dim())
    fail("DimensionError", "multi-index rank mismatch");
  GridFunction g = f;
  for (std::size_t i = 0; i < g.size(); ++i) {
    Vector x = g.point(i);
    double m = 1.0;
    for (int a = 0; a < f.dim(); ++a)
      for (int p = 0; p < alpha[static_cast<std::size_t>(a)]; ++p) m *= x[a];
    g[i] *= m;
  }
  return g;
}

std::complex<double> fourier_derivative_at(const GridFunction& f, const Vector& xi,
                                           const std::vector<int>& alpha) {
  int total = std::accumulate(alpha.begin(), alpha.end(), 0);
  if (total == 0) return fourier_at(f, xi);
  std::complex<double> factor = std::pow(std::complex<double>(0.0, -2.0 * M_PI), total);
  return factor * fourier_at(monomial_weighted(f, alpha), xi);
}

Rearrangement rearrange(const GridFunction& f) {
  std::vector<double> mags;
  mags.reserve(f.size());
  for (double v : f.values())
    if (v != 0.0) mags.push_back(std::fabs(v));
  std::sort(mags.begin(), mags.end(), std::greater<double>());
  Rearrangement r;
  r.support_measure = static_cast<double>(mags.size()) * f.cell_volume();
  double cum = 0.0;
  std::size_t i = 0;
  while (i < mags.size()) {
    std::size_t j = i;
    while (j < mags.size() && mags[j] == mags[i]) ++j;
    cum += static_cast<double>(j - i) * f.cell_volume();
    r.steps.push_back({mags[i], cum});
    i = j;
  }
  return r;
}

double Rearrangement::lq_norm(double q) const {
  if (std::isinf(q)) return steps.empty() ? 0.0 : steps.front().value;
  double acc = 0.0, prev = 0.0;
  for (const Step& s : steps) {
    acc += std::pow(s.value, q) * (s.cumulative - prev);
    prev = s.cumulative;
  }
  return std::pow(acc, 1.0 / q);
}

double Rearrangement::lorentz_norm(double p, double q) const {
  // ||f||_{p,q}^q = sum_i v_i^q (m_i^{q/p} - m_{i-1}^{q/p}) for finite q,
  // from (q/p) integral of t^{q/p-1} f*(t)^q; q = inf: sup t^{1/p} f*(t).
  if (std::isinf(q)) {
    double best = 0.0, prev = 0.0;
    for (const Step& s : steps) {
      best = std::max(best, std::pow(s.cumulative, 1.0 / p) * s.value);
      prev = s.cumulative;
    }
    (void)prev;
    return best;
  }
  double acc = 0.0, prev = 0.0;
  for (const Step& s : steps) {
    acc += std::pow(s.value, q) *
           (std::pow(s.cumulative, q / p) - std::pow(prev, q / p));
    prev = s.cumulative;
  }
  return std::pow(acc, 1.0 / q);
}

}  // namespace aniso
