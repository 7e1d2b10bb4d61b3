#include "aniso/atoms.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <map>

#include "aniso/kernels.hpp"

namespace aniso {

namespace {

/// Multi-indices of total degree <= d in n variables, graded order.
std::vector<std::vector<int>> multi_indices(int n, int d) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int axis, int left) {
    if (axis == n - 1) {
      cur[static_cast<std::size_t>(axis)] = left;
      out.push_back(cur);
      return;
    }
    for (int use = 0; use <= left; ++use) {
      cur[static_cast<std::size_t>(axis)] = use;
      rec(axis + 1, left - use);
    }
  };
  for (int total = 0; total <= d; ++total) rec(0, total);
  return out;
}

double monomial(const Vector& u, const std::vector<int>& gamma) {
  double m = 1.0;
  for (int a = 0; a < u.size(); ++a)
    for (int p = 0; p < gamma[static_cast<std::size_t>(a)]; ++p) m *= u[a];
  return m;
}

/// C-infinity window exp(-1/(1-t)) with t = |A^-k (x-center)|_P^2 / c^2,
/// identically zero outside the open ball.
double bump_window(const DilatedBall& ball, const Vector& x) {
  const ExpansiveDilation& d = *ball.dilation;
  Vector u = d.power(-ball.k) * (x - ball.center);
  double t = u.dot(d.P * u) / (d.c * d.c);
  if (t >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - t));
}

double size_bound(const SpacePtr& space, const DilatedBall& ball, double q) {
  return std::pow(ball.volume(), 1.0 / q) / space->indicator_norm(ball);
}

}  // namespace

int default_d(const ExponentBundle& e, const ExpansiveDilation& d) {
  double raw = (1.0 / e.theta0 - 1.0) * std::log(d.b) / std::log(d.lambda_minus);
  return std::max(static_cast<int>(std::floor(raw)), 0);
}

Atom make_atom(const SpacePtr& space, const DilatedBall& ball, double q, int d,
               std::uint64_t seed, int per_axis) {
  const ExpansiveDilation& dil = *ball.dilation;
  const int n = dil.n;
  if (per_axis <= 0) per_axis = default_resolution(n);

  Box box{ball.aabb_lo(), ball.aabb_hi()};
  Vector scale = 0.5 * (box.hi - box.lo);  // centered coordinates u = (x-c)/scale

  Rng rng(seed ^ 0x51a7b2c9d3e4f605ULL);
  auto indices = multi_indices(n, d);
  std::size_t m = indices.size();

  // rough field: window * (random polynomial of degree d+1 + random cosine)
  auto rough_indices = multi_indices(n, d + 1);
  std::vector<double> coeffs(rough_indices.size());
  for (double& c : coeffs) c = rng.normal();
  Vector wave = rng.gaussian(n) * 1.5;
  double phase = rng.uniform(0.0, 2.0 * M_PI);

  GridFunction g(box, std::vector<int>(static_cast<std::size_t>(n), per_axis));
  GridFunction window = g;
  std::vector<Vector> centered(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    Vector x = g.point(i);
    double w = bump_window(ball, x);
    window[i] = w;
    Vector u = (x - ball.center).cwiseQuotient(scale);
    centered[i] = u;
    if (w == 0.0) continue;
    double poly = 0.0;
    for (std::size_t j = 0; j < rough_indices.size(); ++j)
      poly += coeffs[j] * monomial(u, rough_indices[j]);
    g[i] = w * (poly + std::cos(2.0 * M_PI * (wave.dot(u) + phase)));
  }

  // moment kill in centered coordinates: solve <w u^gamma, u^beta> c = <g, u^beta>;
  // the monomial change of basis is triangular, so absolute moments vanish too
  Matrix gram(m, m);
  Vector rhs(m);
  double vol = g.cell_volume();
  for (std::size_t row = 0; row < m; ++row) {
    double r = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (g[i] != 0.0) r += g[i] * monomial(centered[i], indices[row]);
    rhs[static_cast<int>(row)] = r * vol;
    for (std::size_t col = row; col < m; ++col) {
      double acc = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i)
        if (window[i] != 0.0)
          acc += window[i] * monomial(centered[i], indices[row]) *
                 monomial(centered[i], indices[col]);
      gram(static_cast<int>(row), static_cast<int>(col)) = acc * vol;
      gram(static_cast<int>(col), static_cast<int>(row)) = acc * vol;
    }
  }
  Eigen::JacobiSVD<Matrix> svd(gram, Eigen::ComputeThinU | Eigen::ComputeThinV);
  double cond = svd.singularValues()(0) /
                svd.singularValues()(static_cast<int>(m) - 1);
  if (!std::isfinite(cond) || cond > 1e12)
    fail("GramSingular",
         "moment Gram system condition " + std::to_string(cond) +
             " (grid too coarse for d=" + std::to_string(d) + ")");
  Vector corr = svd.solve(rhs);

  for (std::size_t i = 0; i < g.size(); ++i) {
    if (window[i] == 0.0) continue;
    double poly = 0.0;
    for (std::size_t j = 0; j < m; ++j)
      poly += corr[static_cast<int>(j)] * monomial(centered[i], indices[j]);
    g[i] -= window[i] * poly;
  }

  // rescale down into the admissible size, never up
  double bound = size_bound(space, ball, q);
  double nrm = lq_norm(g, q);
  if (nrm > 0.0 && nrm > bound) {
    double s = bound / nrm;
    for (std::size_t i = 0; i < g.size(); ++i) g[i] *= s;
  }

  Atom a{std::move(g), ball, q, d, space, seed, {}};
  AtomReport rep = validate_atom(a);
  a.certs = {rep.support_leak, rep.size_slack, rep.max_moment};
  return a;
}

Atom make_sign_atom(const SpacePtr& space, const DilatedBall& ball, double q,
                    int per_axis) {
  if (ball.dilation->n != 1) fail("DimensionError", "sign atom is one-dimensional");
  if (per_axis <= 0) per_axis = default_resolution(1);
  Box box{ball.aabb_lo(), ball.aabb_hi()};
  if (per_axis % 2) ++per_axis;  // symmetric cells, so the odd moment is exact
  double center = ball.center[0];
  GridFunction g =
      GridFunction::sample(box, {per_axis}, [&](const Vector& x) {
        if (!ball.contains(x)) return 0.0;
        return x[0] > center ? 1.0 : (x[0] < center ? -1.0 : 0.0);
      });
  double bound = size_bound(space, ball, q);
  double nrm = lq_norm(g, q);
  if (nrm > bound) {
    double s = bound / nrm;
    for (std::size_t i = 0; i < g.size(); ++i) g[i] *= s;
  }
  Atom a{std::move(g), ball, q, 0, space, 0, {}};
  AtomReport rep = validate_atom(a);
  a.certs = {rep.support_leak, rep.size_slack, rep.max_moment};
  return a;
}

AtomReport validate_atom(const Atom& a) {
  AtomReport rep;
  double sup = lq_norm(a.f, std::numeric_limits<double>::infinity());
  if (sup == 0.0) {
    rep.pass = true;
    return rep;
  }

  double leak = 0.0;
  for (std::size_t i = 0; i < a.f.size(); ++i)
    if (a.f[i] != 0.0 && !a.ball.contains(a.f.point(i)))
      leak = std::max(leak, std::fabs(a.f[i]));
  rep.support_leak = leak / sup;

  double bound = size_bound(a.space, a.ball, a.q);
  rep.size_slack = lq_norm(a.f, a.q) / bound;

  Vector half = a.ball.dilation->aabb_half_widths(a.ball.k);
  double diam = 2.0 * half.norm();
  double worst = 0.0;
  for (const auto& gamma : multi_indices(a.f.dim(), a.d)) {
    int total = 0;
    for (int gi : gamma) total += gi;
    double moment = quadrature(monomial_weighted(a.f, gamma));
    worst = std::max(worst, std::fabs(moment) / (sup * std::pow(diam, total)));
  }
  rep.max_moment = worst;

  rep.pass = rep.support_leak <= rep.support_tol &&
             rep.size_slack <= 1.0 + rep.size_tol && rep.max_moment <= rep.moment_tol;
  return rep;
}

namespace {

/// Exact 1-D evaluation: the indicator stack is piecewise constant on the
/// arrangement of the ball intervals.
double stack_norm_1d(const AtomicDecomposition& dec, double theta0,
                     const std::vector<double>& weights) {
  std::vector<double> cuts;
  for (const Atom& a : dec.atoms) {
    cuts.push_back(a.ball.aabb_lo()[0]);
    cuts.push_back(a.ball.aabb_hi()[0]);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<std::pair<double, double>> parts;  // (value, measure)
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    double mid = 0.5 * (cuts[s] + cuts[s + 1]);
    double acc = 0.0;
    for (std::size_t j = 0; j < dec.size(); ++j) {
      const DilatedBall& b = dec.atoms[j].ball;
      if (mid > b.aabb_lo()[0] && mid < b.aabb_hi()[0]) acc += weights[j];
    }
    if (acc > 0.0)
      parts.emplace_back(std::pow(acc, 1.0 / theta0), cuts[s + 1] - cuts[s]);
  }
  return dec.atoms[0].space->simple_norm(parts);
}

double stack_norm_grid(const AtomicDecomposition& dec, double theta0,
                       const std::vector<double>& weights) {
  const int n = dec.atoms[0].ball.dilation->n;
  Vector lo = dec.atoms[0].ball.aabb_lo();
  Vector hi = dec.atoms[0].ball.aabb_hi();
  for (const Atom& a : dec.atoms) {
    lo = lo.cwiseMin(a.ball.aabb_lo());
    hi = hi.cwiseMax(a.ball.aabb_hi());
  }
  int per_axis = n == 1 ? 8192 : (n == 2 ? 512 : 64);
  GridFunction stack(Box{lo, hi}, std::vector<int>(static_cast<std::size_t>(n), per_axis));
  for (std::size_t i = 0; i < stack.size(); ++i) {
    Vector x = stack.point(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < dec.size(); ++j)
      if (dec.atoms[j].ball.contains(x)) acc += weights[j];
    stack[i] = acc > 0.0 ? std::pow(acc, 1.0 / theta0) : 0.0;
  }
  return dec.atoms[0].space->norm(stack);
}

}  // namespace

double atomic_quasi_norm(const AtomicDecomposition& dec, double theta0) {
  if (dec.lambdas.size() != dec.atoms.size())
    fail("DimensionError", "coefficient/atom count mismatch");
  if (dec.size() == 0) fail("DimensionError", "empty decomposition");
  bool all_zero = true;
  std::vector<double> weights(dec.size());  // [ |lambda_j| / ||1_{B_j}|| ]^{theta0}
  for (std::size_t j = 0; j < dec.size(); ++j) {
    double mag = std::abs(dec.lambdas[j]);
    if (mag > 0.0) all_zero = false;
    weights[j] =
        mag == 0.0
            ? 0.0
            : std::pow(mag / dec.atoms[j].space->indicator_norm(dec.atoms[j].ball), theta0);
  }
  if (all_zero) return 0.0;
  const int n = dec.atoms[0].ball.dilation->n;
  if (n == 1 && dec.atoms[0].space->rearrangement_invariant())
    return stack_norm_1d(dec, theta0, weights);
  return stack_norm_grid(dec, theta0, weights);
}

CoefficientBound coefficient_bound_check(const AtomicDecomposition& dec, double theta0) {
  CoefficientBound out;
  for (const auto& l : dec.lambdas) out.lhs += std::abs(l);
  out.rhs = atomic_quasi_norm(dec, theta0);
  out.ratio = out.rhs > 0.0 ? out.lhs / out.rhs : 0.0;
  return out;
}

AtomicDecomposition make_random_decomposition(const SpacePtr& space,
                                              const DilationPtr& dilation, double q,
                                              int d, std::uint64_t seed,
                                              const DecompositionParams& params) {
  Rng rng(seed);
  AtomicDecomposition dec;
  double decay = rng.uniform(params.decay_lo, params.decay_hi);
  double magnitude = rng.uniform(0.8, 1.25);
  for (int i = 0; i < params.count; ++i) {
    int k = rng.uniform_int(params.scale_lo, params.scale_hi);
    Vector center = Vector::Zero(dilation->n);
    if (params.center_spread > 0.0)
      for (int a = 0; a < dilation->n; ++a)
        center[a] = rng.uniform(-params.center_spread, params.center_spread);
    DilatedBall ball{center, k, dilation};
    dec.atoms.push_back(make_atom(space, ball, q, d, rng.next_u64(), params.per_axis));
    double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    dec.lambdas.emplace_back(sign * magnitude, 0.0);
    magnitude *= decay;
  }
  return dec;
}

}  // namespace aniso
