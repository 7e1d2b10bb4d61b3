#include "aniso/fourier_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

namespace aniso {

FrequencyGrid FrequencyGrid::shells(const StepQuasiNorm& rho_star, int m_lo, int m_hi,
                                    int per_shell, std::uint64_t seed) {
  const ExpansiveDilation& d = rho_star.dilation();
  Rng rng(seed);
  FrequencyGrid grid;
  grid.points.reserve(static_cast<std::size_t>((m_hi - m_lo + 1) * per_shell));
  for (int m = m_lo; m <= m_hi; ++m) {
    for (int i = 0; i < per_shell; ++i) {
      // base-shell sample mapped through (A*)^m keeps the exponent exact;
      // verified against rho_* and resampled on the rare boundary flip
      for (int attempt = 0;; ++attempt) {
        Vector base = d.sample_shell(0, rng);
        Vector xi = d.power(m) * base;
        auto v = rho_star(xi);
        if (v.exponent && *v.exponent == m) {
          grid.points.push_back({std::move(xi), m});
          break;
        }
        if (attempt > 100) fail("OutOfRange", "shell sampling failed to label");
      }
    }
  }
  return grid;
}

std::vector<DerivativeDecayRow> derivative_decay_check(
    const Atom& a, const std::vector<std::vector<int>>& alphas,
    const FrequencyGrid& grid) {
  const ExpansiveDilation& dil = *a.ball.dilation;
  const int i0 = a.ball.k;
  GridFunction rescaled = dilate(a.f, dil, i0);  // supported on (a shift of) B_0
  double norm_factor = std::pow(dil.b, -static_cast<double>(i0) / a.q) * lq_norm(a.f, a.q);
  std::vector<DerivativeDecayRow> rows;
  for (const auto& alpha : alphas) {
    int order = 0;
    for (int v : alpha) order += v;
    GridFunction weighted = monomial_weighted(rescaled, alpha);
    std::complex<double> factor =
        std::pow(std::complex<double>(0.0, -2.0 * M_PI), order);
    double c_hat = 0.0;
    for (const auto& pt : grid.points) {
      double mag = std::abs(factor * fourier_at(weighted, pt.xi));
      double envelope =
          norm_factor * std::min(1.0, std::pow(pt.xi.norm(), a.d - order + 1));
      if (envelope > 0.0) c_hat = std::max(c_hat, mag / envelope);
    }
    rows.push_back({alpha, c_hat});
  }
  return rows;
}

namespace {

BoundCheck ratio_profile(const FrequencyGrid& grid,
                         const std::function<double(const Vector&)>& numerator,
                         const std::function<double(const Vector&, int)>& denominator) {
  BoundCheck out;
  std::map<int, double> per_shell;
  for (const auto& pt : grid.points) {
    double den = denominator(pt.xi, pt.m);
    if (den <= 0.0) continue;
    double ratio = numerator(pt.xi) / den;
    auto [it, inserted] = per_shell.try_emplace(pt.m, ratio);
    if (!inserted) it->second = std::max(it->second, ratio);
    if (ratio >= out.c_hat) {
      out.c_hat = ratio;
      out.shell_at_sup = pt.m;
    }
  }
  for (auto& [m, v] : per_shell) out.profile.push_back({m, 0.0, v});
  return out;
}

}  // namespace

BoundCheck pointwise_bound_check(const Atom& a, const Envelope& env,
                                 const FrequencyGrid& grid) {
  const double b = env.rho_star().dilation().b;
  BoundCheck out = ratio_profile(
      grid, [&](const Vector& xi) { return std::abs(fourier_at(a.f, xi)); },
      [&](const Vector& xi, int) { return env(xi); });
  for (auto& row : out.profile) row.rho_star = std::pow(b, row.m);
  return out;
}

std::complex<double> reconstruct_F(const AtomicDecomposition& dec, const Vector& xi) {
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < dec.size(); ++i)
    acc += dec.lambdas[i] * fourier_at(dec.atoms[i].f, xi);
  return acc;
}

BoundCheck theorem31_check(const AtomicDecomposition& dec, const Envelope& env,
                           const FrequencyGrid& grid, double theta0) {
  const double b = env.rho_star().dilation().b;
  double n_atomic = atomic_quasi_norm(dec, theta0);
  BoundCheck out;
  if (n_atomic == 0.0) return out;  // zero decomposition: F = 0, C_hat = 0
  out = ratio_profile(
      grid, [&](const Vector& xi) { return std::abs(reconstruct_F(dec, xi)); },
      [&](const Vector& xi, int) { return n_atomic * env(xi); });
  for (auto& row : out.profile) row.rho_star = std::pow(b, row.m);
  return out;
}

OriginDecayProfile origin_decay_profile(const AtomicDecomposition& dec,
                                        const Envelope& env, int m_lo, int m_hi,
                                        int per_shell, std::uint64_t seed) {
  const double b = env.rho_star().dilation().b;
  const double expo = 1.0 / env.q0() - 1.0;
  FrequencyGrid grid =
      FrequencyGrid::shells(env.rho_star(), -m_hi, -m_lo, per_shell, seed);
  OriginDecayProfile out;
  std::map<int, double> r_of_m;
  for (const auto& pt : grid.points) {
    double rho = std::pow(b, pt.m);
    double ratio = std::abs(reconstruct_F(dec, pt.xi)) / std::pow(rho, expo);
    int m = -pt.m;
    auto [it, inserted] = r_of_m.try_emplace(m, ratio);
    if (!inserted) it->second = std::max(it->second, ratio);
  }
  for (int m = m_lo; m <= m_hi; ++m)
    out.rows.push_back({m, std::pow(b, -m), r_of_m[m]});

  // least-squares slope of log_b R_m against m (R_m ~ b^{-slope m})
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (const auto& row : out.rows) {
    if (row.metric <= 0.0) continue;
    double y = std::log(row.metric) / std::log(b);
    sx += row.m;
    sy += y;
    sxx += static_cast<double>(row.m) * row.m;
    sxy += row.m * y;
    ++count;
  }
  if (count >= 2) out.fitted_slope = -(count * sxy - sx * sy) / (count * sxx - sx * sx);

  double r_head = r_of_m[m_lo + 2], r_tail = r_of_m[m_hi];
  out.decayed = r_head == 0.0 ? r_tail == 0.0 : r_tail <= 0.1 * r_head;
  return out;
}

double theoretical_decay_exponent(double q0, int d, const ExpansiveDilation& dil) {
  return 1.0 - 1.0 / q0 + (d + 1) * std::log(dil.lambda_minus) / std::log(dil.b);
}

HardyLittlewoodResult hardy_littlewood_integral(const AtomicDecomposition& dec,
                                                const Envelope& env, int m_cutoff,
                                                double samples_density,
                                                std::uint64_t seed, double theta0) {
  const ExpansiveDilation& dil = env.rho_star().dilation();
  const double b = dil.b;
  const double q0 = env.q0();
  const double e1 = q0 - q0 / env.p_minus() - 1.0;
  const double e2 = q0 - 2.0;

  Rng rng(seed);
  HardyLittlewoodResult out;
  double total = 0.0;
  double total_at_m2 = 0.0;  // running value at cutoff m_cutoff - 2
  for (int m = -m_cutoff; m <= m_cutoff; ++m) {
    double rho = std::pow(b, m);
    double weight = std::min(std::pow(rho, e1), std::pow(rho, e2));
    double shell_volume = std::pow(b, m) * (b - 1.0);
    int samples = static_cast<int>(
        std::clamp(samples_density * std::pow(b, m), 16.0, 16384.0));
    double acc = 0.0;
    for (int i = 0; i < samples; ++i) {
      Vector xi = dil.sample_shell(m, rng);
      acc += std::pow(std::abs(reconstruct_F(dec, xi)), q0);
    }
    double contribution = weight * shell_volume * acc / samples;
    total += contribution;
    if (std::abs(m) <= m_cutoff - 2) total_at_m2 += contribution;
    out.shells.push_back({m, rho, contribution});
  }
  out.integral = std::pow(total, 1.0 / q0);
  double at_m2 = std::pow(total_at_m2, 1.0 / q0);
  out.tail_increment = out.integral > 0.0 ? (out.integral - at_m2) / out.integral : 0.0;
  out.converged = out.tail_increment <= 0.01;
  if (!out.converged && m_cutoff >= 12)
    fail("NotConverged", "shell-tail increment above 1% at cutoff M=12");
  double n_atomic = atomic_quasi_norm(dec, theta0);
  out.ratio = n_atomic > 0.0 ? out.integral / n_atomic : 0.0;
  return out;
}

}  // namespace aniso
