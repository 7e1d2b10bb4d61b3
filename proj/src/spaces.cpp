#include "aniso/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "aniso/io.hpp"
#include "aniso/kernels.hpp"

namespace aniso {

void ExponentBundle::validate() const {
  if (!(theta0 > 0.0 && theta0 < underline_p()))
    fail("ExponentRange", "theta0 must lie in (0, min(p_-,1))");
  if (!(p0 > theta0)) fail("ExponentRange", "p0 must exceed theta0");
  if (!(p_minus > 0.0 && p_minus <= q0 && q0 <= 1.0))
    fail("ExponentRange", "need 0 < p_- <= q0 <= 1");
}

int default_resolution(int dim) {
  switch (dim) {
    case 1: return 4096;
    case 2: return 256;
    default: return 32;
  }
}

GridFunction indicator_grid(const DilatedBall& ball, int per_axis) {
  const int n = ball.dilation->n;
  if (per_axis <= 0) per_axis = default_resolution(n);
  Box box{ball.aabb_lo(), ball.aabb_hi()};
  return GridFunction::sample(box, std::vector<int>(static_cast<std::size_t>(n), per_axis),
                              [&](const Vector& x) { return ball.contains(x) ? 1.0 : 0.0; });
}

double luxemburg_norm(const std::function<double(double)>& modular) {
  double lo = 1e-12, hi = 1e12;
  double top = modular(hi);
  if (!std::isfinite(top) || top > 1.0)
    fail("BisectionFailure", "modular not within 1 at the upper bracket");
  if (modular(lo) <= 1.0) return lo;
  for (int it = 0; it < 200 && hi > lo * (1.0 + 1e-8); ++it) {
    double mid = std::sqrt(lo * hi);
    if (modular(mid) <= 1.0)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

// -- Orlicz function ---------------------------------------------------------

OrliczFunction OrliczFunction::power(double p) {
  if (!(p > 0.0)) fail("ExponentRange", "Orlicz power exponent must be positive");
  OrliczFunction f;
  f.kind_ = Kind::Power;
  f.exponent_ = p;
  f.p_lower_ = p;
  f.p_upper_ = p;
  return f;
}

OrliczFunction OrliczFunction::table(std::vector<double> t, std::vector<double> phi,
                                     double p_lower, double p_upper) {
  if (t.size() != phi.size() || t.size() < 2)
    fail("DimensionError", "Orlicz table needs matching vectors of size >= 2");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (t[i] <= t[i - 1] || phi[i] < phi[i - 1])
      fail("DimensionError", "Orlicz table must be increasing");
  OrliczFunction f;
  f.kind_ = Kind::Table;
  f.t_ = std::move(t);
  f.phi_ = std::move(phi);
  f.p_lower_ = p_lower;
  f.p_upper_ = p_upper;
  return f;
}

double OrliczFunction::operator()(double t) const {
  if (t <= 0.0) return 0.0;
  if (kind_ == Kind::Power) return std::pow(t, exponent_);
  // log-log interpolation inside the table, power-law extension outside
  if (t <= t_.front()) return phi_.front() * std::pow(t / t_.front(), p_lower_);
  if (t >= t_.back()) return phi_.back() * std::pow(t / t_.back(), p_upper_);
  auto it = std::upper_bound(t_.begin(), t_.end(), t);
  std::size_t i = static_cast<std::size_t>(it - t_.begin());
  double lt = std::log(t_[i - 1]), rt = std::log(t_[i]);
  double lp = std::log(phi_[i - 1]), rp = std::log(phi_[i]);
  double w = (std::log(t) - lt) / (rt - lt);
  return std::exp(lp + w * (rp - lp));
}

double OrliczFunction::inverse(double y) const {
  if (kind_ != Kind::Power)
    fail("UnsupportedKind", "closed-form inverse needs a power-law Orlicz function");
  return std::pow(y, 1.0 / exponent_);
}

std::string OrliczFunction::descriptor() const {
  if (kind_ == Kind::Power) {
    std::ostringstream os;
    os << "pow(" << exponent_ << ")";
    return os.str();
  }
  return "table";
}

double OrliczFunction::upper_type_constant(double p, int samples) const {
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    double s = std::pow(10.0, 3.0 * i / (samples - 1));  // s in [1, 1e3]
    for (int j = 0; j < samples; ++j) {
      double t = std::pow(10.0, -3.0 + 6.0 * j / (samples - 1));
      double denom = std::pow(s, p) * (*this)(t);
      if (denom > 0.0) worst = std::max(worst, (*this)(s * t) / denom);
    }
  }
  return worst;
}

// -- Matuszewska-Orlicz indices ----------------------------------------------

HerzWeight HerzWeight::power(double alpha) {
  HerzWeight w;
  w.omega = [alpha](double t) { return std::pow(t, alpha); };
  std::ostringstream os;
  os << "t^" << alpha;
  w.descriptor = os.str();
  return w;
}

MoIndices mo_indices(const HerzWeight& w, const std::vector<double>& t0_grid,
                     const std::vector<double>& h0_grid,
                     const std::vector<double>& tinf_grid,
                     const std::vector<double>& hinf_grid) {
  auto ratio_extremes = [&](double t, const std::vector<double>& hs, bool want_max) {
    double best = want_max ? -std::numeric_limits<double>::infinity()
                           : std::numeric_limits<double>::infinity();
    for (double h : hs) {
      double r = w.omega(h * t) / w.omega(h);
      best = want_max ? std::max(best, r) : std::min(best, r);
    }
    return best;
  };
  MoIndices idx;
  idx.m0 = -std::numeric_limits<double>::infinity();
  idx.M0 = std::numeric_limits<double>::infinity();
  for (double t : t0_grid) {
    idx.m0 = std::max(idx.m0, std::log(ratio_extremes(t, h0_grid, true)) / std::log(t));
    idx.M0 = std::min(idx.M0, std::log(ratio_extremes(t, h0_grid, false)) / std::log(t));
  }
  idx.m_inf = -std::numeric_limits<double>::infinity();
  idx.M_inf = std::numeric_limits<double>::infinity();
  for (double t : tinf_grid) {
    idx.m_inf =
        std::max(idx.m_inf, std::log(ratio_extremes(t, hinf_grid, false)) / std::log(t));
    idx.M_inf =
        std::min(idx.M_inf, std::log(ratio_extremes(t, hinf_grid, true)) / std::log(t));
  }
  return idx;
}

MoIndices mo_indices(const HerzWeight& w) {
  auto log_spaced = [](double a, double b, int count) {
    std::vector<double> v(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
      v[static_cast<std::size_t>(i)] =
          std::exp(std::log(a) + (std::log(b) - std::log(a)) * i / (count - 1));
    return v;
  };
  return mo_indices(w, log_spaced(1e-3, 0.9, 24), {1e-1, 1e-2, 1e-3, 1e-4},
                    log_spaced(1.0 / 0.9, 1e3, 24), {1e1, 1e2, 1e3, 1e4});
}

// -- BallSpace base ----------------------------------------------------------

void BallSpace::set_theta0(double theta0) {
  bundle_.theta0 = theta0;
  bundle_.validate();
}

void BallSpace::set_p0(double p0) {
  bundle_.p0 = p0;
  bundle_.validate();
}

double BallSpace::indicator_norm(const DilatedBall& ball) const {
  return norm(indicator_grid(ball));
}

double BallSpace::simple_norm(const std::vector<std::pair<double, double>>&) const {
  fail("UnsupportedKind", "simple_norm needs a rearrangement-invariant space");
}

namespace {

ExponentBundle derive_bundle(double p_minus, double q0) {
  ExponentBundle e;
  e.p_minus = p_minus;
  e.q0 = q0;
  e.theta0 = 0.75 * std::min(p_minus, 1.0);
  e.p0 = 1.5;
  return e;
}

// -- Lebesgue ----------------------------------------------------------------

class LebesgueSpace final : public BallSpace {
 public:
  explicit LebesgueSpace(double p) : p_(p) {
    if (!(p > 0.0)) fail("ExponentRange", "Lebesgue exponent must be positive");
    bundle_ = derive_bundle(p, p);  // one_B_X holds with p_- = q0 = p
  }

  double norm(const GridFunction& f) const override { return lq_norm(f, p_); }

  double indicator_norm(const DilatedBall& ball) const override {
    return std::pow(ball.volume(), 1.0 / p_);
  }

  double simple_norm(const std::vector<std::pair<double, double>>& parts) const override {
    if (std::isinf(p_)) {
      double m = 0.0;
      for (auto& [v, meas] : parts)
        if (meas > 0.0) m = std::max(m, std::fabs(v));
      return m;
    }
    double acc = 0.0;
    for (auto& [v, meas] : parts) acc += std::pow(std::fabs(v), p_) * meas;
    return std::pow(acc, 1.0 / p_);
  }

  bool rearrangement_invariant() const override { return true; }

  std::string descriptor() const override {
    std::ostringstream os;
    os << "lebesgue:p=" << p_;
    return os.str();
  }

 private:
  double p_;
};

// -- Lorentz -----------------------------------------------------------------

class LorentzSpace final : public BallSpace {
 public:
  LorentzSpace(double p, double q) : p_(p), q_(q) {
    if (!(p > 0.0) || !(q > 0.0)) fail("ExponentRange", "Lorentz exponents positive");
    bundle_ = derive_bundle(p, 1.0);  // q0 := 1
  }

  double norm(const GridFunction& f) const override {
    return rearrange(f).lorentz_norm(p_, q_);
  }

  double indicator_norm(const DilatedBall& ball) const override {
    return std::pow(ball.volume(), 1.0 / p_);  // ||1_B|| = |B|^{1/p} exactly
  }

  double simple_norm(const std::vector<std::pair<double, double>>& parts) const override {
    Rearrangement r = rearrangement_of(parts);
    return r.lorentz_norm(p_, q_);
  }

  bool rearrangement_invariant() const override { return true; }

  std::string descriptor() const override {
    std::ostringstream os;
    os << "lorentz:p=" << p_ << ",q=" << q_;
    return os.str();
  }

  static Rearrangement rearrangement_of(const std::vector<std::pair<double, double>>& parts) {
    std::vector<std::pair<double, double>> sorted;
    for (auto& [v, m] : parts)
      if (v != 0.0 && m > 0.0) sorted.emplace_back(std::fabs(v), m);
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    Rearrangement r;
    double cum = 0.0;
    for (std::size_t i = 0; i < sorted.size();) {
      std::size_t j = i;
      double meas = 0.0;
      while (j < sorted.size() && sorted[j].first == sorted[i].first) meas += sorted[j++].second;
      cum += meas;
      r.steps.push_back({sorted[i].first, cum});
      i = j;
    }
    r.support_measure = cum;
    return r;
  }

 private:
  double p_, q_;
};

// -- Orlicz ------------------------------------------------------------------

class OrliczSpace final : public BallSpace {
 public:
  explicit OrliczSpace(OrliczFunction phi) : phi_(std::move(phi)) {
    bundle_ = derive_bundle(phi_.p_lower(), phi_.p_upper());
  }

  double norm(const GridFunction& f) const override {
    if (kernels::max_abs(f.values().data(), f.size()) == 0.0) return 0.0;
    double vol = f.cell_volume();
    const auto& v = f.values();
    return luxemburg_norm([&](double lambda) {
      double acc = 0.0;
      for (double x : v)
        if (x != 0.0) acc += phi_(std::fabs(x) / lambda);
      return acc * vol;
    });
  }

  double indicator_norm(const DilatedBall& ball) const override {
    double vol = ball.volume();
    if (phi_.invertible()) return 1.0 / phi_.inverse(1.0 / vol);
    return luxemburg_norm([&](double lambda) { return vol * phi_(1.0 / lambda); });
  }

  double simple_norm(const std::vector<std::pair<double, double>>& parts) const override {
    bool empty = true;
    for (auto& [v, m] : parts)
      if (v != 0.0 && m > 0.0) empty = false;
    if (empty) return 0.0;
    return luxemburg_norm([&](double lambda) {
      double acc = 0.0;
      for (auto& [v, m] : parts)
        if (v != 0.0) acc += phi_(std::fabs(v) / lambda) * m;
      return acc;
    });
  }

  bool rearrangement_invariant() const override { return true; }

  std::string descriptor() const override { return "orlicz:phi=" + phi_.descriptor(); }

  const OrliczFunction& phi() const { return phi_; }

 private:
  OrliczFunction phi_;
};

// -- variable Lebesgue --------------------------------------------------------

class VariableLebesgueSpace final : public BallSpace {
 public:
  explicit VariableLebesgueSpace(GridFunction p_field) : p_field_(std::move(p_field)) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (double p : p_field_.values()) {
      if (!(p > 0.0)) fail("ExponentRange", "exponent field must be positive");
      lo = std::min(lo, p);
      hi = std::max(hi, p);
    }
    p_tilde_minus_ = lo;
    p_tilde_plus_ = hi;
    bundle_ = derive_bundle(lo, hi);  // p_- = ess inf p, q0 = ess sup p
  }

  double exponent_at(Vector x) const {
    const Box& b = p_field_.box();
    for (int a = 0; a < p_field_.dim(); ++a) {
      double inset = 0.5 * p_field_.h()[a];
      x[a] = std::clamp(x[a], b.lo[a] + inset, b.hi[a] - inset);
    }
    return p_field_.evaluate(x);
  }

  double norm(const GridFunction& f) const override {
    if (kernels::max_abs(f.values().data(), f.size()) == 0.0) return 0.0;
    std::vector<double> p_at(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) p_at[i] = exponent_at(f.point(i));
    double vol = f.cell_volume();
    const auto& v = f.values();
    return luxemburg_norm([&](double lambda) {
      double acc = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0.0) acc += std::pow(std::fabs(v[i]) / lambda, p_at[i]);
      return acc * vol;
    });
  }

  std::string descriptor() const override { return "variable:pfile=<field>"; }

  double p_tilde_minus() const { return p_tilde_minus_; }
  double p_tilde_plus() const { return p_tilde_plus_; }

 private:
  GridFunction p_field_;
  double p_tilde_minus_, p_tilde_plus_;
};

// -- mixed norm ---------------------------------------------------------------

class MixedNormSpace final : public BallSpace {
 public:
  explicit MixedNormSpace(std::vector<double> p_vec) : p_(std::move(p_vec)) {
    if (p_.empty()) fail("DimensionError", "mixed norm needs at least one exponent");
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (double p : p_) {
      if (!(p > 0.0)) fail("ExponentRange", "mixed-norm exponents positive");
      lo = std::min(lo, p);
      hi = std::max(hi, std::min(p, 1.0));
    }
    bundle_ = derive_bundle(lo, hi);  // p_- = min p_i, q0 = max p_i
  }

  double norm(const GridFunction& f) const override {
    if (static_cast<std::size_t>(f.dim()) != p_.size())
      fail("DimensionError", "mixed-norm rank mismatch");
    std::vector<double> cur(f.values());
    std::vector<int> shape = f.shape();
    // iterated integral, innermost axis first
    for (std::size_t axis = 0; axis < p_.size(); ++axis) {
      double p = p_[axis];
      double h = f.h()[static_cast<int>(axis)];
      std::size_t stride = 1;
      for (std::size_t a = 1; a < shape.size(); ++a) stride *= static_cast<std::size_t>(shape[a]);
      std::size_t count = static_cast<std::size_t>(shape[0]);
      std::vector<double> next(stride);
      for (std::size_t j = 0; j < stride; ++j) {
        if (std::isinf(p)) {
          double m = 0.0;
          for (std::size_t i = 0; i < count; ++i)
            m = std::max(m, std::fabs(cur[i * stride + j]));
          next[j] = m;
        } else {
          double acc = 0.0;
          for (std::size_t i = 0; i < count; ++i)
            acc += std::pow(std::fabs(cur[i * stride + j]), p);
          next[j] = std::pow(acc * h, 1.0 / p);
        }
      }
      cur = std::move(next);
      shape.erase(shape.begin());
    }
    return cur[0];
  }

  std::string descriptor() const override {
    std::ostringstream os;
    os << "mixed:p=";
    for (std::size_t i = 0; i < p_.size(); ++i) os << (i ? "," : "") << p_[i];
    return os.str();
  }

 private:
  std::vector<double> p_;
};

// -- local generalized Herz ----------------------------------------------------

class LocalHerzSpace final : public BallSpace {
 public:
  LocalHerzSpace(HerzWeight omega, double p, double q, int k_lo, int k_hi)
      : omega_(std::move(omega)), p_(p), q_(q), k_lo_(k_lo), k_hi_(k_hi) {
    if (!(p > 0.0) || !(q > 0.0)) fail("ExponentRange", "Herz exponents positive");
    MoIndices idx = mo_indices(omega_);
    indices_ = idx;
    // p_- just inside (0, n_dim/(max{M0,Minf} + n_dim/p)); n_dim enters at
    // norm time, so the bundle is derived for n = 1 and rescaled on demand.
    double upper = 1.0 / (std::max(idx.M0, idx.M_inf) + 1.0 / p);
    bundle_ = derive_bundle(0.99 * std::min(upper, 1.0), 1.0);  // q0 in [p_-,1]
  }

  double norm(const GridFunction& f) const override {
    // annuli are Euclidean: B(0,2^k) \ B(0,2^{k-1}), truncated to [k_lo,k_hi]
    std::size_t buckets = static_cast<std::size_t>(k_hi_ - k_lo_ + 1);
    std::vector<double> acc(buckets, 0.0);
    double vol = f.cell_volume();
    bool p_inf = std::isinf(p_);
    for (std::size_t i = 0; i < f.size(); ++i) {
      double v = f[i];
      if (v == 0.0) continue;
      double radius = f.point(i).norm();
      if (radius <= 0.0) continue;
      int k = static_cast<int>(std::floor(std::log2(radius))) + 1;
      if (k < k_lo_ || k > k_hi_) continue;
      std::size_t bucket = static_cast<std::size_t>(k - k_lo_);
      if (p_inf)
        acc[bucket] = std::max(acc[bucket], std::fabs(v));
      else
        acc[bucket] += std::pow(std::fabs(v), p_) * vol;
    }
    bool q_inf = std::isinf(q_);
    double total = 0.0, best = 0.0;
    for (std::size_t bkt = 0; bkt < buckets; ++bkt) {
      if (acc[bkt] == 0.0) continue;
      double lp = p_inf ? acc[bkt] : std::pow(acc[bkt], 1.0 / p_);
      double wgt = omega_.omega(std::pow(2.0, k_lo_ + static_cast<int>(bkt)));
      if (q_inf)
        best = std::max(best, wgt * lp);
      else
        total += std::pow(wgt * lp, q_);
    }
    return q_inf ? best : std::pow(total, 1.0 / q_);
  }

  std::string descriptor() const override {
    std::ostringstream os;
    os << "herz:omega=" << omega_.descriptor << ",p=" << p_ << ",q=" << q_;
    return os.str();
  }

  const MoIndices& indices() const { return indices_; }

 private:
  HerzWeight omega_;
  double p_, q_;
  int k_lo_, k_hi_;
  MoIndices indices_;
};

// -- Morrey --------------------------------------------------------------------

class MorreySpace final : public BallSpace {
 public:
  MorreySpace(double p, double q, DilationPtr dilation, MorreyScan scan)
      : p_(p), q_(q), dil_(std::move(dilation)), scan_(scan) {
    if (!(0.0 < q && q <= p)) fail("ExponentRange", "Morrey needs 0 < q <= p");
    bundle_ = derive_bundle(q, p);  // p_- in (0,q], q0 := p
  }

  double norm(const GridFunction& f) const override {
    // sup over the finite candidate set of dilated balls; exact |B| = b^k in
    // the prefactor, grid quadrature of |f|^q over cells inside the ball
    const int n = f.dim();
    if (n != dil_->n) fail("DimensionError", "Morrey dilation dimension mismatch");
    std::vector<Vector> centers = candidate_centers(f);
    double vol = f.cell_volume();
    double best = 0.0;
    std::vector<double> powq(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
      powq[i] = f[i] == 0.0 ? 0.0 : std::pow(std::fabs(f[i]), q_);
    for (int k = scan_.k_lo; k <= scan_.k_hi; ++k) {
      double ball_vol = std::pow(dil_->b, k);
      double prefactor = std::pow(ball_vol, 1.0 / p_ - 1.0 / q_);
      for (const Vector& cen : centers) {
        double acc = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
          if (powq[i] == 0.0) continue;
          if (dil_->in_B(k, f.point(i) - cen)) acc += powq[i];
        }
        if (acc > 0.0) best = std::max(best, prefactor * std::pow(acc * vol, 1.0 / q_));
      }
    }
    return best;
  }

  std::string descriptor() const override {
    std::ostringstream os;
    os << "morrey:p=" << p_ << ",q=" << q_;
    return os.str();
  }

 private:
  std::vector<Vector> candidate_centers(const GridFunction& f) const {
    const int n = f.dim();
    std::vector<std::vector<double>> axes(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
      int count = std::min(scan_.centers_per_axis, f.shape()[a]);
      for (int i = 0; i < count; ++i)
        axes[static_cast<std::size_t>(a)].push_back(
            f.box().lo[a] + (i + 0.5) * (f.box().hi[a] - f.box().lo[a]) / count);
      // box midpoint is always a candidate
      axes[static_cast<std::size_t>(a)].push_back(0.5 * (f.box().lo[a] + f.box().hi[a]));
    }
    std::vector<Vector> centers;
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    for (;;) {
      Vector c(n);
      for (int a = 0; a < n; ++a) c[a] = axes[static_cast<std::size_t>(a)][idx[static_cast<std::size_t>(a)]];
      centers.push_back(c);
      int a = n - 1;
      for (; a >= 0; --a) {
        if (++idx[static_cast<std::size_t>(a)] < axes[static_cast<std::size_t>(a)].size()) break;
        idx[static_cast<std::size_t>(a)] = 0;
      }
      if (a < 0) break;
    }
    return centers;
  }

  double p_, q_;
  DilationPtr dil_;
  MorreyScan scan_;
};

// -- Orlicz slice ---------------------------------------------------------------

class OrliczSliceSpace final : public BallSpace {
 public:
  OrliczSliceSpace(OrliczFunction phi, double q, int ell, DilationPtr dilation,
                   SliceParams params)
      : phi_(std::move(phi)), q_(q), ell_(ell), dil_(std::move(dilation)), params_(params) {
    if (!(q > 0.0)) fail("ExponentRange", "slice exponent q positive");
    double pl = phi_.p_lower(), pu = phi_.p_upper();
    double q0_raw = std::max({pu, q * pl / (q + pl), 1.0});
    q0_capped_ = q0_raw > 1.0;
    bundle_ = derive_bundle(std::min(pl, q), std::min(q0_raw, 1.0));
    // denominator ||1_{x+B_ell}|| is translation invariant; computed once
    double vol = std::pow(dil_->b, ell_);
    denom_ = phi_.invertible()
                 ? 1.0 / phi_.inverse(1.0 / vol)
                 : luxemburg_norm([&](double lambda) { return vol * phi_(1.0 / lambda); });
  }

  double norm(const GridFunction& f) const override {
    const int n = f.dim();
    if (n != dil_->n) fail("DimensionError", "slice dilation dimension mismatch");
    Vector half = dil_->aabb_half_widths(ell_);
    Box outer{f.box().lo - half, f.box().hi + half};
    int per_axis = n == 1 ? params_.outer_per_axis_1d : params_.outer_per_axis_nd;
    GridFunction probe(outer, std::vector<int>(static_cast<std::size_t>(n), per_axis));
    double acc = 0.0;
    std::vector<double> window;
    for (std::size_t i = 0; i < probe.size(); ++i) {
      Vector x = probe.point(i);
      gather_window(f, x, window);
      if (window.empty()) continue;
      double num = window_norm(f.cell_volume(), window);
      if (num > 0.0) acc += std::pow(num / denom_, q_);
    }
    return std::pow(acc * probe.cell_volume(), 1.0 / q_);
  }

  std::string descriptor() const override {
    std::ostringstream os;
    os << "orlicz-slice:phi=" << phi_.descriptor() << ",q=" << q_ << ",ell=" << ell_;
    return os.str();
  }

  bool q0_capped() const { return q0_capped_; }

 private:
  void gather_window(const GridFunction& f, const Vector& x, std::vector<double>& out) const {
    out.clear();
    const int n = f.dim();
    Vector half = dil_->aabb_half_widths(ell_);
    // cell-index window of the slice box, then exact ellipsoid membership
    std::vector<int> lo(static_cast<std::size_t>(n)), hi(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
      double u_lo = (x[a] - half[a] - f.box().lo[a]) / f.h()[a] - 0.5;
      double u_hi = (x[a] + half[a] - f.box().lo[a]) / f.h()[a] - 0.5;
      lo[static_cast<std::size_t>(a)] = std::max(0, static_cast<int>(std::ceil(u_lo)));
      hi[static_cast<std::size_t>(a)] = std::min(f.shape()[a] - 1, static_cast<int>(std::floor(u_hi)));
      if (lo[static_cast<std::size_t>(a)] > hi[static_cast<std::size_t>(a)]) return;
    }
    std::vector<int> idx(lo);
    for (;;) {
      std::size_t flat = 0;
      Vector p(n);
      for (int a = 0; a < n; ++a) {
        flat = flat * static_cast<std::size_t>(f.shape()[a]) + static_cast<std::size_t>(idx[static_cast<std::size_t>(a)]);
        p[a] = f.box().lo[a] + (idx[static_cast<std::size_t>(a)] + 0.5) * f.h()[a];
      }
      double v = f[flat];
      if (v != 0.0 && dil_->in_B(ell_, p - x)) out.push_back(v);
      int a = n - 1;
      for (; a >= 0; --a) {
        if (++idx[static_cast<std::size_t>(a)] <= hi[static_cast<std::size_t>(a)]) break;
        idx[static_cast<std::size_t>(a)] = lo[static_cast<std::size_t>(a)];
      }
      if (a < 0) break;
    }
  }

  double window_norm(double cell_vol, const std::vector<double>& vals) const {
    double v0 = std::fabs(vals[0]);
    bool constant = true;
    for (double v : vals)
      if (std::fabs(v) != v0) {
        constant = false;
        break;
      }
    double meas = static_cast<double>(vals.size()) * cell_vol;
    if (constant && phi_.invertible()) return v0 / phi_.inverse(1.0 / meas);
    return luxemburg_norm([&](double lambda) {
      double acc = 0.0;
      for (double v : vals) acc += phi_(std::fabs(v) / lambda);
      return acc * cell_vol;
    });
  }

  OrliczFunction phi_;
  double q_;
  int ell_;
  DilationPtr dil_;
  SliceParams params_;
  double denom_;
  bool q0_capped_ = false;
};

// -- convexification -------------------------------------------------------------

class ConvexifiedSpace final : public BallSpace {
 public:
  ConvexifiedSpace(SpacePtr inner, double p) : inner_(std::move(inner)), p_(p) {
    if (!(p > 0.0)) fail("ExponentRange", "convexification exponent positive");
    bundle_ = inner_->exponents();
  }

  double norm(const GridFunction& f) const override {
    GridFunction g = f;
    for (std::size_t i = 0; i < g.size(); ++i)
      g[i] = g[i] == 0.0 ? 0.0 : std::pow(std::fabs(g[i]), p_);
    return std::pow(inner_->norm(g), 1.0 / p_);
  }

  double indicator_norm(const DilatedBall& ball) const override {
    return std::pow(inner_->indicator_norm(ball), 1.0 / p_);
  }

  double simple_norm(const std::vector<std::pair<double, double>>& parts) const override {
    std::vector<std::pair<double, double>> powered(parts);
    for (auto& [v, m] : powered) v = v == 0.0 ? 0.0 : std::pow(std::fabs(v), p_);
    return std::pow(inner_->simple_norm(powered), 1.0 / p_);
  }

  bool rearrangement_invariant() const override { return inner_->rearrangement_invariant(); }

  std::string descriptor() const override {
    std::ostringstream os;
    os << "convexify(" << inner_->descriptor() << ",p=" << p_ << ")";
    return os.str();
  }

 private:
  SpacePtr inner_;
  double p_;
};

}  // namespace

SpacePtr make_lebesgue(double p) { return std::make_shared<LebesgueSpace>(p); }
SpacePtr make_lorentz(double p, double q) { return std::make_shared<LorentzSpace>(p, q); }
SpacePtr make_orlicz(OrliczFunction phi) {
  return std::make_shared<OrliczSpace>(std::move(phi));
}
SpacePtr make_variable_lebesgue(GridFunction p_field) {
  return std::make_shared<VariableLebesgueSpace>(std::move(p_field));
}
SpacePtr make_mixed_norm(std::vector<double> p_vec) {
  return std::make_shared<MixedNormSpace>(std::move(p_vec));
}
SpacePtr make_local_herz(HerzWeight omega, double p, double q, int k_lo, int k_hi) {
  return std::make_shared<LocalHerzSpace>(std::move(omega), p, q, k_lo, k_hi);
}
SpacePtr make_morrey(double p, double q, DilationPtr dilation, MorreyScan scan) {
  return std::make_shared<MorreySpace>(p, q, std::move(dilation), scan);
}
SpacePtr make_orlicz_slice(OrliczFunction phi, double q, int ell, DilationPtr dilation,
                           SliceParams params) {
  return std::make_shared<OrliczSliceSpace>(std::move(phi), q, ell, std::move(dilation),
                                            params);
}
SpacePtr convexify(SpacePtr space, double p) {
  return std::make_shared<ConvexifiedSpace>(std::move(space), p);
}

// -- descriptor parsing -----------------------------------------------------------

namespace {

std::vector<std::pair<std::string, std::string>> parse_params(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> params;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    auto eq = token.find('=');
    if (eq == std::string::npos) {
      // continuation of a value list, e.g. mixed:p=0.5,0.75
      if (params.empty()) fail("DimensionError", "bad space parameter '" + token + "'");
      params.back().second += "," + token;
    } else {
      params.emplace_back(token.substr(0, eq), token.substr(eq + 1));
    }
  }
  return params;
}

double param_as_double(const std::vector<std::pair<std::string, std::string>>& params,
                       const std::string& key) {
  for (auto& [k, v] : params)
    if (k == key) return std::stod(v);
  fail("DimensionError", "missing space parameter '" + key + "'");
}

std::string param_as_string(const std::vector<std::pair<std::string, std::string>>& params,
                            const std::string& key) {
  for (auto& [k, v] : params)
    if (k == key) return v;
  fail("DimensionError", "missing space parameter '" + key + "'");
}

OrliczFunction parse_phi(const std::string& text) {
  if (text.rfind("pow(", 0) == 0 && text.back() == ')')
    return OrliczFunction::power(std::stod(text.substr(4, text.size() - 5)));
  fail("UnsupportedKind", "unknown Orlicz function '" + text + "'");
}

}  // namespace

SpacePtr parse_space(const std::string& descriptor, DilationPtr dilation) {
  auto colon = descriptor.find(':');
  std::string kind = descriptor.substr(0, colon);
  auto params =
      colon == std::string::npos ? decltype(parse_params("")){} : parse_params(descriptor.substr(colon + 1));
  if (kind == "lebesgue") return make_lebesgue(param_as_double(params, "p"));
  if (kind == "lorentz")
    return make_lorentz(param_as_double(params, "p"), param_as_double(params, "q"));
  if (kind == "orlicz") return make_orlicz(parse_phi(param_as_string(params, "phi")));
  if (kind == "variable")
    return make_variable_lebesgue(read_grid_csv(param_as_string(params, "pfile")));
  if (kind == "mixed") {
    std::vector<double> p;
    std::stringstream ss(param_as_string(params, "p"));
    std::string tok;
    while (std::getline(ss, tok, ',')) p.push_back(std::stod(tok));
    return make_mixed_norm(std::move(p));
  }
  if (kind == "herz")
    return make_local_herz(HerzWeight::power(param_as_double(params, "alpha")),
                           param_as_double(params, "p"), param_as_double(params, "q"));
  if (kind == "morrey") {
    if (!dilation) fail("DimensionError", "morrey descriptor needs a dilation");
    return make_morrey(param_as_double(params, "p"), param_as_double(params, "q"), dilation);
  }
  if (kind == "orlicz-slice") {
    if (!dilation) fail("DimensionError", "orlicz-slice descriptor needs a dilation");
    return make_orlicz_slice(parse_phi(param_as_string(params, "phi")),
                             param_as_double(params, "q"),
                             static_cast<int>(param_as_double(params, "ell")), dilation);
  }
  fail("UnsupportedKind", "unknown space kind '" + kind + "'");
}

// -- derived checks -----------------------------------------------------------------

std::vector<LowerBoundRow> check_lower_bound(const BallSpace& space,
                                             const DilationPtr& dilation, int k_lo,
                                             int k_hi, const Vector& center) {
  const ExponentBundle& e = space.exponents();
  e.validate();
  std::vector<LowerBoundRow> rows;
  for (int k = k_lo; k <= k_hi; ++k) {
    DilatedBall ball{center, k, dilation};
    double vol = ball.volume();
    LowerBoundRow row;
    row.k = k;
    row.indicator = space.indicator_norm(ball);
    row.bound = std::min(std::pow(vol, 1.0 / e.q0), std::pow(vol, 1.0 / e.p_minus));
    row.ratio = row.indicator / row.bound;
    rows.push_back(row);
  }
  return rows;
}

double concavity_probe(const SpacePtr& space, double q0,
                       const std::vector<GridFunction>& family) {
  if (family.empty() || family.size() > 8)
    fail("DimensionError", "concavity probe needs 1..8 functions");
  SpacePtr y = convexify(space, 1.0 / q0);  // X^{1/q0}
  std::vector<double> norms(family.size());
  for (std::size_t i = 0; i < family.size(); ++i) norms[i] = y->norm(family[i]);
  double worst = 0.0;
  for (unsigned mask = 1; mask < (1u << family.size()); ++mask) {
    GridFunction total = family[0];
    std::fill(total.values().begin(), total.values().end(), 0.0);
    double num = 0.0;
    for (std::size_t i = 0; i < family.size(); ++i) {
      if (!(mask & (1u << i))) continue;
      num += norms[i];
      for (std::size_t j = 0; j < total.size(); ++j) total[j] += std::fabs(family[i][j]);
    }
    double den = y->norm(total);
    if (den > 0.0) worst = std::max(worst, num / den);
  }
  return worst;
}

double log_holder_probe(const GridFunction& p_field) {
  // finite-difference estimate of the local log-Hoelder constant
  double worst = 0.0;
  const int n = p_field.dim();
  std::size_t stride = 1;
  for (int a = n - 1; a >= 0; --a) {
    std::size_t count = p_field.size() / (stride * static_cast<std::size_t>(p_field.shape()[a]));
    double dist = p_field.h()[a];
    double lg = std::log(std::exp(1.0) + 1.0 / dist);
    for (std::size_t outer = 0; outer < count; ++outer)
      for (int i = 0; i + 1 < p_field.shape()[a]; ++i) {
        std::size_t base = outer * static_cast<std::size_t>(p_field.shape()[a]) * stride;
        for (std::size_t s = 0; s < stride; ++s) {
          double d = std::fabs(p_field[base + static_cast<std::size_t>(i + 1) * stride + s] -
                               p_field[base + static_cast<std::size_t>(i) * stride + s]);
          worst = std::max(worst, d * lg);
        }
      }
    stride *= static_cast<std::size_t>(p_field.shape()[a]);
  }
  return worst;
}

}  // namespace aniso
