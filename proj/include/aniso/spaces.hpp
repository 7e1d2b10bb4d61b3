#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aniso/common.hpp"
#include "aniso/dilation.hpp"
#include "aniso/grid.hpp"

namespace aniso {

/// Exponent data attached to a space: p_minus from the vector-valued maximal
/// inequality, q0 from concavity, theta0 and p0 from the convexified maximal
/// bound. Constructors of the concrete spaces derive these per kind.
struct ExponentBundle {
  double p_minus = 0.0;
  double q0 = 0.0;
  double theta0 = 0.0;
  double p0 = 0.0;

  double underline_p() const { return std::min(p_minus, 1.0); }
  void validate() const;
};

/// Orlicz function Phi: nondecreasing, Phi(0)=0, Phi>0 on (0,inf), with
/// lower/upper type exponents. Either a power law t^p or a tabulated
/// function with monotone log-log interpolation.
class OrliczFunction {
 public:
  static OrliczFunction power(double p);
  static OrliczFunction table(std::vector<double> t, std::vector<double> phi,
                              double p_lower, double p_upper);

  double operator()(double t) const;
  double inverse(double y) const;  // throws "UnsupportedKind" if not invertible
  bool invertible() const { return kind_ == Kind::Power; }
  double p_lower() const { return p_lower_; }
  double p_upper() const { return p_upper_; }
  std::string descriptor() const;

  /// Empirical upper-type constant: max over samples of Phi(st)/(s^p Phi(t)).
  double upper_type_constant(double p, int samples = 128) const;

 private:
  enum class Kind { Power, Table };
  Kind kind_ = Kind::Power;
  double exponent_ = 1.0;
  std::vector<double> t_, phi_;
  double p_lower_ = 1.0, p_upper_ = 1.0;
};

/// Positive weight on (0, inf) with Matuszewska-Orlicz index estimation.
struct HerzWeight {
  std::function<double(double)> omega;
  std::string descriptor;

  static HerzWeight power(double alpha);
};

struct MoIndices {
  double m0, M0, m_inf, M_inf;
};

/// limsup/liminf in the index definitions replaced by extremes over the h
/// sample grids; t ranges over (0,1) for the 0-indices and (1,inf) mirrored.
MoIndices mo_indices(const HerzWeight& w, const std::vector<double>& t0_grid,
                     const std::vector<double>& h0_grid,
                     const std::vector<double>& tinf_grid,
                     const std::vector<double>& hinf_grid);
MoIndices mo_indices(const HerzWeight& w);  // default sample grids

/// Ball quasi-Banach function space interface: a lattice quasi-norm on grid
/// functions. Concrete kinds derive their exponent bundles on construction.
class BallSpace {
 public:
  virtual ~BallSpace() = default;

  virtual double norm(const GridFunction& f) const = 0;

  /// Norm of the exact indicator of a dilated ball; analytic where available
  /// (Lebesgue, Lorentz, invertible Orlicz), otherwise grid evaluation.
  virtual double indicator_norm(const DilatedBall& ball) const;

  virtual const ExponentBundle& exponents() const { return bundle_; }
  virtual std::string descriptor() const = 0;

  /// Norm of a simple function given as (value, measure) pairs; exact for
  /// rearrangement-invariant kinds. Others throw "UnsupportedKind".
  virtual double simple_norm(const std::vector<std::pair<double, double>>& parts) const;
  virtual bool rearrangement_invariant() const { return false; }

  /// theta0 / p0 overrides (defaults are derived per kind).
  void set_theta0(double theta0);
  void set_p0(double p0);

 protected:
  ExponentBundle bundle_;
};

using SpacePtr = std::shared_ptr<BallSpace>;

// -- concrete kinds ---------------------------------------------------------

SpacePtr make_lebesgue(double p);
SpacePtr make_lorentz(double p, double q);
SpacePtr make_orlicz(OrliczFunction phi);
SpacePtr make_variable_lebesgue(GridFunction p_field);
SpacePtr make_mixed_norm(std::vector<double> p_vec);
SpacePtr make_local_herz(HerzWeight omega, double p, double q, int k_lo = -40,
                         int k_hi = 40);

struct MorreyScan {
  int centers_per_axis = 12;
  int k_lo = -6;
  int k_hi = 6;
};
SpacePtr make_morrey(double p, double q, DilationPtr dilation,
                     MorreyScan scan = MorreyScan{});

struct SliceParams {
  int outer_per_axis_1d = 1024;  // outer-integral resolution, n = 1
  int outer_per_axis_nd = 48;    // and n >= 2
};
SpacePtr make_orlicz_slice(OrliczFunction phi, double q, int ell, DilationPtr dilation,
                           SliceParams params = SliceParams{});

/// Wrapper with norm_p(f) = norm(|f|^p)^{1/p} (the p-convexification).
SpacePtr convexify(SpacePtr space, double p);

/// `lebesgue:p=0.75`, `lorentz:p=0.5,q=0.5`, `orlicz:phi=pow(0.8)`,
/// `variable:pfile=PATH`, `mixed:p=0.5,0.75`, `herz:alpha=0.3,p=0.9,q=0.9`,
/// `morrey:p=0.9,q=0.5`, `orlicz-slice:phi=pow(0.8),q=0.7,ell=0`.
SpacePtr parse_space(const std::string& descriptor, DilationPtr dilation);

// -- derived checks ---------------------------------------------------------

struct LowerBoundRow {
  int k;
  double indicator;  // ||1_{B_k}||_X
  double bound;      // min{|B_k|^{1/q0}, |B_k|^{1/p_-}}
  double ratio;
};

/// Ratios ||1_{B_k}|| / min{|B_k|^{1/q0}, |B_k|^{1/p_-}} over a scale range.
std::vector<LowerBoundRow> check_lower_bound(const BallSpace& space,
                                             const DilationPtr& dilation, int k_lo,
                                             int k_hi, const Vector& center);

/// Concavity constant of X^{1/q0} estimated over all subsets of a family of
/// non-negative grid functions (family size <= 8).
double concavity_probe(const SpacePtr& space, double q0,
                       const std::vector<GridFunction>& family);

/// Smallest lambda with modular(lambda) <= 1, geometric bisection on
/// [1e-12, 1e12] to relative 1e-8. Throws "BisectionFailure" when the
/// modular is not <= 1 at the upper bracket.
double luxemburg_norm(const std::function<double(double)>& modular);

/// Finite-difference estimate of the log-Hoelder constant of a variable
/// exponent field (a warning probe; continuity is the caller's contract).
double log_holder_probe(const GridFunction& p_field);

/// Default per-axis resolution used when a space needs an auxiliary grid.
int default_resolution(int dim);

/// Indicator of a ball sampled on its own bounding box.
GridFunction indicator_grid(const DilatedBall& ball, int per_axis = 0);

}  // namespace aniso
