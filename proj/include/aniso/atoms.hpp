#pragma once

#include <complex>
#include <vector>

#include "aniso/common.hpp"
#include "aniso/dilation.hpp"
#include "aniso/grid.hpp"
#include "aniso/spaces.hpp"

namespace aniso {

/// Grid realization of an (X,q,d)-atom: supported in a dilated ball,
/// L^q-size bounded by |B|^{1/q} ||1_B||_X^{-1}, discrete moments up to
/// total degree d vanishing.
struct Atom {
  GridFunction f;
  DilatedBall ball;
  double q = 2.0;
  int d = 0;
  SpacePtr space;
  std::uint64_t seed = 0;

  struct Certs {
    double support_leak = 0.0;  // max |f| outside the ball / max |f|
    double size_slack = 0.0;    // ||f||_q / admissible bound
    double max_moment = 0.0;    // max over |gamma|<=d of normalized |moment|
  } certs;
};

struct AtomicDecomposition {
  std::vector<std::complex<double>> lambdas;
  std::vector<Atom> atoms;

  std::size_t size() const { return lambdas.size(); }
};

/// Smallest admissible moment degree: max(floor((1/theta0 - 1) ln b / ln lambda_-), 0).
int default_d(const ExponentBundle& e, const ExpansiveDilation& d);

/// Seeded random atom: smooth bump in the ball, moment-killed against the
/// window Gram system, rescaled (down only) into the size bound.
/// Throws Error("GramSingular") when the moment system is too ill-conditioned
/// for the grid resolution.
Atom make_atom(const SpacePtr& space, const DilatedBall& ball, double q, int d,
               std::uint64_t seed, int per_axis = 0);

/// The 1-D analytic atom sign(x) 1_{(-1/2,1/2)} scaled onto B_k (A = 2I_1
/// geometry); closed forms for its transform are used as test oracles.
Atom make_sign_atom(const SpacePtr& space, const DilatedBall& ball, double q,
                    int per_axis = 0);

struct AtomReport {
  bool pass = false;
  double support_leak = 0.0, size_slack = 0.0, max_moment = 0.0;
  double support_tol = 1e-14, size_tol = 1e-10, moment_tol = 1e-10;
};

AtomReport validate_atom(const Atom& a);

/// || { sum_j [ |lambda_j| 1_{B_j} / ||1_{B_j}||_X ]^{theta0} }^{1/theta0} ||_X
/// evaluated for the given finite decomposition (no infimum). In one
/// dimension the indicator stack is assembled on the exact interval
/// arrangement and rearrangement-invariant spaces evaluate it exactly;
/// otherwise the stack is assembled on a grid.
double atomic_quasi_norm(const AtomicDecomposition& dec, double theta0);

struct CoefficientBound {
  double lhs = 0.0;  // sum |lambda_i|
  double rhs = 0.0;  // atomic quasi-norm
  double ratio = 0.0;
};

CoefficientBound coefficient_bound_check(const AtomicDecomposition& dec, double theta0);

/// Seeded ensemble: `count` atoms at random scales/centers with geometrically
/// decaying coefficient magnitudes and random signs (the coefficient decay
/// models a convergent atomic series).
struct DecompositionParams {
  int count = 10;
  int scale_lo = -3, scale_hi = 3;
  double decay_lo = 0.10, decay_hi = 0.20;  // per-atom magnitude ratio range
  double center_spread = 0.0;               // centers uniform in [-s, s]^n
  int per_axis = 0;
};

AtomicDecomposition make_random_decomposition(const SpacePtr& space,
                                              const DilationPtr& dilation, double q,
                                              int d, std::uint64_t seed,
                                              const DecompositionParams& params = {});

}  // namespace aniso
