#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "aniso/common.hpp"
#include "aniso/dilation.hpp"

namespace aniso {

struct Box {
  Vector lo, hi;
  int dim() const { return static_cast<int>(lo.size()); }
  double volume() const { return (hi - lo).prod(); }
};

/// Compactly supported function sampled at the centers of a uniform tensor
/// grid. Values are implicitly zero outside the box. Immutable after
/// construction in library use; quadrature is the midpoint rule throughout.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(Box box, std::vector<int> shape);

  static GridFunction sample(Box box, std::vector<int> shape,
                             const std::function<double(const Vector&)>& f);

  const Box& box() const { return box_; }
  const std::vector<int>& shape() const { return shape_; }
  const Vector& h() const { return h_; }
  double cell_volume() const { return cell_volume_; }
  int dim() const { return box_.dim(); }
  std::size_t size() const { return values_.size(); }

  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  /// Cell-center coordinates of the flat index i (row-major, last axis fastest).
  Vector point(std::size_t i) const;

  /// Multilinear interpolation, zero outside the box.
  double evaluate(const Vector& x) const;

 private:
  Box box_;
  std::vector<int> shape_;
  Vector h_;
  double cell_volume_ = 0.0;
  std::vector<double> values_;
};

/// Midpoint-rule integral: sum(values) * cell volume.
double quadrature(const GridFunction& f);

/// (integral of |f|^q)^{1/q}; q = infinity gives max |values|.
double lq_norm(const GridFunction& f, double q);

/// g(x) = f(A^k x), resampled on the pulled-back bounding box with
/// multilinear interpolation. k = 0 reproduces f exactly.
GridFunction dilate(const GridFunction& f, const ExpansiveDilation& d, int k);

/// hat f(xi) = cellvol * sum_j f(x_j) exp(-2 pi i x_j . xi)
std::complex<double> fourier_at(const GridFunction& f, const Vector& xi);

std::vector<std::complex<double>> fourier_on_grid(const GridFunction& f,
                                                  const std::vector<Vector>& xis);

/// f with samples multiplied by x^alpha (used by fourier_derivative_at).
GridFunction monomial_weighted(const GridFunction& f, const std::vector<int>& alpha);

/// d^alpha hat f(xi) = (-2 pi i)^{|alpha|} * fourier of x^alpha f.
std::complex<double> fourier_derivative_at(const GridFunction& f, const Vector& xi,
                                           const std::vector<int>& alpha);

/// Non-increasing rearrangement f*(t) as a step function: values descending
/// with their cumulative measures.
struct Rearrangement {
  struct Step {
    double value;
    double cumulative;  // measure of {f* >= value} up to this step
  };
  std::vector<Step> steps;      // strictly decreasing values
  double support_measure = 0.0; // measure of {f != 0}

  /// L^q norm recovered from the rearrangement.
  double lq_norm(double q) const;

  /// Lorentz L^{p,q} quasi-norm by exact summation over the steps.
  double lorentz_norm(double p, double q) const;
};

Rearrangement rearrange(const GridFunction& f);

}  // namespace aniso
