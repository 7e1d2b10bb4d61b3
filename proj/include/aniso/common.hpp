#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace aniso {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Library error with a stable machine-readable code ("NotExpansive",
/// "Singular", "OutOfRange", ...). The CLI maps codes onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& what) {
  throw Error(code, what);
}

/// Seeded RNG wrapper. All randomness in the library flows through explicit
/// 64-bit seeds; no ambient entropy.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() { return uni_(eng_); }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  double normal() { return normal_(eng_); }
  std::uint64_t next_u64() { return eng_(); }
  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  Vector gaussian(int n) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  /// Uniform sample of the Euclidean unit ball in R^n.
  Vector unit_ball(int n) {
    Vector dir = gaussian(n);
    double nrm = dir.norm();
    while (nrm < 1e-12) {
      dir = gaussian(n);
      nrm = dir.norm();
    }
    double radius = std::pow(uniform(), 1.0 / n);
    return dir * (radius / nrm);
  }

 private:
  std::mt19937_64 eng_;
  std::uniform_real_distribution<double> uni_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Volume of the Euclidean unit ball in R^n.
inline double unit_ball_volume(int n) {
  return std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

}  // namespace aniso
