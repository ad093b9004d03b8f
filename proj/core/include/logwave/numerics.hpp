#pragma once

// Small numeric kit shared by the variational and lifespan-bound code: a
// counter-based RNG that behaves identically on every platform (std
// distributions are implementation-defined, which would break byte-stable
// reports), bracketed root finding, golden-section minimization, Nelder-Mead
// and an adaptive Simpson rule.

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace logwave {

// splitmix64; passes through all 2^64 states, good enough for multistart
// seeding and fully deterministic.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller (one value per call, cached partner).
  double next_normal();

 private:
  std::uint64_t state_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

struct RootResult {
  double x = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

// Root of f on [lo, hi] with f(lo), f(hi) of opposite sign: bisection to a
// tight bracket followed by a few Newton polish steps using the numerical
// derivative callback when provided.
RootResult bisect_root(const std::function<double(double)>& f, double lo, double hi,
                       int bisect_steps = 100,
                       const std::function<double(double)>& df = nullptr);

struct MinResult {
  double x = 0.0;
  double value = 0.0;
};

// Golden-section minimum of a unimodal f on [lo, hi].
MinResult golden_section(const std::function<double(double)>& f, double lo, double hi,
                         double rel_tol = 1e-10, int max_iter = 200);

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
};

// Standard Nelder-Mead on R^n, terminating when the simplex value spread
// falls below tol.  `scale` sets the initial simplex edge length.
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::span<const double> start, double scale, double tol = 1e-8,
                             int max_evals = 0);

// Adaptive Simpson on [a, b] to the requested absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth = 40);

// pow with fast paths for the exponents the nonlinearity actually uses;
// pointwise kicks spend most of their time here otherwise.
inline double pow_fast(double base, double exponent) {
  if (exponent == 1.0) return base;
  if (exponent == 2.0) return base * base;
  if (exponent == 3.0) return base * base * base;
  return std::pow(base, exponent);
}

}  // namespace logwave
