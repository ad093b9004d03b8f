#pragma once

// Shared helpers for the unit suites.  The quadrature oracle here is kept
// deliberately independent of the library: plain composite Simpson on
// analytic integrands, no Field, no Domain.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "logwave/spectral.hpp"

namespace testsupport {

inline constexpr double kPi = std::numbers::pi;

inline logwave::DomainPtr domain_1d(double length = kPi, int modes = 32, int grid = 0) {
  return logwave::Domain::create({1, {length, 0.0}, {modes, 0}, {grid == 0 ? 2 * modes : grid, 0}});
}

inline logwave::DomainPtr domain_2d(double lx = kPi, double ly = kPi, int mx = 8, int my = 8) {
  return logwave::Domain::create({2, {lx, ly}, {mx, my}, {2 * mx, 2 * my}});
}

inline logwave::Field one_hot(const logwave::DomainPtr& dom, std::size_t mode,
                              double amplitude = 1.0) {
  std::vector<double> c(dom->mode_count(), 0.0);
  c.at(mode) = amplitude;
  return logwave::Field(dom, std::move(c));
}

// Composite Simpson with n panels (n even); the brute-force oracle for the
// grid quadratures used by the log-potential functionals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 1000000) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

// x^p ln x extended by 0 at x = 0 (the convention the functionals use).
inline double pow_log(double x, double p) {
  const double a = std::abs(x);
  return a == 0.0 ? 0.0 : std::pow(a, p) * std::log(a);
}

}  // namespace testsupport
