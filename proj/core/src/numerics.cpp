#include "logwave/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace logwave {

double SplitMix64::next_normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  // Box-Muller; u1 is kept away from zero so log() stays finite.
  double u1 = next_uniform();
  if (u1 < 0x1.0p-53) u1 = 0x1.0p-53;
  const double u2 = next_uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  cached_ = r * std::sin(phi);
  has_cached_ = true;
  return r * std::cos(phi);
}

RootResult bisect_root(const std::function<double(double)>& f, double lo, double hi,
                       int bisect_steps, const std::function<double(double)>& df) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return {lo, 0.0, 0};
  if (fhi == 0.0) return {hi, 0.0, 0};
  if ((flo > 0.0) == (fhi > 0.0))
    throw std::invalid_argument("bisect_root: endpoints do not bracket a sign change");

  int iters = 0;
  for (; iters < bisect_steps; ++iters) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double fmid = f(mid);
    if (fmid == 0.0) return {mid, 0.0, iters + 1};
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
      fhi = fmid;
    }
  }

  double x = 0.5 * (lo + hi);
  double fx = f(x);
  if (df) {
    for (int polish = 0; polish < 4; ++polish) {
      const double d = df(x);
      if (d == 0.0 || !std::isfinite(d)) break;
      const double step = fx / d;
      const double next = x - step;
      if (!(next > lo && next < hi)) break;
      const double fnext = f(next);
      if (std::abs(fnext) >= std::abs(fx)) break;
      x = next;
      fx = fnext;
      ++iters;
    }
  }
  return {x, fx, iters};
}

MinResult golden_section(const std::function<double(double)>& f, double lo, double hi,
                         double rel_tol, int max_iter) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < max_iter && (b - a) > rel_tol * (std::abs(a) + std::abs(b) + 1e-300);
       ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? MinResult{c, fc} : MinResult{d, fd};
}

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::span<const double> start, double scale, double tol,
                             int max_evals) {
  const int n = static_cast<int>(start.size());
  if (n == 0) throw std::invalid_argument("nelder_mead: empty start point");
  if (max_evals <= 0) max_evals = 400 * n + 400;

  std::vector<std::vector<double>> simplex(n + 1, std::vector<double>(start.begin(), start.end()));
  std::vector<double> values(n + 1);
  int evals = 0;
  auto eval = [&](std::span<const double> x) {
    ++evals;
    return f(x);
  };
  for (int i = 1; i <= n; ++i) simplex[i][i - 1] += scale;
  for (int i = 0; i <= n; ++i) values[i] = eval(simplex[i]);

  std::vector<double> centroid(n), trial(n), trial2(n);
  while (evals < max_evals) {
    // Order best..worst via index sort of values.
    int best = 0, worst = 0, second_worst = 0;
    for (int i = 1; i <= n; ++i) {
      if (values[i] < values[best]) best = i;
      if (values[i] > values[worst]) worst = i;
    }
    second_worst = best;
    for (int i = 0; i <= n; ++i)
      if (i != worst && values[i] > values[second_worst]) second_worst = i;

    if (values[worst] - values[best] <= tol * (std::abs(values[best]) + tol)) break;

    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int i = 0; i <= n; ++i)
        if (i != worst) acc += simplex[i][j];
      centroid[j] = acc / n;
    }

    auto blend = [&](std::vector<double>& out, double coef) {
      for (int j = 0; j < n; ++j) out[j] = centroid[j] + coef * (simplex[worst][j] - centroid[j]);
    };

    blend(trial, -1.0);  // reflection
    const double f_reflect = eval(trial);
    if (f_reflect < values[best]) {
      blend(trial2, -2.0);  // expansion
      const double f_expand = eval(trial2);
      if (f_expand < f_reflect) {
        simplex[worst] = trial2;
        values[worst] = f_expand;
      } else {
        simplex[worst] = trial;
        values[worst] = f_reflect;
      }
    } else if (f_reflect < values[second_worst]) {
      simplex[worst] = trial;
      values[worst] = f_reflect;
    } else {
      const bool outside = f_reflect < values[worst];
      blend(trial2, outside ? -0.5 : 0.5);  // contraction
      const double f_contract = eval(trial2);
      if (f_contract < std::min(f_reflect, values[worst])) {
        simplex[worst] = trial2;
        values[worst] = f_contract;
      } else {
        // Shrink toward the best vertex.
        for (int i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (int j = 0; j < n; ++j)
            simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
          values[i] = eval(simplex[i]);
        }
      }
    }
  }

  int best = 0;
  for (int i = 1; i <= n; ++i)
    if (values[i] < values[best]) best = i;
  return {simplex[best], values[best], evals};
}

namespace {

double simpson_segment(const std::function<double(double)>& f, double a, double fa, double b,
                       double fb, double m, double fm, double whole, double abs_tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * abs_tol) return left + right + delta / 15.0;
  return simpson_segment(f, a, fa, m, fm, lm, flm, left, 0.5 * abs_tol, depth - 1) +
         simpson_segment(f, m, fm, b, fb, rm, frm, right, 0.5 * abs_tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_segment(f, a, fa, b, fb, m, fm, whole, abs_tol, max_depth);
}

}  // namespace logwave
