#include <doctest.h>

#include <cmath>
#include <vector>

#include "logwave/functionals.hpp"
#include "logwave/numerics.hpp"
#include "test_support.hpp"

using namespace logwave;
using namespace testsupport;

namespace {

Field scaled(const Field& u, double factor) {
  Field out = u;
  out *= factor;
  return out;
}

}  // namespace

TEST_CASE("norms on eigenmodes") {
  auto dom = domain_1d(kPi, 16);
  Field s1 = one_hot(dom, 0);
  Field s2 = one_hot(dom, 1);

  CHECK(h_norm_sq(s1) == doctest::Approx(kPi).epsilon(1e-13));
  CHECK(h_norm_sq(Field(dom)) == 0.0);
  CHECK(h_norm_sq(s2) == doctest::Approx(10.0 * kPi).epsilon(1e-13));

  CHECK(h1_norm_sq(s1) == doctest::Approx(kPi).epsilon(1e-13));
  CHECK(h1_norm_sq(s2) == doctest::Approx(2.5 * kPi).epsilon(1e-13));

  SUBCASE("lambda1 |u|^2 <= |u|_H^2 over random fields") {
    SplitMix64 rng(123);
    for (int rep = 0; rep < 100; ++rep) {
      std::vector<double> c(dom->mode_count());
      for (auto& ck : c) ck = rng.next_normal();
      Field u(dom, std::move(c));
      CHECK(dom->lambda1() * h1_norm_sq(u) <= h_norm_sq(u) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("log potential against the Simpson oracle") {
  auto dom = domain_1d(kPi, 64, 256);
  const double p = 3.0;

  CHECK(log_potential(Field(dom), p) == 0.0);

  Field s1 = one_hot(dom, 0);
  const double got1 = log_potential(s1, p);
  const double oracle1 = simpson([&](double x) { return pow_log(std::sin(x), p); }, 0.0, kPi);
  CHECK(got1 < 0.0);  // |sin| <= 1 makes the integrand nonpositive
  CHECK(got1 == doctest::Approx(oracle1).epsilon(1e-8));

  Field s2 = one_hot(dom, 0, 2.0);
  const double got2 = log_potential(s2, p);
  const double oracle2 =
      simpson([&](double x) { return pow_log(2.0 * std::sin(x), p); }, 0.0, kPi);
  CHECK(got2 == doctest::Approx(oracle2).epsilon(1e-8));
}

TEST_CASE("J and I") {
  auto dom = domain_1d(kPi, 64, 256);
  const double p = 3.0;

  SUBCASE("zero field") {
    CHECK(j_functional(Field(dom), p) == 0.0);
    CHECK(i_functional(Field(dom), p) == 0.0);
  }

  SUBCASE("decomposition identity J = (p-2)/2p |u|_H^2 + I/p + |u|_p^p / p^2") {
    SplitMix64 rng(9);
    for (int rep = 0; rep < 10; ++rep) {
      std::vector<double> c(dom->mode_count());
      for (auto& ck : c) ck = 0.6 * rng.next_normal();
      Field u(dom, std::move(c));
      const double lhs = j_functional(u, p);
      const double rhs = (p - 2.0) / (2.0 * p) * h_norm_sq(u) + i_functional(u, p) / p +
                         p_norm_p(u, p) / (p * p);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
  }

  SUBCASE("sin x against the quadrature oracle") {
    Field s1 = one_hot(dom, 0);
    const double log_pot = simpson([&](double x) { return pow_log(std::sin(x), p); }, 0.0, kPi);
    const double p_pow =
        simpson([&](double x) { return std::pow(std::sin(x), p); }, 0.0, kPi);
    const double j_oracle = 0.5 * kPi - log_pot / p + p_pow / (p * p);
    const double i_oracle = kPi - log_pot;
    CHECK(j_functional(s1, p) == doctest::Approx(j_oracle).epsilon(1e-8));
    CHECK(i_functional(s1, p) == doctest::Approx(i_oracle).epsilon(1e-8));
  }
}

TEST_CASE("fibering profile") {
  auto dom = domain_1d(kPi, 32);
  const double p = 3.0;
  SplitMix64 rng(21);
  std::vector<double> c(dom->mode_count());
  for (auto& ck : c) ck = rng.next_normal();
  Field u(dom, std::move(c));

  SUBCASE("limits: J(lambda u) -> 0 as lambda -> 0, eventually negative for large lambda") {
    const double hsq = h_norm_sq(u);
    const std::vector<double> grid = {1e-8, 1e-6, 1e-4};
    const FiberingProfile prof = fibering_profile(u, grid, p);
    // The quadratic term dominates near zero, so |J(lambda u)| <= lambda^2 hsq.
    for (std::size_t g = 0; g < grid.size(); ++g)
      CHECK(std::abs(prof.j[g]) <= grid[g] * grid[g] * hsq);
    double lambda = lambda_star(u, p).lambda;
    int guard = 0;
    while (j_at_scale(fibering_scalars(u, p), lambda) >= 0.0) {
      lambda *= 2.0;
      REQUIRE(++guard < 200);
    }
    CHECK(j_at_scale(fibering_scalars(u, p), lambda) < 0.0);
  }

  SUBCASE("profile matches direct evaluation of J(scale(u, lambda))") {
    std::vector<double> grid;
    for (int g = 1; g <= 20; ++g) grid.push_back(0.2 * g);
    const FiberingProfile prof = fibering_profile(u, grid, p);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const double direct_j = j_functional(scaled(u, grid[g]), p);
      const double direct_i = i_functional(scaled(u, grid[g]), p);
      CHECK(prof.j[g] == doctest::Approx(direct_j).epsilon(1e-9));
      CHECK(prof.i[g] == doctest::Approx(direct_i).epsilon(1e-9));
    }
  }

  SUBCASE("zero field is rejected") {
    const std::vector<double> grid = {1.0};
    CHECK_THROWS_AS(fibering_profile(Field(dom), grid, p), std::invalid_argument);
    CHECK_THROWS_AS(lambda_star(Field(dom), p), std::invalid_argument);
  }
}

TEST_CASE("lambda_star") {
  auto dom = domain_1d(kPi, 32);
  const double p = 3.0;

  SUBCASE("fixed point: rescaling by lambda_star gives lambda_star = 1") {
    SplitMix64 rng(4);
    for (int rep = 0; rep < 5; ++rep) {
      std::vector<double> c(dom->mode_count());
      for (auto& ck : c) ck = rng.next_normal();
      Field v(dom, std::move(c));
      const LambdaStar vs = lambda_star(v, p);
      CHECK(std::abs(vs.residual) <= 1e-10 * h_norm_sq(v));
      const Field u = scaled(v, vs.lambda);
      CHECK(lambda_star(u, p).lambda == doctest::Approx(1.0).epsilon(1e-8));
      CHECK(std::abs(i_functional(u, p)) <= 1e-9 * h_norm_sq(u));
    }
  }

  SUBCASE("I(u) < 0 implies lambda_star in (0,1)") {
    Field big = one_hot(dom, 0, 4.5);
    REQUIRE(i_functional(big, p) < 0.0);
    const double ls = lambda_star(big, p).lambda;
    CHECK(ls > 0.0);
    CHECK(ls < 1.0);
  }

  SUBCASE("matches a sign-scan bisection oracle on the direct I evaluation") {
    Field s1 = one_hot(dom, 0);
    // Oracle: bisection on lambda -> I(scale(u, lambda)) evaluated through
    // the full functional path, no closed form.
    double lo = 1e-3, hi = 1.0;
    REQUIRE(i_functional(scaled(s1, lo), p) > 0.0);
    while (i_functional(scaled(s1, hi), p) > 0.0) hi *= 1.5;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (i_functional(scaled(s1, mid), p) > 0.0)
        lo = mid;
      else
        hi = mid;
    }
    const double oracle = 0.5 * (lo + hi);
    CHECK(lambda_star(s1, p).lambda == doctest::Approx(oracle).epsilon(1e-8));
  }
}

TEST_CASE("embedding constant estimation") {
  const double two_star = critical_exponent(1);

  SUBCASE("q = 2 on (0,pi): supremum is 1/sqrt(2), attained at the first eigenmode") {
    auto dom = domain_1d(kPi, 32);
    const EmbeddingEstimate est = estimate_embedding_constant(dom, 2.0, two_star, 6, 1);
    CHECK(est.raw == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.02));
    CHECK(est.value == doctest::Approx(est.raw * 1.05).epsilon(1e-12));
  }

  SUBCASE("q = 4: stable to 1% across 10 seeds") {
    auto dom = domain_1d(kPi, 32);
    double lo = 1e300, hi = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const double raw = estimate_embedding_constant(dom, 4.0, two_star, 4, seed).raw;
      lo = std::min(lo, raw);
      hi = std::max(hi, raw);
    }
    CHECK((hi - lo) / hi < 0.01);
  }

  SUBCASE("doubling the mode count moves the estimate by < 1%") {
    const double raw32 =
        estimate_embedding_constant(domain_1d(kPi, 32), 4.0, two_star, 4, 3).raw;
    const double raw64 =
        estimate_embedding_constant(domain_1d(kPi, 64), 4.0, two_star, 4, 3).raw;
    CHECK(std::abs(raw64 - raw32) / raw32 < 0.01);
  }

  SUBCASE("out-of-range exponent is rejected") {
    auto dom = domain_1d(kPi, 8);
    CHECK_THROWS_AS(estimate_embedding_constant(dom, 1.5, two_star, 2, 1),
                    std::invalid_argument);
  }
}

TEST_CASE("nehari floor") {
  Exponents e = resolve_exponents(3.0, 1);

  SUBCASE("collapsing B makes C* = 1") {
    const double b = std::pow(std::exp(1.0) * e.sigma, 1.0 / (e.p + e.sigma));
    const NehariFloor f = nehari_floor(e, b);
    CHECK(f.c_star == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("p = 3, sigma = 1, B = 1") {
    const NehariFloor f = nehari_floor(e, 1.0);
    CHECK(f.c_star == doctest::Approx(std::sqrt(std::exp(1.0))).epsilon(1e-12));
    CHECK(f.d0 == doctest::Approx(std::exp(1.0) / 6.0).epsilon(1e-12));
  }
  SUBCASE("d0 tracks C*^2 under perturbations of B") {
    const NehariFloor f1 = nehari_floor(e, 0.8);
    const NehariFloor f2 = nehari_floor(e, 0.9);
    CHECK(f1.d0 / f2.d0 ==
          doctest::Approx((f1.c_star * f1.c_star) / (f2.c_star * f2.c_star)).epsilon(1e-12));
  }
}

TEST_CASE("well depth estimation") {
  auto dom = domain_1d(kPi, 64);
  const Exponents e = resolve_exponents(3.0, 1);

  SUBCASE("single-mode budget reproduces the eigenmode fibering maximum, scale-free") {
    const DepthEstimate est = estimate_well_depth(dom, e, 3, 1, 17);
    Field s1 = one_hot(dom, 0);
    const double ls = lambda_star(s1, 3.0).lambda;
    const double expect = j_functional(scaled(s1, ls), 3.0);
    CHECK(est.d_est == doctest::Approx(expect).epsilon(1e-7));
    // Scale invariance: the estimate does not depend on the seed amplitude.
    const DepthEstimate est2 = estimate_well_depth(dom, e, 3, 1, 99);
    CHECK(est2.d_est == doctest::Approx(est.d_est).epsilon(1e-7));
  }

  SUBCASE("d_est sits above the analytic floor and shrinks with the budget") {
    const WellAnalysis well = analyze_well(dom, e, 6, 4, 7);
    CHECK(well.d_est >= 0.95 * well.d0);

    DepthEstimate prev = well.depth;
    for (int budget : {16, 64}) {
      std::vector<std::vector<double>> warm = {prev.coeffs};
      const DepthEstimate next = estimate_well_depth(dom, e, 6, budget, 7, warm);
      CHECK(next.d_est <= prev.d_est + 1e-9);
      prev = next;
    }
  }
}

TEST_CASE("energy") {
  auto dom = domain_1d(kPi, 16);
  const double p = 3.0;
  CHECK(energy(Field(dom), Field(dom), p) == 0.0);
  CHECK(energy(Field(dom), one_hot(dom, 0), p) == doctest::Approx(kPi / 4.0).epsilon(1e-13));

  SplitMix64 rng(2);
  std::vector<double> c(dom->mode_count());
  for (auto& ck : c) ck = rng.next_normal();
  Field u(dom, c);
  for (auto& ck : c) ck = rng.next_normal();
  Field v(dom, c);
  CHECK(energy(u, v, p) ==
        doctest::Approx(0.5 * l2_norm_sq(v) + j_functional(u, p)).epsilon(1e-12));
}

TEST_CASE("initial data classification") {
  auto dom = domain_1d(kPi, 32);
  const Exponents e = resolve_exponents(3.0, 1);
  const WellAnalysis well = analyze_well(dom, e, 4, 8, 5);
  const double lambda1 = dom->lambda1();

  SUBCASE("zero data proves nothing") {
    const RegimeTag tag = classify_initial_data(Field(dom), Field(dom), well, lambda1);
    CHECK(tag.none_proven());
    CHECK_FALSE(tag.negative_energy);
    CHECK_FALSE(tag.subcritical_unstable);
  }

  SUBCASE("sweeping the eigenmode amplitude up crosses into negative energy") {
    Field s1 = one_hot(dom, 0);
    const FiberingScalars fs = fibering_scalars(s1, e.p);
    double amplitude = 1.0;
    while (j_at_scale(fs, amplitude) >= 0.0) {
      amplitude *= 1.1;
      REQUIRE(amplitude < 1e6);
    }
    const RegimeTag tag = classify_initial_data(scaled(s1, amplitude), Field(dom), well, lambda1);
    CHECK(tag.negative_energy);
    CHECK(tag.subcritical_unstable);  // E(0) < 0 forces I(u0) < 0
  }

  SUBCASE("high-energy growth flag matches the direct predicate") {
    Field u0 = one_hot(dom, 0, 4.0);
    const double c0 = std::min({e.p + 2.0, e.p * (e.p - 2.0) * lambda1,
                                0.5 * (e.p - 2.0) * (lambda1 + lambda1 * lambda1)});
    for (double vel : {0.05, 0.2, 0.4, 0.9}) {
      Field u1 = scaled(u0, vel);
      const RegimeTag tag = classify_initial_data(u0, u1, well, lambda1);
      const double e0 = energy(u0, u1, e.p);
      const bool predicate = e0 > 0.0 && e0 < c0 / e.p * l2_inner(u0, u1);
      CHECK(tag.high_energy_growth == predicate);
    }
  }
}
