#include <benchmark/benchmark.h>

#include <numbers>
#include <vector>

#include "logwave/dynamics.hpp"
#include "logwave/functionals.hpp"
#include "logwave/numerics.hpp"
#include "logwave/spectral.hpp"

namespace {

constexpr double kPi = std::numbers::pi;

logwave::DomainPtr make_1d(int modes) {
  return logwave::Domain::create({1, {kPi, 0}, {modes, 0}, {2 * modes, 0}});
}

logwave::Field random_field(const logwave::DomainPtr& dom, std::uint64_t seed) {
  logwave::SplitMix64 rng(seed);
  const auto& mu = dom->eigenvalues();
  std::vector<double> c(dom->mode_count());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = rng.next_normal() / (1.0 + mu[k]);
  return logwave::Field(dom, std::move(c));
}

void BM_Synthesize1D(benchmark::State& state) {
  const auto dom = make_1d(static_cast<int>(state.range(0)));
  const logwave::Field u = random_field(dom, 1);
  std::vector<double> grid(dom->node_count());
  for (auto _ : state) {
    dom->synthesize(u.coeffs(), grid);
    benchmark::DoNotOptimize(grid.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Synthesize1D)->RangeMultiplier(2)->Range(32, 512)->Complexity();

void BM_Analyze1D(benchmark::State& state) {
  const auto dom = make_1d(static_cast<int>(state.range(0)));
  const logwave::Field u = random_field(dom, 2);
  std::vector<double> grid(dom->node_count()), back(dom->mode_count());
  dom->synthesize(u.coeffs(), grid);
  for (auto _ : state) {
    dom->analyze(grid, back);
    benchmark::DoNotOptimize(back.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Analyze1D)->RangeMultiplier(2)->Range(32, 512)->Complexity();

void BM_Transform2D(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto dom = logwave::Domain::create({2, {kPi, kPi}, {m, m}, {2 * m, 2 * m}});
  const logwave::Field u = random_field(dom, 3);
  std::vector<double> grid(dom->node_count());
  for (auto _ : state) {
    dom->synthesize(u.coeffs(), grid);
    benchmark::DoNotOptimize(grid.data());
  }
  state.SetComplexityN(m);
}
BENCHMARK(BM_Transform2D)->RangeMultiplier(2)->Range(16, 128)->Complexity();

void BM_StrangStep(benchmark::State& state) {
  const auto dom = make_1d(static_cast<int>(state.range(0)));
  const logwave::EquationSetup eq{dom, 3.0, 1.0, logwave::DampingSchedule{}, true};
  logwave::State st{random_field(dom, 4), logwave::Field(dom)};
  for (auto _ : state) {
    logwave::step(st, 1e-4, eq);
    benchmark::DoNotOptimize(st.u.coeffs().data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_StrangStep)->RangeMultiplier(4)->Range(32, 512)->Complexity();

void BM_FiberingScalars(benchmark::State& state) {
  const auto dom = make_1d(static_cast<int>(state.range(0)));
  const logwave::Field u = random_field(dom, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(logwave::fibering_scalars(u, 3.0).log_pot);
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_FiberingScalars)->Arg(64)->Arg(256);

void BM_LambdaStar(benchmark::State& state) {
  const auto dom = make_1d(64);
  logwave::Field u = random_field(dom, 6);
  const logwave::FiberingScalars fs = logwave::fibering_scalars(u, 3.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(logwave::lambda_star(fs).lambda);
  }
}
BENCHMARK(BM_LambdaStar);

}  // namespace

BENCHMARK_MAIN();
