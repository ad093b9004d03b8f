#pragma once

// Static variational quantities for the damped fourth-order wave equation
// with nonlinearity |u|^(p-2) u ln|u|:
//
//   J(u) = 1/2 |u|_H^2 - 1/p int |u|^p ln|u| + 1/p^2 |u|_p^p
//   I(u) = |u|_H^2 - int |u|^p ln|u|
//   E(u, v) = 1/2 |v|_2^2 + J(u)
//
// with |u|_H^2 = |lap u|_2^2 + |grad u|_2^2 and |u|^2 = |u|_2^2 + |grad u|_2^2.
// The fibering map lambda -> J(lambda u) has a unique critical scale
// lambda_star(u) that projects any nonzero u onto the Nehari set {I = 0};
// the well depth d = inf over that set of J is estimated by multistart
// search, and bracketed from below by the analytic floor d0 built from an
// embedding constant.

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "logwave/spectral.hpp"

namespace logwave {

// Nonlinearity exponent p plus the auxiliary exponents entering the analytic
// constants.  two_star is the critical exponent (infinity for n <= 4).
struct Exponents {
  double p = 3.0;
  double sigma = 1.0;  // embedding exponent shift, p + sigma < two_star
  double mu = 1.0;     // lower-bound exponent shift, see lifespan_lower_bound
  double two_star = std::numeric_limits<double>::infinity();
};

double critical_exponent(int n);  // 2n/(n-4) for n >= 5, +inf otherwise

// Defaults: sigma = min(1, (two_star - p)/2); mu = 1 when two_star is
// infinite, otherwise 90% of the largest admissible value.
Exponents resolve_exponents(double p, int n, double sigma_override = 0.0,
                            double mu_override = 0.0);

// Validation used by config parsing; returns human-readable violations.
std::vector<std::string> validate_exponents(const Exponents& e);

// ---- Norms (coefficient space, exact for band-limited fields) ----
double l2_norm_sq(const Field& u);
double grad_norm_sq(const Field& u);
double h_norm_sq(const Field& u);    // |lap u|_2^2 + |grad u|_2^2
double h1_norm_sq(const Field& u);   // |u|_2^2 + |grad u|_2^2
double l2_inner(const Field& u, const Field& v);

// ---- Grid-quadrature integrals ----
// int |u|^p dx
double p_norm_p(const Field& u, double p);
// int |u|^p ln|u| dx with the integrand set to 0 where u vanishes (the limit
// for p > 2, and it keeps nodal lines NaN-free).
double log_potential(const Field& u, double p);

double j_functional(const Field& u, double p);
double i_functional(const Field& u, double p);
double energy(const Field& u, const Field& v, double p);

// Scalars that make every fibering evaluation O(1): one synthesis pays for
// the whole lambda sweep.
struct FiberingScalars {
  double h_sq = 0.0;    // |u|_H^2
  double log_pot = 0.0; // int |u|^p ln|u|
  double p_pow = 0.0;   // |u|_p^p
  double p = 0.0;
};

FiberingScalars fibering_scalars(const Field& u, double p);

double j_at_scale(const FiberingScalars& s, double lambda);
double i_at_scale(const FiberingScalars& s, double lambda);

struct FiberingProfile {
  std::vector<double> lambda;
  std::vector<double> j;
  std::vector<double> i;
};

// Closed-form J(lambda u), I(lambda u) over the given grid; throws on u = 0.
FiberingProfile fibering_profile(const Field& u, std::span<const double> lambda_grid, double p);

struct LambdaStar {
  double lambda = 0.0;
  double residual = 0.0;  // g(lambda*), g(l) = |u|_H^2 - l^(p-2)(L + P ln l)
};

// Unique positive critical scale of the fibering map.  Brackets by
// doubling/halving from lambda = 1, then bisection plus Newton polish on
// cached scalars.  Throws std::invalid_argument on u = 0 and
// std::runtime_error when no sign change is found in the searched range.
LambdaStar lambda_star(const Field& u, double p);
LambdaStar lambda_star(const FiberingScalars& s);

// ---- Embedding constants and the potential-well floor ----

struct EmbeddingEstimate {
  double q = 0.0;
  double raw = 0.0;        // best found |u|_q / |u|_H
  double value = 0.0;      // raw * safety
  double safety = 1.05;
  int restarts = 0;
  int iterations = 0;
};

// sup |u|_q / |u|_H over the truncated basis by multistart projected gradient
// ascent on the H-sphere (ascent direction preconditioned by the diagonal H
// metric).  Deterministic for a fixed seed.  Requires 2 <= q < two_star.
EmbeddingEstimate estimate_embedding_constant(const DomainPtr& domain, double q,
                                              double two_star, int restarts = 8,
                                              std::uint64_t seed = 0x1ec5eedULL);

struct NehariFloor {
  double c_star = 0.0;  // (e sigma / B_sigma^(p+sigma))^(1/(p+sigma-2))
  double d0 = 0.0;      // (p-2)/(2p) * c_star^2
};

NehariFloor nehari_floor(const Exponents& e, double b_sigma);

struct DepthEstimate {
  double d_est = 0.0;                  // running minimum over all evaluations
  std::vector<double> coeffs;          // minimizer coefficients (budget modes)
  std::vector<double> restart_values;  // best value per restart
  int mode_budget = 0;
  int evaluations = 0;
};

// Estimate of d = inf_u sup_lambda J(lambda u): Nelder-Mead over the first
// `mode_budget` coefficients, H-normalized inside the objective, multistart
// from the first eigenmode plus seeded random vectors plus optional
// warm-start candidates (used to keep the estimate monotone when the budget
// grows).
DepthEstimate estimate_well_depth(const DomainPtr& domain, const Exponents& e, int restarts,
                                  int mode_budget, std::uint64_t seed,
                                  std::span<const std::vector<double>> warm_starts = {});

struct WellAnalysis {
  Exponents exponents;
  EmbeddingEstimate b_sigma;  // H -> L^(p+sigma)
  EmbeddingEstimate b_mu;     // H -> L^(2(p-1+mu))
  double c_star = 0.0;
  double d0 = 0.0;
  double d_est = 0.0;
  DepthEstimate depth;
  int restarts = 0;
  std::uint64_t seed = 0;
};

WellAnalysis analyze_well(const DomainPtr& domain, const Exponents& e, int restarts,
                          int mode_budget, std::uint64_t seed);

// ---- Initial-data regimes ----

struct RegimeTag {
  bool negative_energy = false;        // E(0) < 0
  bool subcritical_unstable = false;   // I(u0) < 0 and E(0) < d_est
  bool high_energy_growth = false;     // 0 < E(0) < (C0/p)(u0, u1)
  bool high_energy_bound = false;      // above plus E(0) < (C0/p)|u0|_2^2
  bool none_proven() const {
    return !(negative_energy || subcritical_unstable || high_energy_growth);
  }
  // Inputs the classification was made from.
  double e0 = 0.0;
  double i0 = 0.0;
  double j0 = 0.0;
  double uv0 = 0.0;
  double l2_0 = 0.0;
  double c0 = 0.0;
  double d_est = 0.0;
};

RegimeTag classify_initial_data(const Field& u0, const Field& u1, const WellAnalysis& well,
                                double lambda1);

}  // namespace logwave
