#pragma once

// Sine-spectral domain for intervals and rectangles with u = lap(u) = 0 on the
// boundary.  The basis phi_k(x) = prod_i sin(k_i pi x_i / L_i) diagonalizes
// both -lap and lap^2, so the stiff linear part of the wave operator costs a
// table lookup per mode.  Grid samples live on the uniform interior nodes
// x_j = j L / N; transforms are dense DST matrices cached per axis, which at
// desk scale (<= 512 modes per axis) beats setting up an FFT plan and keeps
// every run bit-reproducible.

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace logwave {

struct DomainSpec {
  int dim = 1;                         // 1 or 2
  std::array<double, 2> extent{0, 0};  // side lengths L_i > 0
  std::array<int, 2> modes{0, 0};      // retained modes per axis, M_i >= 1
  std::array<int, 2> grid{0, 0};       // grid intervals per axis, N_i >= 2 M_i
};

class Domain {
 public:
  // Validates the spec and precomputes eigenvalue tables, transform matrices
  // and quadrature constants.  Throws std::invalid_argument on a bad spec.
  static std::shared_ptr<const Domain> create(const DomainSpec& spec);

  int dim() const { return spec_.dim; }
  double extent(int axis) const { return spec_.extent[axis]; }
  int modes(int axis) const { return spec_.modes[axis]; }
  int grid_points(int axis) const { return spec_.grid[axis]; }

  // Total retained modes and interior grid nodes (per-axis counts multiplied).
  std::size_t mode_count() const { return mode_count_; }
  std::size_t node_count() const { return node_count_; }

  // Eigenvalues mu_k of -lap, mode-major (axis-0 index slowest); lap^2 acts as
  // mu_k^2 on the same table.
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }
  double lambda1() const { return lambda1_; }

  double measure() const { return measure_; }                // |Omega|
  double cell_volume() const { return cell_volume_; }        // prod L_i / N_i
  double mode_l2_factor() const { return mode_l2_factor_; }  // prod L_i / 2

  // Coefficients -> interior grid samples (sine synthesis) and its exact
  // inverse (discrete sine analysis).  Sizes must match mode_count() and
  // node_count().
  void synthesize(std::span<const double> coeffs, std::span<double> samples) const;
  void analyze(std::span<const double> samples, std::span<double> coeffs) const;

  // Samples of d/dx_axis of the field with the given coefficients (cosine
  // synthesis).  Used by diagnostics that pair gradients on the grid.
  void gradient_samples(std::span<const double> coeffs, int axis,
                        std::span<double> out) const;

  // Composite trapezoid over the uniform grid; the boundary ring is zero for
  // every integrand produced from fields vanishing on the boundary, so the
  // rule reduces to cell_volume * sum(interior samples).
  double integrate(std::span<const double> samples) const;

 private:
  Domain() = default;

  DomainSpec spec_;
  std::size_t mode_count_ = 0;
  std::size_t node_count_ = 0;
  std::vector<double> eigenvalues_;
  double lambda1_ = 0.0;
  double measure_ = 0.0;
  double cell_volume_ = 0.0;
  double mode_l2_factor_ = 0.0;
  // Per-axis synthesis tables, row-major (node, mode): sin(pi (k+1)(j+1)/N)
  // and cos(pi (k+1)(j+1)/N) scaled by the mode wavenumber for gradients.
  std::array<std::vector<double>, 2> sine_;
  std::array<std::vector<double>, 2> cosine_;
  std::array<int, 2> nodes_{0, 0};  // interior nodes per axis, N_i - 1
};

using DomainPtr = std::shared_ptr<const Domain>;

// Scalar function on a Domain, stored as sine coefficients with grid samples
// materialized lazily.  A Field may move between threads; concurrent use of
// one instance is not synchronized (samples() fills a cache).
class Field {
 public:
  explicit Field(DomainPtr domain);
  Field(DomainPtr domain, std::vector<double> coeffs);

  static Field from_samples(DomainPtr domain, std::span<const double> samples);

  const Domain& domain() const { return *domain_; }
  const DomainPtr& domain_ptr() const { return domain_; }

  const std::vector<double>& coeffs() const { return coeffs_; }
  // Grid samples consistent with coeffs(); synthesized on first access.
  const std::vector<double>& samples() const;

  // Mutable coefficient access; drops the cached samples.
  std::vector<double>& mutable_coeffs();
  void set_coeffs(std::vector<double> coeffs);

  Field& operator*=(double factor);
  // this += factor * other.  Throws std::invalid_argument when the fields
  // live on different Domain instances.
  Field& add_scaled(const Field& other, double factor);

 private:
  DomainPtr domain_;
  std::vector<double> coeffs_;
  mutable std::vector<double> samples_;
  mutable bool samples_fresh_ = false;
};

// Spectral application of -lap (coefficient k scaled by mu_k) and lap^2
// (scaled by mu_k^2).
Field apply_neg_laplacian(const Field& u);
Field apply_bilaplacian(const Field& u);

// (grad u, grad v) by grid quadrature.  Gradients do not vanish on the
// boundary, so this adds the trapezoid boundary ring (edge values synthesized
// from coefficients) to the interior sum; it is the independent quadrature
// route against which the coefficient-space formulas are checked.
double integrate_gradient_product(const Field& u, const Field& v);

}  // namespace logwave
