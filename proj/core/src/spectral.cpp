#include "logwave/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace logwave {

namespace {

constexpr double kPi = std::numbers::pi;

void validate_spec(const DomainSpec& spec) {
  if (spec.dim != 1 && spec.dim != 2)
    throw std::invalid_argument("domain: dim must be 1 or 2, got " + std::to_string(spec.dim));
  for (int a = 0; a < spec.dim; ++a) {
    if (!(spec.extent[a] > 0.0))
      throw std::invalid_argument("domain: extent must be positive on axis " + std::to_string(a));
    if (spec.modes[a] < 1)
      throw std::invalid_argument("domain: need at least one mode on axis " + std::to_string(a));
    if (spec.grid[a] < 2 * spec.modes[a])
      throw std::invalid_argument("domain: grid_points < 2*modes on axis " + std::to_string(a) +
                                  " (aliasing risk)");
  }
}

// C(i,j) += A(i,k) * B(k,j), row-major, plain i-k-j loops; operand shapes are
// a few hundred per side so this stays cache-friendly without blocking.  The
// cols == 1 case (1-d transforms) reduces to unit-stride dot products.
void matmul_acc(const double* a, const double* b, double* c, int rows, int inner, int cols) {
  if (cols == 1) {
    for (int i = 0; i < rows; ++i) {
      const double* arow = a + static_cast<std::size_t>(i) * inner;
      double acc = 0.0;
      for (int k = 0; k < inner; ++k) acc += arow[k] * b[k];
      c[i] += acc;
    }
    return;
  }
  for (int i = 0; i < rows; ++i) {
    const double* arow = a + static_cast<std::size_t>(i) * inner;
    double* crow = c + static_cast<std::size_t>(i) * cols;
    for (int k = 0; k < inner; ++k) {
      const double aik = arow[k];
      const double* brow = b + static_cast<std::size_t>(k) * cols;
      for (int j = 0; j < cols; ++j) crow[j] += aik * brow[j];
    }
  }
}

// C(i,j) += A(k,i) * B(k,j): A used transposed, still unit-stride inner loops.
void matmul_tn_acc(const double* a, const double* b, double* c, int rows, int inner, int cols) {
  if (cols == 1) {
    for (int k = 0; k < inner; ++k) {
      const double* arow = a + static_cast<std::size_t>(k) * rows;
      const double bk = b[k];
      for (int i = 0; i < rows; ++i) c[i] += arow[i] * bk;
    }
    return;
  }
  for (int k = 0; k < inner; ++k) {
    const double* arow = a + static_cast<std::size_t>(k) * rows;
    const double* brow = b + static_cast<std::size_t>(k) * cols;
    for (int i = 0; i < rows; ++i) {
      const double aki = arow[i];
      double* crow = c + static_cast<std::size_t>(i) * cols;
      for (int j = 0; j < cols; ++j) crow[j] += aki * brow[j];
    }
  }
}

}  // namespace

std::shared_ptr<const Domain> Domain::create(const DomainSpec& spec) {
  validate_spec(spec);
  auto dom = std::shared_ptr<Domain>(new Domain());
  dom->spec_ = spec;

  dom->measure_ = 1.0;
  dom->cell_volume_ = 1.0;
  dom->mode_l2_factor_ = 1.0;
  dom->mode_count_ = 1;
  dom->node_count_ = 1;
  for (int a = 0; a < spec.dim; ++a) {
    const int n_modes = spec.modes[a];
    const int n_grid = spec.grid[a];
    const double length = spec.extent[a];
    dom->nodes_[a] = n_grid - 1;
    dom->measure_ *= length;
    dom->cell_volume_ *= length / n_grid;
    dom->mode_l2_factor_ *= length / 2.0;
    dom->mode_count_ *= static_cast<std::size_t>(n_modes);
    dom->node_count_ *= static_cast<std::size_t>(n_grid - 1);

    auto& sine = dom->sine_[a];
    auto& cosine = dom->cosine_[a];
    sine.assign(static_cast<std::size_t>(n_grid - 1) * n_modes, 0.0);
    cosine.assign(static_cast<std::size_t>(n_grid - 1) * n_modes, 0.0);
    for (int j = 0; j < n_grid - 1; ++j) {
      for (int k = 0; k < n_modes; ++k) {
        const double phase = kPi * (k + 1) * (j + 1) / n_grid;
        sine[static_cast<std::size_t>(j) * n_modes + k] = std::sin(phase);
        cosine[static_cast<std::size_t>(j) * n_modes + k] = std::cos(phase);
      }
    }
  }

  dom->eigenvalues_.resize(dom->mode_count_);
  if (spec.dim == 1) {
    for (int k = 0; k < spec.modes[0]; ++k) {
      const double w = (k + 1) * kPi / spec.extent[0];
      dom->eigenvalues_[k] = w * w;
    }
  } else {
    for (int k1 = 0; k1 < spec.modes[0]; ++k1) {
      const double w1 = (k1 + 1) * kPi / spec.extent[0];
      for (int k2 = 0; k2 < spec.modes[1]; ++k2) {
        const double w2 = (k2 + 1) * kPi / spec.extent[1];
        dom->eigenvalues_[static_cast<std::size_t>(k1) * spec.modes[1] + k2] = w1 * w1 + w2 * w2;
      }
    }
  }
  dom->lambda1_ = dom->eigenvalues_[0];
  for (double mu : dom->eigenvalues_)
    if (mu < dom->lambda1_) dom->lambda1_ = mu;

  return dom;
}

void Domain::synthesize(std::span<const double> coeffs, std::span<double> samples) const {
  if (coeffs.size() != mode_count_ || samples.size() != node_count_)
    throw std::invalid_argument("synthesize: size mismatch");
  std::fill(samples.begin(), samples.end(), 0.0);
  if (spec_.dim == 1) {
    matmul_acc(sine_[0].data(), coeffs.data(), samples.data(), nodes_[0], spec_.modes[0], 1);
    return;
  }
  // samples = S0 * C * S1^T, via T(k1, j2) = sum_k2 C(k1,k2) S1(j2,k2).
  const int m0 = spec_.modes[0], m1 = spec_.modes[1];
  const int n0 = nodes_[0], n1 = nodes_[1];
  std::vector<double> tmp(static_cast<std::size_t>(m0) * n1, 0.0);
  for (int k1 = 0; k1 < m0; ++k1) {
    const double* crow = coeffs.data() + static_cast<std::size_t>(k1) * m1;
    double* trow = tmp.data() + static_cast<std::size_t>(k1) * n1;
    for (int j2 = 0; j2 < n1; ++j2) {
      const double* srow = sine_[1].data() + static_cast<std::size_t>(j2) * m1;
      double acc = 0.0;
      for (int k2 = 0; k2 < m1; ++k2) acc += crow[k2] * srow[k2];
      trow[j2] = acc;
    }
  }
  matmul_acc(sine_[0].data(), tmp.data(), samples.data(), n0, m0, n1);
}

void Domain::analyze(std::span<const double> samples, std::span<double> coeffs) const {
  if (coeffs.size() != mode_count_ || samples.size() != node_count_)
    throw std::invalid_argument("analyze: size mismatch");
  std::fill(coeffs.begin(), coeffs.end(), 0.0);
  if (spec_.dim == 1) {
    const double scale = 2.0 / spec_.grid[0];
    matmul_tn_acc(sine_[0].data(), samples.data(), coeffs.data(), spec_.modes[0], nodes_[0], 1);
    for (auto& c : coeffs) c *= scale;
    return;
  }
  const int m0 = spec_.modes[0], m1 = spec_.modes[1];
  const int n0 = nodes_[0], n1 = nodes_[1];
  const double scale = (2.0 / spec_.grid[0]) * (2.0 / spec_.grid[1]);
  // tmp(k1, j2) = sum_j1 S0(j1,k1) samples(j1,j2)
  std::vector<double> tmp(static_cast<std::size_t>(m0) * n1, 0.0);
  matmul_tn_acc(sine_[0].data(), samples.data(), tmp.data(), m0, n0, n1);
  // coeffs(k1, k2) = sum_j2 tmp(k1,j2) S1(j2,k2)
  matmul_acc(tmp.data(), sine_[1].data(), coeffs.data(), m0, n1, m1);
  for (auto& c : coeffs) c *= scale;
}

void Domain::gradient_samples(std::span<const double> coeffs, int axis,
                              std::span<double> out) const {
  if (axis < 0 || axis >= spec_.dim) throw std::invalid_argument("gradient_samples: bad axis");
  if (coeffs.size() != mode_count_ || out.size() != node_count_)
    throw std::invalid_argument("gradient_samples: size mismatch");
  std::fill(out.begin(), out.end(), 0.0);
  // Scale mode k along `axis` by its wavenumber, use the cosine table on that
  // axis and the sine table on the other.
  if (spec_.dim == 1) {
    std::vector<double> scaled(coeffs.begin(), coeffs.end());
    for (int k = 0; k < spec_.modes[0]; ++k) scaled[k] *= (k + 1) * kPi / spec_.extent[0];
    matmul_acc(cosine_[0].data(), scaled.data(), out.data(), nodes_[0], spec_.modes[0], 1);
    return;
  }
  const int m0 = spec_.modes[0], m1 = spec_.modes[1];
  const int n0 = nodes_[0], n1 = nodes_[1];
  std::vector<double> scaled(mode_count_);
  for (int k1 = 0; k1 < m0; ++k1)
    for (int k2 = 0; k2 < m1; ++k2) {
      const int k = axis == 0 ? k1 : k2;
      const double w = (k + 1) * kPi / spec_.extent[axis];
      scaled[static_cast<std::size_t>(k1) * m1 + k2] =
          coeffs[static_cast<std::size_t>(k1) * m1 + k2] * w;
    }
  const auto& table0 = axis == 0 ? cosine_[0] : sine_[0];
  const auto& table1 = axis == 1 ? cosine_[1] : sine_[1];
  std::vector<double> tmp(static_cast<std::size_t>(m0) * n1, 0.0);
  for (int k1 = 0; k1 < m0; ++k1) {
    const double* crow = scaled.data() + static_cast<std::size_t>(k1) * m1;
    double* trow = tmp.data() + static_cast<std::size_t>(k1) * n1;
    for (int j2 = 0; j2 < n1; ++j2) {
      const double* srow = table1.data() + static_cast<std::size_t>(j2) * m1;
      double acc = 0.0;
      for (int k2 = 0; k2 < m1; ++k2) acc += crow[k2] * srow[k2];
      trow[j2] = acc;
    }
  }
  matmul_acc(table0.data(), tmp.data(), out.data(), n0, m0, n1);
}

double Domain::integrate(std::span<const double> samples) const {
  if (samples.size() != node_count_) throw std::invalid_argument("integrate: size mismatch");
  double acc = 0.0;
  for (double s : samples) acc += s;
  return acc * cell_volume_;
}

Field::Field(DomainPtr domain) : domain_(std::move(domain)) {
  if (!domain_) throw std::invalid_argument("Field: null domain");
  coeffs_.assign(domain_->mode_count(), 0.0);
}

Field::Field(DomainPtr domain, std::vector<double> coeffs)
    : domain_(std::move(domain)), coeffs_(std::move(coeffs)) {
  if (!domain_) throw std::invalid_argument("Field: null domain");
  if (coeffs_.size() != domain_->mode_count())
    throw std::invalid_argument("Field: coefficient vector size mismatch");
}

Field Field::from_samples(DomainPtr domain, std::span<const double> samples) {
  std::vector<double> coeffs(domain->mode_count());
  domain->analyze(samples, coeffs);
  return Field(std::move(domain), std::move(coeffs));
}

const std::vector<double>& Field::samples() const {
  if (!samples_fresh_) {
    samples_.resize(domain_->node_count());
    domain_->synthesize(coeffs_, samples_);
    samples_fresh_ = true;
  }
  return samples_;
}

std::vector<double>& Field::mutable_coeffs() {
  samples_fresh_ = false;
  return coeffs_;
}

void Field::set_coeffs(std::vector<double> coeffs) {
  if (coeffs.size() != domain_->mode_count())
    throw std::invalid_argument("Field: coefficient vector size mismatch");
  coeffs_ = std::move(coeffs);
  samples_fresh_ = false;
}

Field& Field::operator*=(double factor) {
  for (auto& c : coeffs_) c *= factor;
  samples_fresh_ = false;
  return *this;
}

Field& Field::add_scaled(const Field& other, double factor) {
  if (other.domain_ != domain_)
    throw std::invalid_argument("Field: mixing fields from different domains");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += factor * other.coeffs_[i];
  samples_fresh_ = false;
  return *this;
}

double integrate_gradient_product(const Field& u, const Field& v) {
  if (u.domain_ptr() != v.domain_ptr())
    throw std::invalid_argument("integrate_gradient_product: fields from different domains");
  const Domain& dom = u.domain();
  const std::size_t nodes = dom.node_count();
  std::vector<double> gu(nodes), gv(nodes);
  double acc = 0.0;
  for (int axis = 0; axis < dom.dim(); ++axis) {
    dom.gradient_samples(u.coeffs(), axis, gu);
    dom.gradient_samples(v.coeffs(), axis, gv);
    for (std::size_t i = 0; i < nodes; ++i) acc += gu[i] * gv[i];
  }
  acc *= dom.cell_volume();

  // Boundary ring: d/dx_a does not vanish on the two faces normal to axis a
  // (it does on the others, where the tangential sine factor is zero), so the
  // trapezoid needs half-weighted face terms.  Face values come straight from
  // the coefficients: cos(0) = 1 on the near face, cos(k pi) = (-1)^k on the
  // far one.
  if (dom.dim() == 1) {
    const int m = dom.modes(0);
    double u0 = 0.0, uL = 0.0, v0 = 0.0, vL = 0.0;
    for (int k = 0; k < m; ++k) {
      const double w = (k + 1) * kPi / dom.extent(0);
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;  // cos((k+1)pi)
      u0 += u.coeffs()[k] * w;
      uL += u.coeffs()[k] * w * -sign;
      v0 += v.coeffs()[k] * w;
      vL += v.coeffs()[k] * w * -sign;
    }
    acc += dom.cell_volume() * 0.5 * (u0 * v0 + uL * vL);
    return acc;
  }

  const int m0 = dom.modes(0), m1 = dom.modes(1);
  for (int axis = 0; axis < 2; ++axis) {
    const int m_normal = axis == 0 ? m0 : m1;
    const int m_tang = axis == 0 ? m1 : m0;
    const int n_tang = dom.grid_points(axis == 0 ? 1 : 0) - 1;
    const int grid_tang = dom.grid_points(axis == 0 ? 1 : 0);

    // Collapse the normal direction onto the two faces.
    std::vector<double> u_near(m_tang, 0.0), u_far(m_tang, 0.0);
    std::vector<double> v_near(m_tang, 0.0), v_far(m_tang, 0.0);
    for (int kn = 0; kn < m_normal; ++kn) {
      const double w = (kn + 1) * kPi / dom.extent(axis);
      const double far_sign = (kn % 2 == 0) ? -1.0 : 1.0;  // cos((kn+1)pi)
      for (int kt = 0; kt < m_tang; ++kt) {
        const std::size_t idx = axis == 0 ? static_cast<std::size_t>(kn) * m1 + kt
                                          : static_cast<std::size_t>(kt) * m1 + kn;
        u_near[kt] += u.coeffs()[idx] * w;
        u_far[kt] += u.coeffs()[idx] * w * far_sign;
        v_near[kt] += v.coeffs()[idx] * w;
        v_far[kt] += v.coeffs()[idx] * w * far_sign;
      }
    }

    double face = 0.0;
    for (int j = 0; j < n_tang; ++j) {
      double un = 0.0, uf = 0.0, vn = 0.0, vf = 0.0;
      for (int kt = 0; kt < m_tang; ++kt) {
        const double s = std::sin(kPi * (kt + 1) * (j + 1) / grid_tang);
        un += u_near[kt] * s;
        uf += u_far[kt] * s;
        vn += v_near[kt] * s;
        vf += v_far[kt] * s;
      }
      face += un * vn + uf * vf;
    }
    acc += dom.cell_volume() * 0.5 * face;
  }
  return acc;
}

Field apply_neg_laplacian(const Field& u) {
  const auto& mu = u.domain().eigenvalues();
  std::vector<double> c = u.coeffs();
  for (std::size_t k = 0; k < c.size(); ++k) c[k] *= mu[k];
  return Field(u.domain_ptr(), std::move(c));
}

Field apply_bilaplacian(const Field& u) {
  const auto& mu = u.domain().eigenvalues();
  std::vector<double> c = u.coeffs();
  // (c * mu) * mu, matching two -lap applications to the last ulp.
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = c[k] * mu[k] * mu[k];
  return Field(u.domain_ptr(), std::move(c));
}

}  // namespace logwave
