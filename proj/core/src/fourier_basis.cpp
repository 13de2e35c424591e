#include "fourier_ocp/fourier_basis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fourier_ocp/errors.hpp"
#include "fourier_ocp/quadrature.hpp"

namespace fourier_ocp {

namespace {
constexpr double kPi = std::numbers::pi;
}

// ---------------------------------------------------------------------------
// DomainBox

DomainBox::DomainBox(double horizon, std::vector<double> ic_lo, std::vector<double> ic_hi)
    : horizon_(horizon), ic_lo_(std::move(ic_lo)), ic_hi_(std::move(ic_hi)) {
  if (!(horizon_ > 0.0) || !std::isfinite(horizon_)) throw ArgumentError("horizon T must be positive");
  if (ic_lo_.size() != ic_hi_.size()) throw ArgumentError("ic_lo and ic_hi differ in length");
  for (std::size_t i = 0; i < ic_lo_.size(); ++i) {
    if (!std::isfinite(ic_lo_[i]) || !std::isfinite(ic_hi_[i]) || ic_lo_[i] > ic_hi_[i]) {
      throw ArgumentError("initial-condition axis " + std::to_string(i) + " must satisfy lo <= hi");
    }
  }
}

double SparseRow::dot(std::span<const double> coeffs) const {
  double v = 0.0;
  for (std::size_t k = 0; k < index.size(); ++k) v += weight[k] * coeffs[index[k]];
  return v;
}

// ---------------------------------------------------------------------------
// SurfaceLayout

SurfaceLayout::SurfaceLayout(DomainBox domain, int time_order, std::vector<int> ic_orders)
    : SurfaceLayout(std::move(domain), SurfaceShape{time_order, time_order, std::move(ic_orders), false}) {}

SurfaceLayout::SurfaceLayout(DomainBox domain, SurfaceShape shape) : domain_(std::move(domain)), shape_(std::move(shape)) {
  if (shape_.time_sin_order < 0 || shape_.time_cos_order < 0) throw ArgumentError("time orders must be >= 0");
  if (shape_.ic_orders.size() != domain_.ic_axes()) {
    throw ArgumentError("got " + std::to_string(shape_.ic_orders.size()) + " IC orders for " +
                        std::to_string(domain_.ic_axes()) + " IC axes");
  }
  if (input_dims() > 12) throw ArgumentError("too many surface axes");
  extent_.push_back(static_cast<std::size_t>(std::max(shape_.time_sin_order, shape_.time_cos_order)) + 1);
  for (int n : shape_.ic_orders) {
    if (n < 0) throw ArgumentError("IC orders must be >= 0");
    extent_.push_back(static_cast<std::size_t>(n) + 1);
  }
  block_ = 1;
  for (auto e : extent_) block_ *= e;

  active_.assign(size(), 0);
  std::vector<int> n(domain_.ic_axes());
  for (std::size_t flat = 0; flat < size(); ++flat) {
    std::size_t b = 0;
    int m = 0;
    unflatten(flat, b, m, n);
    bool on = uses_cos(b, 0) ? m <= shape_.time_cos_order : (m >= 1 && m <= shape_.time_sin_order);
    int sines = uses_cos(b, 0) ? 0 : 1;
    for (std::size_t a = 0; a < n.size() && on; ++a) {
      const bool c = uses_cos(b, a + 1);
      sines += c ? 0 : 1;
      if (domain_.degenerate(a)) {
        on = c && n[a] == 0;
      } else {
        on = c || n[a] >= 1;
      }
    }
    if (shape_.half_basis && sines % 2 != 0) on = false;
    active_[flat] = on ? 1 : 0;
  }
}

std::vector<int> SurfaceLayout::orders() const {
  std::vector<int> o;
  for (auto e : extent_) o.push_back(static_cast<int>(e) - 1);
  return o;
}

bool SurfaceLayout::uses_cos(std::size_t combination, std::size_t axis) const {
  const std::size_t d = input_dims();
  return ((combination >> (d - 1 - axis)) & 1U) != 0;
}

std::size_t SurfaceLayout::flat_index(std::size_t combination, int m, std::span<const int> n) const {
  if (combination >= combinations() || n.size() != domain_.ic_axes()) throw ArgumentError("bad coefficient index");
  if (m < 0 || static_cast<std::size_t>(m) >= extent_[0]) throw ArgumentError("time index out of range");
  std::size_t flat = combination * extent_[0] + static_cast<std::size_t>(m);
  for (std::size_t a = 0; a < n.size(); ++a) {
    if (n[a] < 0 || static_cast<std::size_t>(n[a]) >= extent_[a + 1]) throw ArgumentError("IC index out of range");
    flat = flat * extent_[a + 1] + static_cast<std::size_t>(n[a]);
  }
  return flat;
}

void SurfaceLayout::unflatten(std::size_t flat, std::size_t& combination, int& m, std::span<int> n) const {
  if (flat >= size() || n.size() != domain_.ic_axes()) throw ArgumentError("bad flat index");
  for (std::size_t a = n.size(); a-- > 0;) {
    n[a] = static_cast<int>(flat % extent_[a + 1]);
    flat /= extent_[a + 1];
  }
  m = static_cast<int>(flat % extent_[0]);
  combination = flat / extent_[0];
}

std::size_t SurfaceLayout::active_count() const {
  return static_cast<std::size_t>(std::count(active_.begin(), active_.end(), char{1}));
}

void SurfaceLayout::check_ic(std::span<const double> ic) const {
  if (ic.size() != domain_.ic_axes()) {
    throw ArgumentError("expected " + std::to_string(domain_.ic_axes()) + " initial-condition values, got " +
                        std::to_string(ic.size()));
  }
}

void SurfaceLayout::fill(double t, std::span<const double> ic, std::span<double> out, bool time_derivative) const {
  check_ic(ic);
  if (out.size() != size()) throw ArgumentError("weight buffer has wrong size");
  const std::size_t d = input_dims();

  // Per-axis factor tables: sin[axis][k], cos[axis][k].
  std::vector<std::vector<double>> sin_f(d), cos_f(d);
  {
    const std::size_t e = extent_[0];
    sin_f[0].assign(e, 0.0);
    cos_f[0].assign(e, 0.0);
    const double w = kPi / domain_.horizon();
    for (std::size_t m = 0; m < e; ++m) {
      const double theta = w * static_cast<double>(m) * t;
      const double s = std::sin(theta);
      const double c = std::cos(theta);
      const double k = w * static_cast<double>(m);
      const bool sin_on = m >= 1 && static_cast<int>(m) <= shape_.time_sin_order;
      const bool cos_on = static_cast<int>(m) <= shape_.time_cos_order;
      if (time_derivative) {
        sin_f[0][m] = sin_on ? k * c : 0.0;
        cos_f[0][m] = cos_on ? -k * s : 0.0;
      } else {
        sin_f[0][m] = sin_on ? s : 0.0;
        cos_f[0][m] = cos_on ? c : 0.0;
      }
    }
  }
  for (std::size_t a = 0; a + 1 < d; ++a) {
    const std::size_t e = extent_[a + 1];
    sin_f[a + 1].assign(e, 0.0);
    cos_f[a + 1].assign(e, 0.0);
    if (domain_.degenerate(a)) {
      cos_f[a + 1][0] = 1.0;
      continue;
    }
    const double scale = kPi / domain_.ic_range(a);
    const double x = ic[a] - domain_.ic_lo()[a];
    for (std::size_t n = 0; n < e; ++n) {
      const double phi = scale * static_cast<double>(n) * x;
      sin_f[a + 1][n] = n >= 1 ? std::sin(phi) : 0.0;
      cos_f[a + 1][n] = std::cos(phi);
    }
  }

  for (std::size_t b = 0; b < combinations(); ++b) {
    double* block = out.data() + b * block_;
    std::size_t sines = 0;
    for (std::size_t a = 0; a < d; ++a) sines += uses_cos(b, a) ? 0 : 1;
    if (shape_.half_basis && sines % 2 != 0) {
      std::fill(block, block + block_, 0.0);
      continue;
    }
    const auto& f0 = uses_cos(b, 0) ? cos_f[0] : sin_f[0];
    std::size_t len = extent_[0];
    std::copy(f0.begin(), f0.end(), block);
    for (std::size_t a = 1; a < d; ++a) {
      const auto& fa = uses_cos(b, a) ? cos_f[a] : sin_f[a];
      const std::size_t e = extent_[a];
      // Expand in place from the back so earlier entries stay intact.
      for (std::size_t i = len; i-- > 0;) {
        const double base = block[i];
        for (std::size_t n = e; n-- > 0;) block[i * e + n] = base * fa[n];
      }
      len *= e;
    }
  }
}

void SurfaceLayout::weights(double t, std::span<const double> ic, std::span<double> out) const {
  fill(t, ic, out, false);
}

void SurfaceLayout::time_derivative_weights(double t, std::span<const double> ic, std::span<double> out) const {
  fill(t, ic, out, true);
}

namespace {
SparseRow to_sparse(const std::vector<double>& dense) {
  SparseRow row;
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i] != 0.0) {
      row.index.push_back(static_cast<std::uint32_t>(i));
      row.weight.push_back(dense[i]);
    }
  }
  return row;
}
}  // namespace

SparseRow SurfaceLayout::sparse_weights(double t, std::span<const double> ic) const {
  std::vector<double> dense(size());
  weights(t, ic, dense);
  return to_sparse(dense);
}

SparseRow SurfaceLayout::sparse_time_derivative_weights(double t, std::span<const double> ic) const {
  std::vector<double> dense(size());
  time_derivative_weights(t, ic, dense);
  return to_sparse(dense);
}

double SurfaceLayout::periodic_norm_squared(std::size_t flat) const {
  std::size_t b = 0;
  int m = 0;
  std::vector<int> n(domain_.ic_axes());
  unflatten(flat, b, m, n);
  // Over one full period 2L: int sin^2 = int cos^2 = L for k >= 1, int 1 = 2L.
  const double T = domain_.horizon();
  double norm = (uses_cos(b, 0) && m == 0) ? 2.0 * T : T;
  for (std::size_t a = 0; a < n.size(); ++a) {
    if (domain_.degenerate(a)) continue;
    const double R = domain_.ic_range(a);
    norm *= (uses_cos(b, a + 1) && n[a] == 0) ? 2.0 * R : R;
  }
  return norm;
}

// ---------------------------------------------------------------------------
// FourierSurface

FourierSurface::FourierSurface(SurfaceLayout layout) : layout_(std::move(layout)), coeffs_(layout_.size(), 0.0) {}

FourierSurface::FourierSurface(SurfaceLayout layout, std::vector<double> coeffs)
    : layout_(std::move(layout)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != layout_.size()) {
    throw ArgumentError("coefficient tensor has " + std::to_string(coeffs_.size()) + " entries, layout needs " +
                        std::to_string(layout_.size()));
  }
}

double& FourierSurface::at(std::size_t combination, int m, std::span<const int> n) {
  return coeffs_[layout_.flat_index(combination, m, n)];
}

double FourierSurface::at(std::size_t combination, int m, std::span<const int> n) const {
  return coeffs_[layout_.flat_index(combination, m, n)];
}

void FourierSurface::check_finite() const {
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (!std::isfinite(coeffs_[i])) throw DataError("non-finite coefficient at flat index " + std::to_string(i));
  }
}

double FourierSurface::eval(double t, std::span<const double> ic) const {
  check_finite();
  std::vector<double> w(layout_.size());
  layout_.weights(t, ic, w);
  double v = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) v += w[i] * coeffs_[i];
  return v;
}

double FourierSurface::eval_time_derivative(double t, std::span<const double> ic) const {
  check_finite();
  std::vector<double> w(layout_.size());
  layout_.time_derivative_weights(t, ic, w);
  double v = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) v += w[i] * coeffs_[i];
  return v;
}

// ---------------------------------------------------------------------------
// Complex form

ComplexSeries1D::ComplexSeries1D(int order, double half_period)
    : order_(order), half_period_(half_period), coeffs_(static_cast<std::size_t>(2 * order + 1)) {
  if (order < 0) throw ArgumentError("complex series order must be >= 0");
  if (!(half_period > 0.0)) throw ArgumentError("half period must be positive");
}

ComplexSeries1D::ComplexSeries1D(double half_period, std::vector<std::complex<double>> coeffs)
    : order_(static_cast<int>(coeffs.size() / 2)), half_period_(half_period), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() % 2 == 0) throw ArgumentError("complex series needs an odd number of coefficients");
  if (!(half_period > 0.0)) throw ArgumentError("half period must be positive");
}

std::complex<double> ComplexSeries1D::eval(double t) const {
  std::complex<double> v{0.0, 0.0};
  for (int k = -order_; k <= order_; ++k) {
    v += (*this)[k] * std::polar(1.0, kPi * k * t / half_period_);
  }
  return v;
}

double ComplexSeries1D::conjugate_asymmetry() const {
  double worst = 0.0;
  for (int k = 0; k <= order_; ++k) worst = std::max(worst, std::abs((*this)[-k] - std::conj((*this)[k])));
  return worst;
}

double ComplexSeries1D::energy() const {
  double e = 0.0;
  for (const auto& c : coeffs_) e += std::norm(c);
  return e;
}

ComplexSeries1D to_complex(const FourierSurface& series) {
  const auto& layout = series.layout();
  if (layout.domain().ic_axes() != 0) throw ArgumentError("to_complex needs a time-only surface");
  const int K = layout.orders()[0];
  ComplexSeries1D out(K, layout.domain().horizon());
  const std::vector<int> none;
  // sin term b = 0, cos term b = 1 (bit set means cos).
  for (int k = 0; k <= K; ++k) {
    const std::size_t si = layout.flat_index(0, k, none);
    const std::size_t ci = layout.flat_index(1, k, none);
    const double a = layout.active(si) ? series.coeffs()[si] : 0.0;
    const double b = layout.active(ci) ? series.coeffs()[ci] : 0.0;
    if (k == 0) {
      out[0] = {b, 0.0};
    } else {
      out[k] = {0.5 * b, -0.5 * a};
      out[-k] = {0.5 * b, 0.5 * a};
    }
  }
  return out;
}

FourierSurface from_complex(const ComplexSeries1D& series, double tolerance) {
  double scale = 1.0;
  for (const auto& c : series.coeffs()) scale = std::max(scale, std::abs(c));
  if (series.conjugate_asymmetry() > tolerance * scale) {
    throw DataError("complex series is not conjugate-symmetric; it does not represent a real function");
  }
  const int K = series.order();
  SurfaceLayout layout(DomainBox(series.half_period(), {}, {}), K, {});
  FourierSurface out(layout);
  const std::vector<int> none;
  for (int k = 0; k <= K; ++k) {
    if (k == 0) {
      out.at(1, 0, none) = series[0].real();
    } else {
      out.at(1, k, none) = series[k].real() + series[-k].real();
      out.at(0, k, none) = series[-k].imag() - series[k].imag();
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Projection and least-squares fit

namespace {

struct TensorGrid {
  std::vector<std::vector<double>> points;   // per surface axis (time first)
  std::vector<std::vector<double>> weights;  // empty for sampling-only grids
};

template <class Visit>
void for_each_point(const TensorGrid& grid, const DomainBox& domain, Visit&& visit) {
  const std::size_t d = grid.points.size();
  std::vector<std::size_t> idx(d, 0);
  std::vector<double> ic(domain.ic_axes());
  while (true) {
    double w = 1.0;
    const double t = grid.points[0][idx[0]];
    if (!grid.weights.empty()) w *= grid.weights[0][idx[0]];
    for (std::size_t a = 1; a < d; ++a) {
      ic[a - 1] = grid.points[a][idx[a]];
      if (!grid.weights.empty()) w *= grid.weights[a][idx[a]];
    }
    visit(t, std::span<const double>(ic), w);
    std::size_t a = d;
    while (a > 0) {
      --a;
      if (++idx[a] < grid.points[a].size()) break;
      idx[a] = 0;
      if (a == 0) return;
    }
  }
}

std::size_t odd_at_least_three(std::size_t n) {
  n = std::max<std::size_t>(n, 3);
  return n % 2 == 0 ? n + 1 : n;
}

}  // namespace

FourierSurface project_function(const SurfaceFunction& f, const SurfaceLayout& layout, std::size_t nodes_per_axis) {
  const auto& domain = layout.domain();
  const std::size_t nodes = odd_at_least_three(nodes_per_axis);
  TensorGrid grid;
  {
    QuadratureGrid g(QuadratureRule::simpson, nodes, 0.0, 2.0 * domain.horizon());
    grid.points.emplace_back(g.points().begin(), g.points().end());
    grid.weights.emplace_back(g.weights().begin(), g.weights().end());
  }
  for (std::size_t a = 0; a < domain.ic_axes(); ++a) {
    const double lo = domain.ic_lo()[a];
    if (domain.degenerate(a)) {
      grid.points.push_back({lo});
      grid.weights.push_back({1.0});
      continue;
    }
    QuadratureGrid g(QuadratureRule::simpson, nodes, lo, lo + 2.0 * domain.ic_range(a));
    grid.points.emplace_back(g.points().begin(), g.points().end());
    grid.weights.emplace_back(g.weights().begin(), g.weights().end());
  }

  std::vector<double> acc(layout.size(), 0.0);
  std::vector<double> row(layout.size());
  for_each_point(grid, domain, [&](double t, std::span<const double> ic, double w) {
    const double v = f(t, ic);
    if (!std::isfinite(v)) throw DataError("non-finite sample while projecting at t = " + std::to_string(t));
    layout.weights(t, ic, row);
    const double wv = w * v;
    for (std::size_t i = 0; i < row.size(); ++i) acc[i] += wv * row[i];
  });

  FourierSurface out(layout);
  for (std::size_t i = 0; i < acc.size(); ++i) {
    out.coeffs()[i] = layout.active(i) ? acc[i] / layout.periodic_norm_squared(i) : 0.0;
  }
  return out;
}

FourierSurface fit_least_squares(const SurfaceFunction& f, const SurfaceLayout& layout, std::size_t samples_per_axis) {
  const auto& domain = layout.domain();
  const std::size_t n = std::max<std::size_t>(samples_per_axis, 2);
  TensorGrid grid;
  auto linspace = [n](double lo, double hi) {
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return p;
  };
  grid.points.push_back(linspace(0.0, domain.horizon()));
  for (std::size_t a = 0; a < domain.ic_axes(); ++a) {
    if (domain.degenerate(a)) {
      grid.points.push_back({domain.ic_lo()[a]});
    } else {
      grid.points.push_back(linspace(domain.ic_lo()[a], domain.ic_hi()[a]));
    }
  }

  std::vector<std::size_t> columns;
  for (std::size_t i = 0; i < layout.size(); ++i) {
    if (layout.active(i)) columns.push_back(i);
  }
  std::size_t rows = 1;
  for (const auto& p : grid.points) rows *= p.size();

  Eigen::MatrixXd A(rows, columns.size());
  Eigen::VectorXd y(rows);
  std::vector<double> row(layout.size());
  std::size_t r = 0;
  for_each_point(grid, domain, [&](double t, std::span<const double> ic, double) {
    const double v = f(t, ic);
    if (!std::isfinite(v)) throw DataError("non-finite sample while fitting at t = " + std::to_string(t));
    layout.weights(t, ic, row);
    for (std::size_t c = 0; c < columns.size(); ++c) A(r, c) = row[columns[c]];
    y(r) = v;
    ++r;
  });

  const Eigen::VectorXd x = A.colPivHouseholderQr().solve(y);
  FourierSurface out(layout);
  for (std::size_t c = 0; c < columns.size(); ++c) out.coeffs()[columns[c]] = x(c);
  return out;
}

}  // namespace fourier_ocp
