#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace fourier_ocp {

/// Time horizon plus the box spanned by the initial conditions. An axis with
/// lo == hi is degenerate (a single initial value) and collapses to a
/// constant factor in every basis product.
class DomainBox {
 public:
  DomainBox() = default;
  DomainBox(double horizon, std::vector<double> ic_lo, std::vector<double> ic_hi);

  double horizon() const noexcept { return horizon_; }
  std::size_t ic_axes() const noexcept { return ic_lo_.size(); }
  std::span<const double> ic_lo() const noexcept { return ic_lo_; }
  std::span<const double> ic_hi() const noexcept { return ic_hi_; }
  double ic_range(std::size_t axis) const { return ic_hi_.at(axis) - ic_lo_.at(axis); }
  bool degenerate(std::size_t axis) const { return ic_range(axis) == 0.0; }

  friend bool operator==(const DomainBox&, const DomainBox&) = default;

 private:
  double horizon_ = 1.0;
  std::vector<double> ic_lo_;
  std::vector<double> ic_hi_;
};

/// Non-zero entries of one basis row (the coefficient weights of a surface
/// evaluated at a single point).
struct SparseRow {
  std::vector<std::uint32_t> index;
  std::vector<double> weight;

  double dot(std::span<const double> coeffs) const;
};

struct SurfaceShape {
  int time_sin_order = 0;         ///< sin(m pi t / T), m = 1..time_sin_order
  int time_cos_order = 0;         ///< cos(m pi t / T), m = 0..time_cos_order
  std::vector<int> ic_orders;     ///< per initial-condition axis, n = 0..N_i
  bool half_basis = false;        ///< keep only products with an even number of sine factors
};

/// Index layout and basis evaluation for a truncated multidimensional
/// half-range Fourier series
///
///   s(t, u0) = sum_b sum_{m, n_1..n_d} c[b, m, n_1..n_d]
///              * f_b0(theta_m) * f_b1(phi_{n_1}) * ... * f_bd(phi_{n_d})
///
/// with theta_m = m pi t / T, phi_n = n pi (u0 - lo) / (hi - lo), and f
/// either sin or cos. The combination index b enumerates the 2^(1+d) sin/cos
/// choices; bit (d - axis) of b set means cos on that axis, so b = 0 is the
/// all-sine product and b = 2^(1+d) - 1 the all-cosine product.
///
/// Storage is dense row-major over (b, m, n_1, ..., n_d). Entries that can
/// never contribute (sin with m = 0, masked orders, degenerate axes, the
/// dropped half of a half basis) are stored but inactive.
class SurfaceLayout {
 public:
  SurfaceLayout() = default;
  SurfaceLayout(DomainBox domain, SurfaceShape shape);
  /// Same order M for time sines and cosines.
  SurfaceLayout(DomainBox domain, int time_order, std::vector<int> ic_orders);

  const DomainBox& domain() const noexcept { return domain_; }
  const SurfaceShape& shape() const noexcept { return shape_; }
  std::size_t input_dims() const noexcept { return 1 + domain_.ic_axes(); }
  std::size_t combinations() const noexcept { return std::size_t{1} << input_dims(); }
  /// Extent of each tensor axis minus one: time first, then IC axes.
  std::vector<int> orders() const;
  std::size_t block_size() const noexcept { return block_; }
  std::size_t size() const noexcept { return combinations() * block_; }

  bool uses_cos(std::size_t combination, std::size_t axis) const;
  std::size_t all_cos_combination() const noexcept { return combinations() - 1; }

  std::size_t flat_index(std::size_t combination, int m, std::span<const int> n) const;
  void unflatten(std::size_t flat, std::size_t& combination, int& m, std::span<int> n) const;
  bool active(std::size_t flat) const { return active_.at(flat) != 0; }
  std::size_t active_count() const;

  /// Dense basis row at (t, ic); inactive entries are exactly zero.
  void weights(double t, std::span<const double> ic, std::span<double> out) const;
  /// Dense row of d/dt of each basis product.
  void time_derivative_weights(double t, std::span<const double> ic, std::span<double> out) const;
  SparseRow sparse_weights(double t, std::span<const double> ic) const;
  SparseRow sparse_time_derivative_weights(double t, std::span<const double> ic) const;

  /// L2 norm squared of basis product `flat` over the doubled periodic box
  /// [0, 2T] x prod [lo, lo + 2 (hi - lo)], degenerate axes excluded.
  double periodic_norm_squared(std::size_t flat) const;

  friend bool operator==(const SurfaceLayout& a, const SurfaceLayout& b) {
    return a.domain_ == b.domain_ && a.shape_.time_sin_order == b.shape_.time_sin_order &&
           a.shape_.time_cos_order == b.shape_.time_cos_order && a.shape_.ic_orders == b.shape_.ic_orders &&
           a.shape_.half_basis == b.shape_.half_basis;
  }

 private:
  void fill(double t, std::span<const double> ic, std::span<double> out, bool time_derivative) const;
  void check_ic(std::span<const double> ic) const;

  DomainBox domain_;
  SurfaceShape shape_;
  std::vector<std::size_t> extent_;  // per tensor axis
  std::size_t block_ = 0;
  std::vector<char> active_;
};

/// A layout plus its coefficient tensor. Evaluation is linear in the
/// coefficients and read-only, so a surface can be shared across threads.
class FourierSurface {
 public:
  FourierSurface() = default;
  explicit FourierSurface(SurfaceLayout layout);
  FourierSurface(SurfaceLayout layout, std::vector<double> coeffs);

  const SurfaceLayout& layout() const noexcept { return layout_; }
  const DomainBox& domain() const noexcept { return layout_.domain(); }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  std::span<double> coeffs() noexcept { return coeffs_; }

  double& at(std::size_t combination, int m, std::span<const int> n);
  double at(std::size_t combination, int m, std::span<const int> n) const;

  double eval(double t, std::span<const double> ic) const;
  double eval_time_derivative(double t, std::span<const double> ic) const;

 private:
  void check_finite() const;

  SurfaceLayout layout_;
  std::vector<double> coeffs_;
};

/// sum_{k=-K}^{K} c_k exp(i pi k t / T), period 2T.
class ComplexSeries1D {
 public:
  ComplexSeries1D(int order, double half_period);
  ComplexSeries1D(double half_period, std::vector<std::complex<double>> coeffs);

  int order() const noexcept { return order_; }
  double half_period() const noexcept { return half_period_; }
  std::complex<double>& operator[](int k) { return coeffs_.at(static_cast<std::size_t>(k + order_)); }
  std::complex<double> operator[](int k) const { return coeffs_.at(static_cast<std::size_t>(k + order_)); }
  std::span<const std::complex<double>> coeffs() const noexcept { return coeffs_; }

  std::complex<double> eval(double t) const;
  /// max_k |c_{-k} - conj(c_k)|
  double conjugate_asymmetry() const;
  /// sum_k |c_k|^2
  double energy() const;

 private:
  int order_;
  double half_period_;
  std::vector<std::complex<double>> coeffs_;
};

/// Real time-only surface to complex-exponential form via the Euler relations.
ComplexSeries1D to_complex(const FourierSurface& series);
/// Inverse of to_complex. Throws DataError when the series is not
/// conjugate-symmetric (it would not represent a real function).
FourierSurface from_complex(const ComplexSeries1D& series, double tolerance = 1e-12);

using SurfaceFunction = std::function<double(double t, std::span<const double> ic)>;

/// Orthogonal projection of `f` onto the layout's basis over the doubled
/// periodic box [0, 2T] x prod [lo, lo + 2 (hi - lo)]. `f` is sampled on the
/// whole doubled box, so the caller decides how it extends past [0, T].
/// Degenerate axes are held at their single value.
FourierSurface project_function(const SurfaceFunction& f, const SurfaceLayout& layout,
                                std::size_t nodes_per_axis = 1025);

/// Least-squares fit of `f` on the base box [0, T] x prod [lo, hi] using a
/// uniform sample grid. The half-range sine and cosine families are not
/// orthogonal on [0, T], but together they approximate smooth non-periodic
/// functions far better than the orthogonal projection of any extension.
FourierSurface fit_least_squares(const SurfaceFunction& f, const SurfaceLayout& layout,
                                 std::size_t samples_per_axis = 201);

}  // namespace fourier_ocp
