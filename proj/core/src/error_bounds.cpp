#include "fourier_ocp/error_bounds.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "fourier_ocp/errors.hpp"
#include "fourier_ocp/fourier_basis.hpp"
#include "fourier_ocp/quadrature.hpp"

namespace fourier_ocp {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) throw ArgumentError(std::string(name) + " must be positive");
}

void require_finite(double v, double at) {
  if (!std::isfinite(v)) throw DataError("non-finite sample at " + std::to_string(at));
}

std::int64_t ceil_count(double x) {
  // Guard against ceil(4.000000000001) on quantities that are exact in theory.
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x))) return static_cast<std::int64_t>(r);
  return static_cast<std::int64_t>(std::ceil(x));
}

}  // namespace

double total_variation(const Function1D& f, double lo, double hi, std::size_t nodes) {
  if (!(hi > lo)) throw ArgumentError("total_variation needs lo < hi");
  if (nodes < 2) throw ArgumentError("total_variation needs at least 2 nodes");
  const double step = (hi - lo) / static_cast<double>(nodes - 1);
  double prev = f(lo);
  require_finite(prev, lo);
  double sum = 0.0;
  for (std::size_t i = 1; i < nodes; ++i) {
    const double t = i + 1 == nodes ? hi : lo + static_cast<double>(i) * step;
    const double v = f(t);
    require_finite(v, t);
    sum += std::abs(v - prev);
    prev = v;
  }
  return sum;
}

double total_variation(const Function2D& f, double t_lo, double t_hi, double u_lo, double u_hi,
                       std::size_t nodes_per_axis) {
  if (!(t_hi > t_lo) || !(u_hi > u_lo)) throw ArgumentError("total_variation needs a non-empty rectangle");
  const std::vector<QuadratureGrid> grids{QuadratureGrid(QuadratureRule::simpson, nodes_per_axis | 1u, t_lo, t_hi),
                                          QuadratureGrid(QuadratureRule::simpson, nodes_per_axis | 1u, u_lo, u_hi)};
  const double ht = 1e-6 * std::max(1.0, t_hi - t_lo);
  const double hu = 1e-6 * std::max(1.0, u_hi - u_lo);
  return tensor_integrate(
      [&](std::span<const double> p) {
        const double t = p[0], u = p[1];
        const double dt = (f(t + ht, u) - f(t - ht, u)) / (2.0 * ht);
        const double du = (f(t, u + hu) - f(t, u - hu)) / (2.0 * hu);
        return std::hypot(dt, du);
      },
      grids);
}

double mse_bound_1d(double T, double C, int K) {
  require_positive(T, "T");
  if (K < 1) throw ArgumentError("K must be >= 1");
  if (!(C >= 0.0)) throw ArgumentError("C must be >= 0");
  return T * C * C / (kPi * kPi * K);
}

double mse_bound_2d(double T, double U, double C, int K, int L) {
  require_positive(T, "T");
  require_positive(U, "U");
  if (K < 1 || L < 1) throw ArgumentError("K and L must be >= 1");
  if (!(C >= 0.0)) throw ArgumentError("C must be >= 0");
  return 4.0 * T * U * C * C / (std::pow(kPi, 4) * K * L);
}

std::int64_t coefficients_for_tolerance_1d(double T, double C, double eps) {
  require_positive(eps, "eps");
  require_positive(T, "T");
  if (!(C >= 0.0)) throw ArgumentError("C must be >= 0");
  return ceil_count(T * C * C / (kPi * kPi * eps));
}

ProductSplit coefficients_for_tolerance_2d(double T, double U, double C, double eps) {
  require_positive(eps, "eps");
  require_positive(T, "T");
  require_positive(U, "U");
  if (!(C >= 0.0)) throw ArgumentError("C must be >= 0");
  ProductSplit s;
  s.product = ceil_count(4.0 * T * U * C * C / (std::pow(kPi, 4) * eps));
  s.k = s.l = ceil_count(std::sqrt(static_cast<double>(s.product)));
  return s;
}

std::int64_t coefficients_for_tolerance_nd(std::span<const double> half_periods, double C, double eps) {
  require_positive(eps, "eps");
  if (half_periods.empty()) throw ArgumentError("need at least one half period");
  if (!(C >= 0.0)) throw ArgumentError("C must be >= 0");
  double num = C * C;
  for (double T : half_periods) {
    require_positive(T, "half period");
    num *= 2.0 * T / (kPi * kPi);
  }
  return ceil_count(num / eps);
}

namespace {

// |c_k|^2 for k = 0..k_max of the 2T-periodic f, by Simpson on [0, 2T].
std::vector<double> coefficient_energy(const Function1D& f, double T, int k_max, std::size_t nodes) {
  QuadratureGrid grid(QuadratureRule::simpson, nodes, 0.0, 2.0 * T);
  std::vector<std::complex<double>> c(static_cast<std::size_t>(k_max) + 1);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid.points()[i];
    const double v = f(t);
    require_finite(v, t);
    const std::complex<double> step = std::polar(1.0, -kPi * t / T);
    std::complex<double> phase = 1.0;
    const double wv = grid.weights()[i] * v;
    for (int k = 0; k <= k_max; ++k) {
      c[static_cast<std::size_t>(k)] += wv * phase;
      if ((k & 63) == 63) {
        phase = std::polar(1.0, -kPi * t * (k + 1) / T);
      } else {
        phase *= step;
      }
    }
  }
  std::vector<double> e(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) e[k] = std::norm(c[k] / (2.0 * T));
  return e;
}

}  // namespace

TruncationError empirical_truncation_mse(const Function1D& f, double T, int K, std::size_t nodes) {
  require_positive(T, "T");
  if (K < 0) throw ArgumentError("K must be >= 0");
  nodes |= 1u;
  const SurfaceLayout layout(DomainBox(T, {}, {}), K, {});
  const auto approx =
      project_function([&](double t, std::span<const double>) { return f(t); }, layout, nodes);
  QuadratureGrid grid(QuadratureRule::simpson, nodes, 0.0, 2.0 * T);
  std::vector<double> sq(grid.size());
  std::vector<double> row(layout.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid.points()[i];
    layout.weights(t, {}, row);
    double v = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) v += row[j] * approx.coeffs()[j];
    const double d = f(t) - v;
    sq[i] = d * d;
  }
  TruncationError out;
  out.squared_error = integrate_samples(sq, grid);
  out.mse = out.squared_error / (2.0 * T);
  const int k_end = std::max(20 * K, 20);
  const auto energy = coefficient_energy(f, T, k_end, nodes);
  double tail = 0.0;
  for (int k = K + 1; k <= k_end; ++k) tail += energy[static_cast<std::size_t>(k)];
  out.parseval = 4.0 * T * tail;
  return out;
}

TruncationError2D empirical_truncation_mse(const Function2D& f, double T, double U, int K, int L,
                                           std::size_t nodes_per_axis) {
  require_positive(T, "T");
  require_positive(U, "U");
  if (K < 0 || L < 0) throw ArgumentError("orders must be >= 0");
  nodes_per_axis |= 1u;
  const SurfaceLayout layout(DomainBox(T, {0.0}, {U}), K, {L});
  const auto approx =
      project_function([&](double t, std::span<const double> u) { return f(t, u[0]); }, layout, nodes_per_axis);
  const std::vector<QuadratureGrid> grids{QuadratureGrid(QuadratureRule::simpson, nodes_per_axis, 0.0, 2.0 * T),
                                          QuadratureGrid(QuadratureRule::simpson, nodes_per_axis, 0.0, 2.0 * U)};
  std::vector<double> row(layout.size());
  TruncationError2D out;
  out.squared_error = tensor_integrate(
      [&](std::span<const double> p) {
        layout.weights(p[0], p.subspan(1), row);
        double v = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j) v += row[j] * approx.coeffs()[j];
        const double d = f(p[0], p[1]) - v;
        return d * d;
      },
      grids);
  out.mse = out.squared_error / (4.0 * T * U);
  return out;
}

BoundReport bound_report(const Function1D& f, double T, int K, double C) {
  BoundReport r;
  r.C = C;
  r.T = T;
  r.K = K;
  r.bound_value = mse_bound_1d(T, C, K);
  const auto e = empirical_truncation_mse(f, T, K);
  r.empirical_mse = e.mse;
  r.squared_error = e.squared_error;
  r.parseval = e.parseval;
  r.satisfied = r.empirical_mse <= r.bound_value;
  return r;
}

BoundReport bound_report(const Function2D& f, double T, double U, int K, int L, double C) {
  BoundReport r;
  r.C = C;
  r.T = T;
  r.U = U;
  r.K = K;
  r.L = L;
  r.bound_value = mse_bound_2d(T, U, C, K, L);
  const auto e = empirical_truncation_mse(f, T, U, K, L);
  r.empirical_mse = e.mse;
  r.squared_error = e.squared_error;
  r.satisfied = r.empirical_mse <= r.bound_value;
  return r;
}

int smallest_sufficient_order(const Function1D& f, double T, double eps, int k_max) {
  require_positive(eps, "eps");
  for (int k = 0; k <= k_max; ++k) {
    if (empirical_truncation_mse(f, T, k, 8193).mse <= eps) return k;
  }
  return -1;
}

namespace {

double triangle(double t) { return 1.0 - std::abs(t - 1.0); }
double bump(double t) { return t * (2.0 - t); }

}  // namespace

const std::vector<NamedFunction1D>& bounded_variation_corpus_1d() {
  static const std::vector<NamedFunction1D> corpus{
      {"parabola", [](double t) { return bump(t); }, 1.0},
      {"rectified_sine", [](double t) { return std::abs(std::sin(kPi * t)); }, 1.0},
      {"triangle", [](double t) { return triangle(t); }, 1.0},
      {"smoothed_plateau", [](double t) { return std::tanh(8.0 * (t - 0.5)) - std::tanh(8.0 * (t - 1.5)); }, 1.0},
      {"cubic", [](double t) { return t * (t - 1.0) * (t - 2.0); }, 1.0},
      {"two_tones", [](double t) { return std::sin(kPi * t) + 0.5 * std::cos(3.0 * kPi * t); }, 1.0},
      {"exp_cos", [](double t) { return std::exp(std::cos(kPi * t)); }, 1.0},
      {"quartic", [](double t) { return bump(t) * bump(t); }, 1.0},
      {"gaussian", [](double t) { return std::exp(-20.0 * (t - 1.0) * (t - 1.0)); }, 1.0},
      {"skewed_ramp", [](double t) { return t < 0.5 ? 2.0 * t : (2.0 - t) / 1.5; }, 1.0},
  };
  return corpus;
}

const std::vector<NamedFunction2D>& bounded_variation_corpus_2d() {
  static const std::vector<NamedFunction2D> corpus{
      {"sine_sine", [](double t, double u) { return std::sin(kPi * t) * std::sin(kPi * u); }, 1.0, 1.0, true},
      {"parabola_parabola", [](double t, double u) { return bump(t) * bump(u); }, 1.0, 1.0, true},
      {"rectified_cos", [](double t, double u) { return std::abs(std::sin(kPi * t)) * std::cos(kPi * u); }, 1.0, 1.0,
       true},
      {"triangle_triangle", [](double t, double u) { return triangle(t) * triangle(u); }, 1.0, 1.0, true},
      {"exp_cos_parabola", [](double t, double u) { return std::exp(std::cos(kPi * t)) * bump(u); }, 1.0, 1.0,
       true},
      {"gaussian_2d",
       [](double t, double u) { return std::exp(-5.0 * ((t - 1.0) * (t - 1.0) + (u - 1.0) * (u - 1.0))); }, 1.0,
       1.0, false},
      {"diagonal_wave", [](double t, double u) { return std::sin(kPi * (t + u)) + 0.5 * std::cos(kPi * (t - 2.0 * u)); },
       1.0, 1.0, false},
      {"modulated_bump",
       [](double t, double u) { return bump(t) * bump(u) * (1.0 + 0.5 * std::sin(kPi * (t + u))); }, 1.0, 1.0,
       false},
  };
  return corpus;
}

}  // namespace fourier_ocp
