#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace fourier_ocp {

using Function1D = std::function<double(double)>;
using Function2D = std::function<double(double, double)>;

/// Variation of f over [lo, hi] as the sum of |f(t_i+1) - f(t_i)| on a uniform
/// partition. Exact for piecewise monotone f with breaks on the nodes.
double total_variation(const Function1D& f, double lo, double hi, std::size_t nodes = 20001);
/// Integral of the Euclidean norm of grad f over a rectangle.
double total_variation(const Function2D& f, double t_lo, double t_hi, double u_lo, double u_hi,
                       std::size_t nodes_per_axis = 801);

/// T C^2 / (pi^2 K), K >= 1.
double mse_bound_1d(double T, double C, int K);
/// 4 T U C^2 / (pi^4 K L), K, L >= 1.
double mse_bound_2d(double T, double U, double C, int K, int L);

/// Smallest K with T C^2 / (pi^2 K) <= eps.
std::int64_t coefficients_for_tolerance_1d(double T, double C, double eps);

struct ProductSplit {
  std::int64_t product = 0;  ///< K L
  std::int64_t k = 0;        ///< balanced split, K = L = ceil(sqrt(K L))
  std::int64_t l = 0;
};
ProductSplit coefficients_for_tolerance_2d(double T, double U, double C, double eps);

/// Product-form heuristic for n variables: smallest K_1...K_n with
/// 2^n T_1...T_n C^2 / (pi^(2n) K_1...K_n) <= eps. Not a proven bound.
std::int64_t coefficients_for_tolerance_nd(std::span<const double> half_periods, double C, double eps);

/// Truncation error of the order-K series of a 2T-periodic f.
struct TruncationError {
  double mse = 0.0;           ///< (1/2T) integral of (f - f_K)^2 over [0, 2T]
  double squared_error = 0.0; ///< the same integral without the 1/2T factor
  double parseval = 0.0;      ///< 4T sum_{k=K+1}^{20K} |c_k|^2 (compare with squared_error)
};

TruncationError empirical_truncation_mse(const Function1D& f, double T, int K, std::size_t nodes = 65537);

struct TruncationError2D {
  double mse = 0.0;            ///< (1/4TU) double integral of (f - f_KL)^2
  double squared_error = 0.0;  ///< without the normalisation
};

/// f is 2T-periodic in t and 2U-periodic in u on [0, 2T] x [0, 2U].
TruncationError2D empirical_truncation_mse(const Function2D& f, double T, double U, int K, int L,
                                           std::size_t nodes_per_axis = 513);

struct BoundReport {
  double C = 0.0;
  double T = 0.0;
  double U = 0.0;  ///< 0 for one variable
  int K = 0;
  int L = 0;
  double bound_value = 0.0;
  double empirical_mse = 0.0;
  double squared_error = 0.0;
  double parseval = 0.0;  ///< one variable only
  bool satisfied = false;  ///< empirical_mse <= bound_value
};

BoundReport bound_report(const Function1D& f, double T, int K, double C);
BoundReport bound_report(const Function2D& f, double T, double U, int K, int L, double C);

/// Smallest K in [0, k_max] whose empirical MSE is <= eps, or -1.
int smallest_sufficient_order(const Function1D& f, double T, double eps, int k_max);


struct NamedFunction1D {
  std::string name;
  Function1D f;
  double T;  ///< half period; f is periodic on [0, 2T]
};

struct NamedFunction2D {
  std::string name;
  Function2D f;
  double T;
  double U;
  bool separable;
};

/// Ten continuous, 2T-periodic functions of bounded variation: polynomials,
/// rectified sines, piecewise-linear waves and smoothed steps.
const std::vector<NamedFunction1D>& bounded_variation_corpus_1d();
/// Five separable and three non-separable doubly periodic surfaces.
const std::vector<NamedFunction2D>& bounded_variation_corpus_2d();

}  // namespace fourier_ocp
