#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fourier_ocp/fourier_basis.hpp"

namespace fourier_ocp {

struct MetricSet {
  double mse = 0.0;
  double mae = 0.0;
  double mape = 0.0;   ///< percent, over points where the reference is not exactly zero
  double smape = 0.0;  ///< percent, |diff| / ((|ref| + |approx|) / 2)
  std::size_t points = 0;
  std::size_t mape_points = 0;
  std::string reference;  ///< analytic, shooting or transcription
};

/// Pointwise comparison of two equally sized sample sets.
MetricSet compare_samples(std::span<const double> approx, std::span<const double> ref, std::string reference);

/// Compares the control surface with a reference on every (t, ic) pair.
MetricSet control_metrics(const FourierSurface& control, const SurfaceFunction& ref, std::span<const double> times,
                          const std::vector<std::vector<double>>& ics, std::string reference);

struct CostError {
  double pct = 0.0;            ///< mean of |J_hat - J*| / J* * 100 over the usable entries
  std::size_t used = 0;
  std::size_t excluded = 0;    ///< J* = 0 and J_hat = 0
  std::size_t undefined = 0;   ///< J* = 0 and J_hat != 0
};

CostError cost_pct_error(std::span<const double> j_hat, std::span<const double> j_star);

}  // namespace fourier_ocp
