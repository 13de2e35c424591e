#include "fourier_ocp/metrics.hpp"

#include <cmath>
#include <limits>

#include "fourier_ocp/errors.hpp"

namespace fourier_ocp {

MetricSet compare_samples(std::span<const double> approx, std::span<const double> ref, std::string reference) {
  if (approx.size() != ref.size()) throw ArgumentError("sample sets differ in size");
  if (approx.empty()) throw ArgumentError("metrics need at least one point");
  MetricSet m;
  m.reference = std::move(reference);
  m.points = approx.size();
  double sq = 0.0, abs_sum = 0.0, pct = 0.0, spct = 0.0;
  std::size_t s_points = 0;
  for (std::size_t i = 0; i < approx.size(); ++i) {
    const double d = approx[i] - ref[i];
    if (!std::isfinite(d)) throw DataError("non-finite sample at index " + std::to_string(i));
    sq += d * d;
    abs_sum += std::abs(d);
    if (ref[i] != 0.0) {
      pct += std::abs(d) / std::abs(ref[i]);
      ++m.mape_points;
    }
    const double scale = 0.5 * (std::abs(ref[i]) + std::abs(approx[i]));
    if (scale != 0.0) {
      spct += std::abs(d) / scale;
      ++s_points;
    }
  }
  const auto n = static_cast<double>(m.points);
  m.mse = sq / n;
  m.mae = abs_sum / n;
  m.mape = m.mape_points ? 100.0 * pct / static_cast<double>(m.mape_points)
                         : std::numeric_limits<double>::quiet_NaN();
  m.smape = s_points ? 100.0 * spct / static_cast<double>(s_points) : 0.0;
  return m;
}

MetricSet control_metrics(const FourierSurface& control, const SurfaceFunction& ref, std::span<const double> times,
                          const std::vector<std::vector<double>>& ics, std::string reference) {
  if (times.empty() || ics.empty()) throw ArgumentError("metrics grid is empty");
  std::vector<double> approx, exact;
  approx.reserve(times.size() * ics.size());
  exact.reserve(approx.capacity());
  for (const auto& ic : ics) {
    for (double t : times) {
      approx.push_back(control.eval(t, ic));
      exact.push_back(ref(t, ic));
    }
  }
  return compare_samples(approx, exact, std::move(reference));
}

CostError cost_pct_error(std::span<const double> j_hat, std::span<const double> j_star) {
  if (j_hat.size() != j_star.size()) throw ArgumentError("cost vectors differ in size");
  if (j_hat.empty()) throw ArgumentError("cost vectors are empty");
  CostError e;
  double sum = 0.0;
  for (std::size_t i = 0; i < j_hat.size(); ++i) {
    if (j_star[i] > 0.0) {
      sum += std::abs(j_hat[i] - j_star[i]) / j_star[i];
      ++e.used;
    } else if (j_hat[i] == j_star[i]) {
      ++e.excluded;
    } else {
      ++e.undefined;
    }
  }
  e.pct = e.used ? 100.0 * sum / static_cast<double>(e.used) : std::numeric_limits<double>::quiet_NaN();
  return e;
}

}  // namespace fourier_ocp
