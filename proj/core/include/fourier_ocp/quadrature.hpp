#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace fourier_ocp {

enum class QuadratureRule { trapezoid, simpson };

QuadratureRule parse_quadrature_rule(std::string_view name);
std::string_view to_string(QuadratureRule rule);

/// Fixed composite rule on [lo, hi]. Node count is odd and >= 3 so that
/// Simpson panels pair up; the same count is accepted for trapezoid.
class QuadratureGrid {
 public:
  QuadratureGrid(QuadratureRule rule, std::size_t nodes, double lo, double hi);

  QuadratureRule rule() const noexcept { return rule_; }
  std::size_t size() const noexcept { return points_.size(); }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  std::span<const double> points() const noexcept { return points_; }
  std::span<const double> weights() const noexcept { return weights_; }

 private:
  QuadratureRule rule_;
  double lo_;
  double hi_;
  std::vector<double> points_;
  std::vector<double> weights_;
};

/// Weighted sum of pre-sampled values. Throws DataError naming the first
/// non-finite node.
double integrate_samples(std::span<const double> samples, const QuadratureGrid& grid);

double integrate(const std::function<double(double)>& f, const QuadratureGrid& grid);

/// Product rule over one grid per axis. `f` receives the point coordinates.
double tensor_integrate(const std::function<double(std::span<const double>)>& f,
                        std::span<const QuadratureGrid> grids);

}  // namespace fourier_ocp
