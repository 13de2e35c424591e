#include "fourier_ocp/quadrature.hpp"

#include <cmath>
#include <string>

#include "fourier_ocp/errors.hpp"

namespace fourier_ocp {

QuadratureRule parse_quadrature_rule(std::string_view name) {
  if (name == "simpson") return QuadratureRule::simpson;
  if (name == "trapezoid") return QuadratureRule::trapezoid;
  throw ArgumentError("unknown quadrature rule '" + std::string(name) + "'");
}

std::string_view to_string(QuadratureRule rule) {
  return rule == QuadratureRule::simpson ? "simpson" : "trapezoid";
}

QuadratureGrid::QuadratureGrid(QuadratureRule rule, std::size_t nodes, double lo, double hi)
    : rule_(rule), lo_(lo), hi_(hi) {
  if (nodes < 3 || nodes % 2 == 0) {
    throw ArgumentError("quadrature node count must be odd and >= 3, got " + std::to_string(nodes));
  }
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw ArgumentError("quadrature interval must satisfy lo < hi");
  }
  const std::size_t panels = nodes - 1;
  const double h = (hi - lo) / static_cast<double>(panels);
  points_.resize(nodes);
  weights_.resize(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    points_[i] = lo + h * static_cast<double>(i);
  }
  points_.back() = hi;

  if (rule == QuadratureRule::trapezoid) {
    for (std::size_t i = 0; i < nodes; ++i) weights_[i] = h;
    weights_.front() = weights_.back() = 0.5 * h;
  } else {
    const double third = h / 3.0;
    for (std::size_t i = 0; i < nodes; ++i) {
      weights_[i] = (i % 2 == 1 ? 4.0 : 2.0) * third;
    }
    weights_.front() = weights_.back() = third;
  }
}

double integrate_samples(std::span<const double> samples, const QuadratureGrid& grid) {
  if (samples.size() != grid.size()) {
    throw ArgumentError("sample count " + std::to_string(samples.size()) +
                        " does not match grid size " + std::to_string(grid.size()));
  }
  const auto w = grid.weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i])) {
      throw DataError("non-finite integrand at node " + std::to_string(i) +
                      " (t = " + std::to_string(grid.points()[i]) + ")");
    }
    sum += w[i] * samples[i];
  }
  return sum;
}

double integrate(const std::function<double(double)>& f, const QuadratureGrid& grid) {
  std::vector<double> samples(grid.size());
  const auto p = grid.points();
  for (std::size_t i = 0; i < p.size(); ++i) samples[i] = f(p[i]);
  return integrate_samples(samples, grid);
}

double tensor_integrate(const std::function<double(std::span<const double>)>& f,
                        std::span<const QuadratureGrid> grids) {
  if (grids.empty()) throw ArgumentError("tensor_integrate needs at least one axis");
  const std::size_t dims = grids.size();
  std::vector<std::size_t> idx(dims, 0);
  std::vector<double> point(dims);
  double sum = 0.0;
  while (true) {
    double weight = 1.0;
    for (std::size_t a = 0; a < dims; ++a) {
      point[a] = grids[a].points()[idx[a]];
      weight *= grids[a].weights()[idx[a]];
    }
    const double value = f(point);
    if (!std::isfinite(value)) {
      std::string where;
      for (std::size_t a = 0; a < dims; ++a) where += (a ? "," : "") + std::to_string(idx[a]);
      throw DataError("non-finite integrand at node (" + where + ")");
    }
    sum += weight * value;

    std::size_t a = dims;
    while (a > 0) {
      --a;
      if (++idx[a] < grids[a].size()) break;
      idx[a] = 0;
      if (a == 0) return sum;
    }
  }
}

}  // namespace fourier_ocp
