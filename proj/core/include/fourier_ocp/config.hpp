#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "fourier_ocp/auglag.hpp"
#include "fourier_ocp/fourier_basis.hpp"
#include "fourier_ocp/optimizers.hpp"
#include "fourier_ocp/problems.hpp"
#include "fourier_ocp/quadrature.hpp"
#include "fourier_ocp/reference.hpp"

namespace fourier_ocp {

// Experiment files are flat `key = value` lines. A `[section]` header
// prefixes the keys that follow it with `section.`; `#` starts a comment.
// Numbers may be written as fractions (7/30). Initial conditions give one
// spec per state component, separated by commas:
//
//   ic = 0:0.5:5, 1        # range lo:step:hi, then a single value
//   ic = 0.2|0.3, 0.5|0.6  # explicit alternatives per component
//
// The initial-condition set is the Cartesian product of the per-component
// values. See configs/ for complete files.
struct ExperimentConfig {
  ProblemKind problem = ProblemKind::lq_particle;
  int strategies = 3;
  double horizon = 0.0;
  double r = 1.0;
  std::vector<std::vector<double>> ic_axes;
  std::vector<double> terminal;

  int time_order = 4;            ///< M: highest time sine order
  int time_cos_order = -1;       ///< highest time cosine order, -1 means M
  std::vector<int> ic_orders;    ///< per component; degenerate components are forced to 0
  bool half_basis = false;

  QuadratureRule quadrature_rule = QuadratureRule::simpson;
  std::size_t quadrature_nodes = 201;

  AugLagParams auglag;
  OptimizerConfig optimizer;

  bool jitter = false;
  std::uint64_t seed = 0;

  std::size_t simulation_steps = 4000;
  ShootingOptions shooting;
  std::size_t grid_points = 101;

  std::filesystem::path output = "out";

  /// Every resolved key with its value, defaults included, in a fixed order.
  std::vector<std::pair<std::string, std::string>> echo;

  std::vector<std::vector<double>> initial_conditions() const;
  DomainBox domain() const;
  SurfaceLayout layout() const;
  OcpDefinition definition() const;
};

/// Throws ConfigError with the 1-based line and column of the offending text.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Decimal, scientific or fraction (a/b) literal.
double parse_number(const std::string& text);

}  // namespace fourier_ocp
