#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fourier_ocp/auglag.hpp"
#include "fourier_ocp/config.hpp"
#include "fourier_ocp/error_bounds.hpp"
#include "fourier_ocp/metrics.hpp"

namespace fourier_ocp {

/// Reference solution for every initial condition of an experiment.
struct ReferenceSet {
  std::string provenance;  ///< analytic or shooting
  std::vector<double> cost;
  std::vector<Trajectory> trajectories;     ///< state and control on a fine grid
  std::vector<double> terminal_residuals;   ///< shooting only
};

ReferenceSet compute_reference(const ExperimentConfig& config);

/// Reference control at time t for initial condition index `ic`
/// (linear interpolation between trajectory nodes).
double reference_control(const ReferenceSet& ref, std::size_t ic, double t);

/// Cost and worst violation of the solution re-measured on a grid with
/// twice the quadrature intervals.
struct QuadratureSensitivity {
  std::size_t nodes = 0;
  std::size_t fine_nodes = 0;
  double cost = 0.0;
  double fine_cost = 0.0;
  double nu = 0.0;
  double fine_nu = 0.0;
};

struct ExperimentReport {
  SolveResult solve;
  MetricSet metrics;
  CostError j_error;            ///< J_sim against J*
  CostError j_surrogate_error;  ///< surrogate cost against J*
  std::vector<double> j_sim;
  std::vector<double> j_surrogate;
  std::vector<double> j_star;
  std::vector<double> terminal_miss;  ///< ||x_sim(T) - x_T|| per ic, lq only
  double gamma_min = 0.0;             ///< smallest control value on the metrics grid
  QuadratureSensitivity quadrature;
  std::string reference;
  double wall_seconds = 0.0;
  std::vector<std::filesystem::path> files;
};

/// Solves, evaluates against the reference and, when `write_outputs` is set,
/// writes coefficients.txt, history.csv, metrics.csv, report.json,
/// surface_grid.csv, reference.csv and timing.txt into config.output. Every
/// file except timing.txt is a deterministic function of the config.
ExperimentReport run_experiment(const ExperimentConfig& config, bool write_outputs = true);

/// Solver surfaces: control first, then one per state component.
std::vector<FourierSurface> experiment_surfaces(const LagrangianAssembler& assembler, std::span<const double> x);

void write_metrics_csv(std::ostream& out, const ExperimentConfig& config, const ExperimentReport& report);
void write_reference_csv(std::ostream& out, const ReferenceSet& ref, std::size_t state_dim);

/// Grid export over t and one initial-condition axis, with every other axis
/// held at `fixed` (NaN entries fall back to the domain midpoint). Columns:
/// t,u0_1..u0_d,gamma_hat,u_hat_1..u_hat_d.
void write_surface_grid(std::ostream& out, const std::vector<FourierSurface>& surfaces, std::size_t points,
                        std::optional<std::size_t> axis, const std::vector<double>& fixed);

/// Total variation of a time-only or one-axis surface over its even
/// extension to the doubled box, and the order(s) the bound asks for at eps.
struct SurfaceBound {
  double C = 0.0;
  std::size_t variables = 1;
  std::int64_t k = 0;
  ProductSplit split;
};
SurfaceBound surface_bound(const FourierSurface& surface, double eps);

}  // namespace fourier_ocp
