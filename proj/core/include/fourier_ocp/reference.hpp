#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fourier_ocp/optimizers.hpp"
#include "fourier_ocp/problems.hpp"

namespace fourier_ocp {

/// Optimal control of the unit-mass particle steered from x0 to xT on [0, T]
/// with running cost r gamma^2. The optimum is affine in t and independent of r.
double lq_analytic_control(double t, double horizon, std::span<const double> x0, std::span<const double> xt);
/// Closed-form integral of r gamma*(t)^2 over [0, T].
double lq_analytic_cost(double horizon, std::span<const double> x0, std::span<const double> xt, double r);

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  std::vector<double> control;
  double cost = 0.0;  ///< quadrature of the running cost over the nodes
};

using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dy)>;
using ControlLaw = std::function<double(double t)>;

/// Classical fixed-step RK4. Returns the state at every node, steps + 1 rows.
std::vector<std::vector<double>> rk4_integrate(const OdeRhs& rhs, std::vector<double> y0, double t0, double t1,
                                               std::size_t steps);

/// Forward simulation of `problem` from `u0` under an open-loop control.
/// The cost is Simpson's rule over the nodes when `steps` is even and the
/// trapezoid rule otherwise. Throws RunError at the first non-finite state.
Trajectory rk4_simulate(const OcpDefinition& problem, std::span<const double> u0, const ControlLaw& control,
                        std::size_t steps);

struct ShootingOptions {
  std::size_t steps = 6000;
  double tolerance = 1e-10;       ///< on ||lambda(T)||
  int max_newton = 60;
  double fd_step = 1e-7;
  std::vector<double> start_grid{-1.0, 0.0, 1.0};  ///< per-component values of lambda(0) guesses
};

struct ShootingResult {
  Trajectory trajectory;
  std::vector<std::vector<double>> costate;  ///< lambda at every node
  std::vector<double> lambda0;
  double terminal_residual = 0.0;  ///< ||lambda(T)||
  int newton_iterations = 0;
  int converged_starts = 0;
};

/// Pontryagin reference for the replicator problem: integrates state and
/// costate with gamma = -lambda^T G(u) / r and solves lambda(T) = 0 for
/// lambda(0) by damped Newton with finite-difference sensitivities, from
/// every point of the start grid. Returns the lowest-cost converged solution.
ShootingResult rps_shooting_reference(const OcpDefinition& problem, std::span<const double> u0,
                                      const ShootingOptions& options = {});

/// Integrates state and costate from a given lambda(0) (no Newton).
ShootingResult rps_costate_sweep(const OcpDefinition& problem, std::span<const double> u0,
                                 std::span<const double> lambda0, std::size_t steps);

/// H = running cost + lambda^T (F(u) + gamma G(u)).
double rps_hamiltonian(const OcpDefinition& problem, std::span<const double> u, std::span<const double> lambda,
                       double gamma);

struct TranscriptionOptions {
  std::size_t intervals = 2000;
  OptimizerConfig optimizer{OptimizerMethod::lbfgs, 1e-9, 5000, 1e-3, 10, {}};
};

struct TranscriptionResult {
  std::vector<double> control;  ///< one value per interval
  double cost = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  OptimizerStatus status = OptimizerStatus::k_max_reached;
};

/// Independent direct method: piecewise-constant control, one RK4 step per
/// interval with the running cost carried as an extra state, minimized with
/// LBFGS using tape gradients through the whole integration.
TranscriptionResult transcription_reference(const OcpDefinition& problem, std::span<const double> u0,
                                            const TranscriptionOptions& options = {},
                                            std::vector<double> initial_control = {});

}  // namespace fourier_ocp
