#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fourier_ocp/autodiff.hpp"
#include "fourier_ocp/fourier_basis.hpp"
#include "fourier_ocp/optimizers.hpp"
#include "fourier_ocp/problems.hpp"
#include "fourier_ocp/quadrature.hpp"

namespace fourier_ocp {

enum class ResidualKind { dynamics, nonneg, simplex, initial, terminal };

struct ResidualInfo {
  ResidualKind kind;
  int component = -1;  ///< state index for nonneg, -1 otherwise
  std::string name;
};

enum class MultiplierRule { classic, product };

MultiplierRule parse_multiplier_rule(std::string_view name);
std::string_view to_string(MultiplierRule rule);

struct AugLagParams {
  double upsilon0 = 1.0;
  double mu0 = 10.0;
  double lambda = 0.25;            ///< violation reduction factor, (0, 1]
  double penalty_factor = 10.0;    ///< mu_j <- penalty_factor * mu_j
  double multiplier_factor = 1.0;  ///< product rule: upsilon_j <- multiplier_factor * upsilon_j * h_j
  double mu_max = 1e12;            ///< penalties stop growing here
  double tau = 1e-4;
  int ell_lim = 30;
  MultiplierRule rule = MultiplierRule::classic;

  void validate() const;
};

/// Multipliers and penalties are kept strictly positive; the product rule is
/// floored at this value.
inline constexpr double kMultiplierFloor = 1e-12;

struct AugLagState {
  std::vector<double> upsilon;
  std::vector<double> mu;
  double nu = std::numeric_limits<double>::infinity();
  double nu_prev = std::numeric_limits<double>::infinity();
  int ell = 0;
  bool last_multiplier_step = false;

  static AugLagState initial(std::size_t residuals, const AugLagParams& params);
};

/// One outer step: takes the multiplier branch when nu < lambda * nu_prev,
/// otherwise scales the penalties of residuals with h_j >= lambda * nu_prev.
void outer_update(AugLagState& state, std::span<const double> h, const AugLagParams& params);

/// Builds the Augmented Lagrangian of an OCP summed over a set of initial
/// conditions. Control and every state component share one layout; the
/// coefficient vector is [theta_gamma, theta_u1, ..., theta_ud].
///
/// Basis rows for every (initial condition, quadrature node) pair are
/// precomputed, so surface values are dense matrix products. The tape records
/// the nonlinear residual expressions on top of those values and the
/// gradient is pulled back through the transposed basis.
class LagrangianAssembler {
 public:
  LagrangianAssembler(OcpDefinition problem, SurfaceLayout layout, std::vector<std::vector<double>> ics,
                      QuadratureGrid grid);

  const OcpDefinition& problem() const noexcept { return problem_; }
  const SurfaceLayout& layout() const noexcept { return layout_; }
  const QuadratureGrid& grid() const noexcept { return grid_; }
  const std::vector<std::vector<double>>& initial_conditions() const noexcept { return ics_; }
  const std::vector<ResidualInfo>& residuals() const noexcept { return residuals_; }
  std::size_t parameter_count() const noexcept { return layout_.size() * (1 + problem_.state_dim); }

  struct Parts {
    double f = 0.0;
    std::vector<double> h;
    double lagrangian = 0.0;
  };

  /// Plain evaluation of f, every h_j and L.
  Parts evaluate(std::span<const double> x, const AugLagState& state) const;
  std::vector<double> violations(std::span<const double> x) const;
  double cost(std::span<const double> x) const;

  /// L and its gradient from one tape. Throws DataError if any residual is
  /// not finite.
  double value_and_gradient(std::span<const double> x, const AugLagState& state, std::span<double> grad,
                            Parts* parts = nullptr) const;

  /// Records L on `tape` with the coefficients as tape inputs (one input per
  /// coefficient, in order). Slower than value_and_gradient; useful when the
  /// caller wants the whole graph.
  ad::AdValue lagrangian_value(ad::Tape& tape, std::span<const ad::AdValue> coeffs,
                               const AugLagState& state) const;

  FourierSurface control_surface(std::span<const double> x) const;
  std::vector<FourierSurface> state_surfaces(std::span<const double> x) const;

 private:
  OcpDefinition problem_;
  SurfaceLayout layout_;
  std::vector<std::vector<double>> ics_;
  QuadratureGrid grid_;
  std::vector<ResidualInfo> residuals_;
  Eigen::MatrixXd value_rows_;   // (ic * nodes) x layout size
  Eigen::MatrixXd deriv_rows_;
  Eigen::MatrixXd start_rows_;   // ic x layout size, t = 0
  Eigen::MatrixXd end_rows_;     // t = T
};

/// Default starting point: zeros, except each state's all-cos constant term,
/// which is the mean of that component over the initial conditions. With a
/// seed, active entries also get uniform(-0.1, 0.1) jitter.
std::vector<double> initial_coefficients(const LagrangianAssembler& assembler,
                                         std::optional<std::uint64_t> jitter_seed = std::nullopt);

struct HistoryRow {
  int outer = 0;
  int inner = 0;
  double lagrangian = 0.0;
  double f = 0.0;
  double h_dynamics = 0.0;
  double h_nonneg_max = 0.0;
  double h_simplex = 0.0;
  double h_initial = 0.0;
  double h_terminal = 0.0;
  double grad_norm = 0.0;
  double nu = 0.0;
};

struct SolveOptions {
  OptimizerConfig optimizer;
  AugLagParams auglag;
};

struct SolveResult {
  std::vector<double> x;
  AugLagState state;
  std::vector<double> violations;
  double cost = 0.0;
  double grad_norm = 0.0;
  int inner_iterations = 0;
  std::vector<OptimizerStatus> inner_status;
  std::vector<HistoryRow> history;
};

using HistorySink = std::function<void(const HistoryRow&)>;

/// Outer loop: while nu > tau and ell < ell_lim, minimize L from the previous
/// iterate, measure the residuals and update multipliers or penalties. A
/// non-finite Lagrangian raises RunError after the history has been handed
/// to `sink`.
SolveResult solve(const LagrangianAssembler& assembler, std::vector<double> x0, const SolveOptions& options,
                  const HistorySink& sink = {});

void write_history_header(std::ostream& out);
void write_history_row(std::ostream& out, const HistoryRow& row);

}  // namespace fourier_ocp
