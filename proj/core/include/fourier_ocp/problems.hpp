#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fourier_ocp/autodiff.hpp"

namespace fourier_ocp {

/// Odd-circulant matrix game: payoff L_N (cyclic dominance, zero row sums) and
/// actuating matrix M_N (support on the +1 entries of L_N, unit row sums).
struct CirculantGame {
  int strategies = 3;
  Eigen::MatrixXd payoff;
  Eigen::MatrixXd actuation;
  std::vector<double> target;  ///< interior equilibrium (1/N, ..., 1/N)
};

/// First row of L_N is (0, -1, 1, -1, 1, ...); every following row is the
/// previous one shifted cyclically to the right. M_N = 2/(N-1) on the +1
/// entries of L_N, which is exactly the N = 3 matrix M_3.
CirculantGame build_circulant_game(int strategies);

/// True when every row of `m` is the previous row shifted right by one.
bool is_circulant(const Eigen::MatrixXd& m);

namespace detail {
template <class S>
void bilinear_terms(const Eigen::MatrixXd& a, std::span<const S> u, std::vector<S>& au, S& uau) {
  const auto n = static_cast<Eigen::Index>(u.size());
  au.clear();
  std::vector<double> row(u.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) row[static_cast<std::size_t>(j)] = a(i, j);
    au.push_back(ad::linear_combination(u, std::span<const double>(row)));
  }
  std::vector<S> prod;
  prod.reserve(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) prod.push_back(u[i] * au[i]);
  std::vector<double> ones(u.size(), 1.0);
  uau = ad::linear_combination(std::span<const S>(prod), std::span<const double>(ones));
}
}  // namespace detail

/// Replicator dynamics under the controlled payoff A(gamma) = L + gamma M:
///   F_i(u) = u_i ((e_i - u)^T L u),  G_i(u) = u_i ((e_i - u)^T M u),
///   out = F(u) + gamma G(u).
template <class S>
void replicator_rhs(const CirculantGame& game, std::span<const S> u, const S& gamma, std::span<S> out) {
  std::vector<S> lu, mu;
  S ulu{}, umu{};
  detail::bilinear_terms(game.payoff, u, lu, ulu);
  detail::bilinear_terms(game.actuation, u, mu, umu);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const S f = u[i] * (lu[i] - ulu);
    const S g = u[i] * (mu[i] - umu);
    out[i] = f + gamma * g;
  }
}

/// Plain-double entry point with dimension checks.
std::vector<double> replicator_rhs(const CirculantGame& game, std::span<const double> u, double gamma);

/// Separate drift and actuation fields, F(u) and G(u).
void replicator_fields(const CirculantGame& game, std::span<const double> u, std::span<double> drift,
                       std::span<double> actuation);

/// Closed-form Jacobians dF/du and dG/du of the replicator fields.
void replicator_jacobians(const CirculantGame& game, std::span<const double> u, Eigen::MatrixXd& drift_jac,
                          Eigen::MatrixXd& actuation_jac);

/// state_weight * ||u - target||^2 + control_weight * gamma^2
struct QuadraticRunningCost {
  double state_weight = 0.0;
  std::vector<double> target;
  double control_weight = 0.0;

  template <class S>
  S operator()(std::span<const S> u, const S& gamma) const {
    using ad::square;
    S acc = control_weight * square(gamma);
    if (state_weight != 0.0) {
      for (std::size_t i = 0; i < u.size(); ++i) acc = acc + state_weight * square(u[i] - target[i]);
    }
    return acc;
  }
};

enum class ProblemKind { lq_particle, replicator };

std::string_view to_string(ProblemKind kind);

/// An optimal control problem on [0, T]: dynamics, running cost and the
/// constraint families its residuals are built from.
struct OcpDefinition {
  ProblemKind kind = ProblemKind::lq_particle;
  std::size_t state_dim = 0;
  double horizon = 1.0;
  double control_weight_r = 1.0;
  QuadraticRunningCost running_cost;
  std::optional<std::vector<double>> terminal_state;
  bool simplex = false;
  bool nonnegative = false;
  std::optional<CirculantGame> game;

  template <class S>
  void dynamics(std::span<const S> u, const S& gamma, std::span<S> out) const {
    if (kind == ProblemKind::lq_particle) {
      out[0] = u[1];
      out[1] = gamma;
    } else {
      replicator_rhs(*game, u, gamma, out);
    }
  }

  std::vector<double> dynamics(std::span<const double> u, double gamma) const;
  double cost(std::span<const double> u, double gamma) const;
};

/// Unit-mass particle on a line, xdot = [[0,1],[0,0]] x + [0,1] gamma,
/// running cost r gamma^2, terminal state pinned to `terminal_state`.
OcpDefinition lq_particle_problem(double horizon, double r, std::vector<double> terminal_state);

/// Controlled odd-circulant game: running cost 1/2 ||u - u*||^2 + r/2 gamma^2,
/// simplex and nonnegativity constraints, free terminal state.
OcpDefinition rps_problem(const CirculantGame& game, double horizon, double r);

}  // namespace fourier_ocp
