#include "fourier_ocp/problems.hpp"

#include <cmath>
#include <string>

#include "fourier_ocp/errors.hpp"

namespace fourier_ocp {

CirculantGame build_circulant_game(int strategies) {
  if (strategies < 3 || strategies % 2 == 0) {
    throw ArgumentError("circulant games need an odd number of strategies >= 3, got " + std::to_string(strategies));
  }
  const int n = strategies;
  std::vector<double> first(static_cast<std::size_t>(n), 0.0);
  for (int j = 1; j < n; ++j) first[static_cast<std::size_t>(j)] = (j % 2 == 1) ? -1.0 : 1.0;

  CirculantGame game;
  game.strategies = n;
  game.payoff.resize(n, n);
  game.actuation.resize(n, n);
  const double unit = 2.0 / static_cast<double>(n - 1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double v = first[static_cast<std::size_t>(((j - i) % n + n) % n)];
      game.payoff(i, j) = v;
      game.actuation(i, j) = v > 0.0 ? unit : 0.0;
    }
  }
  game.target.assign(static_cast<std::size_t>(n), 1.0 / static_cast<double>(n));
  return game;
}

bool is_circulant(const Eigen::MatrixXd& m) {
  const auto n = m.rows();
  if (m.cols() != n) return false;
  for (Eigen::Index i = 1; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (m(i, j) != m(i - 1, (j - 1 + n) % n)) return false;
    }
  }
  return true;
}

std::vector<double> replicator_rhs(const CirculantGame& game, std::span<const double> u, double gamma) {
  if (u.size() != static_cast<std::size_t>(game.strategies)) {
    throw ArgumentError("state has " + std::to_string(u.size()) + " components, game has " +
                        std::to_string(game.strategies) + " strategies");
  }
  std::vector<double> out(u.size());
  replicator_rhs<double>(game, u, gamma, out);
  return out;
}

void replicator_fields(const CirculantGame& game, std::span<const double> u, std::span<double> drift,
                       std::span<double> actuation) {
  const auto n = static_cast<std::size_t>(game.strategies);
  if (u.size() != n || drift.size() != n || actuation.size() != n) throw ArgumentError("replicator_fields: size");
  std::vector<double> lu, mu;
  double ulu = 0.0, umu = 0.0;
  detail::bilinear_terms(game.payoff, u, lu, ulu);
  detail::bilinear_terms(game.actuation, u, mu, umu);
  for (std::size_t i = 0; i < n; ++i) {
    drift[i] = u[i] * (lu[i] - ulu);
    actuation[i] = u[i] * (mu[i] - umu);
  }
}

namespace {
void field_jacobian(const Eigen::MatrixXd& a, const Eigen::VectorXd& u, Eigen::MatrixXd& jac) {
  const Eigen::VectorXd au = a * u;
  const double uau = u.dot(au);
  const Eigen::VectorXd sym = (a + a.transpose()) * u;
  const auto n = u.size();
  jac.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < n; ++k) {
      jac(i, k) = u(i) * (a(i, k) - sym(k)) + (i == k ? au(i) - uau : 0.0);
    }
  }
}
}  // namespace

void replicator_jacobians(const CirculantGame& game, std::span<const double> u, Eigen::MatrixXd& drift_jac,
                          Eigen::MatrixXd& actuation_jac) {
  if (u.size() != static_cast<std::size_t>(game.strategies)) throw ArgumentError("replicator_jacobians: size");
  const Eigen::VectorXd uv = Eigen::Map<const Eigen::VectorXd>(u.data(), static_cast<Eigen::Index>(u.size()));
  field_jacobian(game.payoff, uv, drift_jac);
  field_jacobian(game.actuation, uv, actuation_jac);
}

std::string_view to_string(ProblemKind kind) {
  return kind == ProblemKind::lq_particle ? "lq" : "rps";
}

std::vector<double> OcpDefinition::dynamics(std::span<const double> u, double gamma) const {
  if (u.size() != state_dim) throw ArgumentError("state dimension mismatch");
  std::vector<double> out(state_dim);
  dynamics<double>(u, gamma, out);
  return out;
}

double OcpDefinition::cost(std::span<const double> u, double gamma) const {
  if (u.size() != state_dim) throw ArgumentError("state dimension mismatch");
  return running_cost(u, gamma);
}

OcpDefinition lq_particle_problem(double horizon, double r, std::vector<double> terminal_state) {
  if (!(horizon > 0.0)) throw ArgumentError("horizon T must be positive");
  if (!(r > 0.0)) throw ArgumentError("control weight r must be positive");
  if (terminal_state.size() != 2) throw ArgumentError("terminal state needs (position, velocity)");
  OcpDefinition p;
  p.kind = ProblemKind::lq_particle;
  p.state_dim = 2;
  p.horizon = horizon;
  p.control_weight_r = r;
  p.running_cost = QuadraticRunningCost{0.0, {0.0, 0.0}, r};
  p.terminal_state = std::move(terminal_state);
  return p;
}

OcpDefinition rps_problem(const CirculantGame& game, double horizon, double r) {
  if (!(horizon > 0.0)) throw ArgumentError("horizon T must be positive");
  if (!(r > 0.0)) throw ArgumentError("control weight r must be positive");
  OcpDefinition p;
  p.kind = ProblemKind::replicator;
  p.state_dim = static_cast<std::size_t>(game.strategies);
  p.horizon = horizon;
  p.control_weight_r = r;
  p.running_cost = QuadraticRunningCost{0.5, game.target, 0.5 * r};
  p.simplex = true;
  p.nonnegative = true;
  p.game = game;
  return p;
}

}  // namespace fourier_ocp
