#include "fourier_ocp/reference.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "fourier_ocp/autodiff.hpp"
#include "fourier_ocp/errors.hpp"
#include "fourier_ocp/quadrature.hpp"

namespace fourier_ocp {

namespace {

struct AffineControl {
  double a;  // gamma(t) = a + b t
  double b;
};

AffineControl lq_affine(double horizon, std::span<const double> x0, std::span<const double> xt) {
  if (!(horizon > 0.0)) throw ArgumentError("horizon T must be positive");
  if (x0.size() != 2 || xt.size() != 2) throw ArgumentError("particle states have two components");
  const double T = horizon;
  const double dp = xt[0] - (x0[0] + T * x0[1]);
  const double dv = xt[1] - x0[1];
  // (6T - 12t)/T^3 * dp + (-2T + 6t)/T^2 * dv
  return {6.0 * dp / (T * T) - 2.0 * dv / T, -12.0 * dp / (T * T * T) + 6.0 * dv / (T * T)};
}

double simpson_or_trapezoid(const std::vector<double>& samples, double h) {
  const std::size_t n = samples.size() - 1;
  double s = 0.0;
  if (n % 2 == 0) {
    for (std::size_t i = 0; i <= n; ++i) {
      const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      s += w * samples[i];
    }
    return s * h / 3.0;
  }
  for (std::size_t i = 0; i <= n; ++i) s += ((i == 0 || i == n) ? 0.5 : 1.0) * samples[i];
  return s * h;
}

void check_u0(const OcpDefinition& problem, std::span<const double> u0) {
  if (u0.size() != problem.state_dim) {
    throw ArgumentError(fmt::format("initial condition has {} components, problem has {}", u0.size(),
                                    problem.state_dim));
  }
}

}  // namespace

double lq_analytic_control(double t, double horizon, std::span<const double> x0, std::span<const double> xt) {
  const auto c = lq_affine(horizon, x0, xt);
  return c.a + c.b * t;
}

double lq_analytic_cost(double horizon, std::span<const double> x0, std::span<const double> xt, double r) {
  const auto c = lq_affine(horizon, x0, xt);
  const double T = horizon;
  return r * (c.a * c.a * T + c.a * c.b * T * T + c.b * c.b * T * T * T / 3.0);
}

std::vector<std::vector<double>> rk4_integrate(const OdeRhs& rhs, std::vector<double> y0, double t0, double t1,
                                               std::size_t steps) {
  if (steps == 0) throw ArgumentError("rk4 needs at least one step");
  const std::size_t n = y0.size();
  const double h = (t1 - t0) / static_cast<double>(steps);
  std::vector<std::vector<double>> out;
  out.reserve(steps + 1);
  out.push_back(std::move(y0));
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  for (std::size_t s = 0; s < steps; ++s) {
    const auto& y = out.back();
    const double t = t0 + h * static_cast<double>(s);
    rhs(t, y, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    rhs(t + 0.5 * h, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    rhs(t + 0.5 * h, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
    rhs(t + h, tmp, k4);
    std::vector<double> next(n);
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      if (!std::isfinite(next[i])) {
        throw RunError(fmt::format("integration produced a non-finite state at t = {}", t + h));
      }
    }
    out.push_back(std::move(next));
  }
  return out;
}

Trajectory rk4_simulate(const OcpDefinition& problem, std::span<const double> u0, const ControlLaw& control,
                        std::size_t steps) {
  check_u0(problem, u0);
  if (steps < 10) throw ArgumentError("rk4_simulate needs at least 10 steps");
  OdeRhs rhs = [&](double t, std::span<const double> y, std::span<double> dy) {
    problem.dynamics<double>(y, control(t), dy);
  };
  Trajectory tr;
  tr.states = rk4_integrate(rhs, std::vector<double>(u0.begin(), u0.end()), 0.0, problem.horizon, steps);
  const double h = problem.horizon / static_cast<double>(steps);
  std::vector<double> running(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = k == steps ? problem.horizon : h * static_cast<double>(k);
    tr.times.push_back(t);
    tr.control.push_back(control(t));
    running[k] = problem.cost(tr.states[k], tr.control[k]);
  }
  tr.cost = simpson_or_trapezoid(running, h);
  return tr;
}

double rps_hamiltonian(const OcpDefinition& problem, std::span<const double> u, std::span<const double> lambda,
                       double gamma) {
  if (!problem.game) throw ArgumentError("Hamiltonian needs a game problem");
  const std::size_t n = problem.state_dim;
  std::vector<double> F(n), G(n);
  replicator_fields(*problem.game, u, F, G);
  double h = problem.cost(u, gamma);
  for (std::size_t i = 0; i < n; ++i) h += lambda[i] * (F[i] + gamma * G[i]);
  return h;
}

namespace {

double optimal_gamma(std::span<const double> lambda, std::span<const double> G, double r) {
  return -std::inner_product(lambda.begin(), lambda.end(), G.begin(), 0.0) / r;
}

// y = (u, lambda)
OdeRhs pontryagin_rhs(const OcpDefinition& problem) {
  return [&problem](double, std::span<const double> y, std::span<double> dy) {
    const std::size_t n = problem.state_dim;
    const auto u = y.first(n);
    const auto lambda = y.subspan(n, n);
    std::vector<double> F(n), G(n);
    replicator_fields(*problem.game, u, F, G);
    const double gamma = optimal_gamma(lambda, G, problem.control_weight_r);
    Eigen::MatrixXd JF, JG;
    replicator_jacobians(*problem.game, u, JF, JG);
    const Eigen::Map<const Eigen::VectorXd> lam(lambda.data(), static_cast<Eigen::Index>(n));
    const Eigen::VectorXd adj = (JF + gamma * JG).transpose() * lam;
    const auto& cost = problem.running_cost;
    for (std::size_t i = 0; i < n; ++i) {
      dy[i] = F[i] + gamma * G[i];
      dy[n + i] = -2.0 * cost.state_weight * (u[i] - cost.target[i]) - adj(static_cast<Eigen::Index>(i));
    }
  };
}

std::vector<double> terminal_costate(const OcpDefinition& problem, std::span<const double> u0,
                                     std::span<const double> lambda0, std::size_t steps) {
  const std::size_t n = problem.state_dim;
  std::vector<double> y(2 * n);
  std::copy(u0.begin(), u0.end(), y.begin());
  std::copy(lambda0.begin(), lambda0.end(), y.begin() + static_cast<std::ptrdiff_t>(n));
  const auto path = rk4_integrate(pontryagin_rhs(problem), std::move(y), 0.0, problem.horizon, steps);
  return {path.back().begin() + static_cast<std::ptrdiff_t>(n), path.back().end()};
}

double norm(std::span<const double> v) { return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0)); }

struct NewtonOutcome {
  bool converged = false;
  std::vector<double> lambda0;
  double residual = std::numeric_limits<double>::infinity();
  int iterations = 0;
};

NewtonOutcome newton_shoot(const OcpDefinition& problem, std::span<const double> u0, std::vector<double> lambda0,
                           const ShootingOptions& opt) {
  const std::size_t n = problem.state_dim;
  NewtonOutcome out;
  std::vector<double> res;
  try {
    res = terminal_costate(problem, u0, lambda0, opt.steps);
  } catch (const RunError&) {
    return out;
  }
  double rn = norm(res);
  for (int it = 0; it < opt.max_newton && rn > opt.tolerance; ++it) {
    out.iterations = it + 1;
    Eigen::MatrixXd J(n, n);
    try {
      for (std::size_t k = 0; k < n; ++k) {
        auto plus = lambda0, minus = lambda0;
        plus[k] += opt.fd_step;
        minus[k] -= opt.fd_step;
        const auto rp = terminal_costate(problem, u0, plus, opt.steps);
        const auto rm = terminal_costate(problem, u0, minus, opt.steps);
        for (std::size_t i = 0; i < n; ++i) {
          J(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = (rp[i] - rm[i]) / (2.0 * opt.fd_step);
        }
      }
    } catch (const RunError&) {
      return out;
    }
    const Eigen::Map<const Eigen::VectorXd> rv(res.data(), static_cast<Eigen::Index>(n));
    const Eigen::VectorXd step = J.colPivHouseholderQr().solve(-rv);
    if (!step.allFinite()) return out;
    double damping = 1.0;
    bool improved = false;
    for (int k = 0; k < 40; ++k, damping *= 0.5) {
      std::vector<double> trial(lambda0);
      for (std::size_t i = 0; i < n; ++i) trial[i] += damping * step(static_cast<Eigen::Index>(i));
      try {
        auto tres = terminal_costate(problem, u0, trial, opt.steps);
        const double tn = norm(tres);
        if (tn < rn) {
          lambda0 = std::move(trial);
          res = std::move(tres);
          rn = tn;
          improved = true;
          break;
        }
      } catch (const RunError&) {
      }
    }
    if (!improved) break;
  }
  out.lambda0 = std::move(lambda0);
  out.residual = rn;
  out.converged = rn <= opt.tolerance;
  return out;
}

}  // namespace

ShootingResult rps_costate_sweep(const OcpDefinition& problem, std::span<const double> u0,
                                 std::span<const double> lambda0, std::size_t steps) {
  if (!problem.game) throw ArgumentError("shooting reference needs a game problem");
  check_u0(problem, u0);
  if (lambda0.size() != problem.state_dim) throw ArgumentError("lambda(0) has wrong dimension");
  if (steps < 10) throw ArgumentError("shooting needs at least 10 steps");
  const std::size_t n = problem.state_dim;
  std::vector<double> y(2 * n);
  std::copy(u0.begin(), u0.end(), y.begin());
  std::copy(lambda0.begin(), lambda0.end(), y.begin() + static_cast<std::ptrdiff_t>(n));
  const auto path = rk4_integrate(pontryagin_rhs(problem), std::move(y), 0.0, problem.horizon, steps);

  ShootingResult out;
  out.lambda0.assign(lambda0.begin(), lambda0.end());
  const double h = problem.horizon / static_cast<double>(steps);
  std::vector<double> running(steps + 1), F(n), G(n);
  for (std::size_t k = 0; k <= steps; ++k) {
    std::vector<double> u(path[k].begin(), path[k].begin() + static_cast<std::ptrdiff_t>(n));
    std::vector<double> lam(path[k].begin() + static_cast<std::ptrdiff_t>(n), path[k].end());
    replicator_fields(*problem.game, u, F, G);
    const double gamma = optimal_gamma(lam, G, problem.control_weight_r);
    out.trajectory.times.push_back(k == steps ? problem.horizon : h * static_cast<double>(k));
    out.trajectory.control.push_back(gamma);
    running[k] = problem.cost(u, gamma);
    out.trajectory.states.push_back(std::move(u));
    out.costate.push_back(std::move(lam));
  }
  out.trajectory.cost = simpson_or_trapezoid(running, h);
  out.terminal_residual = norm(out.costate.back());
  return out;
}

ShootingResult rps_shooting_reference(const OcpDefinition& problem, std::span<const double> u0,
                                      const ShootingOptions& options) {
  if (!problem.game) throw ArgumentError("shooting reference needs a game problem");
  check_u0(problem, u0);
  if (options.start_grid.empty()) throw ArgumentError("shooting start grid is empty");
  const std::size_t n = problem.state_dim;

  std::vector<std::vector<double>> starts{std::vector<double>(n, 0.0)};
  std::vector<std::size_t> digit(n, 0);
  const std::size_t base = options.start_grid.size();
  for (;;) {
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = options.start_grid[digit[i]];
    starts.push_back(std::move(s));
    std::size_t i = 0;
    while (i < n && ++digit[i] == base) digit[i++] = 0;
    if (i == n) break;
  }

  ShootingResult best;
  bool have = false;
  int converged = 0;
  int iterations = 0;
  for (const auto& s : starts) {
    const auto nt = newton_shoot(problem, u0, s, options);
    iterations += nt.iterations;
    if (!nt.converged) continue;
    ++converged;
    auto cand = rps_costate_sweep(problem, u0, nt.lambda0, options.steps);
    if (!have || cand.trajectory.cost < best.trajectory.cost) {
      best = std::move(cand);
      have = true;
    }
  }
  if (!have) {
    throw RunError(fmt::format("shooting did not reach ||lambda(T)|| <= {} from any of {} starts; widen the start "
                               "grid or raise the Newton iteration cap",
                               options.tolerance, starts.size()));
  }
  best.newton_iterations = iterations;
  best.converged_starts = converged;
  return best;
}

namespace {

template <class S>
S transcribe(const OcpDefinition& problem, std::span<const double> u0, std::span<const S> control, double h,
             const std::function<S(double)>& lift) {
  const std::size_t n = problem.state_dim;
  std::vector<S> u(n), tmp(n), k1(n), k2(n), k3(n), k4(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = lift(u0[i]);
  S cost = lift(0.0);
  auto field = [&](const std::vector<S>& y, const S& g, std::vector<S>& dy) {
    problem.dynamics<S>(std::span<const S>(y), g, std::span<S>(dy));
    return problem.running_cost(std::span<const S>(y), g);
  };
  for (const S& g : control) {
    const S c1 = field(u, g, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + (0.5 * h) * k1[i];
    const S c2 = field(tmp, g, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + (0.5 * h) * k2[i];
    const S c3 = field(tmp, g, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + h * k3[i];
    const S c4 = field(tmp, g, k4);
    for (std::size_t i = 0; i < n; ++i) u[i] = u[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    cost = cost + (h / 6.0) * (c1 + 2.0 * c2 + 2.0 * c3 + c4);
  }
  return cost;
}

}  // namespace

TranscriptionResult transcription_reference(const OcpDefinition& problem, std::span<const double> u0,
                                            const TranscriptionOptions& options,
                                            std::vector<double> initial_control) {
  check_u0(problem, u0);
  if (options.intervals < 1) throw ArgumentError("transcription needs at least one interval");
  if (initial_control.empty()) initial_control.assign(options.intervals, 0.0);
  if (initial_control.size() != options.intervals) throw ArgumentError("initial control has wrong length");
  const double h = problem.horizon / static_cast<double>(options.intervals);

  Objective objective = [&](std::span<const double> x, std::span<double> g) {
    try {
      ad::Tape tape;
      tape.reserve(options.intervals * 400, options.intervals * 800);
      std::vector<ad::AdValue> ctrl;
      ctrl.reserve(x.size());
      for (double v : x) ctrl.push_back(tape.input(v));
      const auto J = transcribe<ad::AdValue>(problem, u0, std::span<const ad::AdValue>(ctrl), h,
                                             [&](double v) { return tape.lift(v); });
      tape.backward(J, g);
      return J.value();
    } catch (const DataError&) {
      std::fill(g.begin(), g.end(), 0.0);
      return std::numeric_limits<double>::infinity();
    }
  };
  const auto res = minimize(objective, std::move(initial_control), options.optimizer);
  TranscriptionResult out;
  out.control = res.x;
  out.cost = res.value;
  out.grad_norm = res.grad_norm;
  out.iterations = res.iterations;
  out.status = res.status;
  return out;
}

}  // namespace fourier_ocp
