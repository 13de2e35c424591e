#include "fourier_ocp/auglag.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

#include <fmt/format.h>

#include "fourier_ocp/errors.hpp"

namespace fourier_ocp {

MultiplierRule parse_multiplier_rule(std::string_view name) {
  if (name == "classic") return MultiplierRule::classic;
  if (name == "product") return MultiplierRule::product;
  throw ArgumentError("unknown multiplier rule '" + std::string(name) + "' (expected classic or product)");
}

std::string_view to_string(MultiplierRule rule) { return rule == MultiplierRule::classic ? "classic" : "product"; }

void AugLagParams::validate() const {
  if (!(upsilon0 > 0.0)) throw ArgumentError("auglag.upsilon0 must be positive");
  if (!(mu0 > 0.0)) throw ArgumentError("auglag.mu0 must be positive");
  if (!(lambda > 0.0 && lambda <= 1.0)) throw ArgumentError("auglag.lambda must lie in (0, 1]");
  if (!(penalty_factor >= 1.0)) throw ArgumentError("auglag.penalty_factor must be >= 1");
  if (!(multiplier_factor > 0.0)) throw ArgumentError("auglag.multiplier_factor must be positive");
  if (!(mu_max >= mu0)) throw ArgumentError("auglag.mu_max must be >= auglag.mu0");
  if (!(tau >= 0.0)) throw ArgumentError("auglag.tau must be >= 0");
  if (ell_lim < 1) throw ArgumentError("auglag.ell_lim must be >= 1");
}

AugLagState AugLagState::initial(std::size_t residuals, const AugLagParams& params) {
  AugLagState s;
  s.upsilon.assign(residuals, params.upsilon0);
  s.mu.assign(residuals, params.mu0);
  return s;
}

void outer_update(AugLagState& state, std::span<const double> h, const AugLagParams& params) {
  if (h.size() != state.upsilon.size()) throw ArgumentError("outer_update: residual count mismatch");
  const double nu = h.empty() ? 0.0 : *std::max_element(h.begin(), h.end());
  const double threshold = params.lambda * state.nu_prev;
  auto multiplier_step = [&](std::size_t j) {
    if (params.rule == MultiplierRule::classic) {
      state.upsilon[j] += 2.0 * state.mu[j] * h[j];
    } else {
      state.upsilon[j] = std::max(kMultiplierFloor, params.multiplier_factor * state.upsilon[j] * h[j]);
    }
  };
  state.last_multiplier_step = nu < threshold;
  if (state.last_multiplier_step) {
    for (std::size_t j = 0; j < h.size(); ++j) multiplier_step(j);
  } else {
    // a saturated penalty falls back to the multiplier update
    for (std::size_t j = 0; j < h.size(); ++j) {
      if (h[j] < threshold) continue;
      if (state.mu[j] < params.mu_max) {
        state.mu[j] = std::min(params.mu_max, state.mu[j] * params.penalty_factor);
      } else {
        multiplier_step(j);
      }
    }
  }
  state.nu = nu;
  state.nu_prev = nu;
  ++state.ell;
}

namespace {

// Surface values at every (initial condition, node) pair plus boundary values.
template <class S>
struct NodeData {
  std::size_t ics = 0;
  std::size_t nodes = 0;
  std::size_t d = 0;
  std::vector<S> val;    // ((ic * nodes + k) * (1 + d) + c), c = 0 is the control
  std::vector<S> der;    // ((ic * nodes + k) * d + i)
  std::vector<S> start;  // (ic * d + i)
  std::vector<S> end;
};

template <class S>
S weighted_sum(const std::vector<S>& terms, const std::vector<double>& w) {
  return ad::linear_combination(std::span<const S>(terms), std::span<const double>(w));
}

template <class F>
auto guarded(const std::string& name, F&& fn) {
  try {
    auto v = fn();
    double x;
    if constexpr (std::is_same_v<decltype(v), double>) {
      x = v;
    } else {
      x = v.value();
    }
    if (!std::isfinite(x)) throw DataError("not finite");
    return v;
  } catch (const DataError& e) {
    throw DataError("residual '" + name + "': " + e.what());
  }
}

template <class S>
S assemble(const OcpDefinition& problem, const QuadratureGrid& grid,
           const std::vector<std::vector<double>>& ics, const std::vector<ResidualInfo>& residuals,
           const NodeData<S>& nd, const AugLagState* state, S& f_out, std::vector<S>& h_out) {
  using ad::max0;
  using ad::square;
  const std::size_t d = nd.d;
  const std::size_t rows = nd.ics * nd.nodes;
  std::vector<double> w(rows);
  for (std::size_t r = 0; r < rows; ++r) w[r] = grid.weights()[r % nd.nodes];

  auto value = [&](std::size_t r, std::size_t c) -> const S& { return nd.val[r * (1 + d) + c]; };
  auto states = [&](std::size_t r) { return std::span<const S>(nd.val.data() + r * (1 + d) + 1, d); };

  f_out = guarded("cost", [&] {
    std::vector<S> terms;
    terms.reserve(rows);
    for (std::size_t r = 0; r < rows; ++r) terms.push_back(problem.running_cost(states(r), value(r, 0)));
    return weighted_sum(terms, w);
  });

  h_out.clear();
  std::vector<S> rhs(d);
  for (const auto& info : residuals) {
    S h = guarded(info.name, [&]() -> S {
      std::vector<S> terms;
      switch (info.kind) {
        case ResidualKind::dynamics:
          terms.reserve(rows);
          for (std::size_t r = 0; r < rows; ++r) {
            problem.dynamics<S>(states(r), value(r, 0), rhs);
            S e = 0.5 * square(nd.der[r * d] - rhs[0]);
            for (std::size_t i = 1; i < d; ++i) e = e + 0.5 * square(nd.der[r * d + i] - rhs[i]);
            terms.push_back(e);
          }
          return weighted_sum(terms, w);
        case ResidualKind::nonneg: {
          const auto i = static_cast<std::size_t>(info.component);
          terms.reserve(rows);
          for (std::size_t r = 0; r < rows; ++r) terms.push_back(max0(-value(r, 1 + i)));
          return weighted_sum(terms, w);
        }
        case ResidualKind::simplex: {
          terms.reserve(rows);
          std::vector<double> ones(d, 1.0);
          for (std::size_t r = 0; r < rows; ++r) {
            const S total = ad::linear_combination(states(r), std::span<const double>(ones));
            terms.push_back(0.5 * square(total - 1.0));
          }
          return weighted_sum(terms, w);
        }
        case ResidualKind::initial:
        case ResidualKind::terminal: {
          const bool initial = info.kind == ResidualKind::initial;
          const auto& boundary = initial ? nd.start : nd.end;
          for (std::size_t c = 0; c < nd.ics; ++c) {
            for (std::size_t i = 0; i < d; ++i) {
              const double target = initial ? ics[c][i] : (*problem.terminal_state)[i];
              terms.push_back(square(boundary[c * d + i] - target));
            }
          }
          return weighted_sum(terms, std::vector<double>(terms.size(), 0.5));
        }
      }
      throw ArgumentError("unknown residual kind");
    });
    h_out.push_back(h);
  }

  if (state == nullptr) return f_out;
  std::vector<S> terms{f_out};
  std::vector<double> coef{1.0};
  for (std::size_t j = 0; j < h_out.size(); ++j) {
    terms.push_back(h_out[j]);
    coef.push_back(state->upsilon[j]);
    terms.push_back(square(h_out[j]));
    coef.push_back(state->mu[j]);
  }
  return guarded("lagrangian", [&] { return weighted_sum(terms, coef); });
}

void check_state(const AugLagState& state, std::size_t residuals) {
  if (state.upsilon.size() != residuals || state.mu.size() != residuals) {
    throw ArgumentError("multiplier state does not match the residual set");
  }
}

}  // namespace

LagrangianAssembler::LagrangianAssembler(OcpDefinition problem, SurfaceLayout layout,
                                         std::vector<std::vector<double>> ics, QuadratureGrid grid)
    : problem_(std::move(problem)), layout_(std::move(layout)), ics_(std::move(ics)), grid_(std::move(grid)) {
  const std::size_t d = problem_.state_dim;
  if (d == 0) throw ArgumentError("problem has no states");
  if (layout_.domain().ic_axes() != d) {
    throw ArgumentError(fmt::format("layout has {} initial-condition axes, problem has {} states",
                                    layout_.domain().ic_axes(), d));
  }
  if (layout_.domain().horizon() != problem_.horizon) throw ArgumentError("layout horizon differs from problem");
  if (ics_.empty()) throw ArgumentError("initial-condition set is empty");
  for (const auto& ic : ics_) {
    if (ic.size() != d) throw ArgumentError("initial condition has wrong dimension");
  }
  if (grid_.lo() != 0.0 || grid_.hi() != problem_.horizon) {
    throw ArgumentError("quadrature grid must span [0, T]");
  }

  residuals_.push_back({ResidualKind::dynamics, -1, "dynamics"});
  if (problem_.nonnegative) {
    for (std::size_t i = 0; i < d; ++i) {
      residuals_.push_back({ResidualKind::nonneg, static_cast<int>(i), fmt::format("nonneg_{}", i + 1)});
    }
  }
  if (problem_.simplex) residuals_.push_back({ResidualKind::simplex, -1, "simplex"});
  residuals_.push_back({ResidualKind::initial, -1, "initial"});
  if (problem_.terminal_state) {
    if (problem_.terminal_state->size() != d) throw ArgumentError("terminal state has wrong dimension");
    residuals_.push_back({ResidualKind::terminal, -1, "terminal"});
  }

  const std::size_t cols = layout_.size();
  const std::size_t nodes = grid_.size();
  value_rows_.resize(static_cast<Eigen::Index>(ics_.size() * nodes), static_cast<Eigen::Index>(cols));
  deriv_rows_.resizeLike(value_rows_);
  start_rows_.resize(static_cast<Eigen::Index>(ics_.size()), static_cast<Eigen::Index>(cols));
  end_rows_.resizeLike(start_rows_);
  std::vector<double> row(cols);
  auto put = [&](Eigen::MatrixXd& m, std::size_t r) {
    for (std::size_t c = 0; c < cols; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
  };
  for (std::size_t c = 0; c < ics_.size(); ++c) {
    for (std::size_t k = 0; k < nodes; ++k) {
      const double t = grid_.points()[k];
      layout_.weights(t, ics_[c], row);
      put(value_rows_, c * nodes + k);
      layout_.time_derivative_weights(t, ics_[c], row);
      put(deriv_rows_, c * nodes + k);
    }
    layout_.weights(0.0, ics_[c], row);
    put(start_rows_, c);
    layout_.weights(problem_.horizon, ics_[c], row);
    put(end_rows_, c);
  }
}

namespace {

struct DenseValues {
  Eigen::MatrixXd val, der, start, end;
};

DenseValues dense_values(std::span<const double> x, std::size_t cols, std::size_t d, const Eigen::MatrixXd& vr,
                         const Eigen::MatrixXd& dr, const Eigen::MatrixXd& sr, const Eigen::MatrixXd& er) {
  const Eigen::Map<const Eigen::MatrixXd> theta(x.data(), static_cast<Eigen::Index>(cols),
                                                static_cast<Eigen::Index>(1 + d));
  const auto th_states = theta.rightCols(static_cast<Eigen::Index>(d));
  return {vr * theta, dr * th_states, sr * th_states, er * th_states};
}

template <class S, class Make>
NodeData<S> node_data(const DenseValues& dv, std::size_t ics, std::size_t nodes, std::size_t d, Make&& make) {
  NodeData<S> nd;
  nd.ics = ics;
  nd.nodes = nodes;
  nd.d = d;
  const std::size_t rows = ics * nodes;
  nd.val.reserve(rows * (1 + d));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c <= d; ++c) nd.val.push_back(make(dv.val(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c))));
  }
  nd.der.reserve(rows * d);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < d; ++i) nd.der.push_back(make(dv.der(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i))));
  }
  for (std::size_t c = 0; c < ics; ++c) {
    for (std::size_t i = 0; i < d; ++i) nd.start.push_back(make(dv.start(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(i))));
  }
  for (std::size_t c = 0; c < ics; ++c) {
    for (std::size_t i = 0; i < d; ++i) nd.end.push_back(make(dv.end(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(i))));
  }
  return nd;
}

}  // namespace

LagrangianAssembler::Parts LagrangianAssembler::evaluate(std::span<const double> x, const AugLagState& state) const {
  if (x.size() != parameter_count()) throw ArgumentError("coefficient vector has wrong size");
  check_state(state, residuals_.size());
  const std::size_t d = problem_.state_dim;
  const auto dv = dense_values(x, layout_.size(), d, value_rows_, deriv_rows_, start_rows_, end_rows_);
  const auto nd = node_data<double>(dv, ics_.size(), grid_.size(), d, [](double v) { return v; });
  Parts p;
  p.lagrangian = assemble<double>(problem_, grid_, ics_, residuals_, nd, &state, p.f, p.h);
  return p;
}

std::vector<double> LagrangianAssembler::violations(std::span<const double> x) const {
  if (x.size() != parameter_count()) throw ArgumentError("coefficient vector has wrong size");
  const std::size_t d = problem_.state_dim;
  const auto dv = dense_values(x, layout_.size(), d, value_rows_, deriv_rows_, start_rows_, end_rows_);
  const auto nd = node_data<double>(dv, ics_.size(), grid_.size(), d, [](double v) { return v; });
  double f = 0.0;
  std::vector<double> h;
  assemble<double>(problem_, grid_, ics_, residuals_, nd, nullptr, f, h);
  return h;
}

double LagrangianAssembler::cost(std::span<const double> x) const {
  if (x.size() != parameter_count()) throw ArgumentError("coefficient vector has wrong size");
  const std::size_t d = problem_.state_dim;
  const auto dv = dense_values(x, layout_.size(), d, value_rows_, deriv_rows_, start_rows_, end_rows_);
  const auto nd = node_data<double>(dv, ics_.size(), grid_.size(), d, [](double v) { return v; });
  double f = 0.0;
  std::vector<double> h;
  assemble<double>(problem_, grid_, ics_, residuals_, nd, nullptr, f, h);
  return f;
}

double LagrangianAssembler::value_and_gradient(std::span<const double> x, const AugLagState& state,
                                               std::span<double> grad, Parts* parts) const {
  if (x.size() != parameter_count() || grad.size() != x.size()) {
    throw ArgumentError("coefficient or gradient vector has wrong size");
  }
  check_state(state, residuals_.size());
  const std::size_t d = problem_.state_dim;
  const std::size_t cols = layout_.size();
  const auto dv = dense_values(x, cols, d, value_rows_, deriv_rows_, start_rows_, end_rows_);

  ad::Tape tape;
  const std::size_t rows = ics_.size() * grid_.size();
  tape.reserve(rows * (8 + 12 * d) + 64, rows * (16 + 24 * d) + 64);
  const auto nd = node_data<ad::AdValue>(dv, ics_.size(), grid_.size(), d, [&](double v) { return tape.input(v); });
  ad::AdValue f;
  std::vector<ad::AdValue> h;
  const ad::AdValue lag = assemble<ad::AdValue>(problem_, grid_, ics_, residuals_, nd, &state, f, h);
  const std::vector<double> adj = tape.backward(lag);

  // Inputs were created in the order val, der, start, end.
  const auto n_val = static_cast<Eigen::Index>(rows * (1 + d));
  const auto n_der = static_cast<Eigen::Index>(rows * d);
  const auto n_bnd = static_cast<Eigen::Index>(ics_.size() * d);
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Map<const RowMajor> g_val(adj.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(1 + d));
  const Eigen::Map<const RowMajor> g_der(adj.data() + n_val, static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(d));
  const Eigen::Map<const RowMajor> g_start(adj.data() + n_val + n_der, static_cast<Eigen::Index>(ics_.size()),
                                           static_cast<Eigen::Index>(d));
  const Eigen::Map<const RowMajor> g_end(adj.data() + n_val + n_der + n_bnd, static_cast<Eigen::Index>(ics_.size()),
                                         static_cast<Eigen::Index>(d));

  Eigen::Map<Eigen::MatrixXd> out(grad.data(), static_cast<Eigen::Index>(cols), static_cast<Eigen::Index>(1 + d));
  out.noalias() = value_rows_.transpose() * g_val;
  auto out_states = out.rightCols(static_cast<Eigen::Index>(d));
  out_states.noalias() += deriv_rows_.transpose() * g_der;
  out_states.noalias() += start_rows_.transpose() * g_start;
  out_states.noalias() += end_rows_.transpose() * g_end;

  if (parts != nullptr) {
    parts->f = f.value();
    parts->h.clear();
    for (const auto& v : h) parts->h.push_back(v.value());
    parts->lagrangian = lag.value();
  }
  return lag.value();
}

ad::AdValue LagrangianAssembler::lagrangian_value(ad::Tape& tape, std::span<const ad::AdValue> coeffs,
                                                  const AugLagState& state) const {
  if (coeffs.size() != parameter_count()) throw ArgumentError("coefficient vector has wrong size");
  check_state(state, residuals_.size());
  const std::size_t d = problem_.state_dim;
  const std::size_t cols = layout_.size();
  const std::size_t nodes = grid_.size();
  NodeData<ad::AdValue> nd;
  nd.ics = ics_.size();
  nd.nodes = nodes;
  nd.d = d;
  std::vector<std::uint32_t> idx;
  std::vector<double> wts;
  auto combine = [&](const Eigen::MatrixXd& m, std::size_t r, std::size_t surface) {
    idx.clear();
    wts.clear();
    for (std::size_t c = 0; c < cols; ++c) {
      const double v = m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      if (v != 0.0) {
        idx.push_back(static_cast<std::uint32_t>(surface * cols + c));
        wts.push_back(v);
      }
    }
    return tape.linear_combination(coeffs, idx, wts);
  };
  const std::size_t rows = ics_.size() * nodes;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t s = 0; s <= d; ++s) nd.val.push_back(combine(value_rows_, r, s));
  }
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < d; ++i) nd.der.push_back(combine(deriv_rows_, r, i + 1));
  }
  for (std::size_t c = 0; c < ics_.size(); ++c) {
    for (std::size_t i = 0; i < d; ++i) nd.start.push_back(combine(start_rows_, c, i + 1));
  }
  for (std::size_t c = 0; c < ics_.size(); ++c) {
    for (std::size_t i = 0; i < d; ++i) nd.end.push_back(combine(end_rows_, c, i + 1));
  }
  ad::AdValue f;
  std::vector<ad::AdValue> h;
  return assemble<ad::AdValue>(problem_, grid_, ics_, residuals_, nd, &state, f, h);
}

FourierSurface LagrangianAssembler::control_surface(std::span<const double> x) const {
  if (x.size() != parameter_count()) throw ArgumentError("coefficient vector has wrong size");
  const std::size_t cols = layout_.size();
  return FourierSurface(layout_, std::vector<double>(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(cols)));
}

std::vector<FourierSurface> LagrangianAssembler::state_surfaces(std::span<const double> x) const {
  if (x.size() != parameter_count()) throw ArgumentError("coefficient vector has wrong size");
  const std::size_t cols = layout_.size();
  std::vector<FourierSurface> out;
  for (std::size_t i = 0; i < problem_.state_dim; ++i) {
    const auto first = x.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols);
    out.emplace_back(layout_, std::vector<double>(first, first + static_cast<std::ptrdiff_t>(cols)));
  }
  return out;
}

std::vector<double> initial_coefficients(const LagrangianAssembler& assembler,
                                         std::optional<std::uint64_t> jitter_seed) {
  const auto& layout = assembler.layout();
  const std::size_t cols = layout.size();
  const std::size_t d = assembler.problem().state_dim;
  std::vector<double> x(assembler.parameter_count(), 0.0);
  if (jitter_seed) {
    std::mt19937_64 rng(*jitter_seed);
    std::uniform_real_distribution<double> jitter(-0.1, 0.1);
    for (std::size_t s = 0; s <= d; ++s) {
      for (std::size_t c = 0; c < cols; ++c) {
        if (layout.active(c)) x[s * cols + c] = jitter(rng);
      }
    }
  }
  const std::vector<int> zeros(layout.domain().ic_axes(), 0);
  const std::size_t constant = layout.flat_index(layout.all_cos_combination(), 0, zeros);
  const auto& ics = assembler.initial_conditions();
  for (std::size_t i = 0; i < d; ++i) {
    double mean = 0.0;
    for (const auto& ic : ics) mean += ic[i];
    x[(i + 1) * cols + constant] += mean / static_cast<double>(ics.size());
  }
  return x;
}

namespace {

HistoryRow make_row(const LagrangianAssembler& assembler, int outer, int inner, double lagrangian, double f,
                    std::span<const double> h, double grad_norm) {
  HistoryRow row;
  row.outer = outer;
  row.inner = inner;
  row.lagrangian = lagrangian;
  row.f = f;
  row.grad_norm = grad_norm;
  const auto& res = assembler.residuals();
  for (std::size_t j = 0; j < res.size(); ++j) {
    switch (res[j].kind) {
      case ResidualKind::dynamics: row.h_dynamics = h[j]; break;
      case ResidualKind::nonneg: row.h_nonneg_max = std::max(row.h_nonneg_max, h[j]); break;
      case ResidualKind::simplex: row.h_simplex = h[j]; break;
      case ResidualKind::initial: row.h_initial = h[j]; break;
      case ResidualKind::terminal: row.h_terminal = h[j]; break;
    }
  }
  row.nu = h.empty() ? 0.0 : *std::max_element(h.begin(), h.end());
  return row;
}

}  // namespace

SolveResult solve(const LagrangianAssembler& assembler, std::vector<double> x0, const SolveOptions& options,
                  const HistorySink& sink) {
  options.optimizer.validate();
  options.auglag.validate();
  if (x0.size() != assembler.parameter_count()) throw ArgumentError("starting point has wrong size");

  SolveResult out;
  out.state = AugLagState::initial(assembler.residuals().size(), options.auglag);
  out.x = std::move(x0);
  auto emit = [&](const HistoryRow& row) {
    out.history.push_back(row);
    if (sink) sink(row);
  };

  std::vector<double> grad(out.x.size());
  {
    LagrangianAssembler::Parts parts;
    try {
      assembler.value_and_gradient(out.x, out.state, grad, &parts);
    } catch (const DataError& e) {
      throw RunError(std::string("Lagrangian is not finite at the starting point: ") + e.what());
    }
    const double gn = std::sqrt(std::inner_product(grad.begin(), grad.end(), grad.begin(), 0.0));
    emit(make_row(assembler, 0, 0, parts.lagrangian, parts.f, parts.h, gn));
  }

  const auto& p = options.auglag;
  while (out.state.nu > p.tau && out.state.ell < p.ell_lim) {
    const AugLagState& state = out.state;
    Objective objective = [&](std::span<const double> x, std::span<double> g) {
      try {
        return assembler.value_and_gradient(x, state, g);
      } catch (const DataError&) {
        std::fill(g.begin(), g.end(), 0.0);
        return std::numeric_limits<double>::infinity();
      }
    };
    MinimizeResult inner;
    try {
      inner = minimize(objective, out.x, options.optimizer);
    } catch (const RunError& e) {
      throw RunError(fmt::format("outer iteration {}: {}", state.ell + 1, e.what()));
    }
    out.x = std::move(inner.x);
    out.inner_iterations += inner.iterations;
    out.inner_status.push_back(inner.status);
    out.grad_norm = inner.grad_norm;

    const auto h = assembler.violations(out.x);
    const double f = assembler.cost(out.x);
    emit(make_row(assembler, state.ell + 1, inner.iterations, inner.value, f, h, inner.grad_norm));
    outer_update(out.state, h, p);
  }
  out.violations = assembler.violations(out.x);
  out.cost = assembler.cost(out.x);
  return out;
}

void write_history_header(std::ostream& out) {
  out << "outer,inner,L,f,h_dynamics,h_nonneg_max,h_simplex,h_initial,h_terminal,grad_norm,nu\n";
}

void write_history_row(std::ostream& out, const HistoryRow& r) {
  out << fmt::format("{},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", r.outer,
                     r.inner, r.lagrangian, r.f, r.h_dynamics, r.h_nonneg_max, r.h_simplex, r.h_initial,
                     r.h_terminal, r.grad_norm, r.nu);
}

}  // namespace fourier_ocp
