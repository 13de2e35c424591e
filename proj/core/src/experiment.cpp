#include "fourier_ocp/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "fourier_ocp/errors.hpp"
#include "fourier_ocp/surface_io.hpp"

namespace fourier_ocp {

ReferenceSet compute_reference(const ExperimentConfig& config) {
  const auto problem = config.definition();
  const auto ics = config.initial_conditions();
  ReferenceSet ref;
  if (problem.kind == ProblemKind::lq_particle) {
    ref.provenance = "analytic";
    const auto& xt = *problem.terminal_state;
    for (const auto& ic : ics) {
      ref.cost.push_back(lq_analytic_cost(problem.horizon, ic, xt, problem.control_weight_r));
      ref.trajectories.push_back(rk4_simulate(
          problem, ic, [&](double t) { return lq_analytic_control(t, problem.horizon, ic, xt); },
          config.simulation_steps));
    }
  } else {
    ref.provenance = "shooting";
    for (const auto& ic : ics) {
      auto sh = rps_shooting_reference(problem, ic, config.shooting);
      ref.cost.push_back(sh.trajectory.cost);
      ref.terminal_residuals.push_back(sh.terminal_residual);
      ref.trajectories.push_back(std::move(sh.trajectory));
    }
  }
  return ref;
}

double reference_control(const ReferenceSet& ref, std::size_t ic, double t) {
  const auto& tr = ref.trajectories.at(ic);
  const auto& ts = tr.times;
  if (t <= ts.front()) return tr.control.front();
  if (t >= ts.back()) return tr.control.back();
  const auto it = std::upper_bound(ts.begin(), ts.end(), t);
  const auto k = static_cast<std::size_t>(it - ts.begin());
  const double a = ts[k - 1], b = ts[k];
  if (t == a) return tr.control[k - 1];
  const double w = (t - a) / (b - a);
  return (1.0 - w) * tr.control[k - 1] + w * tr.control[k];
}

std::vector<FourierSurface> experiment_surfaces(const LagrangianAssembler& assembler, std::span<const double> x) {
  std::vector<FourierSurface> out{assembler.control_surface(x)};
  for (auto& s : assembler.state_surfaces(x)) out.push_back(std::move(s));
  return out;
}

namespace {

std::optional<std::size_t> first_free_axis(const DomainBox& box) {
  for (std::size_t a = 0; a < box.ic_axes(); ++a) {
    if (!box.degenerate(a)) return a;
  }
  return std::nullopt;
}

nlohmann::json metrics_json(const MetricSet& m) {
  return {{"MSE", m.mse},       {"MAE", m.mae},       {"MAPE", m.mape},
          {"sMAPE", m.smape},   {"points", m.points}, {"mape_points", m.mape_points},
          {"reference", m.reference}};
}

nlohmann::json cost_json(const CostError& e) {
  return {{"pct", e.pct}, {"used", e.used}, {"excluded", e.excluded}, {"undefined", e.undefined}};
}

}  // namespace

void write_metrics_csv(std::ostream& out, const ExperimentConfig& config, const ExperimentReport& report) {
  const auto box = config.domain();
  const auto axis = first_free_axis(box);
  const int n = axis ? config.ic_orders[*axis] : (config.time_cos_order < 0 ? config.time_order : config.time_cos_order);
  out << "method,M,N,k,ell,MSE,MAPE,MAE,eps,Jerr\n";
  out << fmt::format("{},{},{},{},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", to_string(config.optimizer.method),
                     config.time_order, n, config.optimizer.k_max, report.solve.state.ell, report.metrics.mse,
                     report.metrics.mape, report.metrics.mae, config.optimizer.eps, report.j_error.pct);
}

void write_reference_csv(std::ostream& out, const ReferenceSet& ref, std::size_t state_dim) {
  const bool many = ref.trajectories.size() > 1;
  if (many) out << "ic,";
  out << "t";
  for (std::size_t i = 0; i < state_dim; ++i) out << ",u" << i + 1;
  out << ",gamma\n";
  for (std::size_t c = 0; c < ref.trajectories.size(); ++c) {
    const auto& tr = ref.trajectories[c];
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
      if (many) out << c << ',';
      out << fmt::format("{:.17g}", tr.times[k]);
      for (double v : tr.states[k]) out << fmt::format(",{:.17g}", v);
      out << fmt::format(",{:.17g}\n", tr.control[k]);
    }
  }
}

void write_surface_grid(std::ostream& out, const std::vector<FourierSurface>& surfaces, std::size_t points,
                        std::optional<std::size_t> axis, const std::vector<double>& fixed) {
  if (surfaces.empty()) throw ArgumentError("no surfaces to export");
  if (points < 2) throw ArgumentError("grid needs at least two points per axis");
  const auto& box = surfaces.front().domain();
  const std::size_t d = box.ic_axes();
  if (axis && *axis >= d) throw ArgumentError("grid axis out of range");
  std::vector<double> ic(d);
  for (std::size_t a = 0; a < d; ++a) {
    const double v = a < fixed.size() ? fixed[a] : std::numeric_limits<double>::quiet_NaN();
    ic[a] = std::isnan(v) ? 0.5 * (box.ic_lo()[a] + box.ic_hi()[a]) : v;
  }
  out << "t";
  for (std::size_t a = 0; a < d; ++a) out << ",u0_" << a + 1;
  out << ",gamma_hat";
  for (std::size_t i = 1; i < surfaces.size(); ++i) out << ",u_hat_" << i;
  out << '\n';
  const std::size_t outer = axis ? points : 1;
  for (std::size_t j = 0; j < outer; ++j) {
    if (axis) {
      const double lo = box.ic_lo()[*axis], hi = box.ic_hi()[*axis];
      ic[*axis] = j + 1 == points ? hi : lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(points - 1);
    }
    for (std::size_t k = 0; k < points; ++k) {
      const double t = k + 1 == points ? box.horizon()
                                       : box.horizon() * static_cast<double>(k) / static_cast<double>(points - 1);
      out << fmt::format("{:.17g}", t);
      for (double v : ic) out << fmt::format(",{:.17g}", v);
      for (const auto& s : surfaces) out << fmt::format(",{:.17g}", s.eval(t, ic));
      out << '\n';
    }
  }
}

ExperimentReport run_experiment(const ExperimentConfig& config, bool write_outputs) {
  const auto started = std::chrono::steady_clock::now();
  const auto problem = config.definition();
  const auto ics = config.initial_conditions();
  LagrangianAssembler assembler(problem, config.layout(), ics,
                                QuadratureGrid(config.quadrature_rule, config.quadrature_nodes, 0.0, config.horizon));
  auto x0 = initial_coefficients(assembler, config.jitter ? std::optional<std::uint64_t>(config.seed) : std::nullopt);

  namespace fs = std::filesystem;
  ExperimentReport report;
  std::ofstream history;
  if (write_outputs) {
    fs::create_directories(config.output);
    history.open(config.output / "history.csv");
    if (!history) throw RunError("cannot write to " + (config.output / "history.csv").string());
    write_history_header(history);
    report.files.push_back(config.output / "history.csv");
  }
  SolveOptions options{config.optimizer, config.auglag};
  report.solve = solve(assembler, std::move(x0), options, [&](const HistoryRow& row) {
    if (history.is_open()) {
      write_history_row(history, row);
      history.flush();
    }
  });
  if (history.is_open()) history.close();

  {
    auto& q = report.quadrature;
    q.nodes = config.quadrature_nodes;
    q.fine_nodes = 2 * config.quadrature_nodes - 1;
    const LagrangianAssembler fine(problem, config.layout(), ics,
                                   QuadratureGrid(config.quadrature_rule, q.fine_nodes, 0.0, config.horizon));
    auto worst = [](const std::vector<double>& h) { return h.empty() ? 0.0 : *std::max_element(h.begin(), h.end()); };
    q.cost = assembler.cost(report.solve.x);
    q.fine_cost = fine.cost(report.solve.x);
    q.nu = worst(assembler.violations(report.solve.x));
    q.fine_nu = worst(fine.violations(report.solve.x));
  }

  const auto surfaces = experiment_surfaces(assembler, report.solve.x);
  const auto& control = surfaces.front();
  const auto ref = compute_reference(config);
  report.reference = ref.provenance;
  report.j_star = ref.cost;

  const auto times = assembler.grid().points();
  std::vector<double> approx, exact;
  for (std::size_t c = 0; c < ics.size(); ++c) {
    for (double t : times) {
      approx.push_back(control.eval(t, ics[c]));
      exact.push_back(reference_control(ref, c, t));
    }
  }
  report.metrics = compare_samples(approx, exact, ref.provenance);
  report.gamma_min = *std::min_element(approx.begin(), approx.end());

  const std::size_t d = problem.state_dim;
  const auto& grid = assembler.grid();
  for (std::size_t c = 0; c < ics.size(); ++c) {
    const auto& ic = ics[c];
    const auto sim = rk4_simulate(problem, ic, [&](double t) { return control.eval(t, ic); }, config.simulation_steps);
    report.j_sim.push_back(sim.cost);
    if (problem.terminal_state) {
      double miss = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        const double e = sim.states.back()[i] - (*problem.terminal_state)[i];
        miss += e * e;
      }
      report.terminal_miss.push_back(std::sqrt(miss));
    }
    std::vector<double> running(grid.size()), u(d);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double t = grid.points()[k];
      for (std::size_t i = 0; i < d; ++i) u[i] = surfaces[i + 1].eval(t, ic);
      running[k] = problem.cost(u, control.eval(t, ic));
    }
    report.j_surrogate.push_back(integrate_samples(running, grid));
  }
  report.j_error = cost_pct_error(report.j_sim, report.j_star);
  report.j_surrogate_error = cost_pct_error(report.j_surrogate, report.j_star);
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  if (!write_outputs) return report;

  auto open = [&](const char* name) {
    const auto path = config.output / name;
    std::ofstream f(path);
    if (!f) throw RunError("cannot write to " + path.string());
    report.files.push_back(path);
    return f;
  };
  save_surfaces(config.output / "coefficients.txt", surfaces);
  report.files.push_back(config.output / "coefficients.txt");
  {
    auto f = open("metrics.csv");
    write_metrics_csv(f, config, report);
  }
  {
    auto f = open("surface_grid.csv");
    write_surface_grid(f, surfaces, config.grid_points, first_free_axis(config.domain()), {});
  }
  {
    auto f = open("reference.csv");
    write_reference_csv(f, ref, d);
  }
  {
    auto f = open("timing.txt");
    f << fmt::format("wall_seconds {:.3f}\n", report.wall_seconds);
  }
  {
    nlohmann::ordered_json j;
    j["problem"] = std::string(to_string(problem.kind));
    nlohmann::ordered_json echo;
    for (const auto& [k, v] : config.echo) echo[k] = v;
    j["config"] = echo;
    j["multiplier_rule"] = std::string(to_string(config.auglag.rule));
    j["reference"] = ref.provenance;
    j["metrics"] = metrics_json(report.metrics);
    j["J_pct_error"] = cost_json(report.j_error);
    j["J_surrogate_pct_error"] = cost_json(report.j_surrogate_error);
    j["J_sim"] = report.j_sim;
    j["J_surrogate"] = report.j_surrogate;
    j["J_star"] = report.j_star;
    if (!report.terminal_miss.empty()) j["terminal_miss"] = report.terminal_miss;
    if (!ref.terminal_residuals.empty()) j["shooting_terminal_residual"] = ref.terminal_residuals;
    j["gamma_min"] = report.gamma_min;
    j["gamma_ge_minus_one"] = report.gamma_min >= -1.0;
    const auto& s = report.solve;
    j["outer_iterations"] = s.state.ell;
    j["inner_iterations"] = s.inner_iterations;
    std::vector<std::string> statuses;
    for (auto st : s.inner_status) statuses.emplace_back(to_string(st));
    j["inner_status"] = statuses;
    nlohmann::ordered_json viol;
    for (std::size_t r = 0; r < assembler.residuals().size(); ++r) viol[assembler.residuals()[r].name] = s.violations[r];
    j["violations"] = viol;
    j["nu"] = s.violations.empty() ? 0.0 : *std::max_element(s.violations.begin(), s.violations.end());
    j["final_grad_norm"] = s.grad_norm;
    j["cost_f"] = s.cost;
    const auto& q = report.quadrature;
    j["quadrature_sensitivity"] = {{"nodes", q.nodes},   {"fine_nodes", q.fine_nodes}, {"cost_f", q.cost},
                                   {"cost_f_fine", q.fine_cost}, {"nu", q.nu},          {"nu_fine", q.fine_nu}};
    j["upsilon"] = s.state.upsilon;
    j["mu"] = s.state.mu;
    std::vector<std::string> names;
    for (const auto& p : report.files) names.push_back(p.filename().string());
    names.push_back("report.json");
    j["files"] = names;
    auto f = open("report.json");
    f << j.dump(2) << '\n';
  }
  return report;
}

SurfaceBound surface_bound(const FourierSurface& surface, double eps) {
  if (!(eps > 0.0)) throw ArgumentError("eps must be positive");
  const auto& box = surface.domain();
  const double T = box.horizon();
  std::vector<std::size_t> free;
  for (std::size_t a = 0; a < box.ic_axes(); ++a) {
    if (!box.degenerate(a)) free.push_back(a);
  }
  std::vector<double> ic(box.ic_lo().begin(), box.ic_lo().end());
  auto reflect = [](double x, double lo, double half) { return x <= lo + half ? x : lo + 2.0 * half - x; };
  SurfaceBound out;
  if (free.empty()) {
    out.variables = 1;
    out.C = total_variation([&](double t) { return surface.eval(std::clamp(reflect(t, 0.0, T), 0.0, T), ic); }, 0.0,
                            2.0 * T);
    out.k = coefficients_for_tolerance_1d(T, out.C, eps);
    return out;
  }
  if (free.size() > 1) throw ArgumentError("bounds cover at most one initial-condition axis");
  const std::size_t a = free.front();
  const double lo = box.ic_lo()[a], U = box.ic_range(a);
  out.variables = 2;
  out.C = total_variation(
      [&](double t, double u) {
        auto p = ic;
        p[a] = std::clamp(reflect(u, lo, U), lo, lo + U);
        return surface.eval(std::clamp(reflect(t, 0.0, T), 0.0, T), p);
      },
      0.0, 2.0 * T, lo, lo + 2.0 * U, 401);
  out.split = coefficients_for_tolerance_2d(T, U, out.C, eps);
  return out;
}

}  // namespace fourier_ocp
