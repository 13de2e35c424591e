#include "fourier_ocp/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <string>

#include "fourier_ocp/errors.hpp"

namespace fourier_ocp {

OptimizerMethod parse_optimizer_method(std::string_view name) {
  if (name == "gd") return OptimizerMethod::gd;
  if (name == "cg") return OptimizerMethod::cg;
  if (name == "lbfgs") return OptimizerMethod::lbfgs;
  throw ArgumentError("unknown optimizer method '" + std::string(name) + "' (expected gd, cg or lbfgs)");
}

std::string_view to_string(OptimizerMethod method) {
  switch (method) {
    case OptimizerMethod::gd: return "gd";
    case OptimizerMethod::cg: return "cg";
    case OptimizerMethod::lbfgs: return "lbfgs";
  }
  return "?";
}

std::string_view to_string(OptimizerStatus status) {
  switch (status) {
    case OptimizerStatus::converged: return "converged";
    case OptimizerStatus::k_max_reached: return "k_max_reached";
    case OptimizerStatus::linesearch_failed: return "linesearch_failed";
  }
  return "?";
}

double OptimizerConfig::effective_c2() const {
  if (line_search.c2 > 0.0) return line_search.c2;
  return method == OptimizerMethod::cg ? 0.1 : 0.9;
}

void OptimizerConfig::validate() const {
  if (!(eps > 0.0)) throw ArgumentError("opt.eps must be positive");
  if (k_max < 1) throw ArgumentError("opt.kmax must be >= 1");
  if (method == OptimizerMethod::gd && !(alpha > 0.0)) throw ArgumentError("opt.alpha must be positive");
  if (memory < 1) throw ArgumentError("opt.memory must be >= 1");
  const double c2 = effective_c2();
  if (!(line_search.c1 > 0.0 && line_search.c1 < c2 && c2 < 1.0)) {
    throw ArgumentError("line search needs 0 < c1 < c2 < 1");
  }
  if (line_search.max_steps < 1) throw ArgumentError("line search max_steps must be >= 1");
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

struct Probe {
  double step;
  double value;
  double slope;
  std::vector<double> x;
  std::vector<double> grad;
};

class LineFunction {
 public:
  LineFunction(const Objective& f, std::span<const double> x, const std::vector<double>& d)
      : f_(f), x0_(x.begin(), x.end()), d_(d) {}

  Probe at(double step) {
    Probe p{step, 0.0, 0.0, std::vector<double>(x0_.size()), std::vector<double>(x0_.size())};
    for (std::size_t i = 0; i < x0_.size(); ++i) p.x[i] = x0_[i] + step * d_[i];
    ++evaluations;
    p.value = f_(p.x, p.grad);
    p.slope = dot(p.grad, d_);
    if (!std::isfinite(p.value) || !std::isfinite(p.slope)) {
      p.value = std::numeric_limits<double>::infinity();
      p.slope = std::numeric_limits<double>::quiet_NaN();
    }
    return p;
  }

  int evaluations = 0;

 private:
  const Objective& f_;
  std::vector<double> x0_;
  const std::vector<double>& d_;
};

double cubic_minimizer(const Probe& lo, const Probe& hi) {
  const double mid = 0.5 * (lo.step + hi.step);
  if (!std::isfinite(hi.value) || !std::isfinite(hi.slope)) return mid;
  const double d1 = lo.slope + hi.slope - 3.0 * (lo.value - hi.value) / (lo.step - hi.step);
  const double disc = d1 * d1 - lo.slope * hi.slope;
  if (!(disc >= 0.0)) return mid;
  const double d2 = std::copysign(std::sqrt(disc), hi.step - lo.step);
  const double denom = hi.slope - lo.slope + 2.0 * d2;
  if (denom == 0.0) return mid;
  const double a = hi.step - (hi.step - lo.step) * (hi.slope + d2 - d1) / denom;
  const double left = std::min(lo.step, hi.step);
  const double right = std::max(lo.step, hi.step);
  const double margin = 0.1 * (right - left);
  if (!std::isfinite(a) || a < left + margin || a > right - margin) return mid;
  return a;
}

}  // namespace

LineSearchResult wolfe_line_search(const Objective& f, std::span<const double> x, double value,
                                   std::span<const double> grad, std::vector<double> direction, double c1,
                                   double c2, int max_steps, double initial_step) {
  LineSearchResult out;
  double slope0 = dot(grad, direction);
  if (!(slope0 < 0.0)) {
    for (std::size_t i = 0; i < direction.size(); ++i) direction[i] = -grad[i];
    slope0 = dot(grad, direction);
    out.direction_reset = true;
  }
  out.x.assign(x.begin(), x.end());
  out.grad.assign(grad.begin(), grad.end());
  out.value = value;
  if (slope0 == 0.0) return out;

  LineFunction line(f, x, direction);
  Probe best{0.0, value, slope0, out.x, out.grad};
  auto remember = [&](const Probe& p) {
    if (p.value < best.value) best = p;
  };
  auto finish = [&](const Probe& p, bool ok) {
    const Probe& r = ok ? p : best;
    out.ok = ok;
    out.step = r.step;
    out.value = r.value;
    out.x = r.x;
    out.grad = r.grad;
    out.evaluations = line.evaluations;
    return out;
  };
  auto sufficient = [&](const Probe& p) { return p.value <= value + c1 * p.step * slope0; };
  auto curvature = [&](const Probe& p) { return std::abs(p.slope) <= -c2 * slope0; };
  // When the Armijo decrease is below the resolution of the value, fall back
  // on the slope alone as long as the value does not go up.
  auto approximate = [&](const Probe& p) {
    const bool unresolved = -c1 * p.step * slope0 <= 1e-12 * std::abs(value);
    return unresolved && p.value <= value && p.slope <= (2.0 * c1 - 1.0) * slope0 && p.slope >= c2 * slope0;
  };

  auto zoom = [&](Probe lo, Probe hi) {
    while (line.evaluations < max_steps) {
      const double a = cubic_minimizer(lo, hi);
      if (std::abs(hi.step - lo.step) <= 1e-16 * std::max(1.0, std::abs(a))) break;
      Probe p = line.at(a);
      remember(p);
      if (approximate(p)) return finish(p, true);
      if (!sufficient(p) || p.value >= lo.value) {
        hi = std::move(p);
      } else {
        if (curvature(p)) return finish(p, true);
        if (p.slope * (hi.step - lo.step) >= 0.0) hi = lo;
        lo = std::move(p);
      }
    }
    return finish(best, false);
  };

  Probe prev{0.0, value, slope0, out.x, out.grad};
  double step = initial_step > 0.0 ? initial_step : 1.0;
  for (int i = 0; line.evaluations < max_steps; ++i) {
    Probe p = line.at(step);
    remember(p);
    if (approximate(p)) return finish(p, true);
    if (!sufficient(p) || (i > 0 && p.value >= prev.value)) return zoom(std::move(prev), std::move(p));
    if (curvature(p)) return finish(p, true);
    if (p.slope >= 0.0) return zoom(std::move(p), std::move(prev));
    prev = std::move(p);
    step *= 2.0;
    if (step > 1e12) break;
  }
  return finish(best, false);
}

std::vector<double> lbfgs_direction(std::span<const double> grad, const std::deque<std::vector<double>>& s_hist,
                                    const std::deque<std::vector<double>>& y_hist) {
  if (s_hist.size() != y_hist.size()) throw ArgumentError("lbfgs_direction: history size mismatch");
  const std::size_t n = grad.size();
  std::vector<double> q(grad.begin(), grad.end());
  std::vector<double> a(s_hist.size()), rho(s_hist.size());
  for (std::size_t j = s_hist.size(); j-- > 0;) {
    rho[j] = 1.0 / dot(s_hist[j], y_hist[j]);
    a[j] = rho[j] * dot(s_hist[j], q);
    for (std::size_t i = 0; i < n; ++i) q[i] -= a[j] * y_hist[j][i];
  }
  if (!s_hist.empty()) {
    const double scale = dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
    for (auto& v : q) v *= scale;
  }
  for (std::size_t j = 0; j < s_hist.size(); ++j) {
    const double b = rho[j] * dot(y_hist[j], q);
    for (std::size_t i = 0; i < n; ++i) q[i] += (a[j] - b) * s_hist[j][i];
  }
  for (auto& v : q) v = -v;
  return q;
}

MinimizeResult minimize(const Objective& f, std::vector<double> x0, const OptimizerConfig& cfg,
                        const IterationCallback& on_iteration) {
  cfg.validate();
  const std::size_t n = x0.size();
  MinimizeResult res;
  res.x = std::move(x0);
  std::vector<double> g(n);
  res.value = f(res.x, g);
  res.evaluations = 1;
  if (!std::isfinite(res.value)) throw RunError("objective is not finite at the starting point");
  res.grad_norm = norm(g);

  const double c1 = cfg.line_search.c1;
  const double c2 = cfg.effective_c2();
  std::vector<double> d(n), g_prev(n);
  double prev_slope = 0.0, prev_step = 0.0;
  bool fresh = true;  // no usable history: first step or just restarted
  std::deque<std::vector<double>> s_hist, y_hist;

  while (res.grad_norm >= cfg.eps) {
    if (res.iterations >= cfg.k_max) {
      res.status = OptimizerStatus::k_max_reached;
      return res;
    }

    if (cfg.method == OptimizerMethod::gd) {
      double alpha = cfg.alpha;
      std::vector<double> x(n), gx(n);
      double v = std::numeric_limits<double>::infinity();
      for (int tries = 0; tries < 60; ++tries) {
        for (std::size_t i = 0; i < n; ++i) x[i] = res.x[i] - alpha * g[i];
        v = f(x, gx);
        ++res.evaluations;
        if (std::isfinite(v) && v <= res.value) break;
        alpha *= 0.5;
      }
      if (!(std::isfinite(v) && v <= res.value)) {
        res.status = OptimizerStatus::linesearch_failed;
        return res;
      }
      res.x = std::move(x);
      g = std::move(gx);
      res.value = v;
    } else {
      double initial = 1.0;
      if (cfg.method == OptimizerMethod::cg) {
        double beta = 0.0;
        if (!fresh) {
          double num = 0.0;
          for (std::size_t i = 0; i < n; ++i) num += g[i] * (g[i] - g_prev[i]);
          beta = std::max(0.0, num / dot(g_prev, g_prev));
        }
        for (std::size_t i = 0; i < n; ++i) d[i] = -g[i] + beta * d[i];
        const double gd = dot(g, d);
        if (!fresh && gd >= -1e-12 * res.grad_norm * norm(d)) {
          for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
          ++res.direction_resets;
        }
        initial = fresh ? std::min(1.0, 1.0 / res.grad_norm) : prev_step * prev_slope / dot(g, d);
        if (!(initial > 0.0) || !std::isfinite(initial)) initial = 1.0;
      } else {
        d = lbfgs_direction(g, s_hist, y_hist);
        initial = s_hist.empty() ? std::min(1.0, 1.0 / res.grad_norm) : 1.0;
      }

      LineSearchResult ls = wolfe_line_search(f, res.x, res.value, g, d, c1, c2, cfg.line_search.max_steps, initial);
      res.evaluations += ls.evaluations;
      if (ls.direction_reset) {
        ++res.direction_resets;
        for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
      }
      const bool moved = ls.value < res.value;
      if (!ls.ok && !moved) {
        if (fresh) {
          res.status = OptimizerStatus::linesearch_failed;
          return res;
        }
        // retry from steepest descent with no history
        fresh = true;
        s_hist.clear();
        y_hist.clear();
        continue;
      }
      if (cfg.method == OptimizerMethod::lbfgs) {
        std::vector<double> s(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
          s[i] = ls.x[i] - res.x[i];
          y[i] = ls.grad[i] - g[i];
        }
        const double sy = dot(s, y);
        if (ls.ok && sy > 1e-12 * norm(s) * norm(y)) {
          s_hist.push_back(std::move(s));
          y_hist.push_back(std::move(y));
          if (s_hist.size() > static_cast<std::size_t>(cfg.memory)) {
            s_hist.pop_front();
            y_hist.pop_front();
          }
        }
      }
      prev_slope = dot(g, d);
      prev_step = ls.step;
      g_prev = g;
      res.x = std::move(ls.x);
      g = std::move(ls.grad);
      res.value = ls.value;
      fresh = !ls.ok;
      if (fresh) {
        s_hist.clear();
        y_hist.clear();
      }
    }
    ++res.iterations;
    res.grad_norm = norm(g);
    if (on_iteration) on_iteration(res.iterations, res.value, res.grad_norm);
  }
  res.status = OptimizerStatus::converged;
  return res;
}

}  // namespace fourier_ocp
