#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace fourier_ocp {

/// Value-and-gradient oracle. Writes the gradient into `grad` (same size as
/// `x`) and returns the value.
using Objective = std::function<double(std::span<const double> x, std::span<double> grad)>;

enum class OptimizerMethod { gd, cg, lbfgs };
enum class OptimizerStatus { converged, k_max_reached, linesearch_failed };

OptimizerMethod parse_optimizer_method(std::string_view name);
std::string_view to_string(OptimizerMethod method);
std::string_view to_string(OptimizerStatus status);

struct LineSearchConfig {
  double c1 = 1e-4;
  double c2 = 0.0;        ///< 0 picks the method default: 0.9 for LBFGS, 0.1 for CG
  int max_steps = 40;     ///< function evaluations per search
};

struct OptimizerConfig {
  OptimizerMethod method = OptimizerMethod::lbfgs;
  double eps = 1e-6;      ///< stop when ||grad|| < eps
  int k_max = 1000;
  double alpha = 1e-3;    ///< fixed step for gd
  int memory = 10;
  LineSearchConfig line_search;

  double effective_c2() const;
  void validate() const;
};

struct LineSearchResult {
  bool ok = false;
  bool direction_reset = false;
  double step = 0.0;
  double value = 0.0;
  std::vector<double> x;
  std::vector<double> grad;
  int evaluations = 0;
};

/// Strong Wolfe search along `direction` from `x` (bracketing then zoom with
/// cubic interpolation). If `direction` is not a descent direction it is
/// replaced by -grad first and `direction_reset` is set. On failure `ok` is
/// false and x/value hold the best point seen, which may be the start.
LineSearchResult wolfe_line_search(const Objective& f, std::span<const double> x, double value,
                                   std::span<const double> grad, std::vector<double> direction, double c1,
                                   double c2, int max_steps, double initial_step = 1.0);

/// LBFGS two-loop recursion over stored (s, y) pairs, oldest first. With no
/// pairs the result is exactly -grad.
std::vector<double> lbfgs_direction(std::span<const double> grad, const std::deque<std::vector<double>>& s_hist,
                                    const std::deque<std::vector<double>>& y_hist);

struct MinimizeResult {
  std::vector<double> x;
  double value = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  int evaluations = 0;
  int direction_resets = 0;
  OptimizerStatus status = OptimizerStatus::k_max_reached;
};

/// Called after every accepted step with the iteration number, value and
/// gradient norm.
using IterationCallback = std::function<void(int iteration, double value, double grad_norm)>;

/// Unconstrained minimization. Accepted iterates never increase the value;
/// a non-finite value at x0 raises RunError.
MinimizeResult minimize(const Objective& f, std::vector<double> x0, const OptimizerConfig& cfg,
                        const IterationCallback& on_iteration = {});

}  // namespace fourier_ocp
