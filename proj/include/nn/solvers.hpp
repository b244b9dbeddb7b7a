#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nn/penalty.hpp"
#include "nn/types.hpp"

namespace nn {

/// "dgd", or "nn<K>" for the second-order method.
std::string method_name(Method method, int K);

struct SolverConfig {
  Method method = Method::NetworkNewton;
  int K = 0;               // series truncation, ignored by DGD
  double epsilon = 1.0;    // step size, in (0, 1]
  double tol = 1e-6;       // per-node gradient norm threshold, > 0
  Index max_iters = 1000;  // >= 1

  /// Optional early stop on the mean relative error against a known
  /// minimizer; requires x_star to be passed to run_solver.
  std::optional<double> target_rel_error;
};

struct IterationRecord {
  Index t = 0;
  double F_value = 0.0;
  double grad_norm = 0.0;
  /// ||D^{-1/2} g_t|| with D evaluated at the previous iterate (at the
  /// initial iterate for t = 0), matching the analyzed recursion.
  double weighted_grad_norm = 0.0;
  double rel_error = 0.0;  // NaN when no minimizer was supplied
  std::int64_t comm_sends = 0;  // cumulative directed vector sends
  double alpha = 0.0;
};

enum class RunStatus { Converged, MaxIters, TargetReached, Diverged };

const char* run_status_name(RunStatus status);

struct SolverTrace {
  std::vector<IterationRecord> records;  // records[t] is the state after t steps
  RunStatus status = RunStatus::MaxIters;
  StackedIterate y_final;
  std::string diagnostic;  // populated on divergence aborts
};

/// One synchronous round of each step rule, as free functions so a single
/// step can be inspected without a full run.
StackedIterate dgd_step(const PenalizedProblem& prob, const StackedIterate& y);
StackedIterate nn_step(const PenalizedProblem& prob, const StackedIterate& y, int K,
                       double epsilon);

/// Step size guaranteeing the analyzed linear rate:
///   min{ 1, [3 m lambda^{5/2} / (L Lambda^3 sqrt(f0_gap))]^{1/2} }.
/// Equals 1 when L = 0 or f0_gap = 0 (quadratic case).
double stepsize_rule(double m, double L, double lambda, double Lambda, double f0_gap);

/// Per-iteration hook for diagnostics that need the full iterates, which the
/// scalar trace does not retain.
struct StepEvent {
  Index t = 0;  // index of the completed step, first step has t = 1
  const StackedIterate& y_before;
  const StackedIterate& y_after;
  const StackedIterate& gradient_after;
  double alpha = 0.0;
};
using StepObserver = std::function<void(const StepEvent&)>;

/// Bulk-synchronous run of the selected method from y0. Always performs at
/// least one iteration; stops when every node's local gradient norm falls
/// below tol, on max_iters, on the optional relative-error target, or with
/// a diagnostic after the objective rises for 50 consecutive iterations.
/// records[0] captures the initial state with zero communication.
SolverTrace run_solver(const PenalizedProblem& prob, const StackedIterate& y0,
                       const SolverConfig& cfg, const Vector* x_star = nullptr,
                       const StepObserver& observer = {});

}  // namespace nn
