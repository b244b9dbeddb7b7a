#include "nn/solvers.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "nn/metrics.hpp"

namespace nn {

std::string method_name(Method method, int K) {
  if (method == Method::Dgd) return "dgd";
  return "nn" + std::to_string(K);
}

const char* run_status_name(RunStatus status) {
  switch (status) {
    case RunStatus::Converged: return "converged";
    case RunStatus::MaxIters: return "max_iters";
    case RunStatus::TargetReached: return "target_reached";
    case RunStatus::Diverged: return "diverged";
  }
  return "unknown";
}

StackedIterate dgd_step(const PenalizedProblem& prob, const StackedIterate& y) {
  StackedIterate g = stacked_gradient(prob, y);
  StackedIterate next = y;
  next.flat() -= g.flat();
  return next;
}

StackedIterate nn_step(const PenalizedProblem& prob, const StackedIterate& y, int K,
                       double epsilon) {
  if (epsilon <= 0.0 || epsilon > 1.0)
    throw std::invalid_argument("step: epsilon must lie in (0, 1]");
  NnDirection dir = nn_direction(prob, y, K);
  StackedIterate next = y;
  next.flat() += epsilon * dir.direction().flat();
  return next;
}

double stepsize_rule(double m, double L, double lambda, double Lambda, double f0_gap) {
  if (m <= 0.0 || lambda <= 0.0 || Lambda <= 0.0)
    throw std::invalid_argument("stepsize rule: m, lambda, Lambda must be positive");
  if (L < 0.0 || f0_gap < 0.0)
    throw std::invalid_argument("stepsize rule: L and the objective gap must be >= 0");
  if (L == 0.0 || f0_gap == 0.0) return 1.0;
  double candidate =
      std::sqrt(3.0 * m * std::pow(lambda, 2.5) / (L * std::pow(Lambda, 3.0) * std::sqrt(f0_gap)));
  return std::min(1.0, candidate);
}

namespace {

void validate_config(const SolverConfig& cfg) {
  if (cfg.epsilon <= 0.0 || cfg.epsilon > 1.0)
    throw std::invalid_argument("solver config: epsilon must lie in (0, 1]");
  if (cfg.tol <= 0.0) throw std::invalid_argument("solver config: tol must be positive");
  if (cfg.max_iters < 1) throw std::invalid_argument("solver config: max_iters must be >= 1");
  if (cfg.method == Method::NetworkNewton && cfg.K < 0)
    throw std::invalid_argument("solver config: K must be >= 0");
  if (cfg.target_rel_error && *cfg.target_rel_error <= 0.0)
    throw std::invalid_argument("solver config: target_rel_error must be positive");
}

double max_local_gradient_norm(const StackedIterate& g) {
  double worst = 0.0;
  for (Index i = 0; i < g.nodes(); ++i) worst = std::max(worst, g.block(i).norm());
  return worst;
}

}  // namespace

SolverTrace run_solver(const PenalizedProblem& prob, const StackedIterate& y0,
                       const SolverConfig& cfg, const Vector* x_star,
                       const StepObserver& observer) {
  require_consistent(prob);
  validate_config(cfg);
  if (cfg.target_rel_error && x_star == nullptr)
    throw std::invalid_argument("solver: target_rel_error needs a reference minimizer");

  const double nan = std::numeric_limits<double>::quiet_NaN();
  const bool constant_split = [&] {
    for (const auto& obj : prob.objectives)
      if (!obj->constant_hessian()) return false;
    return true;
  }();

  SolverTrace trace;
  StackedIterate y = y0;
  StackedIterate g = stacked_gradient(prob, y);
  SplitBlocks split(prob, y);
  CommLedger ledger;

  auto record = [&](Index t, const StackedIterate& yt, const StackedIterate& gt,
                    double wgn) {
    IterationRecord rec;
    rec.t = t;
    rec.F_value = penalized_value(prob, yt);
    rec.grad_norm = gt.flat().norm();
    rec.weighted_grad_norm = wgn;
    rec.rel_error = x_star ? relative_error(yt, *x_star) : nan;
    rec.comm_sends = ledger.total();
    rec.alpha = prob.alpha;
    trace.records.push_back(rec);
  };

  record(0, y, g, weighted_gradient_norm(split, g));

  int rising_streak = 0;
  trace.status = RunStatus::MaxIters;
  for (Index t = 1; t <= cfg.max_iters; ++t) {
    // Iterate exchange used by the gradient already computed for this step.
    ledger.add_exchange_round(prob.topo);

    StackedIterate y_next = y;
    if (cfg.method == Method::Dgd) {
      y_next.flat() -= g.flat();
    } else {
      NnDirection dir = nn_direction(split, g, cfg.K);
      // One exchange per refinement: d^(0), ..., d^(K-1) cross the network.
      for (int k = 0; k + 1 < static_cast<int>(dir.levels.size()); ++k)
        ledger.add_exchange_round(prob.topo);
      y_next.flat() += cfg.epsilon * dir.direction().flat();
    }

    StackedIterate g_next = stacked_gradient(prob, y_next);
    // Weighted norm uses the splitting at the pre-step iterate.
    double wgn = weighted_gradient_norm(split, g_next);
    record(t, y_next, g_next, wgn);

    if (observer) observer(StepEvent{t, y, y_next, g_next, prob.alpha});

    if (!constant_split) split = SplitBlocks(prob, y_next);
    const IterationRecord& cur = trace.records[t];
    const IterationRecord& prev = trace.records[t - 1];
    rising_streak = cur.F_value > prev.F_value ? rising_streak + 1 : 0;

    y = std::move(y_next);
    g = std::move(g_next);

    if (max_local_gradient_norm(g) < cfg.tol) {
      trace.status = RunStatus::Converged;
      break;
    }
    if (cfg.target_rel_error && cur.rel_error < *cfg.target_rel_error) {
      trace.status = RunStatus::TargetReached;
      break;
    }
    if (rising_streak >= 50) {
      trace.status = RunStatus::Diverged;
      std::ostringstream msg;
      msg << "objective rose for " << rising_streak << " consecutive iterations at t=" << t
          << " (F=" << cur.F_value << "); the penalty step size is likely too large";
      trace.diagnostic = msg.str();
      break;
    }
  }

  trace.y_final = std::move(y);
  return trace;
}

}  // namespace nn
