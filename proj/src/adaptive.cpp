#include "nn/adaptive.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "nn/metrics.hpp"

namespace nn {

bool SignalState::signal_round(const std::vector<Index>& completed) {
  for (Index j : completed) {
    if (j < 0 || j >= n_) throw std::invalid_argument("signal round: node out of range");
    completed_[j] = 1;
  }
  for (char c : completed_)
    if (!c) return false;
  return true;
}

bool signal_round(SignalState& state, const std::vector<Index>& completed) {
  return state.signal_round(completed);
}

namespace {

void validate_config(const AnnConfig& cfg) {
  if (cfg.alpha0 <= 0.0) throw std::invalid_argument("cascade config: alpha0 must be positive");
  if (cfg.eta <= 0.0 || cfg.eta >= 1.0)
    throw std::invalid_argument("cascade config: eta must lie strictly in (0, 1)");
  if (cfg.tol <= 0.0) throw std::invalid_argument("cascade config: tol must be positive");
  if (cfg.outer_rounds < 1)
    throw std::invalid_argument("cascade config: outer_rounds must be >= 1");
  if (cfg.max_iters_per_stage < 1)
    throw std::invalid_argument("cascade config: max_iters_per_stage must be >= 1");
  if (cfg.epsilon <= 0.0 || cfg.epsilon > 1.0)
    throw std::invalid_argument("cascade config: epsilon must lie in (0, 1]");
  if (cfg.method == Method::NetworkNewton && cfg.K < 0)
    throw std::invalid_argument("cascade config: K must be >= 0");
}

}  // namespace

AnnTrace ann_run(const PenalizedProblem& prob, const StackedIterate& y0, const AnnConfig& cfg,
                 const Vector* x_star) {
  validate_config(cfg);
  PenalizedProblem stage_prob = prob;
  stage_prob.alpha = cfg.alpha0;
  require_consistent(stage_prob);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  const bool constant_split = [&] {
    for (const auto& obj : stage_prob.objectives)
      if (!obj->constant_hessian()) return false;
    return true;
  }();

  AnnTrace trace;
  trace.status = RunStatus::Converged;
  StackedIterate y = y0;
  CommLedger ledger;
  Index t_global = 0;

  auto record = [&](const StackedIterate& yt, const StackedIterate& gt, double wgn) {
    IterationRecord rec;
    rec.t = t_global;
    rec.F_value = penalized_value(stage_prob, yt);
    rec.grad_norm = gt.flat().norm();
    rec.weighted_grad_norm = wgn;
    rec.rel_error = x_star ? relative_error(yt, *x_star) : nan;
    rec.comm_sends = ledger.total();
    rec.alpha = stage_prob.alpha;
    trace.records.push_back(rec);
  };

  for (int s = 0; s < cfg.outer_rounds; ++s) {
    stage_prob.alpha = cfg.alpha0 * std::pow(cfg.eta, s);
    StackedIterate g = stacked_gradient(stage_prob, y);
    SplitBlocks split(stage_prob, y);

    AnnStage stage;
    stage.stage = s;
    stage.alpha = stage_prob.alpha;
    stage.first_record = static_cast<Index>(trace.records.size());
    if (s == 0) record(y, g, weighted_gradient_norm(split, g));

    SignalState flags(stage_prob.topo.n);
    int rising_streak = 0;
    double prev_f = penalized_value(stage_prob, y);
    for (Index it = 0; it < cfg.max_iters_per_stage; ++it) {
      ledger.add_exchange_round(stage_prob.topo);
      StackedIterate y_next = y;
      if (cfg.method == Method::Dgd) {
        y_next.flat() -= g.flat();
      } else {
        NnDirection dir = nn_direction(split, g, cfg.K);
        for (int k = 0; k + 1 < static_cast<int>(dir.levels.size()); ++k)
          ledger.add_exchange_round(stage_prob.topo);
        y_next.flat() += cfg.epsilon * dir.direction().flat();
      }
      ++t_global;

      StackedIterate g_next = stacked_gradient(stage_prob, y_next);
      double wgn = weighted_gradient_norm(split, g_next);
      record(y_next, g_next, wgn);
      if (!constant_split) split = SplitBlocks(stage_prob, y_next);

      y = std::move(y_next);
      g = std::move(g_next);

      double f = trace.records.back().F_value;
      rising_streak = f > prev_f ? rising_streak + 1 : 0;
      prev_f = f;
      if (rising_streak >= 50) {
        trace.status = RunStatus::Diverged;
        std::ostringstream msg;
        msg << "objective rose for 50 consecutive iterations in stage " << s
            << " (alpha=" << stage_prob.alpha << ", t=" << t_global << ")";
        trace.diagnostic = msg.str();
        break;
      }

      std::vector<Index> completed;
      for (Index i = 0; i < stage_prob.topo.n; ++i)
        if (g.block(i).norm() < cfg.tol) completed.push_back(i);
      if (flags.signal_round(completed)) break;
      if (it + 1 == cfg.max_iters_per_stage) stage.cap_reached = true;
    }

    stage.last_record = static_cast<Index>(trace.records.size()) - 1;
    trace.stages.push_back(stage);
    if (trace.status == RunStatus::Diverged) break;
  }

  if (trace.status != RunStatus::Diverged) {
    bool any_cap = false;
    for (const auto& st : trace.stages) any_cap = any_cap || st.cap_reached;
    trace.status = any_cap ? RunStatus::MaxIters : RunStatus::Converged;
  }

  trace.y_final = std::move(y);
  return trace;
}

}  // namespace nn
