#pragma once

#include <vector>

#include "nn/penalty.hpp"
#include "nn/solvers.hpp"
#include "nn/types.hpp"

namespace nn {

/// Adaptive penalty cascade: run the solver to a local-gradient tolerance,
/// shrink alpha by eta, warm start, repeat for a fixed number of stages.
struct AnnConfig {
  Method method = Method::NetworkNewton;
  int K = 0;
  double epsilon = 1.0;
  double alpha0 = 0.1;            // > 0
  double eta = 0.1;               // in (0, 1)
  double tol = 1e-3;              // per-node gradient threshold ending a stage
  int outer_rounds = 3;           // >= 1 stages
  Index max_iters_per_stage = 10000;
};

/// Completion flags s_ij: flag (i, j) is node i's view of whether node j has
/// reported its local gradient below tolerance this stage. Broadcast is
/// modeled as instantaneous, so a column is either all zero or all one.
class SignalState {
 public:
  SignalState() = default;
  explicit SignalState(Index n) : n_(n), completed_(n, 0) {}

  Index n() const { return n_; }
  bool flag(Index i, Index j) const { return completed_[j] != 0; }
  bool column_set(Index j) const { return completed_[j] != 0; }
  void reset() { std::fill(completed_.begin(), completed_.end(), 0); }

  /// Marks the newly completed nodes and broadcasts. Flags are sticky within
  /// a stage. Returns true iff all n^2 flags are set after this round, which
  /// is the signal to shrink alpha.
  bool signal_round(const std::vector<Index>& completed);

 private:
  Index n_ = 0;
  std::vector<char> completed_;
};

bool signal_round(SignalState& state, const std::vector<Index>& completed);

struct AnnStage {
  int stage = 0;
  double alpha = 0.0;
  Index first_record = 0;  // trace indices covered by this stage
  Index last_record = 0;
  bool cap_reached = false;  // stage hit max_iters_per_stage before agreement
};

struct AnnTrace {
  std::vector<IterationRecord> records;  // cumulative across stages
  std::vector<AnnStage> stages;
  StackedIterate y_final;
  RunStatus status = RunStatus::Converged;
  std::string diagnostic;
};

/// Runs the cascade on copies of prob with alpha_s = alpha0 * eta^s. Each
/// stage performs at least one iteration, ends when the sticky completion
/// flags cover the network, and on a cap proceeds to the next stage with the
/// stage marked. Communication counts accumulate across stages; records
/// carry the stage's alpha. A divergence abort ends the whole cascade.
/// Final status: Diverged on abort, MaxIters if any stage capped, else
/// Converged.
AnnTrace ann_run(const PenalizedProblem& prob, const StackedIterate& y0, const AnnConfig& cfg,
                 const Vector* x_star = nullptr);

}  // namespace nn
