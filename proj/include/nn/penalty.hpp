#pragma once

#include <vector>

#include "nn/objectives.hpp"
#include "nn/topology.hpp"
#include "nn/types.hpp"

namespace nn {

/// Network-wide iterate: one p-dimensional block per node, stored flat so
/// whole-iterate algebra stays a single Eigen expression.
class StackedIterate {
 public:
  StackedIterate() = default;
  StackedIterate(Index n, Index p) : n_(n), p_(p), data_(Vector::Zero(n * p)) {}

  static StackedIterate zero(Index n, Index p) { return StackedIterate(n, p); }

  Index nodes() const { return n_; }
  Index local_dim() const { return p_; }

  auto block(Index i) { return data_.segment(i * p_, p_); }
  auto block(Index i) const { return data_.segment(i * p_, p_); }

  /// n copies of the same local vector.
  static StackedIterate replicate(Index n, const Vector& x) {
    StackedIterate y(n, x.size());
    for (Index i = 0; i < n; ++i) y.block(i) = x;
    return y;
  }

  Vector& flat() { return data_; }
  const Vector& flat() const { return data_; }

 private:
  Index n_ = 0;
  Index p_ = 0;
  Vector data_;
};

/// Penalized consensus problem over a graph:
///   F(y) = y' (I - Z) y / 2 + alpha * sum_i f_i(x_i),
/// where Z applies the consensus weights blockwise. Z is never materialized;
/// every operator touches only each node's neighborhood.
struct PenalizedProblem {
  Topology topo;
  WeightMatrix weights;
  ObjectiveList objectives;
  double alpha = 0.0;

  Index nodes() const { return topo.n; }
  Index local_dim() const { return objectives.empty() ? 0 : objectives[0]->dim(); }
};

/// Throws std::invalid_argument if the pieces disagree (sizes, alpha <= 0).
void require_consistent(const PenalizedProblem& prob);

double penalized_value(const PenalizedProblem& prob, const StackedIterate& y);

/// Gradient block i: (1 - w_ii) x_i - sum_j w_ij x_j + alpha grad f_i(x_i).
Vector local_gradient(const PenalizedProblem& prob, const StackedIterate& y, Index i);
StackedIterate stacked_gradient(const PenalizedProblem& prob, const StackedIterate& y);

/// Hessian splitting H = D - B at an iterate:
///   D_ii = alpha hess f_i(x_i) + 2 (1 - w_ii) I   (block diagonal, SPD)
///   B_ii = (1 - w_ii) I,  B_ij = w_ij I on edges  (time-invariant)
/// Holds the D blocks with their factorizations plus the scalar B pattern,
/// so it stays valid independently of the problem object.
class SplitBlocks {
 public:
  SplitBlocks() = default;
  SplitBlocks(const PenalizedProblem& prob, const StackedIterate& y);

  Index nodes() const { return static_cast<Index>(d_blocks_.size()); }
  Index local_dim() const { return nodes() == 0 ? 0 : d_blocks_[0].rows(); }

  const Matrix& d_block(Index i) const { return d_blocks_[i]; }
  /// D_ii^{-1} v through the cached Cholesky factor.
  Vector solve_d(Index i, const Vector& v) const { return d_llt_[i].solve(v); }

  double b_diag(Index i) const { return b_diag_[i]; }
  /// Neighbors of i with the corresponding B off-diagonal scalars w_ij.
  const std::vector<std::pair<Index, double>>& b_row(Index i) const { return b_off_[i]; }

 private:
  std::vector<Matrix> d_blocks_;
  std::vector<Eigen::LLT<Matrix>> d_llt_;
  std::vector<double> b_diag_;
  std::vector<std::vector<std::pair<Index, double>>> b_off_;
};

/// Factors the splitting at y. Throws std::runtime_error if any D block
/// fails its Cholesky factorization (not positive definite).
SplitBlocks split_blocks(const PenalizedProblem& prob, const StackedIterate& y);

/// Truncated-series direction. levels[k] holds the k-th refinement d^(k),
/// k = 0..K; direction aliases levels[K]. Exchanging d^(0..K-1) with the
/// neighbors is what the communication ledger charges per refinement.
struct NnDirection {
  std::vector<StackedIterate> levels;
  const StackedIterate& direction() const { return levels.back(); }
};

/// d^(0)_i = -D_ii^{-1} g_i
/// d^(k+1)_i = D_ii^{-1} [ B_ii d^(k)_i + sum_{j in N_i} B_ij d^(k)_j - g_i ]
NnDirection nn_direction(const PenalizedProblem& prob, const StackedIterate& y, int K);
NnDirection nn_direction(const SplitBlocks& split, const StackedIterate& g, int K);

/// sqrt(sum_i g_i' D_ii^{-1} g_i), the norm the convergence analysis tracks.
double weighted_gradient_norm(const SplitBlocks& split, const StackedIterate& g);

}  // namespace nn
