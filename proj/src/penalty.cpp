#include "nn/penalty.hpp"

#include <cmath>
#include <stdexcept>

namespace nn {

void require_consistent(const PenalizedProblem& prob) {
  require_valid(prob.topo);
  if (prob.weights.w.rows() != prob.topo.n || prob.weights.w.cols() != prob.topo.n)
    throw std::invalid_argument("penalized problem: weight matrix shape != n x n");
  if (static_cast<Index>(prob.objectives.size()) != prob.topo.n)
    throw std::invalid_argument("penalized problem: one objective per node required");
  const Index p = prob.local_dim();
  for (const auto& obj : prob.objectives) {
    if (!obj) throw std::invalid_argument("penalized problem: null objective");
    if (obj->dim() != p) throw std::invalid_argument("penalized problem: mixed local dimensions");
  }
  if (prob.alpha <= 0.0) throw std::invalid_argument("penalized problem: alpha must be positive");
}

namespace {

void require_iterate(const PenalizedProblem& prob, const StackedIterate& y) {
  if (y.nodes() != prob.topo.n || y.local_dim() != prob.local_dim())
    throw std::invalid_argument("iterate shape does not match the problem");
}

}  // namespace

double penalized_value(const PenalizedProblem& prob, const StackedIterate& y) {
  require_iterate(prob, y);
  const Matrix& w = prob.weights.w;
  double consensus = 0.0;
  double cost = 0.0;
  for (Index i = 0; i < prob.topo.n; ++i) {
    Vector zi = w(i, i) * y.block(i);
    for (Index j : prob.topo.neighbors[i]) zi += w(i, j) * y.block(j);
    consensus += y.block(i).dot(y.block(i) - zi);
    cost += prob.objectives[i]->value(y.block(i));
  }
  return 0.5 * consensus + prob.alpha * cost;
}

Vector local_gradient(const PenalizedProblem& prob, const StackedIterate& y, Index i) {
  require_iterate(prob, y);
  if (i < 0 || i >= prob.topo.n) throw std::invalid_argument("local gradient: node out of range");
  const Matrix& w = prob.weights.w;
  Vector g = (1.0 - w(i, i)) * y.block(i);
  for (Index j : prob.topo.neighbors[i]) g -= w(i, j) * y.block(j);
  g += prob.alpha * prob.objectives[i]->gradient(y.block(i));
  return g;
}

StackedIterate stacked_gradient(const PenalizedProblem& prob, const StackedIterate& y) {
  require_iterate(prob, y);
  const Matrix& w = prob.weights.w;
  StackedIterate g(y.nodes(), y.local_dim());
  for (Index i = 0; i < prob.topo.n; ++i) {
    auto gi = g.block(i);
    gi = (1.0 - w(i, i)) * y.block(i);
    for (Index j : prob.topo.neighbors[i]) gi -= w(i, j) * y.block(j);
    gi += prob.alpha * prob.objectives[i]->gradient(y.block(i));
  }
  return g;
}

SplitBlocks::SplitBlocks(const PenalizedProblem& prob, const StackedIterate& y) {
  require_iterate(prob, y);
  const Index n = prob.topo.n;
  const Matrix& w = prob.weights.w;
  d_blocks_.reserve(n);
  d_llt_.reserve(n);
  b_diag_.reserve(n);
  b_off_.reserve(n);
  for (Index i = 0; i < n; ++i) {
    Matrix di = prob.alpha * prob.objectives[i]->hessian(y.block(i));
    di.diagonal().array() += 2.0 * (1.0 - w(i, i));
    Eigen::LLT<Matrix> llt(di);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("splitting: D block is not positive definite");
    d_blocks_.push_back(std::move(di));
    d_llt_.push_back(std::move(llt));
    b_diag_.push_back(1.0 - w(i, i));
    std::vector<std::pair<Index, double>> row;
    row.reserve(prob.topo.neighbors[i].size());
    for (Index j : prob.topo.neighbors[i]) row.emplace_back(j, w(i, j));
    b_off_.push_back(std::move(row));
  }
}

SplitBlocks split_blocks(const PenalizedProblem& prob, const StackedIterate& y) {
  return SplitBlocks(prob, y);
}

NnDirection nn_direction(const PenalizedProblem& prob, const StackedIterate& y, int K) {
  SplitBlocks split(prob, y);
  return nn_direction(split, stacked_gradient(prob, y), K);
}

NnDirection nn_direction(const SplitBlocks& split, const StackedIterate& g, int K) {
  if (K < 0) throw std::invalid_argument("direction: K must be >= 0");
  if (g.nodes() != split.nodes() || g.local_dim() != split.local_dim())
    throw std::invalid_argument("direction: gradient shape does not match the splitting");
  const Index n = split.nodes();
  const Index p = split.local_dim();

  NnDirection out;
  out.levels.reserve(K + 1);
  StackedIterate d0(n, p);
  for (Index i = 0; i < n; ++i) d0.block(i) = -split.solve_d(i, g.block(i));
  out.levels.push_back(std::move(d0));

  for (int k = 0; k < K; ++k) {
    const StackedIterate& prev = out.levels.back();
    StackedIterate next(n, p);
    for (Index i = 0; i < n; ++i) {
      Vector rhs = split.b_diag(i) * prev.block(i);
      for (const auto& [j, wij] : split.b_row(i)) rhs += wij * prev.block(j);
      rhs -= g.block(i);
      next.block(i) = split.solve_d(i, rhs);
    }
    out.levels.push_back(std::move(next));
  }
  return out;
}

double weighted_gradient_norm(const SplitBlocks& split, const StackedIterate& g) {
  if (g.nodes() != split.nodes() || g.local_dim() != split.local_dim())
    throw std::invalid_argument("weighted norm: gradient shape does not match the splitting");
  double total = 0.0;
  for (Index i = 0; i < split.nodes(); ++i)
    total += g.block(i).dot(split.solve_d(i, g.block(i)));
  return std::sqrt(total);
}

}  // namespace nn
