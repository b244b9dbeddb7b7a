#include "nn/dense.hpp"

#include <stdexcept>

#include "nn/solvers.hpp"

namespace nn {

Matrix dense_extended_weights(const WeightMatrix& wm, Index p) {
  const Index n = wm.w.rows();
  Matrix z = Matrix::Zero(n * p, n * p);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (wm.w(i, j) != 0.0)
        z.block(i * p, j * p, p, p) = wm.w(i, j) * Matrix::Identity(p, p);
  return z;
}

Matrix dense_local_hessians(const PenalizedProblem& prob, const StackedIterate& y) {
  const Index n = prob.topo.n;
  const Index p = prob.local_dim();
  Matrix g = Matrix::Zero(n * p, n * p);
  for (Index i = 0; i < n; ++i)
    g.block(i * p, i * p, p, p) = prob.objectives[i]->hessian(y.block(i));
  return g;
}

Matrix dense_hessian(const PenalizedProblem& prob, const StackedIterate& y) {
  const Index np = prob.topo.n * prob.local_dim();
  return Matrix::Identity(np, np) - dense_extended_weights(prob.weights, prob.local_dim()) +
         prob.alpha * dense_local_hessians(prob, y);
}

Matrix dense_d_matrix(const PenalizedProblem& prob, const StackedIterate& y) {
  const Index n = prob.topo.n;
  const Index p = prob.local_dim();
  Matrix d = prob.alpha * dense_local_hessians(prob, y);
  for (Index i = 0; i < n; ++i)
    d.block(i * p, i * p, p, p) += 2.0 * (1.0 - prob.weights.w(i, i)) * Matrix::Identity(p, p);
  return d;
}

Matrix dense_b_matrix(const PenalizedProblem& prob) {
  const Index n = prob.topo.n;
  const Index p = prob.local_dim();
  Matrix b = dense_extended_weights(prob.weights, p);
  for (Index i = 0; i < n; ++i)
    b.block(i * p, i * p, p, p) +=
        (1.0 - 2.0 * prob.weights.w(i, i)) * Matrix::Identity(p, p);
  return b;
}

Matrix dense_approx_hessian_inverse(const Matrix& d, const Matrix& b, int K) {
  if (K < 0) throw std::invalid_argument("series inverse: K must be >= 0");
  if (d.rows() != d.cols() || b.rows() != b.cols() || d.rows() != b.rows())
    throw std::invalid_argument("series inverse: shape mismatch");

  Eigen::SelfAdjointEigenSolver<Matrix> es(d);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0)
    throw std::runtime_error("series inverse: D must be positive definite");
  Matrix d_inv_sqrt = es.operatorInverseSqrt();

  Matrix x = d_inv_sqrt * b * d_inv_sqrt;
  Matrix series = Matrix::Identity(d.rows(), d.cols());
  Matrix power = series;
  for (int k = 1; k <= K; ++k) {
    power = power * x;
    series += power;
  }
  return d_inv_sqrt * series * d_inv_sqrt;
}

Vector dense_gradient(const PenalizedProblem& prob, const StackedIterate& y) {
  StackedIterate g = stacked_gradient(prob, y);
  return g.flat();
}

StackedIterate penalized_reference_solution(const PenalizedProblem& prob, double tol,
                                            Index max_iters) {
  require_consistent(prob);
  const Index n = prob.topo.n;
  const Index p = prob.local_dim();

  bool quadratic = true;
  for (const auto& obj : prob.objectives)
    if (!obj->constant_hessian()) quadratic = false;

  if (quadratic) {
    // grad F(y) = (I - Z + alpha G) y + alpha h0 = 0 with h0 the local
    // gradients at zero, so one dense SPD solve suffices.
    StackedIterate zero(n, p);
    Matrix h = dense_hessian(prob, zero);
    Vector rhs(n * p);
    for (Index i = 0; i < n; ++i)
      rhs.segment(i * p, p) = -prob.alpha * prob.objectives[i]->gradient(Vector::Zero(p));
    StackedIterate out(n, p);
    out.flat() = Eigen::LLT<Matrix>(h).solve(rhs);
    return out;
  }

  SolverConfig cfg;
  cfg.method = Method::NetworkNewton;
  cfg.K = 8;  // deep series for a fast reference, cost is off the hot path
  cfg.epsilon = 1.0;
  cfg.tol = tol;
  cfg.max_iters = max_iters;
  SolverTrace trace = run_solver(prob, StackedIterate(n, p), cfg);
  if (trace.status != RunStatus::Converged)
    throw std::runtime_error("reference solution: solver stopped before reaching tolerance");
  return trace.y_final;
}

}  // namespace nn
