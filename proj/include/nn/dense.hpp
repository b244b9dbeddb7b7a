#pragma once

#include "nn/penalty.hpp"
#include "nn/types.hpp"

namespace nn {

/// Dense assembly of the blockwise operators, for diagnostics and reference
/// solves only. Solver iterations never touch these: materializing the
/// np x np matrices defeats the distributed structure.

/// Kronecker lift W (x) I_p.
Matrix dense_extended_weights(const WeightMatrix& wm, Index p);

/// Block diagonal of the local hessians at y, scaled by alpha.
Matrix dense_local_hessians(const PenalizedProblem& prob, const StackedIterate& y);

/// H(y) = I - Z + alpha G(y).
Matrix dense_hessian(const PenalizedProblem& prob, const StackedIterate& y);

/// Splitting pieces: D = alpha G + 2 (I - Z_d), B = I - 2 Z_d + Z, where Z_d
/// keeps only the diagonal blocks of Z.
Matrix dense_d_matrix(const PenalizedProblem& prob, const StackedIterate& y);
Matrix dense_b_matrix(const PenalizedProblem& prob);

/// Truncated-series approximation of H^{-1}:
///   D^{-1/2} sum_{k=0}^K (D^{-1/2} B D^{-1/2})^k D^{-1/2}.
Matrix dense_approx_hessian_inverse(const Matrix& d, const Matrix& b, int K);

Vector dense_gradient(const PenalizedProblem& prob, const StackedIterate& y);

/// Minimizer of the penalized objective to the given gradient tolerance.
/// Quadratic ensembles are solved in closed form through the dense normal
/// equations; anything else runs the truncated-series solver with a deep
/// series until every local gradient is below tol.
StackedIterate penalized_reference_solution(const PenalizedProblem& prob, double tol = 1e-12,
                                            Index max_iters = 200000);

}  // namespace nn
