#pragma once

#include <vector>

#include "nn/types.hpp"

namespace nn {

/// Undirected communication graph given by per-node neighbor sets.
/// Neighbor lists are sorted and never contain the node itself.
struct Topology {
  Index n = 0;
  std::vector<std::vector<Index>> neighbors;
};

bool is_symmetric(const Topology& topo);
bool is_connected(const Topology& topo);

/// Common degree if the graph is regular, -1 otherwise.
int regular_degree(const Topology& topo);

/// Total number of directed edges, sum_i |N_i|.
std::int64_t sum_degrees(const Topology& topo);

/// Throws std::invalid_argument on malformed neighbor sets (out-of-range or
/// duplicate entries, self-loops, asymmetry) or a disconnected graph.
void require_valid(const Topology& topo);

/// Cycle over n >= 3 nodes where each node is adjacent to the d/2 nearest
/// nodes in each direction. Requires d even and 2 <= d <= n-1, which also
/// guarantees connectivity.
Topology build_d_regular_cycle(Index n, int d);

/// Symmetric consensus weights over a graph. w(i,j) must be nonzero only for
/// j == i or j adjacent to i; delta and Delta bracket the diagonal entries.
struct WeightMatrix {
  Matrix w;
  double delta = 0.0;
  double Delta = 0.0;
};

/// Weights w_ii = 1/2 + 1/(2(d+1)) and w_ij = 1/(2(d+1)) on edges, symmetric
/// and row stochastic for any d-regular graph. Requires topo d-regular.
WeightMatrix build_cycle_weights(const Topology& topo, int d);

/// Measured residuals of every weight-matrix invariant. Checks never throw;
/// a failed invariant is reported through the corresponding flag.
struct WeightValidationReport {
  double max_asymmetry = 0.0;          // max |w_ij - w_ji|
  double max_row_sum_deviation = 0.0;  // max |sum_j w_ij - 1|
  double max_sparsity_violation = 0.0; // largest |w_ij| off the graph pattern
  double min_diagonal = 0.0;
  double max_diagonal = 0.0;
  double second_eigenvalue_modulus = 0.0;  // largest |eig| after removing one 1
  int eigenvalue_one_multiplicity = 0;

  bool symmetric_ok = false;
  bool row_stochastic_ok = false;      // tolerance 1e-12
  bool sparsity_ok = false;
  bool diagonal_ok = false;            // 0 <= delta <= w_ii <= Delta < 1
  bool null_space_ok = false;          // eigenvalue 1 simple and |mu_2| < 1

  bool all_ok() const {
    return symmetric_ok && row_stochastic_ok && sparsity_ok && diagonal_ok &&
           null_space_ok;
  }
};

/// Dense numerical validation of a weight matrix against its topology,
/// including the spectral checks a construction-time traversal skips.
WeightValidationReport validate_weights(const WeightMatrix& wm, const Topology& topo);

}  // namespace nn
