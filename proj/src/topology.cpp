#include "nn/topology.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nn {

namespace {
const double kRowSumTol = 1e-12;
const double kEigTol = 1e-9;
}  // namespace

bool is_symmetric(const Topology& topo) {
  for (Index i = 0; i < topo.n; ++i) {
    for (Index j : topo.neighbors[i]) {
      const auto& nj = topo.neighbors[j];
      if (!std::binary_search(nj.begin(), nj.end(), i)) return false;
    }
  }
  return true;
}

bool is_connected(const Topology& topo) {
  if (topo.n == 0) return false;
  std::vector<char> seen(topo.n, 0);
  std::vector<Index> stack = {0};
  seen[0] = 1;
  Index count = 1;
  while (!stack.empty()) {
    Index i = stack.back();
    stack.pop_back();
    for (Index j : topo.neighbors[i]) {
      if (!seen[j]) {
        seen[j] = 1;
        ++count;
        stack.push_back(j);
      }
    }
  }
  return count == topo.n;
}

int regular_degree(const Topology& topo) {
  if (topo.n == 0) return -1;
  auto d = topo.neighbors[0].size();
  for (const auto& nbrs : topo.neighbors)
    if (nbrs.size() != d) return -1;
  return static_cast<int>(d);
}

std::int64_t sum_degrees(const Topology& topo) {
  std::int64_t total = 0;
  for (const auto& nbrs : topo.neighbors) total += static_cast<std::int64_t>(nbrs.size());
  return total;
}

void require_valid(const Topology& topo) {
  if (topo.n <= 0) throw std::invalid_argument("topology: n must be positive");
  if (static_cast<Index>(topo.neighbors.size()) != topo.n)
    throw std::invalid_argument("topology: neighbor list count != n");
  for (Index i = 0; i < topo.n; ++i) {
    const auto& nbrs = topo.neighbors[i];
    if (!std::is_sorted(nbrs.begin(), nbrs.end()))
      throw std::invalid_argument("topology: neighbor lists must be sorted");
    if (std::adjacent_find(nbrs.begin(), nbrs.end()) != nbrs.end())
      throw std::invalid_argument("topology: duplicate neighbor entry");
    for (Index j : nbrs) {
      if (j < 0 || j >= topo.n) throw std::invalid_argument("topology: neighbor index out of range");
      if (j == i) throw std::invalid_argument("topology: self-loop");
    }
  }
  if (!is_symmetric(topo)) throw std::invalid_argument("topology: adjacency not symmetric");
  if (!is_connected(topo)) throw std::invalid_argument("topology: graph not connected");
}

Topology build_d_regular_cycle(Index n, int d) {
  if (n < 3) throw std::invalid_argument("d-regular cycle: need n >= 3");
  if (d % 2 != 0) throw std::invalid_argument("d-regular cycle: d must be even");
  if (d < 2 || d > n - 1)
    throw std::invalid_argument("d-regular cycle: need 2 <= d <= n-1");

  Topology topo;
  topo.n = n;
  topo.neighbors.resize(n);
  for (Index i = 0; i < n; ++i) {
    auto& nbrs = topo.neighbors[i];
    nbrs.reserve(d);
    for (Index off = 1; off <= d / 2; ++off) {
      nbrs.push_back((i + off) % n);
      nbrs.push_back((i - off + n) % n);
    }
    std::sort(nbrs.begin(), nbrs.end());
  }
  require_valid(topo);
  return topo;
}

WeightMatrix build_cycle_weights(const Topology& topo, int d) {
  require_valid(topo);
  if (regular_degree(topo) != d)
    throw std::invalid_argument("cycle weights: topology is not d-regular for the given d");

  const double off = 1.0 / (2.0 * (d + 1));
  const double diag = 0.5 + off;

  WeightMatrix wm;
  wm.w = Matrix::Zero(topo.n, topo.n);
  for (Index i = 0; i < topo.n; ++i) {
    wm.w(i, i) = diag;
    for (Index j : topo.neighbors[i]) wm.w(i, j) = off;
  }
  wm.delta = diag;
  wm.Delta = diag;
  return wm;
}

WeightValidationReport validate_weights(const WeightMatrix& wm, const Topology& topo) {
  const Index n = topo.n;
  WeightValidationReport rep;
  if (wm.w.rows() != n || wm.w.cols() != n)
    throw std::invalid_argument("validate_weights: weight matrix shape != n x n");

  rep.max_asymmetry = (wm.w - wm.w.transpose()).cwiseAbs().maxCoeff();
  rep.max_row_sum_deviation = (wm.w.rowwise().sum().array() - 1.0).abs().maxCoeff();

  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto& nbrs = topo.neighbors[i];
      bool edge = std::binary_search(nbrs.begin(), nbrs.end(), j);
      if (!edge) rep.max_sparsity_violation = std::max(rep.max_sparsity_violation, std::abs(wm.w(i, j)));
    }
  }

  rep.min_diagonal = wm.w.diagonal().minCoeff();
  rep.max_diagonal = wm.w.diagonal().maxCoeff();

  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (wm.w + wm.w.transpose()));
  const Vector& evs = es.eigenvalues();
  rep.eigenvalue_one_multiplicity = 0;
  rep.second_eigenvalue_modulus = 0.0;
  bool skipped_one = false;
  for (Index k = n - 1; k >= 0; --k) {  // ascending order; walk from the top
    double ev = evs(k);
    if (std::abs(ev - 1.0) < kEigTol) ++rep.eigenvalue_one_multiplicity;
    if (!skipped_one && std::abs(ev - 1.0) < kEigTol) {
      skipped_one = true;
      continue;
    }
    rep.second_eigenvalue_modulus = std::max(rep.second_eigenvalue_modulus, std::abs(ev));
  }

  rep.symmetric_ok = rep.max_asymmetry == 0.0;
  rep.row_stochastic_ok = rep.max_row_sum_deviation <= kRowSumTol;
  rep.sparsity_ok = rep.max_sparsity_violation == 0.0;
  rep.diagonal_ok = wm.delta >= 0.0 && rep.min_diagonal >= wm.delta &&
                    rep.max_diagonal <= wm.Delta && wm.Delta < 1.0;
  rep.null_space_ok = rep.eigenvalue_one_multiplicity == 1 &&
                      rep.second_eigenvalue_modulus < 1.0 - kEigTol;
  return rep;
}

}  // namespace nn
