#pragma once

#include <cstdint>
#include <vector>

#include "nn/penalty.hpp"
#include "nn/topology.hpp"
#include "nn/types.hpp"

namespace nn {

/// Mean squared distance to a reference point, relative to its norm:
///   (1/n) sum_i ||x_i - x_star||^2 / ||x_star||^2.
/// Rejects a zero reference.
double relative_error(const StackedIterate& y, const Vector& x_star);

/// Closed-form cumulative directed vector sends after t iterations:
/// t * sum_i |N_i| for DGD, (K+1) times that for the second-order method,
/// whose iterations also exchange K direction refinements. The
/// per-neighbor-pair exchange count is this divided by sum_i |N_i|.
std::int64_t comm_cost(Method method, int K, Index t, const Topology& topo);

/// Running tally of directed vector sends, fed by the solver as exchanges
/// actually happen. Matching the closed form above is a tested invariant,
/// which guards the direction recursion against off-by-one depth errors.
class CommLedger {
 public:
  void add_exchange_round(const Topology& topo) { total_ += sum_degrees(topo); }
  std::int64_t total() const { return total_; }

 private:
  std::int64_t total_ = 0;
};

}  // namespace nn
