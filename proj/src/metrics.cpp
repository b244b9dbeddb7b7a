#include "nn/metrics.hpp"

#include <stdexcept>

namespace nn {

double relative_error(const StackedIterate& y, const Vector& x_star) {
  if (x_star.size() != y.local_dim())
    throw std::invalid_argument("relative error: reference dimension mismatch");
  double ref = x_star.squaredNorm();
  if (ref == 0.0) throw std::invalid_argument("relative error: zero reference point");
  double total = 0.0;
  for (Index i = 0; i < y.nodes(); ++i) total += (y.block(i) - x_star).squaredNorm();
  return total / (static_cast<double>(y.nodes()) * ref);
}

std::int64_t comm_cost(Method method, int K, Index t, const Topology& topo) {
  if (t < 0) throw std::invalid_argument("comm cost: negative iteration count");
  if (K < 0) throw std::invalid_argument("comm cost: negative K");
  std::int64_t per_iter =
      sum_degrees(topo) * (method == Method::NetworkNewton ? K + 1 : 1);
  return per_iter * static_cast<std::int64_t>(t);
}

}  // namespace nn
