#pragma once

#include <Eigen/Dense>

namespace nn {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Step rules the simulator supports: penalized gradient diffusion, or the
/// truncated-series second-order correction with K refinement exchanges.
enum class Method { Dgd, NetworkNewton };

}  // namespace nn
