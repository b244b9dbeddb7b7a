#pragma once

// Shared builders for small test instances. Dense comparisons against the
// blockwise production path live in the individual test files.

#include <memory>

#include "nn/objectives.hpp"
#include "nn/penalty.hpp"
#include "nn/rng.hpp"
#include "nn/topology.hpp"

namespace nn_test {

inline nn::PenalizedProblem quadratic_cycle_problem(nn::Index n, int d, nn::Index p, int xi,
                                                    double alpha, std::uint64_t seed) {
  nn::PenalizedProblem prob;
  prob.topo = nn::build_d_regular_cycle(n, d);
  prob.weights = nn::build_cycle_weights(prob.topo, d);
  prob.objectives = nn::generate_quadratic(n, {p, xi, seed});
  prob.alpha = alpha;
  return prob;
}

inline nn::PenalizedProblem logistic_cycle_problem(nn::Index n, int d, nn::Index p,
                                                   nn::Index q, double lambda, double alpha,
                                                   std::uint64_t seed) {
  nn::PenalizedProblem prob;
  prob.topo = nn::build_d_regular_cycle(n, d);
  prob.weights = nn::build_cycle_weights(prob.topo, d);
  nn::LogisticDataConfig cfg;
  cfg.p = p;
  cfg.samples_per_node = q;
  cfg.mu = 1.0;
  cfg.sigma_plus = 0.5;
  cfg.sigma_minus = 0.5;
  cfg.lambda = lambda;
  cfg.seed = seed;
  prob.objectives = nn::generate_logistic(n, cfg);
  prob.alpha = alpha;
  return prob;
}

/// Quadratics sharing the minimizer x_hat: f_i(x) = (x - x_hat)' A_i (x - x_hat)/2 + const.
inline nn::ObjectiveList quadratics_with_common_minimizer(nn::Index n, const nn::Vector& x_hat,
                                                          std::uint64_t seed) {
  nn::Rng rng(seed);
  nn::ObjectiveList objs;
  for (nn::Index i = 0; i < n; ++i) {
    nn::Vector a(x_hat.size());
    for (nn::Index j = 0; j < x_hat.size(); ++j) a(j) = rng.uniform(0.5, 2.0);
    objs.push_back(std::make_shared<nn::QuadraticObjective>(a, (-a.cwiseProduct(x_hat)).eval()));
  }
  return objs;
}

inline nn::StackedIterate random_iterate(nn::Index n, nn::Index p, nn::Rng& rng,
                                         double scale = 1.0) {
  nn::StackedIterate y(n, p);
  for (nn::Index i = 0; i < n * p; ++i) y.flat()(i) = rng.uniform(-scale, scale);
  return y;
}

}  // namespace nn_test
