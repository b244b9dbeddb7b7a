#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

#include "nn/rng.hpp"
#include "nn/types.hpp"

namespace nn {

/// Curvature summary of a twice-differentiable local cost:
/// m I <= hessian <= M I everywhere, and the hessian is L-Lipschitz.
struct CurvatureBounds {
  double m = 0.0;
  double M = 0.0;
  double L = 0.0;
};

/// One node's private cost term.
class LocalObjective {
 public:
  virtual ~LocalObjective() = default;

  virtual Index dim() const = 0;
  virtual double value(const Vector& x) const = 0;
  virtual Vector gradient(const Vector& x) const = 0;
  virtual Matrix hessian(const Vector& x) const = 0;
  virtual CurvatureBounds curvature() const = 0;

  /// True when the hessian does not depend on x, so per-iterate
  /// factorizations can be reused.
  virtual bool constant_hessian() const { return false; }
};

using ObjectiveList = std::vector<std::shared_ptr<const LocalObjective>>;

/// f(x) = x' diag(a) x / 2 + b' x with a > 0 elementwise.
class QuadraticObjective : public LocalObjective {
 public:
  QuadraticObjective(Vector diag_a, Vector b);

  Index dim() const override { return a_.size(); }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  Matrix hessian(const Vector& x) const override;
  CurvatureBounds curvature() const override;
  bool constant_hessian() const override { return true; }

  const Vector& diagonal() const { return a_; }
  const Vector& linear() const { return b_; }

 private:
  Vector a_, b_;
};

/// f(x) = lambda ||x||^2 / (2 n) + sum_l log(1 + exp(-v_l u_l' x)) over the
/// node's own samples, where n is the network size carried by the ensemble.
class LogisticObjective : public LocalObjective {
 public:
  /// features: one sample per row; labels: entries in {-1, +1}.
  LogisticObjective(Matrix features, Vector labels, double lambda, Index network_size);

  Index dim() const override { return features_.cols(); }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  Matrix hessian(const Vector& x) const override;
  CurvatureBounds curvature() const override;

  const Matrix& features() const { return features_; }
  const Vector& labels() const { return labels_; }
  double lambda() const { return lambda_; }
  Index network_size() const { return network_size_; }

 private:
  Matrix features_;
  Vector labels_;
  double lambda_;
  Index network_size_;
  CurvatureBounds bounds_;
};

/// Ensemble of diagonal quadratics with controlled conditioning. Per node,
/// the first p/2 diagonal entries are drawn from {1, 10^-1, ..., 10^-xi} and
/// the rest from {1, 10^1, ..., 10^xi}; b is uniform on [0, 1]^p.
struct QuadraticEnsembleConfig {
  Index p = 4;
  int xi = 2;
  std::uint64_t seed = 0;
};

/// Draw order per node: p/2 exponent draws for the small block, p/2 for the
/// large block, then p uniforms for b. Requires p even and xi >= 0.
ObjectiveList generate_quadratic(Index n, const QuadraticEnsembleConfig& cfg);
ObjectiveList generate_quadratic(Index n, const QuadraticEnsembleConfig& cfg, Rng& rng);

/// Minimizer of sum_i f_i for a quadratic ensemble: -(sum A_i)^{-1} sum b_i.
Vector quadratic_optimum(const ObjectiveList& objectives);

/// Two-class Gaussian logistic data. Labels are equiprobable; features for
/// v = +1 are componentwise Normal(mu, sigma_plus), for v = -1
/// Normal(-mu, sigma_minus).
struct LogisticDataConfig {
  Index p = 10;
  Index samples_per_node = 50;
  double mu = 3.0;
  double sigma_plus = 1.0;
  double sigma_minus = 1.0;
  double lambda = 1e-4;
  std::uint64_t seed = 0;
};

/// Draw order per node and sample: one uniform for the label, then p normal
/// draws for the feature vector.
ObjectiveList generate_logistic(Index n, const LogisticDataConfig& cfg);
ObjectiveList generate_logistic(Index n, const LogisticDataConfig& cfg, Rng& rng);

/// Tightest curvature bounds valid for every node: min m, max M, max L.
CurvatureBounds ensemble_curvature(const ObjectiveList& objectives);

/// Worst relative error of central finite differences against the analytic
/// gradient and hessian at x, with step h > 0.
double check_derivatives(const LocalObjective& obj, const Vector& x, double h);

/// Dataset round-trip, one row per sample: node, label, then the features.
void write_logistic_dataset(std::ostream& out, const ObjectiveList& objectives);
ObjectiveList read_logistic_dataset(std::istream& in, double lambda);

}  // namespace nn
