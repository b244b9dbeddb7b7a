#include "nn/objectives.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace nn {

namespace {

// log(1 + exp(z)) without overflow for large |z|.
double log_one_exp(double z) {
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

// 1 / (1 + exp(-z)), saturating smoothly at the tails.
double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

QuadraticObjective::QuadraticObjective(Vector diag_a, Vector b)
    : a_(std::move(diag_a)), b_(std::move(b)) {
  if (a_.size() != b_.size()) throw std::invalid_argument("quadratic: diag and b size mismatch");
  if (a_.size() == 0) throw std::invalid_argument("quadratic: empty dimension");
  if (a_.minCoeff() <= 0.0) throw std::invalid_argument("quadratic: diagonal must be positive");
}

double QuadraticObjective::value(const Vector& x) const {
  return 0.5 * x.dot(a_.cwiseProduct(x)) + b_.dot(x);
}

Vector QuadraticObjective::gradient(const Vector& x) const {
  return a_.cwiseProduct(x) + b_;
}

Matrix QuadraticObjective::hessian(const Vector&) const {
  return Matrix(a_.asDiagonal());
}

CurvatureBounds QuadraticObjective::curvature() const {
  return {a_.minCoeff(), a_.maxCoeff(), 0.0};
}

LogisticObjective::LogisticObjective(Matrix features, Vector labels, double lambda,
                                     Index network_size)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      lambda_(lambda),
      network_size_(network_size) {
  if (features_.rows() != labels_.size())
    throw std::invalid_argument("logistic: sample count mismatch");
  if (features_.cols() == 0) throw std::invalid_argument("logistic: empty dimension");
  if (lambda_ <= 0.0) throw std::invalid_argument("logistic: lambda must be positive");
  if (network_size_ <= 0) throw std::invalid_argument("logistic: network size must be positive");
  for (Index l = 0; l < labels_.size(); ++l)
    if (labels_(l) != 1.0 && labels_(l) != -1.0)
      throw std::invalid_argument("logistic: labels must be +1 or -1");

  // M adds the worst-case 1/4 curvature of each sample term; L uses the
  // global 1/(6 sqrt(3)) bound on the third derivative of the logistic loss.
  bounds_.m = lambda_ / static_cast<double>(network_size_);
  bounds_.M = bounds_.m;
  bounds_.L = 0.0;
  const double third = 1.0 / (6.0 * std::sqrt(3.0));
  for (Index l = 0; l < features_.rows(); ++l) {
    double nrm = features_.row(l).norm();
    bounds_.M += 0.25 * nrm * nrm;
    bounds_.L += third * nrm * nrm * nrm;
  }
}

double LogisticObjective::value(const Vector& x) const {
  double reg = 0.5 * lambda_ / static_cast<double>(network_size_) * x.squaredNorm();
  double loss = 0.0;
  for (Index l = 0; l < features_.rows(); ++l)
    loss += log_one_exp(-labels_(l) * features_.row(l).dot(x));
  return reg + loss;
}

Vector LogisticObjective::gradient(const Vector& x) const {
  Vector g = lambda_ / static_cast<double>(network_size_) * x;
  for (Index l = 0; l < features_.rows(); ++l) {
    double z = labels_(l) * features_.row(l).dot(x);
    g -= labels_(l) * sigmoid(-z) * features_.row(l).transpose();
  }
  return g;
}

Matrix LogisticObjective::hessian(const Vector& x) const {
  Matrix h = lambda_ / static_cast<double>(network_size_) *
             Matrix::Identity(dim(), dim());
  for (Index l = 0; l < features_.rows(); ++l) {
    double z = labels_(l) * features_.row(l).dot(x);
    double s = sigmoid(-z);
    h += s * (1.0 - s) * features_.row(l).transpose() * features_.row(l);
  }
  return h;
}

CurvatureBounds LogisticObjective::curvature() const { return bounds_; }

ObjectiveList generate_quadratic(Index n, const QuadraticEnsembleConfig& cfg) {
  Rng rng(cfg.seed);
  return generate_quadratic(n, cfg, rng);
}

ObjectiveList generate_quadratic(Index n, const QuadraticEnsembleConfig& cfg, Rng& rng) {
  if (n <= 0) throw std::invalid_argument("quadratic ensemble: n must be positive");
  if (cfg.p <= 0 || cfg.p % 2 != 0)
    throw std::invalid_argument("quadratic ensemble: p must be positive and even");
  if (cfg.xi < 0) throw std::invalid_argument("quadratic ensemble: xi must be >= 0");

  ObjectiveList objs;
  objs.reserve(n);
  const auto levels = static_cast<std::uint64_t>(cfg.xi) + 1;
  for (Index i = 0; i < n; ++i) {
    Vector a(cfg.p), b(cfg.p);
    for (Index j = 0; j < cfg.p / 2; ++j)
      a(j) = std::pow(10.0, -static_cast<double>(rng.uniform_index(levels)));
    for (Index j = cfg.p / 2; j < cfg.p; ++j)
      a(j) = std::pow(10.0, static_cast<double>(rng.uniform_index(levels)));
    for (Index j = 0; j < cfg.p; ++j) b(j) = rng.uniform();
    objs.push_back(std::make_shared<QuadraticObjective>(std::move(a), std::move(b)));
  }
  return objs;
}

Vector quadratic_optimum(const ObjectiveList& objectives) {
  if (objectives.empty()) throw std::invalid_argument("quadratic optimum: empty ensemble");
  Index p = objectives[0]->dim();
  Vector a_sum = Vector::Zero(p);
  Vector b_sum = Vector::Zero(p);
  for (const auto& obj : objectives) {
    auto quad = std::dynamic_pointer_cast<const QuadraticObjective>(obj);
    if (!quad) throw std::invalid_argument("quadratic optimum: non-quadratic objective");
    if (quad->dim() != p) throw std::invalid_argument("quadratic optimum: dimension mismatch");
    a_sum += quad->diagonal();
    b_sum += quad->linear();
  }
  return -b_sum.cwiseQuotient(a_sum);
}

ObjectiveList generate_logistic(Index n, const LogisticDataConfig& cfg) {
  Rng rng(cfg.seed);
  return generate_logistic(n, cfg, rng);
}

ObjectiveList generate_logistic(Index n, const LogisticDataConfig& cfg, Rng& rng) {
  if (n <= 0) throw std::invalid_argument("logistic ensemble: n must be positive");
  if (cfg.p <= 0) throw std::invalid_argument("logistic ensemble: p must be positive");
  if (cfg.samples_per_node <= 0)
    throw std::invalid_argument("logistic ensemble: samples_per_node must be positive");
  if (cfg.sigma_plus <= 0.0 || cfg.sigma_minus <= 0.0)
    throw std::invalid_argument("logistic ensemble: sigmas must be positive");
  if (cfg.lambda <= 0.0) throw std::invalid_argument("logistic ensemble: lambda must be positive");

  ObjectiveList objs;
  objs.reserve(n);
  for (Index i = 0; i < n; ++i) {
    Matrix u(cfg.samples_per_node, cfg.p);
    Vector v(cfg.samples_per_node);
    for (Index l = 0; l < cfg.samples_per_node; ++l) {
      bool positive = rng.uniform() < 0.5;
      v(l) = positive ? 1.0 : -1.0;
      double mean = positive ? cfg.mu : -cfg.mu;
      double sigma = positive ? cfg.sigma_plus : cfg.sigma_minus;
      for (Index j = 0; j < cfg.p; ++j) u(l, j) = mean + sigma * rng.normal();
    }
    objs.push_back(std::make_shared<LogisticObjective>(std::move(u), std::move(v),
                                                       cfg.lambda, n));
  }
  return objs;
}

CurvatureBounds ensemble_curvature(const ObjectiveList& objectives) {
  if (objectives.empty()) throw std::invalid_argument("ensemble curvature: empty ensemble");
  CurvatureBounds out = objectives[0]->curvature();
  for (const auto& obj : objectives) {
    CurvatureBounds c = obj->curvature();
    out.m = std::min(out.m, c.m);
    out.M = std::max(out.M, c.M);
    out.L = std::max(out.L, c.L);
  }
  return out;
}

double check_derivatives(const LocalObjective& obj, const Vector& x, double h) {
  if (h <= 0.0) throw std::invalid_argument("check_derivatives: h must be positive");
  if (x.size() != obj.dim()) throw std::invalid_argument("check_derivatives: dimension mismatch");
  const Index p = obj.dim();

  Vector g = obj.gradient(x);
  Vector g_fd(p);
  Matrix hess = obj.hessian(x);
  Matrix hess_fd(p, p);
  Vector xp = x, xm = x;
  for (Index j = 0; j < p; ++j) {
    xp(j) += h;
    xm(j) -= h;
    g_fd(j) = (obj.value(xp) - obj.value(xm)) / (2.0 * h);
    hess_fd.col(j) = (obj.gradient(xp) - obj.gradient(xm)) / (2.0 * h);
    xp(j) = x(j);
    xm(j) = x(j);
  }

  double grad_err = (g_fd - g).norm() / std::max(g.norm(), 1e-12);
  double hess_err = (hess_fd - hess).norm() / std::max(hess.norm(), 1e-12);
  return std::max(grad_err, hess_err);
}

void write_logistic_dataset(std::ostream& out, const ObjectiveList& objectives) {
  char buf[64];
  for (Index i = 0; i < static_cast<Index>(objectives.size()); ++i) {
    auto lo = std::dynamic_pointer_cast<const LogisticObjective>(objectives[i]);
    if (!lo) throw std::invalid_argument("dataset export: non-logistic objective");
    for (Index l = 0; l < lo->labels().size(); ++l) {
      out << i << ',' << static_cast<int>(lo->labels()(l));
      for (Index j = 0; j < lo->dim(); ++j) {
        std::snprintf(buf, sizeof(buf), "%.17g", lo->features()(l, j));
        out << ',' << buf;
      }
      out << '\n';
    }
  }
}

ObjectiveList read_logistic_dataset(std::istream& in, double lambda) {
  std::map<Index, std::pair<std::vector<double>, std::vector<Vector>>> per_node;
  std::string line;
  Index p = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string tok;
    std::vector<double> vals;
    while (std::getline(ss, tok, ',')) vals.push_back(std::strtod(tok.c_str(), nullptr));
    if (vals.size() < 3) throw std::invalid_argument("dataset import: short row");
    if (p < 0) p = static_cast<Index>(vals.size()) - 2;
    if (static_cast<Index>(vals.size()) - 2 != p)
      throw std::invalid_argument("dataset import: inconsistent feature count");
    auto node = static_cast<Index>(vals[0]);
    Vector feat(p);
    for (Index j = 0; j < p; ++j) feat(j) = vals[2 + j];
    per_node[node].first.push_back(vals[1]);
    per_node[node].second.push_back(std::move(feat));
  }
  if (per_node.empty()) throw std::invalid_argument("dataset import: empty stream");

  auto n = static_cast<Index>(per_node.rbegin()->first + 1);
  ObjectiveList objs(n);
  for (auto& [node, data] : per_node) {
    auto q = static_cast<Index>(data.first.size());
    Matrix u(q, p);
    Vector v(q);
    for (Index l = 0; l < q; ++l) {
      v(l) = data.first[l];
      u.row(l) = data.second[l].transpose();
    }
    objs[node] = std::make_shared<LogisticObjective>(std::move(u), std::move(v), lambda, n);
  }
  for (const auto& obj : objs)
    if (!obj) throw std::invalid_argument("dataset import: missing node rows");
  return objs;
}

}  // namespace nn
