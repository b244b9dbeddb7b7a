#include "nn/theory.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace nn {

namespace {
const double kSlack = 1e-9;  // absolute slack on every report-only bound check
}

double TheoryConstants::eta(Index t) const {
  double base = 1.0 - epsilon + epsilon * std::pow(rho, K + 1);
  if (Gamma1 == 0.0) return base;
  return base * (1.0 + Gamma1 * std::pow(1.0 - zeta, (static_cast<double>(t) - 1.0) / 4.0));
}

TheoryConstants compute_constants(double delta, double Delta, double alpha, double m,
                                  double M, double L, double epsilon, int K, double f0_gap) {
  if (!(delta >= 0.0 && delta <= Delta && Delta < 1.0))
    throw std::invalid_argument("constants: need 0 <= delta <= Delta < 1");
  if (alpha <= 0.0) throw std::invalid_argument("constants: alpha must be positive");
  if (!(m > 0.0 && M >= m)) throw std::invalid_argument("constants: need 0 < m <= M");
  if (L < 0.0) throw std::invalid_argument("constants: L must be >= 0");
  if (epsilon <= 0.0 || epsilon > 1.0)
    throw std::invalid_argument("constants: epsilon must lie in (0, 1]");
  if (K < 0) throw std::invalid_argument("constants: K must be >= 0");
  if (f0_gap < 0.0) throw std::invalid_argument("constants: objective gap must be >= 0");

  TheoryConstants c;
  c.delta = delta;
  c.Delta = Delta;
  c.alpha = alpha;
  c.m = m;
  c.M = M;
  c.L = L;
  c.epsilon = epsilon;
  c.K = K;
  c.f0_gap = f0_gap;

  const double small_diag = 2.0 * (1.0 - delta);   // largest 2(1 - w_ii)
  const double large_diag = 2.0 * (1.0 - Delta);   // smallest 2(1 - w_ii)
  c.rho = small_diag / (small_diag + alpha * m);
  c.lambda = 1.0 / (small_diag + alpha * M);
  c.Lambda = (1.0 - std::pow(c.rho, K + 1)) /
             ((1.0 - c.rho) * (large_diag + alpha * m));

  const double sqrt_gap = std::sqrt(f0_gap);
  c.zeta = (2.0 - epsilon) * epsilon * alpha * m * c.lambda -
           alpha * std::pow(epsilon, 3.0) * L * std::pow(c.Lambda, 3.0) * sqrt_gap /
               (6.0 * std::pow(c.lambda, 1.5));
  c.zeta_valid = c.zeta > 0.0 && c.zeta < 1.0;

  c.Gamma1 = std::sqrt(alpha * epsilon * L * c.Lambda) * std::pow(f0_gap, 0.25) /
             (std::pow(c.lambda, 0.75) * (large_diag + alpha * m));
  c.Gamma2 = alpha * L * c.Lambda * c.Lambda /
             (2.0 * c.lambda * std::sqrt(large_diag + alpha * m));

  // eta(t) decays monotonically toward its base when zeta is valid, so the
  // first crossing below 1 is found by exponential then binary search. The
  // log-based closed form is avoided on purpose: searching the monotone
  // sequence is cheap and immune to edge cases at zeta or Gamma1 near zero.
  double base = 1.0 - epsilon + epsilon * std::pow(c.rho, K + 1);
  if (base < 1.0 && (c.Gamma1 == 0.0 || c.zeta_valid)) {
    if (c.eta(1) < 1.0) {
      c.t0 = 1;
    } else if (c.zeta_valid) {
      Index hi = 1;
      const Index cap = Index(1) << 50;
      while (hi < cap && !(c.eta(hi) < 1.0)) hi *= 2;
      if (c.eta(hi) < 1.0) {
        Index lo = hi / 2;  // eta(lo) >= 1 > eta(hi)
        while (lo + 1 < hi) {
          Index mid = lo + (hi - lo) / 2;
          (c.eta(mid) < 1.0 ? hi : lo) = mid;
        }
        c.t0 = hi;
      }
    }
  }
  return c;
}

PhaseInterval quadratic_phase_interval(const TheoryConstants& constants, Index t) {
  PhaseInterval out;
  double eta_t = constants.eta(t);
  if (!(eta_t < 1.0) || eta_t < 0.0) return out;  // Kind::Empty
  if (constants.Gamma2 == 0.0) {
    out.kind = PhaseInterval::Kind::Unbounded;
    out.lower = 0.0;
    out.upper = std::numeric_limits<double>::infinity();
    return out;
  }
  double root = std::sqrt(eta_t);
  double denom = constants.epsilon * constants.epsilon * constants.Gamma2;
  out.kind = PhaseInterval::Kind::Bounded;
  out.lower = root * (1.0 - root) / denom;
  out.upper = (1.0 - root) / denom;
  return out;
}

RateCheckReport check_rate_bound(const std::vector<IterationRecord>& records,
                                 const TheoryConstants& constants) {
  RateCheckReport report;
  if (constants.Gamma1 != 0.0 && !constants.zeta_valid) return report;  // not evaluated
  report.evaluated = true;
  if (records.size() < 3) return report;

  // records[0] holds the initial state, whose weighted norm is taken at the
  // same iterate rather than the previous one; the recursion starts at t = 1.
  for (Index t = 1; t + 1 < static_cast<Index>(records.size()); ++t) {
    double r_t = records[t].weighted_grad_norm;
    double r_next = records[t + 1].weighted_grad_norm;
    RateCheckRow row;
    row.t = t;
    row.lhs = r_next;
    row.rhs_linear = constants.eta(t) * r_t;
    row.rhs_quadratic = constants.epsilon * constants.epsilon * constants.Gamma2 * r_t * r_t;
    PhaseInterval phase = quadratic_phase_interval(constants, t);
    row.in_quadratic_interval =
        phase.kind == PhaseInterval::Kind::Unbounded ||
        (phase.kind == PhaseInterval::Kind::Bounded && r_t >= phase.lower && r_t < phase.upper);
    row.violated = row.lhs > row.rhs_linear + row.rhs_quadratic + kSlack;
    if (row.violated) ++report.violations;
    report.rows.push_back(row);
  }
  return report;
}

void write_rate_report_csv(std::ostream& out, const RateCheckReport& report) {
  out << "t,lhs,rhs_linear,rhs_quadratic,in_quadratic_interval,violated\n";
  char buf[96];
  for (const auto& row : report.rows) {
    std::snprintf(buf, sizeof(buf), "%lld,%.17g,%.17g,%.17g,%d,%d",
                  static_cast<long long>(row.t), row.lhs, row.rhs_linear, row.rhs_quadratic,
                  row.in_quadratic_interval ? 1 : 0, row.violated ? 1 : 0);
    out << buf << '\n';
  }
}

TaylorRemainder check_taylor_remainder(const PenalizedProblem& prob, const StackedIterate& y0,
                                       const StackedIterate& y1) {
  require_consistent(prob);
  if (y0.nodes() != prob.topo.n || y1.nodes() != prob.topo.n ||
      y0.local_dim() != prob.local_dim() || y1.local_dim() != prob.local_dim())
    throw std::invalid_argument("taylor remainder: iterate shape mismatch");

  StackedIterate g0 = stacked_gradient(prob, y0);
  StackedIterate g1 = stacked_gradient(prob, y1);
  StackedIterate dy = y1;
  dy.flat() -= y0.flat();

  // H(y0) dy applied blockwise: (I - Z) dy + alpha hess f_i(x_i) dy_i.
  const Matrix& w = prob.weights.w;
  StackedIterate h_dy(prob.topo.n, prob.local_dim());
  for (Index i = 0; i < prob.topo.n; ++i) {
    auto out = h_dy.block(i);
    out = (1.0 - w(i, i)) * dy.block(i);
    for (Index j : prob.topo.neighbors[i]) out -= w(i, j) * dy.block(j);
    out += prob.alpha * (prob.objectives[i]->hessian(y0.block(i)) * dy.block(i));
  }

  TaylorRemainder result;
  result.remainder = (g1.flat() - g0.flat() - h_dy.flat()).norm();
  result.bound =
      0.5 * prob.alpha * ensemble_curvature(prob.objectives).L * dy.flat().squaredNorm();
  result.ok = result.remainder <= result.bound + kSlack;
  return result;
}

}  // namespace nn
