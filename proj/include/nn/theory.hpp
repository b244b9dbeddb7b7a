#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "nn/penalty.hpp"
#include "nn/solvers.hpp"
#include "nn/types.hpp"

namespace nn {

/// Convergence constants of the truncated-series method on a penalized
/// problem with weight diagonal in [delta, Delta], curvature bounds (m, M, L),
/// step size epsilon, K refinements, and initial objective gap f0_gap.
///
///   rho    = 2(1 - delta) / (2(1 - delta) + alpha m)       series tail rate
///   lambda = 1 / (2(1 - delta) + alpha M)                  smallest eig of the series inverse
///   Lambda = (1 - rho^{K+1}) / ((1 - rho)(2(1 - Delta) + alpha m))   largest eig
///   zeta   = (2 - eps) eps alpha m lambda
///            - alpha eps^3 L Lambda^3 sqrt(f0_gap) / (6 lambda^{3/2})  linear rate 1 - zeta
///   Gamma1 = sqrt(alpha eps L Lambda) f0_gap^{1/4} / (lambda^{3/4} (2(1 - Delta) + alpha m))
///   Gamma2 = alpha L Lambda^2 / (2 lambda sqrt(2(1 - Delta) + alpha m))
///
/// The weighted gradient norms r_t = ||D_{t-1}^{-1/2} g_t|| then obey
///   r_{t+1} <= eta(t) r_t + eps^2 Gamma2 r_t^2,
/// with eta(t) = (1 - eps + eps rho^{K+1})(1 + Gamma1 (1 - zeta)^{(t-1)/4}).
struct TheoryConstants {
  double delta = 0.0, Delta = 0.0;
  double alpha = 0.0, m = 0.0, M = 0.0, L = 0.0;
  double epsilon = 1.0;
  int K = 0;
  double f0_gap = 0.0;

  double rho = 0.0, lambda = 0.0, Lambda = 0.0;
  double zeta = 0.0, Gamma1 = 0.0, Gamma2 = 0.0;
  /// zeta in (0, 1) is required for eta(t) to decay; reported, never thrown.
  bool zeta_valid = false;

  double eta(Index t) const;
  /// First t >= 1 with eta(t) < 1, empty when eta never drops below 1.
  std::optional<Index> t0;
};

TheoryConstants compute_constants(double delta, double Delta, double alpha, double m,
                                  double M, double L, double epsilon, int K, double f0_gap);

/// Range of r_t = ||D_{t-1}^{-1/2} g_t|| on which the recursion contracts
/// quadratically at iteration t:
///   [ sqrt(eta_t)(1 - sqrt(eta_t)) / (eps^2 Gamma2),  (1 - sqrt(eta_t)) / (eps^2 Gamma2) ).
/// Empty while eta(t) >= 1; unbounded when Gamma2 = 0 (quadratic costs).
struct PhaseInterval {
  enum class Kind { Empty, Unbounded, Bounded };
  Kind kind = Kind::Empty;
  double lower = 0.0;
  double upper = 0.0;
};

PhaseInterval quadratic_phase_interval(const TheoryConstants& constants, Index t);

struct RateCheckRow {
  Index t = 0;            // bound checked between records t and t+1
  double lhs = 0.0;       // r_{t+1}
  double rhs_linear = 0.0;
  double rhs_quadratic = 0.0;
  bool in_quadratic_interval = false;
  bool violated = false;  // lhs > rhs_linear + rhs_quadratic + 1e-9
};

struct RateCheckReport {
  bool evaluated = false;  // false when zeta is outside (0, 1)
  std::vector<RateCheckRow> rows;
  Index violations = 0;
};

/// Checks the analyzed recursion along a recorded trace. The check is
/// report-only with 1e-9 absolute slack; a finite-precision wobble should
/// surface in the report, not kill a run.
RateCheckReport check_rate_bound(const std::vector<IterationRecord>& records,
                                 const TheoryConstants& constants);

/// CSV columns: t, lhs, rhs_linear, rhs_quadratic, in_quadratic_interval, violated.
void write_rate_report_csv(std::ostream& out, const RateCheckReport& report);

struct TaylorRemainder {
  double remainder = 0.0;  // ||g(y1) - g(y0) - H(y0)(y1 - y0)||
  double bound = 0.0;      // alpha L / 2 * ||y1 - y0||^2
  bool ok = false;         // remainder <= bound + 1e-9
};

/// First-order Taylor remainder of the penalized gradient between two
/// iterates, against its Lipschitz bound. For quadratic costs both sides
/// vanish: the gradient is affine and L is zero.
TaylorRemainder check_taylor_remainder(const PenalizedProblem& prob, const StackedIterate& y0,
                                       const StackedIterate& y1);

}  // namespace nn
