#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nn/adaptive.hpp"
#include "nn/objectives.hpp"
#include "nn/solvers.hpp"
#include "nn/trace_io.hpp"
#include "nn/types.hpp"

namespace nn {

enum class Scenario {
  QuadraticFixed,
  QuadraticHistogram,
  AnnSweep,
  LogisticSeparable,
  LogisticNonseparable,
};

std::string scenario_name(Scenario scenario);
Scenario parse_scenario(const std::string& name);

/// Union of every scenario's parameters. default_config() fills the values
/// each scenario is defined with; a config file then overrides explicitly.
struct ExperimentConfig {
  Scenario scenario = Scenario::QuadraticFixed;
  std::uint64_t seed = 1;

  Index n = 100;
  int d = 4;

  Index p = 4;
  int xi = 2;

  double alpha = 1e-2;
  double epsilon = 1.0;
  double tol = 1e-10;
  Index max_iters = 1500;
  std::vector<int> k_list = {0, 1, 2};

  // histogram study
  Index realizations = 100;
  double target_error = 1e-2;

  // adaptive cascade sweep. The reporting target must sit above the error
  // floor the absolute stage tolerance leaves in the slow network modes
  // (about 1e-2 at n=100, d=4), or no cascade can ever reach it.
  std::vector<double> alpha0_list = {1e-1, 1e-2};
  double eta = 0.1;
  double stage_tol = 1e-3;
  int outer_rounds = 3;
  Index max_iters_per_stage = 10000;
  double ann_target_error = 1e-1;

  // logistic data
  Index q_per_node = 50;
  double mu = 3.0;
  double sigma_plus = 1.0;
  double sigma_minus = 1.0;
  double lambda = 1e-4;

  /// Emit the rate-bound diagnostic CSV next to each second-order trace.
  /// On by default only where the reference solve is closed form.
  bool emit_rate_check = true;
};

ExperimentConfig default_config(Scenario scenario);

/// Reads a flat key-value document; `scenario` selects the defaults, every
/// other key overrides one field. Unknown keys and invalid values throw
/// std::invalid_argument.
ExperimentConfig load_config(std::istream& in);

/// Full resolved snapshot, written next to every run's outputs.
void write_resolved_config(std::ostream& out, const ExperimentConfig& cfg);

struct MethodRun {
  Method method = Method::Dgd;
  int K = 0;
  SolverTrace trace;
};

/// One shared quadratic instance, all methods from the same start.
/// Writes <method>.csv per method, rate-check CSVs when enabled, and the
/// resolved config. An empty out_dir skips all file output.
struct FixedQuadraticResult {
  Vector x_star;
  std::vector<MethodRun> runs;
};
FixedQuadraticResult run_fixed_quadratic(const ExperimentConfig& cfg,
                                         const std::string& out_dir);

/// Independent random instances; per-realization seed is seed + index, the
/// graph degree is drawn uniformly from {2, 4, 6, 8, 10}, and every method
/// runs until the relative error crosses target_error (else censored).
/// Exchange counts use the per-neighbor-pair convention: t for DGD,
/// (K+1) t for the second-order method.
struct HistogramRow {
  Index realization = 0;
  std::uint64_t seed = 0;
  int d = 0;
  Method method = Method::Dgd;
  int K = 0;
  bool reached = false;
  Index iters = 0;
  std::int64_t exchanges = 0;
};
struct HistogramSummary {
  Method method = Method::Dgd;
  int K = 0;
  Index reached_count = 0;
  Index censored_count = 0;
  double mean_iters = 0.0;
  double mean_exchanges = 0.0;
  double median_exchanges = 0.0;
};
struct HistogramResult {
  std::vector<HistogramRow> rows;
  std::vector<HistogramSummary> summary;  // over realizations all methods reached
};
HistogramResult run_histogram(const ExperimentConfig& cfg, const std::string& out_dir);

/// Adaptive cascades for DGD and each K, for every alpha0 in the list.
struct AnnRunResult {
  Method method = Method::Dgd;
  int K = 0;
  double alpha0 = 0.0;
  AnnTrace trace;
  bool reached_target = false;
  Index iters_to_target = 0;
};
struct AnnSweepResult {
  Vector x_star;
  std::vector<AnnRunResult> runs;
};
AnnSweepResult run_ann_sweep(const ExperimentConfig& cfg, const std::string& out_dir);

/// Shared logistic instance, fixed iteration budget, objective-value traces.
struct LogisticResult {
  std::vector<MethodRun> runs;
};
LogisticResult run_logistic(const ExperimentConfig& cfg, const std::string& out_dir);

/// First trace index whose relative error is below target, or -1.
Index iterations_to_error(const std::vector<IterationRecord>& records, double target);

}  // namespace nn
