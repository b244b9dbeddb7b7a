// Command-line front end for the decentralized solver simulator.
//
// Subcommands: run (single scenario from a config file), hist (histogram
// study), ann (adaptive cascade sweep), validate (weight, derivative, and
// small-instance oracle checks). Exit codes: 0 success, 1 config/usage
// error or failed validation, 2 divergence abort.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nn/dense.hpp"
#include "nn/harness.hpp"
#include "nn/metrics.hpp"
#include "nn/rng.hpp"
#include "nn/theory.hpp"

namespace {

struct Flags {
  std::string config_path;
  std::string out_dir = "out";
  std::string k_list;
  std::uint64_t seed = 0;
  bool seed_set = false;
  long long max_iters = 0;
  bool max_iters_set = false;
  long long realizations = 0;
  bool realizations_set = false;
};

void add_common_flags(CLI::App* cmd, Flags& flags) {
  cmd->add_option("--config", flags.config_path, "config file (flat key = value lines)");
  cmd->add_option("--out", flags.out_dir, "output directory")->capture_default_str();
  cmd->add_option("--seed", flags.seed, "override the config seed")
      ->each([&](const std::string&) { flags.seed_set = true; });
  cmd->add_option("--k", flags.k_list, "override k_list, e.g. 0,1,2");
  cmd->add_option("--max-iters", flags.max_iters, "override max_iters")
      ->each([&](const std::string&) { flags.max_iters_set = true; });
  cmd->add_option("--realizations", flags.realizations, "override realizations")
      ->each([&](const std::string&) { flags.realizations_set = true; });
}

nn::ExperimentConfig resolve_config(const Flags& flags, nn::Scenario fallback,
                                    const nn::Scenario* required) {
  nn::ExperimentConfig cfg;
  if (!flags.config_path.empty()) {
    std::ifstream in(flags.config_path);
    if (!in) throw std::invalid_argument("cannot open config file: " + flags.config_path);
    cfg = nn::load_config(in);
  } else {
    cfg = nn::default_config(fallback);
  }
  if (required && cfg.scenario != *required)
    throw std::invalid_argument("this subcommand needs scenario = " +
                                nn::scenario_name(*required));
  if (flags.seed_set) cfg.seed = flags.seed;
  if (flags.max_iters_set) cfg.max_iters = flags.max_iters;
  if (flags.realizations_set) cfg.realizations = flags.realizations;
  if (!flags.k_list.empty()) {
    cfg.k_list.clear();
    std::stringstream ss(flags.k_list);
    std::string tok;
    while (std::getline(ss, tok, ',')) cfg.k_list.push_back(std::stoi(tok));
  }
  return cfg;
}

int report_runs(const std::vector<nn::MethodRun>& runs) {
  int exit_code = 0;
  for (const auto& run : runs) {
    const auto& rec = run.trace.records.back();
    std::printf("%-5s %-14s iters=%lld F=%.6g grad=%.3g rel_err=%.3g sends=%lld\n",
                nn::method_name(run.method, run.K).c_str(),
                nn::run_status_name(run.trace.status), static_cast<long long>(rec.t),
                rec.F_value, rec.grad_norm, rec.rel_error,
                static_cast<long long>(rec.comm_sends));
    if (run.trace.status == nn::RunStatus::Diverged) {
      std::printf("  diverged: %s\n", run.trace.diagnostic.c_str());
      exit_code = 2;
    }
  }
  return exit_code;
}

int cmd_run(const Flags& flags) {
  nn::ExperimentConfig cfg = resolve_config(flags, nn::Scenario::QuadraticFixed, nullptr);
  std::printf("scenario %s -> %s\n", nn::scenario_name(cfg.scenario).c_str(),
              flags.out_dir.c_str());
  switch (cfg.scenario) {
    case nn::Scenario::QuadraticFixed:
      return report_runs(nn::run_fixed_quadratic(cfg, flags.out_dir).runs);
    case nn::Scenario::LogisticSeparable:
    case nn::Scenario::LogisticNonseparable:
      return report_runs(nn::run_logistic(cfg, flags.out_dir).runs);
    case nn::Scenario::QuadraticHistogram: {
      auto result = nn::run_histogram(cfg, flags.out_dir);
      for (const auto& s : result.summary)
        std::printf("%-5s reached=%lld censored=%lld mean_iters=%.1f mean_exchanges=%.1f\n",
                    nn::method_name(s.method, s.K).c_str(),
                    static_cast<long long>(s.reached_count),
                    static_cast<long long>(s.censored_count), s.mean_iters, s.mean_exchanges);
      return 0;
    }
    case nn::Scenario::AnnSweep: {
      auto result = nn::run_ann_sweep(cfg, flags.out_dir);
      int exit_code = 0;
      for (const auto& run : result.runs) {
        std::printf("%-5s alpha0=%g iters_to_target=%lld%s\n",
                    nn::method_name(run.method, run.K).c_str(), run.alpha0,
                    static_cast<long long>(run.iters_to_target),
                    run.reached_target ? "" : " (target not reached)");
        if (run.trace.status == nn::RunStatus::Diverged) {
          std::printf("  diverged: %s\n", run.trace.diagnostic.c_str());
          exit_code = 2;
        }
      }
      return exit_code;
    }
  }
  return 1;
}

int cmd_hist(const Flags& flags) {
  nn::Scenario required = nn::Scenario::QuadraticHistogram;
  nn::ExperimentConfig cfg = resolve_config(flags, required, &required);
  auto result = nn::run_histogram(cfg, flags.out_dir);
  for (const auto& s : result.summary)
    std::printf("%-5s reached=%lld censored=%lld mean_iters=%.1f mean_exchanges=%.1f "
                "median_exchanges=%.1f\n",
                nn::method_name(s.method, s.K).c_str(),
                static_cast<long long>(s.reached_count),
                static_cast<long long>(s.censored_count), s.mean_iters, s.mean_exchanges,
                s.median_exchanges);
  return 0;
}

int cmd_ann(const Flags& flags) {
  nn::Scenario required = nn::Scenario::AnnSweep;
  nn::ExperimentConfig cfg = resolve_config(flags, required, &required);
  auto result = nn::run_ann_sweep(cfg, flags.out_dir);
  int exit_code = 0;
  for (const auto& run : result.runs) {
    std::printf("%-5s alpha0=%g stages=%zu iters_to_target=%lld%s\n",
                nn::method_name(run.method, run.K).c_str(), run.alpha0,
                run.trace.stages.size(), static_cast<long long>(run.iters_to_target),
                run.reached_target ? "" : " (target not reached)");
    if (run.trace.status == nn::RunStatus::Diverged) {
      std::printf("  diverged: %s\n", run.trace.diagnostic.c_str());
      exit_code = 2;
    }
  }
  return exit_code;
}

bool check(bool ok, const char* name, const std::string& detail, int& failures) {
  std::printf("%s %s (%s)\n", ok ? "PASS" : "FAIL", name, detail.c_str());
  if (!ok) ++failures;
  return ok;
}

int cmd_validate(const Flags& flags) {
  std::uint64_t seed = flags.seed_set ? flags.seed : 1;
  int failures = 0;
  char detail[160];

  // Weight-matrix suite across the supported degree range.
  double worst_row = 0.0, worst_diag = 0.0;
  bool weights_ok = true;
  for (nn::Index n : {10, 50, 100}) {
    for (int d : {2, 4, 6, 8, 10}) {
      if (d > n - 1) continue;
      nn::Topology topo = nn::build_d_regular_cycle(n, d);
      nn::WeightMatrix wm = nn::build_cycle_weights(topo, d);
      nn::WeightValidationReport rep = nn::validate_weights(wm, topo);
      weights_ok = weights_ok && rep.all_ok();
      worst_row = std::max(worst_row, rep.max_row_sum_deviation);
      double expect = 0.5 + 1.0 / (2.0 * (d + 1));
      worst_diag = std::max({worst_diag, std::abs(rep.min_diagonal - expect),
                             std::abs(rep.max_diagonal - expect)});
    }
  }
  std::snprintf(detail, sizeof(detail), "max row-sum dev %.2e, diagonal dev %.2e", worst_row,
                worst_diag);
  check(weights_ok && worst_diag == 0.0, "weight matrix suite", detail, failures);

  // Derivative checks on sampled instances.
  nn::Rng rng(seed);
  nn::QuadraticEnsembleConfig qcfg{4, 2, seed};
  nn::ObjectiveList quads = nn::generate_quadratic(4, qcfg);
  nn::LogisticDataConfig lcfg;
  lcfg.p = 6;
  lcfg.samples_per_node = 10;
  lcfg.seed = seed;
  nn::ObjectiveList logist = nn::generate_logistic(3, lcfg);
  double worst_quad = 0.0, worst_logit = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    nn::Vector xq(4), xl(6);
    for (int j = 0; j < 4; ++j) xq(j) = rng.uniform(-1.0, 1.0);
    for (int j = 0; j < 6; ++j) xl(j) = rng.uniform(-0.2, 0.2);
    worst_quad = std::max(worst_quad, nn::check_derivatives(*quads[trial % 4], xq, 1e-5));
    worst_logit = std::max(worst_logit, nn::check_derivatives(*logist[trial % 3], xl, 1e-5));
  }
  std::snprintf(detail, sizeof(detail), "quadratic %.2e, logistic %.2e", worst_quad,
                worst_logit);
  check(worst_quad < 1e-8 && worst_logit < 1e-5, "derivative checks", detail, failures);

  // Small-instance oracle agreement: splitting identity and the direction
  // recursion against the dense truncated series.
  nn::PenalizedProblem prob;
  prob.topo = nn::build_d_regular_cycle(5, 2);
  prob.weights = nn::build_cycle_weights(prob.topo, 2);
  nn::QuadraticEnsembleConfig ocfg{2, 1, seed + 1};
  prob.objectives = nn::generate_quadratic(5, ocfg);
  prob.alpha = 1e-2;
  nn::StackedIterate y(5, 2);
  for (nn::Index i = 0; i < 10; ++i) y.flat()(i) = rng.uniform(-1.0, 1.0);

  nn::Matrix h = nn::dense_hessian(prob, y);
  nn::Matrix d_mat = nn::dense_d_matrix(prob, y);
  nn::Matrix b_mat = nn::dense_b_matrix(prob);
  double split_err = (h - (d_mat - b_mat)).cwiseAbs().maxCoeff();
  std::snprintf(detail, sizeof(detail), "max entry deviation %.2e", split_err);
  check(split_err < 1e-12, "splitting identity", detail, failures);

  nn::StackedIterate g = nn::stacked_gradient(prob, y);
  double dir_err = 0.0;
  for (int k : {0, 1, 2, 5}) {
    nn::NnDirection dir = nn::nn_direction(prob, y, k);
    nn::Vector dense_dir = -nn::dense_approx_hessian_inverse(d_mat, b_mat, k) * g.flat();
    dir_err = std::max(dir_err, (dir.direction().flat() - dense_dir).norm());
  }
  std::snprintf(detail, sizeof(detail), "max direction deviation %.2e", dir_err);
  check(dir_err < 1e-10, "direction recursion vs dense series", detail, failures);

  std::printf("%s\n", failures == 0 ? "all checks passed" : "validation FAILED");
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decentralized penalized-consensus solver simulator"};
  app.require_subcommand(1);

  Flags run_flags, hist_flags, ann_flags, validate_flags;
  CLI::App* run = app.add_subcommand("run", "run the scenario given by the config");
  add_common_flags(run, run_flags);
  CLI::App* hist = app.add_subcommand("hist", "histogram study over random instances");
  add_common_flags(hist, hist_flags);
  CLI::App* ann = app.add_subcommand("ann", "adaptive penalty cascade sweep");
  add_common_flags(ann, ann_flags);
  CLI::App* validate = app.add_subcommand("validate", "weight/derivative/oracle checks");
  validate->add_option("--seed", validate_flags.seed, "seed for sampled instances")
      ->each([&](const std::string&) { validate_flags.seed_set = true; });

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_flags);
    if (hist->parsed()) return cmd_hist(hist_flags);
    if (ann->parsed()) return cmd_ann(ann_flags);
    if (validate->parsed()) return cmd_validate(validate_flags);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
