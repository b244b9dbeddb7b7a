#include "nn/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "nn/dense.hpp"
#include "nn/metrics.hpp"
#include "nn/rng.hpp"
#include "nn/theory.hpp"

namespace nn {

namespace {

std::string fmt_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_double_short(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::ofstream open_out(const std::string& out_dir, const std::string& name) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::ofstream out(fs::path(out_dir) / name, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + name);
  return out;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

std::string join_doubles(const std::vector<double>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + fmt_double(v[i]);
  return out;
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.n < 3) throw std::invalid_argument("config: n must be >= 3");
  if (cfg.d < 2 || cfg.d % 2 != 0)
    throw std::invalid_argument("config: d must be even and >= 2");
  if (cfg.d > cfg.n - 1) throw std::invalid_argument("config: d must be <= n - 1");
  if (cfg.p < 1) throw std::invalid_argument("config: p must be >= 1");
  if (cfg.alpha <= 0.0) throw std::invalid_argument("config: alpha must be positive");
  if (cfg.epsilon <= 0.0 || cfg.epsilon > 1.0)
    throw std::invalid_argument("config: epsilon must lie in (0, 1]");
  if (cfg.tol <= 0.0) throw std::invalid_argument("config: tol must be positive");
  if (cfg.max_iters < 1) throw std::invalid_argument("config: max_iters must be >= 1");
  if (cfg.k_list.empty()) throw std::invalid_argument("config: k_list must not be empty");
  for (int k : cfg.k_list)
    if (k < 0) throw std::invalid_argument("config: k_list entries must be >= 0");
  if (cfg.realizations < 1) throw std::invalid_argument("config: realizations must be >= 1");
  if (cfg.target_error <= 0.0) throw std::invalid_argument("config: target_error must be positive");
  if (cfg.alpha0_list.empty()) throw std::invalid_argument("config: alpha0_list must not be empty");
  for (double a0 : cfg.alpha0_list)
    if (a0 <= 0.0) throw std::invalid_argument("config: alpha0 entries must be positive");
  if (cfg.eta <= 0.0 || cfg.eta >= 1.0)
    throw std::invalid_argument("config: eta must lie strictly in (0, 1)");
  if (cfg.stage_tol <= 0.0) throw std::invalid_argument("config: stage_tol must be positive");
  if (cfg.outer_rounds < 1) throw std::invalid_argument("config: outer_rounds must be >= 1");
  if (cfg.max_iters_per_stage < 1)
    throw std::invalid_argument("config: max_iters_per_stage must be >= 1");
  if (cfg.ann_target_error <= 0.0)
    throw std::invalid_argument("config: ann_target_error must be positive");
  if (cfg.q_per_node < 1) throw std::invalid_argument("config: q_per_node must be >= 1");
  if (cfg.sigma_plus <= 0.0 || cfg.sigma_minus <= 0.0)
    throw std::invalid_argument("config: sigmas must be positive");
  if (cfg.lambda <= 0.0) throw std::invalid_argument("config: lambda must be positive");

  bool quadratic = cfg.scenario == Scenario::QuadraticFixed ||
                   cfg.scenario == Scenario::QuadraticHistogram ||
                   cfg.scenario == Scenario::AnnSweep;
  if (quadratic && cfg.p % 2 != 0)
    throw std::invalid_argument("config: quadratic scenarios need even p");
  if (cfg.xi < 0) throw std::invalid_argument("config: xi must be >= 0");
}

PenalizedProblem make_quadratic_problem(const ExperimentConfig& cfg,
                                        const ObjectiveList& objectives, int d) {
  PenalizedProblem prob;
  prob.topo = build_d_regular_cycle(cfg.n, d);
  prob.weights = build_cycle_weights(prob.topo, d);
  prob.objectives = objectives;
  prob.alpha = cfg.alpha;
  return prob;
}

void write_method_trace(const std::string& out_dir, const std::string& name,
                        const std::vector<IterationRecord>& records) {
  if (out_dir.empty()) return;
  auto out = open_out(out_dir, name + ".csv");
  write_trace_csv(out, records);
}

void emit_rate_check(const std::string& out_dir, const ExperimentConfig& cfg,
                     const PenalizedProblem& prob, const std::string& name, int K,
                     const SolverTrace& trace) {
  if (out_dir.empty() || !cfg.emit_rate_check) return;
  StackedIterate y_star = penalized_reference_solution(prob);
  double f_star = penalized_value(prob, y_star);
  double f0_gap = std::max(0.0, trace.records.front().F_value - f_star);
  CurvatureBounds curv = ensemble_curvature(prob.objectives);
  TheoryConstants constants =
      compute_constants(prob.weights.delta, prob.weights.Delta, prob.alpha, curv.m, curv.M,
                        curv.L, cfg.epsilon, K, f0_gap);
  RateCheckReport report = check_rate_bound(trace.records, constants);
  auto out = open_out(out_dir, name + "_rate.csv");
  write_rate_report_csv(out, report);
}

}  // namespace

std::string scenario_name(Scenario scenario) {
  switch (scenario) {
    case Scenario::QuadraticFixed: return "quadratic_fixed";
    case Scenario::QuadraticHistogram: return "quadratic_histogram";
    case Scenario::AnnSweep: return "ann_sweep";
    case Scenario::LogisticSeparable: return "logistic_separable";
    case Scenario::LogisticNonseparable: return "logistic_nonseparable";
  }
  throw std::invalid_argument("unknown scenario value");
}

Scenario parse_scenario(const std::string& name) {
  if (name == "quadratic_fixed") return Scenario::QuadraticFixed;
  if (name == "quadratic_histogram") return Scenario::QuadraticHistogram;
  if (name == "ann_sweep") return Scenario::AnnSweep;
  if (name == "logistic_separable") return Scenario::LogisticSeparable;
  if (name == "logistic_nonseparable") return Scenario::LogisticNonseparable;
  throw std::invalid_argument("unknown scenario: " + name);
}

ExperimentConfig default_config(Scenario scenario) {
  ExperimentConfig cfg;
  cfg.scenario = scenario;
  switch (scenario) {
    case Scenario::QuadraticFixed:
      break;
    case Scenario::QuadraticHistogram:
      cfg.max_iters = 100000;
      cfg.emit_rate_check = false;
      break;
    case Scenario::AnnSweep:
      cfg.emit_rate_check = false;
      break;
    case Scenario::LogisticSeparable:
      cfg.p = 10;
      cfg.max_iters = 500;
      cfg.tol = 1e-12;
      cfg.emit_rate_check = false;
      break;
    case Scenario::LogisticNonseparable:
      cfg.p = 10;
      cfg.max_iters = 500;
      cfg.tol = 1e-12;
      cfg.mu = 2.0;
      cfg.sigma_plus = 2.0;
      cfg.sigma_minus = 2.0;
      cfg.emit_rate_check = false;
      break;
  }
  return cfg;
}

ExperimentConfig load_config(std::istream& in) {
  KeyValues kv = read_key_values(in);
  auto it = kv.find("scenario");
  if (it == kv.end()) throw std::invalid_argument("config: missing required key 'scenario'");
  ExperimentConfig cfg = default_config(parse_scenario(it->second));
  kv.erase(it);

  for (const auto& [key, value] : kv) {
    try {
      if (key == "seed") cfg.seed = std::stoull(value);
      else if (key == "n") cfg.n = std::stoll(value);
      else if (key == "d") cfg.d = std::stoi(value);
      else if (key == "p") cfg.p = std::stoll(value);
      else if (key == "xi") cfg.xi = std::stoi(value);
      else if (key == "alpha") cfg.alpha = std::stod(value);
      else if (key == "epsilon") cfg.epsilon = std::stod(value);
      else if (key == "tol") cfg.tol = std::stod(value);
      else if (key == "max_iters") cfg.max_iters = std::stoll(value);
      else if (key == "k_list") cfg.k_list = parse_int_list(value);
      else if (key == "realizations") cfg.realizations = std::stoll(value);
      else if (key == "target_error") cfg.target_error = std::stod(value);
      else if (key == "alpha0_list") cfg.alpha0_list = parse_double_list(value);
      else if (key == "eta") cfg.eta = std::stod(value);
      else if (key == "stage_tol") cfg.stage_tol = std::stod(value);
      else if (key == "outer_rounds") cfg.outer_rounds = std::stoi(value);
      else if (key == "max_iters_per_stage") cfg.max_iters_per_stage = std::stoll(value);
      else if (key == "ann_target_error") cfg.ann_target_error = std::stod(value);
      else if (key == "q_per_node") cfg.q_per_node = std::stoll(value);
      else if (key == "mu") cfg.mu = std::stod(value);
      else if (key == "sigma_plus") cfg.sigma_plus = std::stod(value);
      else if (key == "sigma_minus") cfg.sigma_minus = std::stod(value);
      else if (key == "lambda") cfg.lambda = std::stod(value);
      else if (key == "emit_rate_check") cfg.emit_rate_check = std::stoi(value) != 0;
      else throw std::invalid_argument("config: unknown key '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception&) {
      throw std::invalid_argument("config: bad value for key '" + key + "': " + value);
    }
  }
  validate_config(cfg);
  return cfg;
}

void write_resolved_config(std::ostream& out, const ExperimentConfig& cfg) {
  KeyValues kv;
  kv["scenario"] = scenario_name(cfg.scenario);
  kv["seed"] = std::to_string(cfg.seed);
  kv["n"] = std::to_string(cfg.n);
  kv["d"] = std::to_string(cfg.d);
  kv["p"] = std::to_string(cfg.p);
  kv["xi"] = std::to_string(cfg.xi);
  kv["alpha"] = fmt_double(cfg.alpha);
  kv["epsilon"] = fmt_double(cfg.epsilon);
  kv["tol"] = fmt_double(cfg.tol);
  kv["max_iters"] = std::to_string(cfg.max_iters);
  kv["k_list"] = join_ints(cfg.k_list);
  kv["realizations"] = std::to_string(cfg.realizations);
  kv["target_error"] = fmt_double(cfg.target_error);
  kv["alpha0_list"] = join_doubles(cfg.alpha0_list);
  kv["eta"] = fmt_double(cfg.eta);
  kv["stage_tol"] = fmt_double(cfg.stage_tol);
  kv["outer_rounds"] = std::to_string(cfg.outer_rounds);
  kv["max_iters_per_stage"] = std::to_string(cfg.max_iters_per_stage);
  kv["ann_target_error"] = fmt_double(cfg.ann_target_error);
  kv["q_per_node"] = std::to_string(cfg.q_per_node);
  kv["mu"] = fmt_double(cfg.mu);
  kv["sigma_plus"] = fmt_double(cfg.sigma_plus);
  kv["sigma_minus"] = fmt_double(cfg.sigma_minus);
  kv["lambda"] = fmt_double(cfg.lambda);
  kv["emit_rate_check"] = cfg.emit_rate_check ? "1" : "0";
  write_key_values(out, kv);
}

namespace {

void snapshot_config(const ExperimentConfig& cfg, const std::string& out_dir) {
  if (out_dir.empty()) return;
  auto out = open_out(out_dir, "resolved_config.txt");
  write_resolved_config(out, cfg);
}

}  // namespace

Index iterations_to_error(const std::vector<IterationRecord>& records, double target) {
  for (const auto& rec : records)
    if (rec.rel_error < target) return rec.t;
  return -1;
}

FixedQuadraticResult run_fixed_quadratic(const ExperimentConfig& cfg,
                                         const std::string& out_dir) {
  if (cfg.scenario != Scenario::QuadraticFixed)
    throw std::invalid_argument("run_fixed_quadratic: wrong scenario");
  validate_config(cfg);
  snapshot_config(cfg, out_dir);

  QuadraticEnsembleConfig qcfg{cfg.p, cfg.xi, cfg.seed};
  ObjectiveList objectives = generate_quadratic(cfg.n, qcfg);
  PenalizedProblem prob = make_quadratic_problem(cfg, objectives, cfg.d);
  Vector x_star = quadratic_optimum(objectives);
  StackedIterate y0(cfg.n, cfg.p);

  FixedQuadraticResult result;
  result.x_star = x_star;

  SolverConfig base;
  base.epsilon = cfg.epsilon;
  base.tol = cfg.tol;
  base.max_iters = cfg.max_iters;

  SolverConfig dgd_cfg = base;
  dgd_cfg.method = Method::Dgd;
  result.runs.push_back({Method::Dgd, 0, run_solver(prob, y0, dgd_cfg, &x_star)});
  write_method_trace(out_dir, "dgd", result.runs.back().trace.records);

  for (int k : cfg.k_list) {
    SolverConfig nn_cfg = base;
    nn_cfg.method = Method::NetworkNewton;
    nn_cfg.K = k;
    result.runs.push_back({Method::NetworkNewton, k, run_solver(prob, y0, nn_cfg, &x_star)});
    const std::string name = method_name(Method::NetworkNewton, k);
    write_method_trace(out_dir, name, result.runs.back().trace.records);
    emit_rate_check(out_dir, cfg, prob, name, k, result.runs.back().trace);
  }
  return result;
}

HistogramResult run_histogram(const ExperimentConfig& cfg, const std::string& out_dir) {
  if (cfg.scenario != Scenario::QuadraticHistogram)
    throw std::invalid_argument("run_histogram: wrong scenario");
  validate_config(cfg);
  snapshot_config(cfg, out_dir);

  struct MethodId {
    Method method;
    int K;
  };
  std::vector<MethodId> methods = {{Method::Dgd, 0}};
  for (int k : cfg.k_list) methods.push_back({Method::NetworkNewton, k});

  HistogramResult result;
  for (Index r = 0; r < cfg.realizations; ++r) {
    // Realization draws, in order: the degree, then the ensemble.
    std::uint64_t seed_r = cfg.seed + static_cast<std::uint64_t>(r);
    Rng rng(seed_r);
    int d = 2 * (1 + static_cast<int>(rng.uniform_index(5)));
    QuadraticEnsembleConfig qcfg{cfg.p, cfg.xi, 0};
    ObjectiveList objectives = generate_quadratic(cfg.n, qcfg, rng);
    PenalizedProblem prob = make_quadratic_problem(cfg, objectives, d);
    Vector x_star = quadratic_optimum(objectives);
    StackedIterate y0(cfg.n, cfg.p);

    for (const auto& m : methods) {
      SolverConfig scfg;
      scfg.method = m.method;
      scfg.K = m.K;
      scfg.epsilon = cfg.epsilon;
      scfg.tol = cfg.tol;
      scfg.max_iters = cfg.max_iters;
      scfg.target_rel_error = cfg.target_error;
      SolverTrace trace = run_solver(prob, y0, scfg, &x_star);

      HistogramRow row;
      row.realization = r;
      row.seed = seed_r;
      row.d = d;
      row.method = m.method;
      row.K = m.K;
      row.reached = trace.status == RunStatus::TargetReached;
      row.iters = trace.records.back().t;
      row.exchanges = trace.records.back().comm_sends / sum_degrees(prob.topo);
      result.rows.push_back(row);
    }
  }

  // Summaries cover only realizations every method finished, so means stay
  // paired; censored counts are still reported per method.
  const Index n_methods = static_cast<Index>(methods.size());
  std::vector<char> complete(cfg.realizations, 1);
  for (const auto& row : result.rows)
    if (!row.reached) complete[row.realization] = 0;
  for (Index mi = 0; mi < n_methods; ++mi) {
    HistogramSummary s;
    s.method = methods[mi].method;
    s.K = methods[mi].K;
    std::vector<double> iters, exchanges;
    for (Index r = 0; r < cfg.realizations; ++r) {
      const HistogramRow& row = result.rows[r * n_methods + mi];
      if (!row.reached) ++s.censored_count;
      if (!complete[r]) continue;
      iters.push_back(static_cast<double>(row.iters));
      exchanges.push_back(static_cast<double>(row.exchanges));
    }
    s.reached_count = static_cast<Index>(iters.size());
    if (!iters.empty()) {
      for (double v : iters) s.mean_iters += v;
      s.mean_iters /= static_cast<double>(iters.size());
      for (double v : exchanges) s.mean_exchanges += v;
      s.mean_exchanges /= static_cast<double>(exchanges.size());
      std::sort(exchanges.begin(), exchanges.end());
      size_t mid = exchanges.size() / 2;
      s.median_exchanges = exchanges.size() % 2 ? exchanges[mid]
                                                : 0.5 * (exchanges[mid - 1] + exchanges[mid]);
    }
    result.summary.push_back(s);
  }

  if (!out_dir.empty()) {
    auto rows_out = open_out(out_dir, "realizations.csv");
    rows_out << "realization,seed,d,method,reached,iters,exchanges\n";
    for (const auto& row : result.rows) {
      rows_out << row.realization << ',' << row.seed << ',' << row.d << ','
               << method_name(row.method, row.K) << ',' << (row.reached ? 1 : 0) << ','
               << row.iters << ',' << row.exchanges << '\n';
    }
    auto sum_out = open_out(out_dir, "summary.csv");
    sum_out << "method,reached,censored,mean_iters,mean_exchanges,median_exchanges\n";
    for (const auto& s : result.summary) {
      sum_out << method_name(s.method, s.K) << ',' << s.reached_count << ','
              << s.censored_count << ',' << fmt_double(s.mean_iters) << ','
              << fmt_double(s.mean_exchanges) << ',' << fmt_double(s.median_exchanges) << '\n';
    }
  }
  return result;
}

AnnSweepResult run_ann_sweep(const ExperimentConfig& cfg, const std::string& out_dir) {
  if (cfg.scenario != Scenario::AnnSweep)
    throw std::invalid_argument("run_ann_sweep: wrong scenario");
  validate_config(cfg);
  snapshot_config(cfg, out_dir);

  QuadraticEnsembleConfig qcfg{cfg.p, cfg.xi, cfg.seed};
  ObjectiveList objectives = generate_quadratic(cfg.n, qcfg);
  PenalizedProblem prob = make_quadratic_problem(cfg, objectives, cfg.d);
  Vector x_star = quadratic_optimum(objectives);
  StackedIterate y0(cfg.n, cfg.p);

  struct MethodId {
    Method method;
    int K;
  };
  std::vector<MethodId> methods = {{Method::Dgd, 0}};
  for (int k : cfg.k_list) methods.push_back({Method::NetworkNewton, k});

  AnnSweepResult result;
  result.x_star = x_star;
  std::ofstream stages_out;
  if (!out_dir.empty()) {
    stages_out = open_out(out_dir, "stages.csv");
    stages_out << "method,alpha0,stage,alpha,first_iter,last_iter,end_rel_error,cap_reached\n";
  }

  for (double alpha0 : cfg.alpha0_list) {
    for (const auto& m : methods) {
      AnnConfig acfg;
      acfg.method = m.method;
      acfg.K = m.K;
      acfg.epsilon = cfg.epsilon;
      acfg.alpha0 = alpha0;
      acfg.eta = cfg.eta;
      acfg.tol = cfg.stage_tol;
      acfg.outer_rounds = cfg.outer_rounds;
      acfg.max_iters_per_stage = cfg.max_iters_per_stage;

      AnnRunResult run;
      run.method = m.method;
      run.K = m.K;
      run.alpha0 = alpha0;
      run.trace = ann_run(prob, y0, acfg, &x_star);
      Index hit = iterations_to_error(run.trace.records, cfg.ann_target_error);
      run.reached_target = hit >= 0;
      run.iters_to_target = hit;

      if (!out_dir.empty()) {
        std::vector<int> stage_of_record(run.trace.records.size(), 0);
        for (const auto& st : run.trace.stages)
          for (Index rec = st.first_record; rec <= st.last_record; ++rec)
            stage_of_record[rec] = st.stage;
        auto out = open_out(out_dir, "ann_" + method_name(m.method, m.K) + "_a" +
                                         fmt_double_short(alpha0) + ".csv");
        write_trace_csv(out, run.trace.records, stage_of_record);
        for (const auto& st : run.trace.stages) {
          stages_out << method_name(m.method, m.K) << ',' << fmt_double_short(alpha0) << ','
                     << st.stage << ',' << fmt_double(st.alpha) << ','
                     << run.trace.records[st.first_record].t << ','
                     << run.trace.records[st.last_record].t << ','
                     << fmt_double(run.trace.records[st.last_record].rel_error) << ','
                     << (st.cap_reached ? 1 : 0) << '\n';
        }
      }
      result.runs.push_back(std::move(run));
    }
  }
  return result;
}

LogisticResult run_logistic(const ExperimentConfig& cfg, const std::string& out_dir) {
  if (cfg.scenario != Scenario::LogisticSeparable &&
      cfg.scenario != Scenario::LogisticNonseparable)
    throw std::invalid_argument("run_logistic: wrong scenario");
  validate_config(cfg);
  snapshot_config(cfg, out_dir);

  LogisticDataConfig lcfg;
  lcfg.p = cfg.p;
  lcfg.samples_per_node = cfg.q_per_node;
  lcfg.mu = cfg.mu;
  lcfg.sigma_plus = cfg.sigma_plus;
  lcfg.sigma_minus = cfg.sigma_minus;
  lcfg.lambda = cfg.lambda;
  lcfg.seed = cfg.seed;
  ObjectiveList objectives = generate_logistic(cfg.n, lcfg);

  PenalizedProblem prob;
  prob.topo = build_d_regular_cycle(cfg.n, cfg.d);
  prob.weights = build_cycle_weights(prob.topo, cfg.d);
  prob.objectives = objectives;
  prob.alpha = cfg.alpha;
  StackedIterate y0(cfg.n, cfg.p);

  LogisticResult result;
  SolverConfig base;
  base.epsilon = cfg.epsilon;
  base.tol = cfg.tol;
  base.max_iters = cfg.max_iters;

  SolverConfig dgd_cfg = base;
  dgd_cfg.method = Method::Dgd;
  result.runs.push_back({Method::Dgd, 0, run_solver(prob, y0, dgd_cfg)});
  write_method_trace(out_dir, "dgd", result.runs.back().trace.records);

  for (int k : cfg.k_list) {
    SolverConfig nn_cfg = base;
    nn_cfg.method = Method::NetworkNewton;
    nn_cfg.K = k;
    result.runs.push_back({Method::NetworkNewton, k, run_solver(prob, y0, nn_cfg)});
    write_method_trace(out_dir, method_name(Method::NetworkNewton, k),
                       result.runs.back().trace.records);
  }
  return result;
}

}  // namespace nn
