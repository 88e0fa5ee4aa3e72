#include "pairgossip/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>

#include "pairgossip/gossip_async.hpp"
#include "pairgossip/gossip_sync.hpp"
#include "pairgossip/jobs.hpp"

namespace pairgossip {

using nlohmann::json;

Algorithm parse_algorithm(const std::string& name) {
  if (name == "centralized_det") return Algorithm::centralized_det;
  if (name == "centralized_sto") return Algorithm::centralized_sto;
  if (name == "sync") return Algorithm::sync;
  if (name == "async") return Algorithm::async;
  throw std::invalid_argument("unknown algorithm: " + name);
}

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::centralized_det: return "centralized_det";
    case Algorithm::centralized_sto: return "centralized_sto";
    case Algorithm::sync: return "sync";
    case Algorithm::async: return "async";
  }
  return "?";
}

namespace {

void allow_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw std::invalid_argument(where + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find_if(keys.begin(), keys.end(), [&](const char* k) { return key == k; }) ==
        keys.end())
      throw std::invalid_argument(where + ": unknown key '" + key + "'");
  }
}

template <class T>
T get_or(const json& obj, const char* key, T fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(where + "." + key + ": " + e.what());
  }
}

template <class T>
T require(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw std::invalid_argument(where + ": missing '" + key + "'");
  return get_or<T>(obj, key, T{}, where);
}

TopologySpec parse_topology(const json& j) {
  allow_keys(j, "topology", {"kind", "n", "k", "p", "seed", "path"});
  TopologySpec t;
  t.path = get_or<std::string>(j, "path", "", "topology");
  if (t.path.empty()) t.kind = parse_topology_kind(require<std::string>(j, "kind", "topology"));
  if (j.contains("n")) t.n = get_or<int>(j, "n", 0, "topology");
  t.ws.k = get_or<int>(j, "k", t.ws.k, "topology");
  t.ws.p = get_or<double>(j, "p", t.ws.p, "topology");
  if (j.contains("seed")) t.seed = get_or<std::uint64_t>(j, "seed", 0, "topology");
  return t;
}

DatasetSpec parse_dataset(const json& j) {
  allow_keys(j, "dataset", {"kind", "path", "n", "dim", "separation", "classes", "subspace_dim",
                            "variance_factor", "seed"});
  DatasetSpec d;
  const std::string kind = require<std::string>(j, "kind", "dataset");
  if (kind == "two_class") d.kind = DatasetKind::two_class;
  else if (kind == "gaussian_mixture") d.kind = DatasetKind::gaussian_mixture;
  else if (kind == "breast_cancer") d.kind = DatasetKind::breast_cancer;
  else if (kind == "csv") d.kind = DatasetKind::csv;
  else throw std::invalid_argument("dataset.kind: unknown kind '" + kind + "'");
  if (d.kind == DatasetKind::breast_cancer || d.kind == DatasetKind::csv)
    d.path = require<std::string>(j, "path", "dataset");
  d.n = get_or<int>(j, "n", d.kind == DatasetKind::gaussian_mixture ? 1000 : d.n, "dataset");
  d.dim = get_or<int>(j, "dim", d.kind == DatasetKind::gaussian_mixture ? 40 : d.dim, "dataset");
  d.separation = get_or<double>(j, "separation", d.separation, "dataset");
  d.mixture.n = d.n;
  d.mixture.dim = d.dim;
  d.mixture.classes = get_or<int>(j, "classes", d.mixture.classes, "dataset");
  d.mixture.subspace_dim = get_or<int>(j, "subspace_dim", d.mixture.subspace_dim, "dataset");
  d.mixture.variance_factor = get_or<double>(j, "variance_factor", d.mixture.variance_factor, "dataset");
  if (j.contains("seed")) d.seed = get_or<std::uint64_t>(j, "seed", 0, "dataset");
  return d;
}

StepSchedule parse_schedule(const json& j) {
  allow_keys(j, "schedule", {"kind", "c", "alpha", "D", "L"});
  const ScheduleKind kind = parse_schedule_kind(require<std::string>(j, "kind", "schedule"));
  switch (kind) {
    case ScheduleKind::inv_sqrt: return StepSchedule::inv_sqrt(get_or<double>(j, "c", 1.0, "schedule"));
    case ScheduleKind::poly:
      return StepSchedule::poly(get_or<double>(j, "c", 1.0, "schedule"),
                                require<double>(j, "alpha", "schedule"));
    case ScheduleKind::bounded_domain:
      return StepSchedule::bounded_domain(require<double>(j, "D", "schedule"),
                                          require<double>(j, "L", "schedule"));
  }
  throw std::invalid_argument("schedule: unknown kind");
}

Regularizer parse_regularizer(const json& j) {
  allow_keys(j, "regularizer", {"kind", "lambda"});
  switch (parse_regularizer_kind(require<std::string>(j, "kind", "regularizer"))) {
    case RegularizerKind::zero: return Regularizer::zero();
    case RegularizerKind::squared_l2:
      return Regularizer::squared_l2(require<double>(j, "lambda", "regularizer"));
    case RegularizerKind::l1: return Regularizer::l1(require<double>(j, "lambda", "regularizer"));
    case RegularizerKind::psd_indicator: return Regularizer::psd_indicator();
  }
  throw std::invalid_argument("regularizer: unknown kind");
}

PairwiseLoss parse_loss(const json& j) {
  allow_keys(j, "loss", {"kind", "b"});
  const LossKind kind = parse_loss_kind(require<std::string>(j, "kind", "loss"));
  if (kind == LossKind::auc_logistic) {
    if (j.contains("b")) throw std::invalid_argument("loss.b: only metric_hinge takes a margin");
    return PairwiseLoss::auc_logistic();
  }
  return PairwiseLoss::metric_hinge(get_or<double>(j, "b", 1.0, "loss"));
}

}  // namespace

RunConfig parse_run_config(const json& j) {
  allow_keys(j, "config", {"algorithm", "gradient_mode", "topology", "dataset", "loss",
                           "regularizer", "schedule", "T", "seed", "checkpoint_stride",
                           "bias_stride", "output", "reference"});
  RunConfig c;
  c.algorithm = parse_algorithm(require<std::string>(j, "algorithm", "config"));
  c.gradient_mode = parse_gradient_mode(get_or<std::string>(j, "gradient_mode", "gossip", "config"));
  if (j.contains("topology")) c.topology = parse_topology(j.at("topology"));
  else if (c.algorithm == Algorithm::sync || c.algorithm == Algorithm::async)
    throw std::invalid_argument("config: gossip algorithms need a 'topology'");
  c.dataset = parse_dataset(require<json>(j, "dataset", "config"));
  c.loss = parse_loss(require<json>(j, "loss", "config"));
  c.reg = j.contains("regularizer") ? parse_regularizer(j.at("regularizer")) : Regularizer::zero();
  c.schedule = parse_schedule(require<json>(j, "schedule", "config"));
  c.T = require<long>(j, "T", "config");
  c.seed = get_or<std::uint64_t>(j, "seed", 0, "config");
  c.checkpoint_stride = get_or<long>(j, "checkpoint_stride", std::max(1L, c.T / 100), "config");
  c.bias_stride = get_or<long>(j, "bias_stride", 0, "config");
  c.output = get_or<std::string>(j, "output", c.output, "config");
  if (j.contains("reference")) {
    const json& r = j.at("reference");
    allow_keys(r, "reference", {"enabled", "tolerance"});
    c.reference.enabled = get_or<bool>(r, "enabled", true, "reference");
    c.reference.tolerance = get_or<double>(r, "tolerance", 0.0, "reference");
  }

  if (c.T < 0) throw std::invalid_argument("config.T: must be non-negative");
  if (c.checkpoint_stride < 1) throw std::invalid_argument("config.checkpoint_stride: must be >= 1");
  if (c.bias_stride < 0) throw std::invalid_argument("config.bias_stride: must be >= 0");
  if (c.loss.kind == LossKind::metric_hinge && c.reg.kind != RegularizerKind::zero &&
      c.reg.kind != RegularizerKind::psd_indicator)
    throw std::invalid_argument("config: metric_hinge takes a zero or psd_indicator regularizer");
  if (c.reg.kind == RegularizerKind::psd_indicator && c.loss.kind != LossKind::metric_hinge)
    throw std::invalid_argument("config: psd_indicator needs the matrix-valued metric_hinge loss");
  if (c.dataset.kind == DatasetKind::breast_cancer && c.loss.kind != LossKind::auc_logistic)
    throw std::invalid_argument("config: the breast cancer data is used with auc_logistic");
  if (c.topology.n && c.dataset.kind != DatasetKind::breast_cancer &&
      c.dataset.kind != DatasetKind::csv && *c.topology.n != c.dataset.n)
    throw std::invalid_argument("config: topology.n differs from dataset.n");
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  return parse_run_config(j);
}

Dataset build_dataset(const RunConfig& cfg) {
  const DatasetSpec& d = cfg.dataset;
  const std::uint64_t seed = d.seed.value_or(cfg.seed);
  switch (d.kind) {
    case DatasetKind::two_class: return gen_two_class(d.n, d.dim, d.separation, seed);
    case DatasetKind::gaussian_mixture: {
      SyntheticSpec spec = d.mixture;
      spec.seed = seed;
      return gen_gaussian_mixture(spec);
    }
    case DatasetKind::breast_cancer: return load_breast_cancer(d.path);
    case DatasetKind::csv: return read_dataset_csv(d.path);
  }
  throw std::invalid_argument("dataset: unknown kind");
}

Graph build_graph(const RunConfig& cfg, int dataset_size) {
  const TopologySpec& t = cfg.topology;
  if (!t.path.empty()) {
    std::ifstream in(t.path);
    if (!in) throw std::runtime_error("cannot open edge list " + t.path);
    Graph g = read_edge_list(in);
    if (g.num_nodes() != dataset_size)
      throw std::invalid_argument("edge list has " + std::to_string(g.num_nodes()) +
                                  " nodes, dataset has " + std::to_string(dataset_size));
    return g;
  }
  const int n = t.n.value_or(dataset_size);
  if (n != dataset_size)
    throw std::invalid_argument("topology.n (" + std::to_string(n) + ") differs from dataset size (" +
                                std::to_string(dataset_size) + ")");
  RandomStream rng(t.seed.value_or(cfg.seed), "graph");
  return build_topology(t.kind, n, t.ws, rng);
}

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

struct Prepared {
  Problem problem;
  std::optional<Graph> graph;
  std::optional<Reference> reference;
};

Prepared prepare(const RunConfig& cfg) {
  Prepared p{Problem{build_dataset(cfg), cfg.loss, cfg.reg, cfg.schedule}, std::nullopt, std::nullopt};
  if (cfg.algorithm == Algorithm::sync || cfg.algorithm == Algorithm::async)
    p.graph = build_graph(cfg, p.problem.data.size());
  if (cfg.reference.enabled) {
    ReferenceOptions opts;
    opts.tolerance = cfg.reference.tolerance;
    p.reference = solve_reference(p.problem, opts);
  }
  return p;
}

json summarize(const RunConfig& cfg, const Prepared& p, const std::vector<TraceRecord>& trace,
               const std::vector<BiasPoint>& bias, long grad_evals,
               const std::vector<std::string>& warnings, double seconds) {
  json s;
  s["algorithm"] = to_string(cfg.algorithm);
  s["gradient_mode"] = to_string(cfg.gradient_mode);
  s["seed"] = cfg.seed;
  s["T"] = cfg.T;
  s["n"] = p.problem.data.size();
  s["dim"] = p.problem.data.dim();
  s["grad_evals"] = grad_evals;
  const double lf = lipschitz_bound(p.problem.loss, p.problem.data);
  s["lipschitz"] = lf;
  s["objective_at_zero"] = p.problem.objective(Parameter::zeros(p.problem.parameter_shape()));
  const TraceRecord& last = trace.back();
  s["final"] = {{"obj_mean", number_or_null(last.obj_mean)},
                {"obj_std", number_or_null(last.obj_std)},
                {"obj_max", number_or_null(last.obj_max)},
                {"gap_mean", number_or_null(last.gap_mean)},
                {"dual_disagreement", number_or_null(last.dual_disagreement)}};
  if (p.reference) {
    s["reference"] = {{"objective", p.reference->objective},
                      {"norm", p.reference->theta.norm()},
                      {"certificate", p.reference->certificate},
                      {"iterations", p.reference->iterations}};
  }
  double gap = kNotApplicable;
  if (p.graph && p.graph->num_nodes() <= kDenseEigenCap && p.graph->is_connected()) {
    gap = spectral_gap(*p.graph);
    s["spectral_gap"] = gap;
  }
  if (cfg.T >= 2 && p.reference) {
    BoundInputs in;
    in.optimum_norm = p.reference->theta.norm();
    in.lipschitz = lf;
    in.schedule = cfg.schedule;
    in.T = cfg.T;
    in.spectral_gap = std::isfinite(gap) ? gap : 1.0;
    const BoundConstants b = bound_constants(in);
    s["bounds"] = {{"c1", b.c1}};
    if (std::isfinite(gap)) s["bounds"]["c2"] = b.c2;
  }
  if (!bias.empty()) {
    const std::size_t from = bias.size() - std::max<std::size_t>(1, bias.size() / 10);
    double abs_sum = 0.0;
    for (std::size_t i = from; i < bias.size(); ++i) abs_sum += std::abs(bias[i].bias_term);
    s["bias"] = {{"samples", bias.size()},
                 {"tail_mean_abs", abs_sum / static_cast<double>(bias.size() - from)},
                 {"mean", number_or_null(last.bias_avg)},
                 {"c3_empirical", number_or_null(last.c3_empirical)}};
  }
  s["warnings"] = warnings;
  s["wall_time_s"] = seconds;
  return s;
}

struct RunArtifacts {
  std::string csv;
  json summary;
};

RunArtifacts execute(const RunConfig& cfg, const Prepared& p) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<TraceRecord> trace;
  std::vector<BiasPoint> bias;
  std::vector<std::string> warnings;
  long grad_evals = 0;
  bool time_columns = false;
  const Reference* ref = p.reference ? &*p.reference : nullptr;

  if (cfg.algorithm == Algorithm::centralized_det || cfg.algorithm == Algorithm::centralized_sto) {
    const CentralMode mode = cfg.algorithm == Algorithm::centralized_det ? CentralMode::deterministic
                                                                         : CentralMode::stochastic;
    const CentralResult r = run_centralized(mode, p.problem, cfg.T, cfg.seed,
                                            checkpoint_times(cfg.T, cfg.checkpoint_stride));
    for (const auto& c : r.trace) {
      TraceRecord rec;
      rec.t = c.t;
      rec.grad_evals = c.grad_evals;
      rec.obj_mean = rec.obj_max = c.objective;
      rec.obj_std = 0.0;
      if (ref) rec.gap_mean = c.objective - ref->objective;
      rec.min_eig = min_eigenvalue_over({c.theta_bar});
      trace.push_back(rec);
    }
    grad_evals = r.grad_evals;
  } else {
    GossipRunConfig g;
    g.T = cfg.T;
    g.seed = cfg.seed;
    g.checkpoint_stride = cfg.checkpoint_stride;
    g.bias_stride = cfg.bias_stride;
    g.mode = cfg.gradient_mode;
    GossipResult r = cfg.algorithm == Algorithm::sync ? run_sync(*p.graph, p.problem, g, ref)
                                                      : run_async(*p.graph, p.problem, g, ref);
    trace = std::move(r.trace);
    bias = std::move(r.bias);
    warnings = std::move(r.warnings);
    grad_evals = r.grad_evals;
    time_columns = cfg.algorithm == Algorithm::async;
  }
  std::ostringstream csv;
  write_trace_csv(trace, time_columns, csv);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {csv.str(), summarize(cfg, p, trace, bias, grad_evals, warnings, seconds)};
}

}  // namespace

ExperimentOutput run_experiment(const RunConfig& cfg) {
  const Prepared p = prepare(cfg);
  RunArtifacts a = execute(cfg, p);
  ExperimentOutput out{cfg.output + ".csv", cfg.output + ".json", std::move(a.summary)};
  write_text(out.csv_path, a.csv);
  write_text(out.json_path, out.summary.dump(2) + "\n");
  return out;
}

json compare_baseline(const RunConfig& cfg) {
  if (cfg.algorithm != Algorithm::sync && cfg.algorithm != Algorithm::async)
    throw std::invalid_argument("compare-baseline needs a sync or async algorithm");
  const Prepared p = prepare(cfg);
  RunConfig runs[2] = {cfg, cfg};
  runs[0].gradient_mode = GradientMode::gossip;
  runs[0].output = cfg.output + "_gossip";
  runs[1].gradient_mode = GradientMode::unbiased_baseline;
  runs[1].output = cfg.output + "_baseline";
  RunArtifacts results[2];
  run_jobs(2, [&](std::size_t i) { results[i] = execute(runs[i], p); });
  for (int i = 0; i < 2; ++i) {
    write_text(runs[i].output + ".csv", results[i].csv);
    write_text(runs[i].output + ".json", results[i].summary.dump(2) + "\n");
  }
  const double a = results[0].summary["final"]["obj_mean"].get<double>();
  const double b = results[1].summary["final"]["obj_mean"].get<double>();
  json cmp = {{"gossip_final_obj_mean", a},
              {"baseline_final_obj_mean", b},
              {"relative_difference", std::abs(a - b) / std::max(std::abs(b), 1e-300)},
              {"gossip_trace", runs[0].output + ".csv"},
              {"baseline_trace", runs[1].output + ".csv"}};
  write_text(cfg.output + "_compare.json", cmp.dump(2) + "\n");
  return cmp;
}

}  // namespace pairgossip
