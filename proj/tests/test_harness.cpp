#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "pairgossip/experiment.hpp"
#include "pairgossip/jobs.hpp"

using namespace pairgossip;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kData = PAIRGOSSIP_TEST_DATA;

json base_config() {
  std::ifstream in(kData + "/sync_small.json");
  return json::parse(in);
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("pairgossip_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void check_rejected(json j, const std::string& needle) {
  try {
    parse_run_config(j);
    FAIL("accepted: " << j.dump());
  } catch (const std::invalid_argument& e) {
    CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos, e.what());
  }
}

}  // namespace

TEST_CASE("config parsing fills defaults") {
  const RunConfig c = parse_run_config(base_config());
  CHECK(c.algorithm == Algorithm::sync);
  CHECK(c.gradient_mode == GradientMode::gossip);
  CHECK(c.topology.kind == TopologyKind::watts_strogatz);
  CHECK(c.topology.ws.k == 4);
  CHECK_FALSE(c.topology.n.has_value());
  CHECK(c.dataset.n == 12);
  CHECK(c.reg.kind == RegularizerKind::squared_l2);
  CHECK(c.T == 400);
  CHECK(c.checkpoint_stride == 50);
  CHECK(c.reference.enabled);

  json j = base_config();
  j.erase("checkpoint_stride");
  j.erase("regularizer");
  const RunConfig d = parse_run_config(j);
  CHECK(d.checkpoint_stride == 4);
  CHECK(d.reg.kind == RegularizerKind::zero);

  json mix = base_config();
  mix["dataset"] = {{"kind", "gaussian_mixture"}};
  mix["loss"] = {{"kind", "metric_hinge"}, {"b", 2.0}};
  mix["regularizer"] = {{"kind", "psd_indicator"}};
  const RunConfig m = parse_run_config(mix);
  CHECK(m.dataset.mixture.n == 1000);
  CHECK(m.dataset.mixture.dim == 40);
  CHECK(m.loss.margin == 2.0);
}

TEST_CASE("config validation names the offending field") {
  json j = base_config();
  j["T_max"] = 3;
  check_rejected(j, "unknown key 'T_max'");

  j = base_config();
  j["topology"]["degree"] = 3;
  check_rejected(j, "topology: unknown key 'degree'");

  j = base_config();
  j.erase("topology");
  check_rejected(j, "topology");

  j = base_config();
  j["algorithm"] = "gossip";
  check_rejected(j, "unknown algorithm");

  j = base_config();
  j["T"] = -1;
  check_rejected(j, "config.T");

  j = base_config();
  j["T"] = "many";
  check_rejected(j, "config.T");

  j = base_config();
  j["checkpoint_stride"] = 0;
  check_rejected(j, "checkpoint_stride");

  j = base_config();
  j["schedule"] = {{"kind", "poly"}, {"c", 1.0}};
  check_rejected(j, "alpha");

  j = base_config();
  j["schedule"] = {{"kind", "poly"}, {"alpha", 0.5}};
  CHECK_THROWS_AS(parse_run_config(j), std::invalid_argument);

  j = base_config();
  j["loss"] = {{"kind", "auc_logistic"}, {"b", 1.0}};
  check_rejected(j, "loss.b");

  j = base_config();
  j["regularizer"] = {{"kind", "psd_indicator"}};
  check_rejected(j, "psd_indicator");

  j = base_config();
  j["loss"] = {{"kind", "metric_hinge"}};
  check_rejected(j, "metric_hinge");

  j = base_config();
  j["topology"]["n"] = 13;
  check_rejected(j, "topology.n");

  j = base_config();
  j["dataset"] = {{"kind", "breast_cancer"}};
  check_rejected(j, "path");

  j = base_config();
  j["gradient_mode"] = "biased";
  check_rejected(j, "gradient mode");

  CHECK_THROWS_AS(load_run_config(kData + "/missing.json"), std::runtime_error);
}

TEST_CASE("breast cancer loader imputes missing cells") {
  const Dataset d = load_breast_cancer(kData + "/breast_cancer_small.data");
  CHECK(d.size() == 8);
  CHECK(d.dim() == 11);
  CHECK(d.num_positive() == 2);
  CHECK(d.label(4) == 1);
  CHECK(d.label(0) == -1);
  // Bare nuclei present as 1, 10, 2, 4, 1, 10.
  CHECK(d.features()(4, 5) == doctest::Approx(28.0 / 6.0));
  CHECK(d.features()(5, 5) == doctest::Approx(28.0 / 6.0));
  CHECK(d.features()(0, 0) == 5.0);
  for (int i = 0; i < d.size(); ++i) {
    CHECK(d.features()(i, 9) == 1.0);
    CHECK(d.features()(i, 10) == 0.0);
  }

  std::istringstream empty("");
  CHECK_THROWS(parse_breast_cancer(empty));
  std::istringstream wrong_class("1,1,1,1,1,1,1,1,1,1,3\n");
  CHECK_THROWS(parse_breast_cancer(wrong_class));
  std::istringstream short_row("1,1,1,1,1\n");
  CHECK_THROWS(parse_breast_cancer(short_row));
  CHECK_THROWS(load_breast_cancer(kData + "/missing.data"));
}

TEST_CASE("gaussian mixture generator") {
  SyntheticSpec spec;
  spec.seed = 5;
  const Dataset d = gen_gaussian_mixture(spec);
  CHECK(d.size() == 1000);
  CHECK(d.dim() == 40);
  CHECK(std::abs(d.num_positive() - 500) <= 1);

  spec.n = 40;
  spec.dim = 6;
  spec.classes = 4;
  spec.subspace_dim = 2;
  spec.variance_factor = 0.0;
  const Dataset tight = gen_gaussian_mixture(spec);
  std::set<std::vector<double>> distinct;
  for (int i = 0; i < tight.size(); ++i) {
    const Eigen::VectorXd r = tight.row(i);
    distinct.insert(std::vector<double>(r.data(), r.data() + r.size()));
  }
  CHECK(distinct.size() == 4);

  // Means live in a 2-dimensional subspace.
  Eigen::MatrixXd centered = tight.features().rowwise() - tight.features().colwise().mean();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered);
  CHECK(svd.singularValues()(2) <= 1e-10 * svd.singularValues()(0));

  spec.variance_factor = -1.0;
  CHECK_THROWS(gen_gaussian_mixture(spec));
  CHECK(gen_gaussian_mixture(SyntheticSpec{}).features() == gen_gaussian_mixture(SyntheticSpec{}).features());
}

TEST_CASE("dataset CSV round trip") {
  const Dataset d = gen_two_class(9, 3, 1.5, 2);
  std::stringstream s;
  write_dataset_csv(d, s);
  const Dataset back = read_dataset_csv(s);
  CHECK(back.features() == d.features());
  CHECK(back.labels() == d.labels());
  std::istringstream bad_label("label,x0\n2,0.5\n1,0.1\n");
  CHECK_THROWS(read_dataset_csv(bad_label));
  std::istringstream bad_header("y,x0\n1,0.5\n");
  CHECK_THROWS(read_dataset_csv(bad_header));
}

TEST_CASE("experiments are reproducible and write their files") {
  const fs::path dir = scratch_dir("repro");
  for (const char* algo : {"sync", "async", "centralized_sto"}) {
    json j = base_config();
    j["algorithm"] = algo;
    if (std::string(algo) == "async") j["schedule"] = {{"kind", "poly"}, {"c", 1.0}, {"alpha", 0.25}};
    RunConfig c = parse_run_config(j);
    c.output = (dir / (std::string(algo) + "_a")).string();
    const ExperimentOutput a = run_experiment(c);
    c.output = (dir / (std::string(algo) + "_b")).string();
    const ExperimentOutput b = run_experiment(c);
    CHECK(slurp(a.csv_path) == slurp(b.csv_path));
    CHECK(!slurp(a.csv_path).empty());
    const json s = json::parse(slurp(a.json_path));
    CHECK(s["algorithm"] == algo);
    CHECK(s["T"] == 400);
    CHECK(s.contains("reference"));
    CHECK(s["bounds"].contains("c1"));
    if (std::string(algo) != "centralized_sto") {
      CHECK(s["bias"]["samples"] == 40);
      CHECK(s["spectral_gap"].get<double>() > 0.0);
      CHECK(s["bounds"].contains("c2"));
    }
    std::istringstream rows(slurp(a.csv_path));
    std::string line;
    int count = 0;
    while (std::getline(rows, line)) ++count;
    CHECK(count == 1 + 9);
  }
  fs::remove_all(dir);
}

TEST_CASE("graph from an edge-list file") {
  const fs::path dir = scratch_dir("edges");
  RandomStream rng(1, "graph");
  const Graph g = build_topology(TopologyKind::cycle, 12, {}, rng);
  {
    std::ofstream out(dir / "cycle.txt");
    write_edge_list(g, out);
  }
  json j = base_config();
  j["topology"] = {{"path", (dir / "cycle.txt").string()}};
  const RunConfig c = parse_run_config(j);
  CHECK(build_graph(c, 12).edges() == g.edges());
  CHECK_THROWS(build_graph(c, 13));
  fs::remove_all(dir);
}

TEST_CASE("baseline comparison") {
  const fs::path dir = scratch_dir("compare");
  RunConfig c = parse_run_config(base_config());
  c.output = (dir / "cmp").string();
  const json cmp = compare_baseline(c);
  CHECK(fs::exists(dir / "cmp_gossip.csv"));
  CHECK(fs::exists(dir / "cmp_baseline.csv"));
  CHECK(fs::exists(dir / "cmp_compare.json"));
  CHECK(cmp["relative_difference"].get<double>() >= 0.0);
  CHECK(json::parse(slurp((dir / "cmp_baseline.json").string()))["gradient_mode"] == "unbiased_baseline");
  c.algorithm = Algorithm::centralized_det;
  CHECK_THROWS(compare_baseline(c));
  fs::remove_all(dir);
}

TEST_CASE("job runner") {
  setenv("PAIRGOSSIP_THREADS", "3", 1);
  CHECK(job_parallelism() == 3);
  setenv("PAIRGOSSIP_THREADS", "zero", 1);
  CHECK(job_parallelism() >= 1);
  setenv("PAIRGOSSIP_THREADS", "4", 1);

  std::vector<int> out(50, 0);
  run_jobs(out.size(), [&](std::size_t i) { out[i] = static_cast<int>(i * i); });
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(i * i));

  std::atomic<int> ran{0};
  CHECK_THROWS_WITH(run_jobs(20,
                             [&](std::size_t i) {
                               ++ran;
                               if (i == 5) throw std::runtime_error("job 5 failed");
                             }),
                    "job 5 failed");
  CHECK(ran.load() >= 6);
  run_jobs(0, [](std::size_t) { FAIL("no jobs expected"); });
  unsetenv("PAIRGOSSIP_THREADS");
}
