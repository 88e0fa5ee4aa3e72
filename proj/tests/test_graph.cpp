#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "pairgossip/graph.hpp"

using namespace pairgossip;

namespace {

Graph build(TopologyKind kind, int n, std::uint64_t seed = 1, WattsStrogatzParams ws = {}) {
  RandomStream rng(seed, "graph");
  return build_topology(kind, n, ws, rng);
}

// n >= 4. Erdos-Renyi draws until the graph is connected, non-bipartite and not complete.
Graph random_test_graph(RandomStream& rng, int n) {
  for (;;) {
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng.bernoulli(0.45)) edges.emplace_back(i, j);
    Graph g(n, edges);
    if (g.is_connected() && !g.is_bipartite() && !g.is_complete()) return g;
  }
}

}  // namespace

TEST_CASE("generators") {
  const Graph k4 = build(TopologyKind::complete, 4);
  CHECK(k4.num_edges() == 6);
  for (int d : k4.degrees()) CHECK(d == 3);
  CHECK(k4.is_complete());

  const Graph c5 = build(TopologyKind::cycle, 5);
  CHECK(c5.num_edges() == 5);
  for (int d : c5.degrees()) CHECK(d == 2);
  CHECK_FALSE(c5.is_bipartite());
  CHECK(build(TopologyKind::cycle, 6).is_bipartite());

  const Graph ws = build(TopologyKind::watts_strogatz, 100, 1, {5, 0.3});
  int total = 0;
  for (int d : ws.degrees()) total += d;
  CHECK(total == 100 * 4);
  CHECK(ws.is_connected());
}

TEST_CASE("generator preconditions") {
  CHECK_THROWS(build(TopologyKind::complete, 2));
  CHECK_THROWS(build(TopologyKind::watts_strogatz, 10, 1, {10, 0.3}));
  CHECK_THROWS(build(TopologyKind::watts_strogatz, 10, 1, {1, 0.3}));
  CHECK_THROWS(build(TopologyKind::watts_strogatz, 10, 1, {4, 1.5}));
  CHECK_THROWS(Graph(3, {{0, 0}}));
  CHECK_THROWS(Graph(3, {{0, 1}, {0, 1}}));
  CHECK_THROWS(Graph(3, {{0, 3}}));
  CHECK(parse_topology_kind("watts_strogatz") == TopologyKind::watts_strogatz);
  CHECK_THROWS(parse_topology_kind("star"));
}

TEST_CASE("Watts-Strogatz is reproducible per seed") {
  const Graph a = build(TopologyKind::watts_strogatz, 40, 9);
  const Graph b = build(TopologyKind::watts_strogatz, 40, 9);
  const Graph c = build(TopologyKind::watts_strogatz, 40, 10);
  CHECK(a.edges() == b.edges());
  CHECK(a.edges() != c.edges());
}

TEST_CASE("Watts-Strogatz without rewiring is the ring lattice") {
  const Graph g = build(TopologyKind::watts_strogatz, 10, 1, {4, 0.0});
  for (int i = 0; i < 10; ++i) {
    CHECK(g.has_edge(i, (i + 1) % 10));
    CHECK(g.has_edge(i, (i + 2) % 10));
  }
  CHECK(g.num_edges() == 20);
}

TEST_CASE("Laplacian identities") {
  RandomStream rng(51, "test");
  for (int rep = 0; rep < 20; ++rep) {
    const Graph g = random_test_graph(rng, 4 + static_cast<int>(rng.uniform_index(8)));
    const Eigen::MatrixXd L = g.laplacian();
    CHECK((L - (g.degree_matrix() - g.adjacency_matrix())).norm() == 0.0);
    CHECK((L * Eigen::VectorXd::Ones(g.num_nodes())).norm() <= 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
    CHECK(std::abs(es.eigenvalues()(0)) <= 1e-10);
    int degree_sum = 0;
    for (int d : g.degrees()) degree_sum += d;
    CHECK(degree_sum == 2 * static_cast<int>(g.num_edges()));
  }
}

TEST_CASE("expected gossip matrix equals the mean of the averaging matrices") {
  RandomStream rng(52, "test");
  for (int rep = 0; rep < 30; ++rep) {
    const Graph g = random_test_graph(rng, 4 + static_cast<int>(rng.uniform_index(6)));
    CHECK((g.expected_gossip_matrix() - oracle::mean_gossip_matrix(g)).norm() <= 1e-14);
  }
}

TEST_CASE("spectral gap closed forms") {
  CHECK(spectral_gap(build(TopologyKind::complete, 4)) == doctest::Approx(1.0 / 3.0));
  for (int n : {3, 5, 8, 17, 40}) {
    CHECK(std::abs(spectral_gap(build(TopologyKind::complete, n)) - 1.0 / (n - 1)) <= 1e-12);
    const double cycle = (1.0 - std::cos(2.0 * std::numbers::pi / n)) / n;
    CHECK(std::abs(spectral_gap(build(TopologyKind::cycle, n)) - cycle) <= 1e-12);
  }
}

TEST_CASE("spectral gap rejects disconnected graphs and accepts bipartite ones") {
  CHECK_THROWS(spectral_gap(Graph(4, {{0, 1}, {2, 3}})));
  CHECK(spectral_gap(build(TopologyKind::cycle, 6)) > 0.0);
  CHECK_THROWS(spectral_gap(build(TopologyKind::complete, 10), 5));
}

TEST_CASE("tensor expansion with the complete graph") {
  const Graph c5 = build(TopologyKind::cycle, 5);
  const Graph t = tensor_with_complete(c5, 2);
  CHECK(t.num_nodes() == 10);
  CHECK(t.num_edges() == 4 * c5.num_edges());
  CHECK_THROWS(tensor_with_complete(build(TopologyKind::complete, 3), 2));
  CHECK_THROWS(tensor_with_complete(c5, 1));

  RandomStream rng(53, "test");
  for (int rep = 0; rep < 50; ++rep) {
    const Graph g = random_test_graph(rng, 4 + static_cast<int>(rng.uniform_index(10)));
    for (int k : {2, 3}) {
      const double lhs = spectral_gap(tensor_with_complete(g, k));
      CHECK(std::abs(lhs - spectral_gap(g) / k) <= 1e-9);
    }
  }
}

TEST_CASE("edge sampling is uniform") {
  RandomStream one(1, "edges");
  const Graph single(2, {{0, 1}});
  for (int k = 0; k < 100; ++k) {
    const auto [i, j] = sample_edge(single, one);
    CHECK(std::min(i, j) == 0);
    CHECK(std::max(i, j) == 1);
  }

  for (const Graph& g : {build(TopologyKind::complete, 3), build(TopologyKind::cycle, 4)}) {
    RandomStream rng(2, "edges");
    const int draws = 300000;
    std::vector<int> counts(g.num_edges(), 0);
    int forward = 0;
    for (int k = 0; k < draws; ++k) {
      const auto [i, j] = sample_edge(g, rng);
      const auto it = std::find(g.edges().begin(), g.edges().end(), Edge{std::min(i, j), std::max(i, j)});
      REQUIRE(it != g.edges().end());
      ++counts[it - g.edges().begin()];
      forward += i < j;
    }
    const double expected = static_cast<double>(draws) / g.num_edges();
    double chi2 = 0.0;
    for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
    CHECK(chi2 < 16.27);  // 3 dof or fewer, p = 0.001
    CHECK(std::abs(forward - draws / 2.0) <= 3.0 * std::sqrt(draws * 0.25));
  }
}

TEST_CASE("activation probabilities") {
  for (int n : {5, 9}) {
    for (double p : activation_probabilities(build(TopologyKind::complete, n))) CHECK(p == doctest::Approx(2.0 / n));
    for (double p : activation_probabilities(build(TopologyKind::cycle, n))) CHECK(p == doctest::Approx(2.0 / n));
  }
  RandomStream rng(54, "test");
  for (int rep = 0; rep < 20; ++rep) {
    const Graph g = random_test_graph(rng, 4 + static_cast<int>(rng.uniform_index(8)));
    double sum = 0.0;
    for (double p : activation_probabilities(g)) sum += p;
    CHECK(sum == doctest::Approx(2.0));
  }
}

TEST_CASE("empirical activation frequencies match the probabilities") {
  const Graph g = build(TopologyKind::watts_strogatz, 12, 3, {4, 0.6});
  const std::vector<double> p = activation_probabilities(g);
  RandomStream rng(4, "edges");
  const int draws = 1000000;
  std::vector<int> touched(g.num_nodes(), 0);
  for (int k = 0; k < draws; ++k) {
    const auto [i, j] = sample_edge(g, rng);
    ++touched[i];
    ++touched[j];
  }
  for (int k = 0; k < g.num_nodes(); ++k) {
    const double sigma = std::sqrt(draws * p[k] * (1 - p[k]));
    CHECK(std::abs(touched[k] - draws * p[k]) <= 3.0 * sigma);
  }
}

TEST_CASE("edge list round trip") {
  const Graph g = build(TopologyKind::watts_strogatz, 15, 5);
  std::stringstream s;
  write_edge_list(g, s);
  const Graph back = read_edge_list(s);
  CHECK(back.num_nodes() == g.num_nodes());
  CHECK(back.edges() == g.edges());

  std::istringstream bad_header("3\n0 1\n");
  CHECK_THROWS(read_edge_list(bad_header));
  std::istringstream short_body("3 2\n0 1\n");
  CHECK_THROWS(read_edge_list(short_body));
  std::istringstream out_of_range("3 1\n0 5\n");
  CHECK_THROWS(read_edge_list(out_of_range));
}
