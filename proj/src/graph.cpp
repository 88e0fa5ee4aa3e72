#include "pairgossip/graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

namespace pairgossip {

Graph::Graph(int n, std::vector<Edge> edges) : n_(n), degrees_(n > 0 ? n : 0, 0) {
  if (n < 1) throw std::invalid_argument("Graph: node count must be positive");
  for (auto& [i, j] : edges) {
    if (i < 0 || j < 0 || i >= n || j >= n)
      throw std::invalid_argument("Graph: edge endpoint out of range");
    if (i == j) throw std::invalid_argument("Graph: self-loop");
    if (i > j) std::swap(i, j);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw std::invalid_argument("Graph: duplicate edge");
  edges_ = std::move(edges);
  neighbours_.resize(n);
  for (const auto& [i, j] : edges_) {
    ++degrees_[i];
    ++degrees_[j];
    neighbours_[i].push_back(j);
    neighbours_[j].push_back(i);
  }
}

bool Graph::has_edge(int i, int j) const {
  if (i > j) std::swap(i, j);
  return std::binary_search(edges_.begin(), edges_.end(), Edge{i, j});
}

bool Graph::is_connected() const {
  std::vector<char> seen(n_, 0);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (int v : neighbours_[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        frontier.push(v);
      }
    }
  }
  return reached == n_;
}

bool Graph::is_bipartite() const {
  std::vector<int> colour(n_, -1);
  for (int start = 0; start < n_; ++start) {
    if (colour[start] != -1) continue;
    colour[start] = 0;
    std::queue<int> frontier;
    frontier.push(start);
    while (!frontier.empty()) {
      const int u = frontier.front();
      frontier.pop();
      for (int v : neighbours_[u]) {
        if (colour[v] == -1) {
          colour[v] = 1 - colour[u];
          frontier.push(v);
        } else if (colour[v] == colour[u]) {
          return false;
        }
      }
    }
  }
  return true;
}

bool Graph::is_complete() const {
  return edges_.size() == static_cast<std::size_t>(n_) * (n_ - 1) / 2;
}

Eigen::MatrixXd Graph::adjacency_matrix() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
  for (const auto& [i, j] : edges_) {
    a(i, j) = 1.0;
    a(j, i) = 1.0;
  }
  return a;
}

Eigen::MatrixXd Graph::degree_matrix() const {
  Eigen::VectorXd d(n_);
  for (int i = 0; i < n_; ++i) d[i] = degrees_[i];
  return d.asDiagonal();
}

Eigen::MatrixXd Graph::laplacian() const { return degree_matrix() - adjacency_matrix(); }

Eigen::MatrixXd Graph::expected_gossip_matrix() const {
  if (edges_.empty()) throw std::invalid_argument("expected_gossip_matrix: graph has no edges");
  return Eigen::MatrixXd::Identity(n_, n_) -
         laplacian() / (2.0 * static_cast<double>(edges_.size()));
}

TopologyKind parse_topology_kind(const std::string& name) {
  if (name == "complete") return TopologyKind::complete;
  if (name == "cycle") return TopologyKind::cycle;
  if (name == "watts_strogatz") return TopologyKind::watts_strogatz;
  throw std::invalid_argument("unknown topology kind: " + name);
}

std::string to_string(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::complete: return "complete";
    case TopologyKind::cycle: return "cycle";
    case TopologyKind::watts_strogatz: return "watts_strogatz";
  }
  return "?";
}

namespace {

Graph watts_strogatz_once(int n, int half_k, double p, RandomStream& rng) {
  std::vector<std::set<int>> adj(n);
  for (int j = 1; j <= half_k; ++j) {
    for (int u = 0; u < n; ++u) {
      const int v = (u + j) % n;
      adj[u].insert(v);
      adj[v].insert(u);
    }
  }
  // Rewire the clockwise half-edges in ring order, one pass per offset.
  for (int j = 1; j <= half_k; ++j) {
    for (int u = 0; u < n; ++u) {
      const int v = (u + j) % n;
      if (!(rng.uniform01() < p)) continue;
      if (static_cast<int>(adj[u].size()) >= n - 1) continue;
      int w;
      do {
        w = static_cast<int>(rng.uniform_index(n));
      } while (w == u || adj[u].count(w));
      adj[u].erase(v);
      adj[v].erase(u);
      adj[u].insert(w);
      adj[w].insert(u);
    }
  }
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v : adj[u])
      if (u < v) edges.emplace_back(u, v);
  return Graph(n, std::move(edges));
}

}  // namespace

Graph build_topology(TopologyKind kind, int n, std::optional<WattsStrogatzParams> ws,
                     RandomStream& rng) {
  if (n < 3) throw std::invalid_argument("build_topology: n must be at least 3");
  std::vector<Edge> edges;
  switch (kind) {
    case TopologyKind::complete:
      edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
      return Graph(n, std::move(edges));
    case TopologyKind::cycle:
      for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
      return Graph(n, std::move(edges));
    case TopologyKind::watts_strogatz: {
      const WattsStrogatzParams params = ws.value_or(WattsStrogatzParams{});
      if (params.k < 2 || params.k >= n)
        throw std::invalid_argument("build_topology: watts_strogatz needs 2 <= k < n");
      if (!(params.p >= 0.0 && params.p <= 1.0))
        throw std::invalid_argument("build_topology: rewiring probability outside [0, 1]");
      for (int attempt = 0; attempt < kWattsStrogatzMaxRetries; ++attempt) {
        Graph g = watts_strogatz_once(n, params.k / 2, params.p, rng);
        if (g.is_connected()) return g;
      }
      throw std::runtime_error("build_topology: no connected watts_strogatz graph within " +
                               std::to_string(kWattsStrogatzMaxRetries) + " attempts");
    }
  }
  throw std::invalid_argument("build_topology: unknown kind");
}

double spectral_gap(const Graph& g, int max_nodes) {
  if (g.num_nodes() > max_nodes)
    throw std::invalid_argument("spectral_gap: graph exceeds the dense eigensolver cap");
  if (g.num_nodes() < 2 || !g.is_connected())
    throw std::invalid_argument("spectral_gap: graph must be connected with at least 2 nodes");
  // Work on L rather than W: the small eigenvalue keeps its relative precision.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g.laplacian(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("spectral_gap: eigensolver failed");
  const Eigen::VectorXd& beta = solver.eigenvalues();  // ascending
  return beta[1] / (2.0 * static_cast<double>(g.num_edges()));
}

Graph tensor_with_complete(const Graph& g, int k) {
  if (k < 2) throw std::invalid_argument("tensor_with_complete: k must be at least 2");
  if (g.is_complete())
    throw std::invalid_argument("tensor_with_complete: the base graph must not be complete");
  const int n = g.num_nodes();
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(k) * k * g.num_edges());
  for (const auto& [u, v] : g.edges())
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) edges.emplace_back(a * n + u, b * n + v);
  return Graph(k * n, std::move(edges));
}

Edge sample_edge(const Graph& g, RandomStream& rng) {
  if (g.num_edges() == 0) throw std::invalid_argument("sample_edge: graph has no edges");
  const Edge e = g.edges()[rng.uniform_index(g.num_edges())];
  if (rng.next_u64() >> 63) return {e.second, e.first};
  return e;
}

std::vector<double> activation_probabilities(const Graph& g) {
  if (g.num_edges() == 0) throw std::invalid_argument("activation_probabilities: no edges");
  std::vector<double> p(g.num_nodes());
  const double m = static_cast<double>(g.num_edges());
  for (int k = 0; k < g.num_nodes(); ++k) p[k] = g.degrees()[k] / m;
  return p;
}

void write_edge_list(const Graph& g, std::ostream& out) {
  out << g.num_nodes() << ' ' << g.num_edges() << '\n';
  for (const auto& [i, j] : g.edges()) out << i << ' ' << j << '\n';
}

namespace {

// Parses a line holding exactly two integers.
bool parse_pair(const std::string& line, long& a, long& b) {
  std::istringstream fields(line);
  std::string rest;
  return static_cast<bool>(fields >> a >> b) && !(fields >> rest);
}

}  // namespace

Graph read_edge_list(std::istream& in) {
  std::string line;
  long n = 0, m = 0;
  if (!std::getline(in, line) || !parse_pair(line, n, m) || n < 1 || m < 0)
    throw std::invalid_argument("read_edge_list: bad header, expected \"n m\"");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    long i, j;
    if (!parse_pair(line, i, j))
      throw std::invalid_argument("read_edge_list: line " + std::to_string(line_no) +
                                  ": expected \"i j\"");
    edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
  }
  if (static_cast<long>(edges.size()) != m)
    throw std::invalid_argument("read_edge_list: header promises " + std::to_string(m) +
                                " edges, found " + std::to_string(edges.size()));
  return Graph(static_cast<int>(n), std::move(edges));
}

}  // namespace pairgossip
