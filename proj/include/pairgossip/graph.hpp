#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pairgossip/random.hpp"

namespace pairgossip {

using Edge = std::pair<int, int>;

/// Undirected simple graph on nodes 0..n-1.
///
/// Edges are stored with i < j, without duplicates or self-loops; the
/// constructor rejects anything else. Instances are immutable.
class Graph {
 public:
  Graph(int n, std::vector<Edge> edges);

  int num_nodes() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& degrees() const { return degrees_; }
  const std::vector<std::vector<int>>& adjacency_lists() const { return neighbours_; }

  bool has_edge(int i, int j) const;
  bool is_connected() const;
  bool is_bipartite() const;
  bool is_complete() const;

  Eigen::MatrixXd adjacency_matrix() const;
  Eigen::MatrixXd degree_matrix() const;
  Eigen::MatrixXd laplacian() const;

  // E[W(i,j)] for a uniformly drawn edge: I - L / (2|E|).
  Eigen::MatrixXd expected_gossip_matrix() const;

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<int> degrees_;
  std::vector<std::vector<int>> neighbours_;
};

enum class TopologyKind { complete, cycle, watts_strogatz };

struct WattsStrogatzParams {
  int k = 4;        // mean degree; odd values are rounded down
  double p = 0.3;   // rewiring probability
};

TopologyKind parse_topology_kind(const std::string& name);
std::string to_string(TopologyKind kind);

inline constexpr int kWattsStrogatzMaxRetries = 100;

Graph build_topology(TopologyKind kind, int n, std::optional<WattsStrogatzParams> ws,
                     RandomStream& rng);

inline constexpr int kDenseEigenCap = 2000;

/// 1 - lambda_2 of E[W] = I - L/(2|E|), i.e. beta_{n-1}(L) / (2|E|).
/// Throws for disconnected graphs and for n above `max_nodes`.
double spectral_gap(const Graph& g, int max_nodes = kDenseEigenCap);

/// Graph on V x [k] with (u,a) ~ (v,b) iff u ~ v in g, i.e. adjacency
/// 1_k 1_k^T (x) A. Has k*n nodes and k^2 |E| edges; node (u, a) gets
/// index a*n + u. Requires k >= 2 and a non-complete g.
Graph tensor_with_complete(const Graph& g, int k);

/// Uniform edge, returned in a uniformly random orientation.
Edge sample_edge(const Graph& g, RandomStream& rng);

/// Per-node probability of being touched by one uniform edge draw,
/// d_k / |E|. Sums to 2.
std::vector<double> activation_probabilities(const Graph& g);

// Edge-list text: "n m" then m lines "i j", 0-based.
void write_edge_list(const Graph& g, std::ostream& out);
Graph read_edge_list(std::istream& in);

}  // namespace pairgossip
