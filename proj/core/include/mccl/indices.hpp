#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "mccl/graph.hpp"
#include "mccl/index_id.hpp"
#include "mccl/subgraph.hpp"

namespace mccl {

/// Katz centrality x = alpha * A x + beta. When alpha <= 0 it is chosen per
/// graph as alpha_scale / lambda_max, with lambda_max estimated by
/// `lambda_iterations` rounds of shifted power iteration.
struct KatzParams {
  double alpha = 0.0;
  double alpha_scale = 0.85;
  double beta = 1.0;
  int max_iter = 1000;
  double tol = 1e-6;
  int lambda_iterations = 100;
};

struct EigenvectorParams {
  int max_iter = 1000;
  double tol = 1e-6;
};

struct ConnectivityParams {
  // Views larger than this use a sampled vertex-cut estimate.
  std::size_t exact_limit = 200;
  int sampled_pairs = 20;
  std::uint64_t seed = 0;
};

struct IndexParams {
  KatzParams katz;
  EigenvectorParams eigenvector;
  ConnectivityParams connectivity;
};

/// Non-fatal conditions raised while computing an index. Flagged values are
/// still finite and usable.
enum class IndexFlag : std::uint8_t {
  none = 0,
  eigenvector_fallback,   // power iteration did not converge; degree-based values used
  katz_alpha_reduced,     // alpha was halved until the fixed point converged
  connectivity_sampled,   // vertex cut estimated from sampled pairs
};

std::string_view to_string(IndexFlag flag);

struct IndexValue {
  double value = 0.0;
  IndexFlag flag = IndexFlag::none;
};

/// Raw complexity score of one sample view.
IndexValue compute_index(const SubgraphView& view, IndexId index, const IndexParams& params = {});

// Graph-level building blocks. They operate on any Graph and are exposed for
// reuse and testing.

struct CentralityResult {
  std::vector<double> values;
  double eigenvalue = 0.0;  // Rayleigh quotient (eigenvector) or alpha used (Katz)
  int iterations = 0;
  bool converged = false;
  bool fallback = false;  // Katz: alpha reduced; eigenvector: degree fallback
};

/// Rayleigh-quotient estimate of the adjacency spectral radius.
double estimate_spectral_radius(const Graph& g, int iterations);

CentralityResult katz_centrality(const Graph& g, const KatzParams& params);
CentralityResult eigenvector_centrality(const Graph& g, const EigenvectorParams& params);

/// Closeness with the Wasserman-Faust correction for disconnected graphs;
/// isolated nodes get 0.
std::vector<double> closeness_centrality(const Graph& g);
double closeness_of(const Graph& g, NodeId u);
double local_clustering(const Graph& g, NodeId u);
double average_clustering(const Graph& g);
double degree_assortativity(const Graph& g);
double degree_mixing_mean(const Graph& g);
double average_degree_connectivity_at_max_degree(const Graph& g);
std::size_t count_local_bridges(const Graph& g);

/// Greedy maximal matching taking edges in lexicographic order.
std::vector<Edge> greedy_maximal_matching(const Graph& g);
/// Both endpoints of every greedy matching edge (a 2-approximate cover).
std::vector<NodeId> approximate_vertex_cover(const Graph& g);
/// Greedy max-coverage dominating set; ties go to the lowest id.
std::vector<NodeId> greedy_dominating_set(const Graph& g);
/// Pivot recursion returning a large clique and a large independent set.
std::pair<std::vector<NodeId>, std::vector<NodeId>> ramsey_r2(const Graph& g);
/// Greedy lower bound on the maximum clique size.
std::size_t large_clique_size(const Graph& g);
/// Min-degree elimination upper bound on the treewidth.
std::size_t treewidth_min_degree(const Graph& g);

/// Maximum number of internally vertex-disjoint s-t paths (s != t).
std::size_t local_node_connectivity(const Graph& g, NodeId s, NodeId t);

struct ConnectivityResult {
  std::size_t value = 0;
  bool sampled = false;
};
/// Minimum number of vertices whose removal disconnects the graph.
/// Complete graphs give n-1; disconnected or single-node graphs give 0.
ConnectivityResult node_connectivity(const Graph& g, const ConnectivityParams& params = {});

}  // namespace mccl
