#pragma once

// Brute-force reference implementations used only by tests. They work on a
// dense adjacency matrix and share no code with the library.

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "mccl/graph.hpp"
#include "mccl/index_id.hpp"

namespace oracle {

struct Adj {
  int n = 0;
  std::vector<std::vector<char>> a;

  explicit Adj(int nodes) : n(nodes), a(nodes, std::vector<char>(nodes, 0)) {}
  bool has(int u, int v) const { return a[u][v] != 0; }
  int deg(int u) const;
  std::vector<int> nbrs(int u) const;
  int edge_count() const;
};

Adj from_edges(int n, const std::vector<mccl::Edge>& edges);

/// Random spanning tree plus extra edges with probability p.
std::vector<mccl::Edge> random_connected(int n, double p, std::mt19937_64& rng);

/// -1 for unreachable pairs.
std::vector<std::vector<int>> distances(const Adj& g);

// Target pair for pair-valued indices: the pair itself, or for a single
// target its highest-degree neighbor (lowest id on ties). nullopt when the
// single target is isolated.
std::optional<std::pair<int, int>> resolve_pair(const Adj& g, const std::vector<int>& seeds);

/// Value of an exactly-defined index on the whole graph with the given
/// targets; nullopt for iterative or heuristic indices.
std::optional<double> exact_index(const Adj& g, const std::vector<int>& seeds, mccl::IndexId id);

bool is_exact(mccl::IndexId id);

int node_connectivity(const Adj& g);
int local_node_connectivity(const Adj& g, int s, int t);
int max_clique(const Adj& g);
int min_vertex_cover(const Adj& g);
int min_dominating_set(const Adj& g);
int treewidth(const Adj& g);

bool is_clique(const Adj& g, const std::vector<mccl::NodeId>& nodes);
bool is_independent(const Adj& g, const std::vector<mccl::NodeId>& nodes);
bool covers_edges(const Adj& g, const std::vector<mccl::NodeId>& nodes);
bool dominates(const Adj& g, const std::vector<mccl::NodeId>& nodes);
bool is_maximal_matching(const Adj& g, const std::vector<mccl::Edge>& edges);

/// Pearson correlation by the two-pass textbook formula.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace oracle
