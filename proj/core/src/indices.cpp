#include "mccl/indices.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

namespace mccl {

std::string_view to_string(IndexFlag flag) {
  switch (flag) {
    case IndexFlag::none: return "none";
    case IndexFlag::eigenvector_fallback: return "eigenvector_fallback";
    case IndexFlag::katz_alpha_reduced: return "katz_alpha_reduced";
    case IndexFlag::connectivity_sampled: return "connectivity_sampled";
  }
  return "unknown";
}

namespace {

// The target pair for pair-valued indices. A single target is paired with
// its highest-degree neighbor in the view (lowest id on ties); an isolated
// target has no pair.
std::optional<Edge> target_pair(const SubgraphView& view) {
  const Graph& g = view.local;
  if (view.seeds.size() >= 2) return Edge{view.seeds[0], view.seeds[1]};
  const NodeId s = view.seeds.front();
  std::optional<NodeId> partner;
  for (NodeId v : g.neighbors(s)) {
    if (!partner || g.degree(v) > g.degree(*partner)) partner = v;
  }
  if (!partner) return std::nullopt;
  return Edge{s, *partner};
}

template <typename Fn>
double sum_over_seeds(const SubgraphView& view, Fn&& fn) {
  double total = 0.0;
  for (NodeId s : view.seeds) total += fn(s);
  return total;
}

std::size_t common_count(const Graph& g, NodeId u, NodeId v) {
  auto a = g.neighbors(u);
  auto b = g.neighbors(v);
  std::vector<NodeId> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  return common.size();
}

}  // namespace

IndexValue compute_index(const SubgraphView& view, IndexId index, const IndexParams& params) {
  if (view.members.empty() || view.seeds.empty()) {
    throw std::invalid_argument("compute_index: empty view");
  }
  const Graph& g = view.local;
  const std::size_t n = g.node_count();
  auto deg = [&](NodeId u) { return static_cast<double>(g.degree(u)); };

  switch (index) {
    case IndexId::degree:
      return {sum_over_seeds(view, deg)};

    case IndexId::average_neighbor_degree:
      return {sum_over_seeds(view, [&](NodeId u) {
        if (g.degree(u) == 0) return 0.0;
        double s = 0.0;
        for (NodeId v : g.neighbors(u)) s += deg(v);
        return s / deg(u);
      })};

    case IndexId::treewidth_min_degree:
      return {static_cast<double>(treewidth_min_degree(g))};

    case IndexId::degree_mixing_matrix:
      return {degree_mixing_mean(g)};

    case IndexId::average_degree_connectivity:
      return {average_degree_connectivity_at_max_degree(g)};

    case IndexId::degree_assortativity_coefficient:
      return {degree_assortativity(g)};

    case IndexId::katz_centrality: {
      auto katz = katz_centrality(g, params.katz);
      return {sum_over_seeds(view, [&](NodeId u) { return katz.values[u]; }),
              katz.fallback ? IndexFlag::katz_alpha_reduced : IndexFlag::none};
    }

    case IndexId::degree_centrality:
      if (n <= 1) return {0.0};
      return {sum_over_seeds(view, [&](NodeId u) { return deg(u) / static_cast<double>(n - 1); })};

    case IndexId::closeness_centrality:
      return {sum_over_seeds(view, [&](NodeId u) { return closeness_of(g, u); })};

    case IndexId::eigenvector_centrality: {
      auto eig = eigenvector_centrality(g, params.eigenvector);
      return {sum_over_seeds(view, [&](NodeId u) { return eig.values[u]; }),
              eig.fallback ? IndexFlag::eigenvector_fallback : IndexFlag::none};
    }

    case IndexId::group_degree_centrality: {
      const std::size_t group = view.seeds.size();
      if (n <= group) return {0.0};
      std::vector<bool> in_group(n, false);
      std::vector<bool> reached(n, false);
      for (NodeId s : view.seeds) in_group[s] = true;
      std::size_t count = 0;
      for (NodeId s : view.seeds) {
        for (NodeId v : g.neighbors(s)) {
          if (!in_group[v] && !reached[v]) {
            reached[v] = true;
            ++count;
          }
        }
      }
      return {static_cast<double>(count) / static_cast<double>(n - group)};
    }

    case IndexId::ramsey_r2: {
      auto [clique, indep] = ramsey_r2(g);
      return {static_cast<double>(clique.size() * indep.size())};
    }

    case IndexId::average_clustering:
      return {average_clustering(g)};

    case IndexId::resource_allocation_index: {
      auto pair = target_pair(view);
      if (!pair) return {0.0};
      auto a = g.neighbors(pair->first);
      auto b = g.neighbors(pair->second);
      std::vector<NodeId> common;
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
      double s = 0.0;
      for (NodeId k : common) s += 1.0 / deg(k);
      return {s};
    }

    case IndexId::subgraph_density:
      if (n <= 1) return {0.0};
      return {static_cast<double>(g.edge_count()) / static_cast<double>(n * (n - 1))};

    case IndexId::local_bridges:
      return {static_cast<double>(count_local_bridges(g))};

    case IndexId::number_of_nodes:
      return {static_cast<double>(n)};

    case IndexId::number_of_edges:
      return {static_cast<double>(g.edge_count())};

    case IndexId::large_clique_size:
      return {static_cast<double>(large_clique_size(g))};

    case IndexId::common_neighbors: {
      auto pair = target_pair(view);
      if (!pair) return {0.0};
      return {static_cast<double>(common_count(g, pair->first, pair->second))};
    }

    case IndexId::subgraph_connectivity: {
      auto result = node_connectivity(g, params.connectivity);
      return {static_cast<double>(result.value),
              result.sampled ? IndexFlag::connectivity_sampled : IndexFlag::none};
    }

    case IndexId::local_node_connectivity: {
      auto pair = target_pair(view);
      if (!pair) return {0.0};
      return {static_cast<double>(local_node_connectivity(g, pair->first, pair->second))};
    }

    case IndexId::min_weighted_dominating_set:
      return {static_cast<double>(greedy_dominating_set(g).size())};

    case IndexId::min_weighted_vertex_cover:
      return {static_cast<double>(approximate_vertex_cover(g).size())};

    case IndexId::min_edge_dominating_set:
    case IndexId::min_maximal_matching:
      return {static_cast<double>(greedy_maximal_matching(g).size())};
  }
  throw std::invalid_argument("compute_index: unknown index");
}

}  // namespace mccl
