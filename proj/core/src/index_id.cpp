#include "mccl/index_id.hpp"

#include <stdexcept>

namespace mccl {

namespace {

constexpr std::array<std::string_view, kIndexCount> kNames = {
    "degree",
    "treewidth_min_degree",
    "average_neighbor_degree",
    "degree_mixing_matrix",
    "average_degree_connectivity",
    "degree_assortativity_coefficient",
    "katz_centrality",
    "degree_centrality",
    "closeness_centrality",
    "eigenvector_centrality",
    "group_degree_centrality",
    "ramsey_r2",
    "average_clustering",
    "resource_allocation_index",
    "subgraph_density",
    "local_bridges",
    "number_of_nodes",
    "number_of_edges",
    "large_clique_size",
    "common_neighbors",
    "subgraph_connectivity",
    "local_node_connectivity",
    "min_weighted_dominating_set",
    "min_weighted_vertex_cover",
    "min_edge_dominating_set",
    "min_maximal_matching",
};

constexpr std::string_view kRandomName = "random";

}  // namespace

std::array<IndexId, kIndexCount> all_indices() {
  std::array<IndexId, kIndexCount> out{};
  for (std::size_t i = 0; i < kIndexCount; ++i) out[i] = static_cast<IndexId>(i);
  return out;
}

std::string_view name(IndexId id) { return kNames.at(static_cast<std::size_t>(id)); }

std::optional<IndexId> parse_index(std::string_view text) {
  for (std::size_t i = 0; i < kIndexCount; ++i) {
    if (kNames[i] == text) return static_cast<IndexId>(i);
  }
  return std::nullopt;
}

IndexScope scope(IndexId id) {
  switch (id) {
    case IndexId::degree:
    case IndexId::average_neighbor_degree:
    case IndexId::katz_centrality:
    case IndexId::degree_centrality:
    case IndexId::closeness_centrality:
    case IndexId::eigenvector_centrality:
      return IndexScope::node;
    case IndexId::resource_allocation_index:
    case IndexId::common_neighbors:
    case IndexId::local_node_connectivity:
      return IndexScope::pair;
    default:
      return IndexScope::subgraph;
  }
}

IndexId ViewId::index() const {
  if (is_random()) throw std::logic_error("Random view has no index");
  return static_cast<IndexId>(code_);
}

std::string_view ViewId::name() const { return is_random() ? kRandomName : mccl::name(index()); }

std::optional<ViewId> ViewId::parse(std::string_view text) {
  if (text == kRandomName) return random();
  if (auto id = parse_index(text)) return ViewId(*id);
  return std::nullopt;
}

}  // namespace mccl
