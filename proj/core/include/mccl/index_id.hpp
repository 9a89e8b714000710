#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace mccl {

/// The complexity indices. Integer codes are stable and used for
/// serialization and for tie-breaking during view selection.
enum class IndexId : std::uint8_t {
  degree = 0,
  treewidth_min_degree,
  average_neighbor_degree,
  degree_mixing_matrix,
  average_degree_connectivity,
  degree_assortativity_coefficient,
  katz_centrality,
  degree_centrality,
  closeness_centrality,
  eigenvector_centrality,
  group_degree_centrality,
  ramsey_r2,
  average_clustering,
  resource_allocation_index,
  subgraph_density,
  local_bridges,
  number_of_nodes,
  number_of_edges,
  large_clique_size,
  common_neighbors,
  subgraph_connectivity,
  local_node_connectivity,
  min_weighted_dominating_set,
  min_weighted_vertex_cover,
  min_edge_dominating_set,
  min_maximal_matching,
};

inline constexpr std::size_t kIndexCount = 26;

std::array<IndexId, kIndexCount> all_indices();

constexpr int code(IndexId id) noexcept { return static_cast<int>(id); }

std::string_view name(IndexId id);
std::optional<IndexId> parse_index(std::string_view name);

/// How a raw score is derived from the sample's targets.
enum class IndexScope {
  node,      // summed over target nodes
  pair,      // evaluated on the target pair
  subgraph,  // a statistic of the whole view (or of the target group)
};

IndexScope scope(IndexId id);

/// A curriculum view: one of the complexity indices, or the fake Random view
/// used as a sanity check. Random sorts after every real index.
class ViewId {
 public:
  constexpr ViewId(IndexId id) noexcept : code_(static_cast<int>(id)) {}  // NOLINT

  static constexpr ViewId random() noexcept { return ViewId(static_cast<int>(kIndexCount)); }

  constexpr int code() const noexcept { return code_; }
  constexpr bool is_random() const noexcept { return code_ == static_cast<int>(kIndexCount); }
  IndexId index() const;  // precondition: !is_random()
  std::string_view name() const;

  static std::optional<ViewId> parse(std::string_view text);

  constexpr auto operator<=>(const ViewId&) const = default;

 private:
  constexpr explicit ViewId(int code) noexcept : code_(code) {}
  int code_;
};

}  // namespace mccl
