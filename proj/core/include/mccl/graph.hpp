#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace mccl {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Immutable undirected simple graph. Neighbor lists are sorted, symmetric,
/// free of self-loops and duplicates.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph from an arbitrary edge list: edges are symmetrized,
  /// duplicates and self-loops are dropped. Throws DataError if an endpoint
  /// is >= node_count.
  static Graph from_edges(std::size_t node_count, std::span<const Edge> edges);

  std::size_t node_count() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }

  std::span<const NodeId> neighbors(NodeId u) const { return adjacency_[u]; }
  std::size_t degree(NodeId u) const { return adjacency_[u].size(); }
  bool has_edge(NodeId u, NodeId v) const;

  /// Every edge once as (u, v) with u < v, in lexicographic order.
  std::vector<Edge> edges() const;

  bool operator==(const Graph&) const = default;

 private:
  std::vector<std::vector<NodeId>> adjacency_;
  std::size_t edge_count_ = 0;
};

struct EdgeListStats {
  std::size_t lines_read = 0;
  std::size_t duplicates_dropped = 0;
  std::size_t self_loops_dropped = 0;
};

/// Reads a whitespace-separated edge list. Lines starting with '#' and blank
/// lines are skipped. Without a hint the node count is max id + 1; with a
/// hint every id must be below it.
Graph load_edge_list(const std::filesystem::path& path,
                     std::optional<std::size_t> node_count_hint = std::nullopt,
                     EdgeListStats* stats = nullptr);

}  // namespace mccl
