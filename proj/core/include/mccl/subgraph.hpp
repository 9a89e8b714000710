#pragma once

#include <vector>

#include "mccl/graph.hpp"

namespace mccl {

/// Induced k-hop neighborhood of a sample's target node(s), relabeled to
/// local ids 0..members.size()-1. Local ids follow ascending global id.
struct SubgraphView {
  std::vector<NodeId> members;  // global ids, ascending
  Graph local;                  // induced adjacency over local ids
  std::vector<NodeId> seeds;    // local ids of the targets, in sample order

  std::size_t size() const noexcept { return members.size(); }
};

/// BFS jointly from all seeds up to depth `hops` (the union of the seeds'
/// neighborhoods) and returns the induced subgraph. Requires hops >= 1 and
/// valid, distinct seeds.
SubgraphView k_hop_subgraph(const Graph& graph, std::span<const NodeId> seeds, int hops);

}  // namespace mccl
