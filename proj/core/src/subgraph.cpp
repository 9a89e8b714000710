#include "mccl/subgraph.hpp"

#include <algorithm>
#include <stdexcept>

namespace mccl {

SubgraphView k_hop_subgraph(const Graph& graph, std::span<const NodeId> seeds, int hops) {
  if (seeds.empty()) throw std::invalid_argument("k_hop_subgraph: no seeds");
  if (hops < 1) throw std::invalid_argument("k_hop_subgraph: hops must be >= 1");

  const std::size_t n = graph.node_count();
  std::vector<int> depth(n, -1);
  std::vector<NodeId> frontier;
  std::vector<NodeId> members;
  for (NodeId s : seeds) {
    if (s >= n) throw std::invalid_argument("k_hop_subgraph: seed out of range");
    if (depth[s] == 0) throw std::invalid_argument("k_hop_subgraph: duplicate seed");
    depth[s] = 0;
    frontier.push_back(s);
    members.push_back(s);
  }
  for (int d = 1; d <= hops && !frontier.empty(); ++d) {
    std::vector<NodeId> next;
    for (NodeId u : frontier) {
      for (NodeId v : graph.neighbors(u)) {
        if (depth[v] < 0) {
          depth[v] = d;
          next.push_back(v);
          members.push_back(v);
        }
      }
    }
    frontier = std::move(next);
  }
  std::sort(members.begin(), members.end());

  auto local_id = [&](NodeId global) {
    return static_cast<NodeId>(std::lower_bound(members.begin(), members.end(), global) -
                               members.begin());
  };

  std::vector<Edge> local_edges;
  for (NodeId i = 0; i < members.size(); ++i) {
    for (NodeId v : graph.neighbors(members[i])) {
      if (v > members[i] && depth[v] >= 0) local_edges.emplace_back(i, local_id(v));
    }
  }

  SubgraphView view;
  view.local = Graph::from_edges(members.size(), local_edges);
  for (NodeId s : seeds) view.seeds.push_back(local_id(s));
  view.members = std::move(members);
  return view;
}

}  // namespace mccl
