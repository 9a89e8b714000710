#include <algorithm>
#include <limits>
#include <queue>
#include <random>

#include "mccl/indices.hpp"

namespace mccl {

namespace {

// Unit-capacity max-flow on the vertex-split digraph: node v becomes
// in(v) = 2v -> out(v) = 2v + 1 with capacity 1 (unbounded for s and t), and
// each undirected edge u-v becomes out(u) -> in(v) and out(v) -> in(u).
class SplitFlow {
 public:
  SplitFlow(const Graph& g, NodeId s, NodeId t) : head_(2 * g.node_count(), -1) {
    constexpr int kUnbounded = std::numeric_limits<int>::max() / 2;
    for (NodeId v = 0; v < g.node_count(); ++v) {
      add_arc(2 * v, 2 * v + 1, (v == s || v == t) ? kUnbounded : 1);
    }
    for (NodeId u = 0; u < g.node_count(); ++u) {
      for (NodeId v : g.neighbors(u)) add_arc(2 * u + 1, 2 * v, 1);
    }
  }

  std::size_t max_flow(std::size_t source, std::size_t sink) {
    std::size_t flow = 0;
    std::vector<int> via(head_.size());
    while (true) {
      std::fill(via.begin(), via.end(), -1);
      std::queue<std::size_t> q;
      q.push(source);
      via[source] = -2;
      while (!q.empty() && via[sink] == -1) {
        const std::size_t a = q.front();
        q.pop();
        for (int e = head_[a]; e >= 0; e = next_[e]) {
          const std::size_t b = to_[e];
          if (cap_[e] > 0 && via[b] == -1) {
            via[b] = e;
            q.push(b);
          }
        }
      }
      if (via[sink] == -1) return flow;
      for (std::size_t b = sink; b != source;) {
        const int e = via[b];
        cap_[e] -= 1;
        cap_[e ^ 1] += 1;
        b = to_[e ^ 1];
      }
      ++flow;
    }
  }

 private:
  void add_arc(std::size_t a, std::size_t b, int cap) {
    to_.push_back(b);
    cap_.push_back(cap);
    next_.push_back(head_[a]);
    head_[a] = static_cast<int>(to_.size()) - 1;
    to_.push_back(a);
    cap_.push_back(0);
    next_.push_back(head_[b]);
    head_[b] = static_cast<int>(to_.size()) - 1;
  }

  std::vector<int> head_;
  std::vector<std::size_t> to_;
  std::vector<int> cap_;
  std::vector<int> next_;
};

bool is_connected(const Graph& g) {
  const std::size_t n = g.node_count();
  if (n == 0) return true;
  std::vector<bool> seen(n, false);
  std::vector<NodeId> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    for (NodeId v : g.neighbors(u)) {
      if (!seen[v]) {
        seen[v] = true;
        ++reached;
        stack.push_back(v);
      }
    }
  }
  return reached == n;
}

}  // namespace

std::size_t local_node_connectivity(const Graph& g, NodeId s, NodeId t) {
  if (s == t) return 0;
  SplitFlow flow(g, s, t);
  return flow.max_flow(2 * s + 1, 2 * t);
}

ConnectivityResult node_connectivity(const Graph& g, const ConnectivityParams& params) {
  const std::size_t n = g.node_count();
  if (n <= 1 || !is_connected(g)) return {};
  if (g.edge_count() == n * (n - 1) / 2) return {n - 1, false};

  NodeId pivot = 0;
  for (NodeId u = 1; u < n; ++u) {
    if (g.degree(u) < g.degree(pivot)) pivot = u;
  }
  std::size_t best = g.degree(pivot);

  if (n > params.exact_limit) {
    std::mt19937_64 rng(params.seed);
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
    int found = 0;
    for (int attempt = 0; found < params.sampled_pairs && attempt < 50 * params.sampled_pairs;
         ++attempt) {
      const NodeId a = pick(rng);
      const NodeId b = pick(rng);
      if (a == b || g.has_edge(a, b)) continue;
      ++found;
      best = std::min(best, local_node_connectivity(g, a, b));
    }
    return {best, true};
  }

  // A minimum cut either misses the pivot (separating it from some
  // non-neighbor) or contains it (separating two of its neighbors).
  for (NodeId w = 0; w < n && best > 0; ++w) {
    if (w != pivot && !g.has_edge(pivot, w)) best = std::min(best, local_node_connectivity(g, pivot, w));
  }
  auto nbrs = g.neighbors(pivot);
  for (std::size_t i = 0; i < nbrs.size() && best > 0; ++i) {
    for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
      if (!g.has_edge(nbrs[i], nbrs[j])) best = std::min(best, local_node_connectivity(g, nbrs[i], nbrs[j]));
    }
  }
  return {best, false};
}

}  // namespace mccl
