#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "mccl/indices.hpp"

namespace mccl {

namespace {

std::size_t intersection_size(std::span<const NodeId> a, std::span<const NodeId> b) {
  std::size_t count = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

}  // namespace

double local_clustering(const Graph& g, NodeId u) {
  const std::size_t d = g.degree(u);
  if (d < 2) return 0.0;
  std::size_t twice_triangles = 0;
  for (NodeId v : g.neighbors(u)) twice_triangles += intersection_size(g.neighbors(u), g.neighbors(v));
  return static_cast<double>(twice_triangles) / static_cast<double>(d * (d - 1));
}

double average_clustering(const Graph& g) {
  const std::size_t n = g.node_count();
  if (n < 3) return 0.0;
  double sum = 0.0;
  for (NodeId u = 0; u < n; ++u) sum += local_clustering(g, u);
  return sum / static_cast<double>(n);
}

double degree_assortativity(const Graph& g) {
  if (g.edge_count() == 0) return 0.0;
  // Each undirected edge contributes both (deg u, deg v) and (deg v, deg u).
  const double pairs = 2.0 * static_cast<double>(g.edge_count());
  double mean = 0.0;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    const double d = static_cast<double>(g.degree(u));
    mean += d * d;
  }
  mean /= pairs;
  double var = 0.0;
  double cov = 0.0;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    const double du = static_cast<double>(g.degree(u)) - mean;
    for (NodeId v : g.neighbors(u)) {
      const double dv = static_cast<double>(g.degree(v)) - mean;
      var += du * du;
      cov += du * dv;
    }
  }
  if (var <= 1e-12 * pairs) return 0.0;
  return cov / var;
}

double degree_mixing_mean(const Graph& g) {
  if (g.edge_count() == 0) return 0.0;
  std::vector<std::size_t> degrees;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (g.degree(u) > 0) degrees.push_back(g.degree(u));
  }
  std::sort(degrees.begin(), degrees.end());
  degrees.erase(std::unique(degrees.begin(), degrees.end()), degrees.end());
  const std::size_t k = degrees.size();
  auto slot = [&](std::size_t d) {
    return static_cast<std::size_t>(std::lower_bound(degrees.begin(), degrees.end(), d) - degrees.begin());
  };
  std::vector<double> joint(k * k, 0.0);
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (NodeId v : g.neighbors(u)) joint[slot(g.degree(u)) * k + slot(g.degree(v))] += 1.0;
  }
  const double total = 2.0 * static_cast<double>(g.edge_count());
  double sum = 0.0;
  for (double& p : joint) sum += p / total;
  return sum / static_cast<double>(k * k);
}

double average_degree_connectivity_at_max_degree(const Graph& g) {
  std::size_t kmax = 0;
  for (NodeId u = 0; u < g.node_count(); ++u) kmax = std::max(kmax, g.degree(u));
  if (kmax == 0) return 0.0;
  double neighbor_degree_sum = 0.0;
  std::size_t nodes = 0;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (g.degree(u) != kmax) continue;
    ++nodes;
    for (NodeId v : g.neighbors(u)) neighbor_degree_sum += static_cast<double>(g.degree(v));
  }
  return neighbor_degree_sum / static_cast<double>(nodes * kmax);
}

std::size_t count_local_bridges(const Graph& g) {
  std::size_t count = 0;
  for (auto [u, v] : g.edges()) {
    if (intersection_size(g.neighbors(u), g.neighbors(v)) == 0) ++count;
  }
  return count;
}

std::vector<Edge> greedy_maximal_matching(const Graph& g) {
  std::vector<bool> matched(g.node_count(), false);
  std::vector<Edge> matching;
  for (auto [u, v] : g.edges()) {
    if (!matched[u] && !matched[v]) {
      matched[u] = matched[v] = true;
      matching.emplace_back(u, v);
    }
  }
  return matching;
}

std::vector<NodeId> approximate_vertex_cover(const Graph& g) {
  std::vector<NodeId> cover;
  for (auto [u, v] : greedy_maximal_matching(g)) {
    cover.push_back(u);
    cover.push_back(v);
  }
  std::sort(cover.begin(), cover.end());
  return cover;
}

std::vector<NodeId> greedy_dominating_set(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<bool> covered(n, false);
  std::size_t remaining = n;
  std::vector<NodeId> chosen;
  while (remaining > 0) {
    NodeId best = 0;
    std::size_t best_gain = 0;
    for (NodeId u = 0; u < n; ++u) {
      std::size_t gain = covered[u] ? 0 : 1;
      for (NodeId v : g.neighbors(u)) gain += covered[v] ? 0 : 1;
      if (gain > best_gain) {
        best_gain = gain;
        best = u;
      }
    }
    chosen.push_back(best);
    if (!covered[best]) {
      covered[best] = true;
      --remaining;
    }
    for (NodeId v : g.neighbors(best)) {
      if (!covered[v]) {
        covered[v] = true;
        --remaining;
      }
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

namespace {

using NodeSet = std::vector<NodeId>;

std::pair<NodeSet, NodeSet> ramsey_recurse(const Graph& g, const NodeSet& nodes) {
  if (nodes.empty()) return {};
  const NodeId pivot = nodes.front();
  NodeSet nbrs;
  NodeSet non_nbrs;
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    (g.has_edge(pivot, nodes[i]) ? nbrs : non_nbrs).push_back(nodes[i]);
  }
  auto [clique1, indep1] = ramsey_recurse(g, nbrs);
  auto [clique2, indep2] = ramsey_recurse(g, non_nbrs);
  clique1.push_back(pivot);
  indep2.push_back(pivot);
  return {clique1.size() >= clique2.size() ? std::move(clique1) : std::move(clique2),
          indep1.size() >= indep2.size() ? std::move(indep1) : std::move(indep2)};
}

}  // namespace

std::pair<std::vector<NodeId>, std::vector<NodeId>> ramsey_r2(const Graph& g) {
  NodeSet all(g.node_count());
  for (NodeId u = 0; u < all.size(); ++u) all[u] = u;
  auto [clique, indep] = ramsey_recurse(g, all);
  std::sort(clique.begin(), clique.end());
  std::sort(indep.begin(), indep.end());
  return {clique, indep};
}

std::size_t large_clique_size(const Graph& g) {
  std::size_t best = 0;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (g.degree(u) < best) continue;
    NodeSet candidates;
    for (NodeId v : g.neighbors(u)) {
      if (g.degree(v) >= best) candidates.push_back(v);
    }
    std::size_t size = 1;
    while (!candidates.empty()) {
      auto pick = std::max_element(candidates.begin(), candidates.end(), [&](NodeId a, NodeId b) {
        return g.degree(a) < g.degree(b);
      });
      const NodeId w = *pick;
      candidates.erase(pick);
      NodeSet next;
      for (NodeId v : candidates) {
        if (g.has_edge(w, v) && g.degree(v) >= best) next.push_back(v);
      }
      candidates = std::move(next);
      ++size;
    }
    best = std::max(best, size);
  }
  return best;
}

std::size_t treewidth_min_degree(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::set<NodeId>> adj(n);
  for (NodeId u = 0; u < n; ++u) adj[u].insert(g.neighbors(u).begin(), g.neighbors(u).end());
  std::set<std::pair<std::size_t, NodeId>> queue;
  for (NodeId u = 0; u < n; ++u) queue.emplace(adj[u].size(), u);

  std::size_t width = 0;
  while (!queue.empty()) {
    auto [deg, u] = *queue.begin();
    queue.erase(queue.begin());
    width = std::max(width, deg);
    std::vector<NodeId> nbrs(adj[u].begin(), adj[u].end());
    for (NodeId v : nbrs) {
      queue.erase({adj[v].size(), v});
      adj[v].erase(u);
    }
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
        adj[nbrs[i]].insert(nbrs[j]);
        adj[nbrs[j]].insert(nbrs[i]);
      }
    }
    for (NodeId v : nbrs) queue.emplace(adj[v].size(), v);
    adj[u].clear();
  }
  return width;
}

}  // namespace mccl
