#include "mccl/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <limits>
#include <string>

#include "mccl/errors.hpp"

namespace mccl {

Graph Graph::from_edges(std::size_t node_count, std::span<const Edge> edges) {
  Graph g;
  g.adjacency_.resize(node_count);
  for (auto [u, v] : edges) {
    if (u >= node_count || v >= node_count) {
      throw DataError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                      ") references a node outside 0.." + std::to_string(node_count));
    }
    if (u == v) continue;
    g.adjacency_[u].push_back(v);
    g.adjacency_[v].push_back(u);
  }
  std::size_t half_edges = 0;
  for (auto& nbrs : g.adjacency_) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    nbrs.shrink_to_fit();
    half_edges += nbrs.size();
  }
  g.edge_count_ = half_edges / 2;
  return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  const auto& nbrs = adjacency_[u];
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (NodeId u = 0; u < adjacency_.size(); ++u) {
    for (NodeId v : adjacency_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

namespace {

bool parse_node_id(std::string_view token, std::uint64_t& out) {
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

std::vector<std::string_view> split_whitespace(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

}  // namespace

Graph load_edge_list(const std::filesystem::path& path, std::optional<std::size_t> node_count_hint,
                     EdgeListStats* stats) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open edge list: " + path.string());

  const std::uint64_t id_limit =
      node_count_hint ? *node_count_hint : std::numeric_limits<NodeId>::max();
  std::vector<Edge> edges;
  EdgeListStats local;
  std::uint64_t max_id = 0;
  bool any = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = split_whitespace(line);
    if (tokens.empty() || tokens.front().front() == '#') continue;
    if (tokens.size() != 2) {
      throw ParseError(path.string(), line_no, "expected two node ids");
    }
    std::uint64_t u = 0;
    std::uint64_t v = 0;
    if (!parse_node_id(tokens[0], u) || !parse_node_id(tokens[1], v)) {
      throw ParseError(path.string(), line_no, "node ids must be non-negative integers");
    }
    if (u >= id_limit || v >= id_limit) {
      throw ParseError(path.string(), line_no,
                       "node id exceeds limit " + std::to_string(id_limit));
    }
    ++local.lines_read;
    if (u == v) {
      ++local.self_loops_dropped;
      continue;
    }
    max_id = std::max({max_id, u, v});
    any = true;
    edges.emplace_back(static_cast<NodeId>(std::min(u, v)), static_cast<NodeId>(std::max(u, v)));
  }

  std::sort(edges.begin(), edges.end());
  auto last = std::unique(edges.begin(), edges.end());
  local.duplicates_dropped = static_cast<std::size_t>(edges.end() - last);
  edges.erase(last, edges.end());

  std::size_t node_count = node_count_hint ? *node_count_hint : (any ? max_id + 1 : 0);
  if (stats) *stats = local;
  return Graph::from_edges(node_count, edges);
}

}  // namespace mccl
