#include <algorithm>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "mccl/dataset.hpp"
#include "mccl/errors.hpp"
#include "mccl/graph.hpp"
#include "mccl/subgraph.hpp"
#include "oracles.hpp"

using namespace mccl;
using fixtures::TempDir;
using fixtures::write;

namespace {

std::vector<NodeId> nbrs(const Graph& g, NodeId u) {
  auto s = g.neighbors(u);
  return {s.begin(), s.end()};
}

Graph path_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return Graph::from_edges(n, edges);
}

}  // namespace

TEST(EdgeList, Triangle) {
  TempDir dir;
  write(dir / "g.txt", "0 1\n1 2\n2 0\n");
  Graph g = load_edge_list(dir / "g.txt");
  EXPECT_EQ(g.node_count(), 3u);
  EXPECT_EQ(g.edge_count(), 3u);
}

TEST(EdgeList, DuplicatesAndSelfLoopsDropped) {
  TempDir dir;
  write(dir / "g.txt", "0 1\n1 0\n0 0\n");
  EdgeListStats stats;
  Graph g = load_edge_list(dir / "g.txt", std::nullopt, &stats);
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_EQ(stats.duplicates_dropped, 1u);
  EXPECT_EQ(stats.self_loops_dropped, 1u);
}

TEST(EdgeList, PathWithComments) {
  TempDir dir;
  write(dir / "g.txt", "# path\n0 1\n1 2\n\n2 3\n3\t4\n4 5\n");
  Graph g = load_edge_list(dir / "g.txt");
  EXPECT_EQ(g.edge_count(), 5u);
  EXPECT_EQ(nbrs(g, 2), (std::vector<NodeId>{1, 3}));
}

TEST(EdgeList, MalformedLineReportsLineNumber) {
  TempDir dir;
  write(dir / "g.txt", "0 1\n# ok\n1 x\n");
  try {
    load_edge_list(dir / "g.txt");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  write(dir / "h.txt", "0 1 2\n");
  EXPECT_THROW(load_edge_list(dir / "h.txt"), ParseError);
}

TEST(EdgeList, IdOverflowAndHint) {
  TempDir dir;
  write(dir / "g.txt", "0 99999999999999\n");
  EXPECT_THROW(load_edge_list(dir / "g.txt"), ParseError);
  write(dir / "h.txt", "0 5\n");
  EXPECT_THROW(load_edge_list(dir / "h.txt", 4), DataError);
  EXPECT_EQ(load_edge_list(dir / "h.txt", 8).node_count(), 8u);
}

TEST(EdgeList, DeterministicIngestion) {
  TempDir dir;
  write(dir / "g.txt", "3 1\n0 2\n1 0\n2 3\n");
  EXPECT_EQ(load_edge_list(dir / "g.txt"), load_edge_list(dir / "g.txt"));
}

TEST(GraphTest, FromEdgesRejectsOutOfRange) {
  std::vector<Edge> edges{{0, 3}};
  EXPECT_THROW(Graph::from_edges(3, edges), DataError);
}

TEST(GraphTest, EdgesLexicographic) {
  std::vector<Edge> edges{{2, 1}, {0, 2}, {1, 0}};
  Graph g = Graph::from_edges(3, edges);
  EXPECT_EQ(g.edges(), (std::vector<Edge>{{0, 1}, {0, 2}, {1, 2}}));
}

class DatasetFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    write(dir / "g.txt", "0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n");
    write(dir / "f.csv", "f0,f1\n1,0\n0,1\n1,1\n0,0\n0.5,2\n-1,3\n");
    write(dir / "nodes.csv", "sample_id,target,label\n0,0,0\n1,1,1\n2,2,0\n3,3,1\n4,4,0\n5,5,1\n");
    write(dir / "pairs.csv", "0,0,1,1\n1,0,3,0\n2,2,3,1\n3,1,4,0\n");
    write(dir / "splits.csv", "sample_id,split\n0,train\n1,train\n2,train\n3,val\n4,test\n5,test\n");
    write(dir / "pair_splits.csv", "0,train\n1,train\n2,val\n3,test\n");
  }
  DatasetPaths paths(const std::string& labels, const std::string& splits) {
    return {dir / "g.txt", dir / "f.csv", dir / labels, dir / splits};
  }
  TempDir dir;
};

TEST_F(DatasetFiles, NodeTask) {
  Dataset d = load_dataset(paths("nodes.csv", "splits.csv"), Task::node, 2);
  EXPECT_EQ(d.samples().size(), 6u);
  EXPECT_EQ(d.features().cols, 2u);
  EXPECT_EQ(d.splits().train.size(), 3u);
  EXPECT_EQ(d.class_count(), 2);
  EXPECT_DOUBLE_EQ(d.features().row(5)[0], -1.0);
}

TEST_F(DatasetFiles, LinkTaskCarriesPairs) {
  Dataset d = load_dataset(paths("pairs.csv", "pair_splits.csv"), Task::link, 1);
  for (const auto& s : d.samples()) EXPECT_EQ(s.targets.size(), 2u);
  EXPECT_EQ(d.sample(1).targets, (std::vector<NodeId>{0, 3}));
}

TEST_F(DatasetFiles, SplitOverlapRejected) {
  write(dir / "bad_splits.csv", "0,train\n1,train\n0,test\n");
  EXPECT_THROW(load_dataset(paths("nodes.csv", "bad_splits.csv"), Task::node, 2), DataError);
}

TEST_F(DatasetFiles, MissingFeatureRowRejected) {
  write(dir / "f.csv", "1,0\n0,1\n");
  EXPECT_THROW(load_dataset(paths("nodes.csv", "splits.csv"), Task::node, 2), DataError);
}

TEST_F(DatasetFiles, WrongTargetCountRejected) {
  EXPECT_THROW(load_dataset(paths("pairs.csv", "pair_splits.csv"), Task::node, 1), DataError);
}

TEST_F(DatasetFiles, SaveRoundTrip) {
  Dataset d = load_dataset(paths("pairs.csv", "pair_splits.csv"), Task::link, 1);
  DatasetPaths out{dir / "o_g.txt", dir / "o_f.csv", dir / "o_l.csv", dir / "o_s.csv"};
  save_dataset(d, out);
  Dataset e = load_dataset(out, Task::link, 1);
  EXPECT_EQ(d.graph(), e.graph());
  EXPECT_EQ(d.samples(), e.samples());
  EXPECT_EQ(d.features(), e.features());
  EXPECT_EQ(d.splits(), e.splits());
  EXPECT_EQ(d.fingerprint(), e.fingerprint());
}

TEST_F(DatasetFiles, FingerprintSensitiveToHops) {
  Dataset a = load_dataset(paths("nodes.csv", "splits.csv"), Task::node, 1);
  Dataset b = load_dataset(paths("nodes.csv", "splits.csv"), Task::node, 2);
  EXPECT_NE(a.fingerprint(), b.fingerprint());
}

TEST(KHop, PathDepthOne) {
  Graph g = path_graph(5);
  std::vector<NodeId> seeds{2};
  auto view = k_hop_subgraph(g, seeds, 1);
  EXPECT_EQ(view.members, (std::vector<NodeId>{1, 2, 3}));
  EXPECT_EQ(view.local.edge_count(), 2u);
  // local ids follow member order: 1->0, 2->1, 3->2
  EXPECT_TRUE(view.local.has_edge(0, 1));
  EXPECT_TRUE(view.local.has_edge(1, 2));
  EXPECT_EQ(view.seeds, (std::vector<NodeId>{1}));
}

TEST(KHop, PathDepthTwo) {
  Graph g = path_graph(5);
  std::vector<NodeId> seeds{2};
  EXPECT_EQ(k_hop_subgraph(g, seeds, 2).members, (std::vector<NodeId>{0, 1, 2, 3, 4}));
}

TEST(KHop, TrianglePairUnion) {
  std::vector<Edge> edges{{0, 1}, {1, 2}, {2, 0}};
  Graph g = Graph::from_edges(3, edges);
  std::vector<NodeId> seeds{0, 1};
  auto view = k_hop_subgraph(g, seeds, 1);
  EXPECT_EQ(view.members, (std::vector<NodeId>{0, 1, 2}));
  EXPECT_EQ(view.local.edge_count(), 3u);
}

TEST(KHop, IsolatedTargetIsSingleton) {
  std::vector<Edge> edges{{0, 1}};
  Graph g = Graph::from_edges(3, edges);
  std::vector<NodeId> seeds{2};
  auto view = k_hop_subgraph(g, seeds, 3);
  EXPECT_EQ(view.members, (std::vector<NodeId>{2}));
  EXPECT_EQ(view.local.edge_count(), 0u);
}

TEST(KHop, PreconditionViolations) {
  Graph g = path_graph(3);
  std::vector<NodeId> none;
  std::vector<NodeId> bad{7};
  std::vector<NodeId> dup{1, 1};
  std::vector<NodeId> ok{1};
  EXPECT_THROW(k_hop_subgraph(g, none, 1), std::invalid_argument);
  EXPECT_THROW(k_hop_subgraph(g, bad, 1), std::invalid_argument);
  EXPECT_THROW(k_hop_subgraph(g, dup, 1), std::invalid_argument);
  EXPECT_THROW(k_hop_subgraph(g, ok, 0), std::invalid_argument);
}

// Members grow with k, and the induced edge set matches a brute-force filter
// of the full edge list.
TEST(KHop, RandomGraphsMatchBruteForce) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 12);
    std::vector<Edge> edges;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double p = 0.1 + 0.4 * unit(rng);
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        if (unit(rng) < p) edges.emplace_back(u, v);
      }
    }
    Graph g = Graph::from_edges(static_cast<std::size_t>(n), edges);
    auto dist = oracle::distances(oracle::from_edges(n, edges));
    std::vector<NodeId> seeds{static_cast<NodeId>(rng() % n)};
    if (n > 1 && rng() % 2) {
      NodeId other = static_cast<NodeId>(rng() % n);
      if (other != seeds[0]) seeds.push_back(other);
    }
    std::vector<NodeId> previous;
    for (int k = 1; k <= 4; ++k) {
      auto view = k_hop_subgraph(g, seeds, k);
      std::vector<NodeId> expected;
      for (int v = 0; v < n; ++v) {
        for (NodeId s : seeds) {
          if (dist[s][v] >= 0 && dist[s][v] <= k) {
            expected.push_back(static_cast<NodeId>(v));
            break;
          }
        }
      }
      ASSERT_EQ(view.members, expected);
      EXPECT_TRUE(std::includes(view.members.begin(), view.members.end(), previous.begin(), previous.end()));
      previous = view.members;

      std::set<Edge> induced;
      for (auto [u, v] : edges) {
        if (std::binary_search(expected.begin(), expected.end(), u) &&
            std::binary_search(expected.begin(), expected.end(), v)) {
          induced.insert({std::min(u, v), std::max(u, v)});
        }
      }
      std::set<Edge> got;
      for (auto [a, b] : view.local.edges()) got.insert({view.members[a], view.members[b]});
      ASSERT_EQ(got, induced);
      for (std::size_t i = 0; i < seeds.size(); ++i) EXPECT_EQ(view.members[view.seeds[i]], seeds[i]);
    }
  }
}
