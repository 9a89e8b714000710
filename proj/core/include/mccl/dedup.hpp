#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mccl/index_id.hpp"
#include "mccl/score_table.hpp"

namespace mccl {

/// Column c holds the ascending rank (1-based, ties averaged) of every
/// sample under index c.
struct RankingMatrix {
  std::vector<IndexId> indices;
  std::vector<std::vector<double>> columns;
};

struct CorrelationMatrix {
  std::vector<IndexId> indices;
  std::vector<std::vector<double>> values;

  std::size_t size() const noexcept { return indices.size(); }
};

struct ClusterAssignment {
  std::vector<IndexId> indices;
  std::vector<int> cluster;  // cluster id per index, compacted to 0..cluster_count-1
  int cluster_count = 0;
  int requested_k = 0;
  std::uint64_t seed = 0;
  // Within-cluster sum of squares after every Lloyd iteration.
  std::vector<double> objective_history;
  int iterations = 0;
};

std::vector<double> average_ranks(std::span<const double> values);
RankingMatrix rank_samples(const IndexScoreTable& table);

/// Pearson correlation; 0 when either side has zero variance. Requires equal
/// lengths >= 2 (throws std::invalid_argument otherwise).
double pearson(std::span<const double> x, std::span<const double> y);

CorrelationMatrix correlation_matrix(const RankingMatrix& ranking);

/// k-means on the correlation rows: seeded k-means++ initialization, Lloyd
/// iterations until the assignment is stable (max 300). Empty clusters are
/// dropped, so cluster_count may be below k.
ClusterAssignment kmeans_cluster(const CorrelationMatrix& corr, int k, std::uint64_t seed,
                                 int max_iterations = 300);

/// One uniformly drawn member per cluster, in ascending IndexId order.
std::vector<IndexId> select_representatives(const ClusterAssignment& assignment,
                                            std::uint64_t seed);

struct DedupResult {
  CorrelationMatrix correlation;
  ClusterAssignment assignment;
  std::vector<IndexId> representatives;
  bool pinned = false;
};

/// rank -> correlate -> cluster -> pick. A non-empty `pinned` list replaces
/// the random pick but the clustering is still reported.
DedupResult deduplicate(const IndexScoreTable& table, int k, std::uint64_t seed,
                        std::span<const IndexId> pinned = {});

std::string dedup_report_json(const DedupResult& result);

}  // namespace mccl
