#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mccl/graph.hpp"

namespace mccl {

using SampleId = std::int64_t;

enum class Task { node, link };

std::string_view to_string(Task task);
Task parse_task(std::string_view text);

/// One training unit: a target node or a target node pair, plus its class.
struct Sample {
  SampleId id = 0;
  std::vector<NodeId> targets;
  int label = 0;

  bool operator==(const Sample&) const = default;
};

struct Splits {
  std::vector<SampleId> train;
  std::vector<SampleId> val;
  std::vector<SampleId> test;

  bool operator==(const Splits&) const = default;
};

/// Row-major per-node feature matrix with a fixed column count.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  std::span<const double> row(std::size_t r) const {
    return {values.data() + r * cols, cols};
  }

  bool operator==(const FeatureMatrix&) const = default;
};

class Dataset {
 public:
  Dataset() = default;

  /// Validates every dataset invariant; throws DataError on violation.
  Dataset(Graph graph, std::vector<Sample> samples, FeatureMatrix features,
          Splits splits, Task task, int hops);

  const Graph& graph() const noexcept { return graph_; }
  const std::vector<Sample>& samples() const noexcept { return samples_; }
  const FeatureMatrix& features() const noexcept { return features_; }
  const Splits& splits() const noexcept { return splits_; }
  Task task() const noexcept { return task_; }
  int hops() const noexcept { return hops_; }
  int class_count() const noexcept { return class_count_; }

  const Sample& sample(SampleId id) const;
  bool contains(SampleId id) const { return index_.contains(id); }

  /// Stable 64-bit fingerprint of the graph, samples, features, splits, task
  /// and hop radius. Used to key score caches.
  std::uint64_t fingerprint() const;

 private:
  Graph graph_;
  std::vector<Sample> samples_;
  FeatureMatrix features_;
  Splits splits_;
  Task task_ = Task::node;
  int hops_ = 1;
  int class_count_ = 2;
  std::unordered_map<SampleId, std::size_t> index_;
};

struct DatasetPaths {
  std::filesystem::path graph;
  std::filesystem::path features;
  std::filesystem::path labels;
  std::filesystem::path splits;
};

/// Loads the four dataset files (edge list, features CSV, samples CSV,
/// splits CSV). CSV files may start with a header line.
Dataset load_dataset(const DatasetPaths& paths, Task task, int hops);

/// Writes a dataset back to the four file formats load_dataset reads.
void save_dataset(const Dataset& dataset, const DatasetPaths& paths);

}  // namespace mccl
