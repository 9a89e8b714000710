#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "mccl/dataset.hpp"
#include "mccl/errors.hpp"
#include "mccl/learner.hpp"
#include "mccl/score_table.hpp"

namespace fixtures {

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("mccl_test_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Node-task dataset over `graph` with one sample per node, label = node % 2,
// features = (1, node id), and every node in train except the given val ids.
inline mccl::Dataset node_dataset(const mccl::Graph& graph, std::vector<mccl::SampleId> val = {}, int hops = 1) {
  const std::size_t n = graph.node_count();
  std::vector<mccl::Sample> samples;
  mccl::FeatureMatrix features{n, 2, {}};
  mccl::Splits splits;
  for (std::size_t i = 0; i < n; ++i) {
    const auto id = static_cast<mccl::SampleId>(i);
    samples.push_back({id, {static_cast<mccl::NodeId>(i)}, static_cast<int>(i % 2)});
    features.values.push_back(1.0);
    features.values.push_back(static_cast<double>(i));
    if (std::find(val.begin(), val.end(), id) == val.end()) {
      splits.train.push_back(id);
    } else {
      splits.val.push_back(id);
    }
  }
  return mccl::Dataset(graph, samples, features, splits, mccl::Task::node, hops);
}

// Scores table over the given sample ids with one normalized column per index.
inline mccl::IndexScoreTable table(std::vector<mccl::SampleId> ids, std::vector<mccl::IndexId> indices,
                                   const std::vector<std::vector<double>>& columns) {
  mccl::IndexScoreTable t;
  t.sample_ids = std::move(ids);
  t.indices = std::move(indices);
  t.raw = mccl::ScoreMatrix(t.sample_ids.size(), t.indices.size());
  for (std::size_t c = 0; c < columns.size(); ++c) t.raw.set_column(c, columns[c]);
  t.normalized = t.raw;
  return t;
}

// Learner with a fixed per-sample loss (loss_of) that counts passes like a
// real one. Training bumps an epoch counter; `diverge_at` makes the given
// epoch throw.
class StubLearner final : public mccl::Learner {
 public:
  explicit StubLearner(double offset = 0.0) : offset_(offset) {}

  std::vector<double> forward_losses(std::span<const mccl::SampleId> samples) const override {
    std::vector<double> out;
    for (auto id : samples) out.push_back(loss_of(id));
    count_forward(samples.size());
    return out;
  }
  double train_epoch(std::span<const mccl::SampleId> samples, const mccl::EpochOptions&) override {
    if (samples.empty()) return 0.0;
    if (++epochs_ == diverge_at) throw mccl::DivergenceError("stub diverged");
    count_forward(samples.size());
    count_backward(samples.size());
    return 1.0 / static_cast<double>(epochs_);
  }
  std::vector<std::vector<double>> predict(std::span<const mccl::SampleId> samples) const override {
    count_forward(samples.size());
    return std::vector<std::vector<double>>(samples.size(), {0.6, 0.4});
  }
  mccl::ParameterSnapshot snapshot() const override { return {{1}, {static_cast<double>(epochs_)}}; }
  void restore(const mccl::ParameterSnapshot&) override {}

  double loss_of(mccl::SampleId id) const { return offset_ + static_cast<double>((id * 7919) % 13) / 13.0; }

  int epochs_ = 0;
  int diverge_at = -1;

 private:
  double offset_;
};

}  // namespace fixtures
