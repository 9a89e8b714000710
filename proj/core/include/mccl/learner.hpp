#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mccl/dataset.hpp"

namespace mccl {

struct ParameterSnapshot {
  std::vector<std::size_t> shape;  // e.g. {classes, inputs + 1}
  std::vector<double> values;

  bool operator==(const ParameterSnapshot&) const = default;
};

/// Writes little-endian float64 values to `path` and the shape to `path`.json.
void save_snapshot(const ParameterSnapshot& snapshot, const std::filesystem::path& path);
ParameterSnapshot load_snapshot(const std::filesystem::path& path);

struct PassCounters {
  std::uint64_t forward = 0;
  std::uint64_t backward = 0;
};

struct EpochOptions {
  double learning_rate = 0.1;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;
};

/// Trainable model consumed by the scheduler. Every per-sample forward
/// evaluation and backward step is counted.
class Learner {
 public:
  virtual ~Learner() = default;

  /// Per-sample cross-entropy. Does not touch parameters.
  virtual std::vector<double> forward_losses(std::span<const SampleId> samples) const = 0;

  /// One pass over seeded-shuffled mini-batches with a gradient step per
  /// batch. Returns the mean of the losses seen before each batch's update.
  virtual double train_epoch(std::span<const SampleId> samples, const EpochOptions& options) = 0;

  /// Class probabilities per sample.
  virtual std::vector<std::vector<double>> predict(std::span<const SampleId> samples) const = 0;

  virtual ParameterSnapshot snapshot() const = 0;
  virtual void restore(const ParameterSnapshot& snapshot) = 0;

  PassCounters counters() const {
    return {forward_.load(std::memory_order_relaxed), backward_.load(std::memory_order_relaxed)};
  }

 protected:
  void count_forward(std::uint64_t n) const { forward_.fetch_add(n, std::memory_order_relaxed); }
  void count_backward(std::uint64_t n) const { backward_.fetch_add(n, std::memory_order_relaxed); }

 private:
  mutable std::atomic<std::uint64_t> forward_{0};
  mutable std::atomic<std::uint64_t> backward_{0};
};

enum class LearnerVariant { linear, neighborhood };

std::string_view to_string(LearnerVariant variant);
LearnerVariant parse_learner_variant(std::string_view text);

/// Softmax regression over per-sample inputs.
///
/// Node representation: the node's features (linear), or the node's features
/// concatenated with the mean of its neighbors' features (neighborhood).
/// Sample input: the target's representation for node tasks, or
/// [r_u * r_v, r_u + r_v] (elementwise) for link tasks.
///
/// Weights start uniform in [-0.1, 0.1] under the seed; biases start at 0.
class ReferenceLearner final : public Learner {
 public:
  ReferenceLearner(const Dataset& dataset, LearnerVariant variant, std::uint64_t seed);

  std::vector<double> forward_losses(std::span<const SampleId> samples) const override;
  double train_epoch(std::span<const SampleId> samples, const EpochOptions& options) override;
  std::vector<std::vector<double>> predict(std::span<const SampleId> samples) const override;
  ParameterSnapshot snapshot() const override;
  void restore(const ParameterSnapshot& snapshot) override;

  std::size_t input_dim() const noexcept { return input_dim_; }
  std::size_t class_count() const noexcept { return classes_; }
  LearnerVariant variant() const noexcept { return variant_; }

  /// Flat parameters: row c holds the weights of class c followed by its bias.
  std::span<const double> parameters() const noexcept { return params_; }
  void set_parameters(std::span<const double> values);

  /// Mean cross-entropy over `samples` and its gradient w.r.t. parameters().
  /// Not counted as training passes.
  double loss_and_gradient(std::span<const SampleId> samples, std::vector<double>& gradient) const;

  std::span<const double> input(SampleId id) const;

 private:
  std::size_t row_of(SampleId id) const;
  void logits(std::span<const double> x, std::span<double> out) const;
  double accumulate(std::span<const SampleId> samples, std::vector<double>* gradient) const;

  LearnerVariant variant_;
  std::size_t input_dim_ = 0;
  std::size_t classes_ = 2;
  std::vector<double> params_;
  std::vector<double> inputs_;  // one row per dataset sample
  std::vector<int> labels_;
  std::unordered_map<SampleId, std::size_t> rows_;
};

}  // namespace mccl
