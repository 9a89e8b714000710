#pragma once

#include <cstdint>

#include "mccl/dataset.hpp"

namespace mccl {

/// Planted-partition graph with class-correlated Gaussian features.
///
/// Node i is assigned to block (i mod blocks) and edges are sampled
/// independently with p_in inside a block and p_out across blocks. Feature
/// vectors are N(signal * mu_block, noise^2 I) with mu_block a seeded random
/// +/-1 pattern. For node tasks every node is a sample labeled by its block;
/// for link tasks samples are balanced existing edges (label 1) and non-edges
/// (label 0).
struct SyntheticOptions {
  std::size_t nodes = 300;
  int blocks = 2;
  double p_in = 0.04;
  double p_out = 0.01;
  std::size_t feature_dim = 8;
  double signal = 0.35;
  double noise = 1.0;
  double train_fraction = 0.6;
  double val_fraction = 0.2;
  Task task = Task::node;
  int hops = 2;
  std::size_t link_samples = 400;
  std::uint64_t seed = 7;
};

Dataset generate_sbm(const SyntheticOptions& options);

}  // namespace mccl
