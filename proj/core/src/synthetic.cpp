#include "mccl/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

namespace mccl {

namespace {

void check(const SyntheticOptions& o) {
  if (o.nodes < 2) throw std::invalid_argument("synthetic: need at least 2 nodes");
  if (o.blocks < 2) throw std::invalid_argument("synthetic: need at least 2 blocks");
  if (o.p_in < 0 || o.p_in > 1 || o.p_out < 0 || o.p_out > 1) {
    throw std::invalid_argument("synthetic: edge probabilities must be in [0, 1]");
  }
  if (o.feature_dim == 0) throw std::invalid_argument("synthetic: feature_dim must be positive");
  if (o.train_fraction <= 0 || o.val_fraction < 0 || o.train_fraction + o.val_fraction > 1) {
    throw std::invalid_argument("synthetic: bad split fractions");
  }
  if (o.hops < 1) throw std::invalid_argument("synthetic: hops must be >= 1");
}

Splits split_ids(std::vector<SampleId> ids, const SyntheticOptions& o, std::mt19937_64& rng) {
  std::shuffle(ids.begin(), ids.end(), rng);
  const auto n = ids.size();
  const auto n_train = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(o.train_fraction * n)));
  const auto n_val = std::min(n - n_train, static_cast<std::size_t>(std::floor(o.val_fraction * n)));
  Splits s;
  s.train.assign(ids.begin(), ids.begin() + n_train);
  s.val.assign(ids.begin() + n_train, ids.begin() + n_train + n_val);
  s.test.assign(ids.begin() + n_train + n_val, ids.end());
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.val.begin(), s.val.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

}  // namespace

Dataset generate_sbm(const SyntheticOptions& o) {
  check(o);
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto block = [&](std::size_t i) { return static_cast<int>(i % static_cast<std::size_t>(o.blocks)); };

  std::vector<Edge> edges;
  for (std::size_t u = 0; u < o.nodes; ++u) {
    for (std::size_t v = u + 1; v < o.nodes; ++v) {
      const double p = block(u) == block(v) ? o.p_in : o.p_out;
      if (unit(rng) < p) edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
    }
  }
  Graph graph = Graph::from_edges(o.nodes, edges);

  std::vector<std::vector<double>> mu(static_cast<std::size_t>(o.blocks), std::vector<double>(o.feature_dim));
  for (auto& m : mu) {
    for (double& x : m) x = unit(rng) < 0.5 ? -1.0 : 1.0;
  }
  std::normal_distribution<double> gauss(0.0, o.noise);
  FeatureMatrix features;
  features.rows = o.nodes;
  features.cols = o.feature_dim;
  features.values.reserve(o.nodes * o.feature_dim);
  for (std::size_t i = 0; i < o.nodes; ++i) {
    for (std::size_t d = 0; d < o.feature_dim; ++d) {
      features.values.push_back(o.signal * mu[static_cast<std::size_t>(block(i))][d] + gauss(rng));
    }
  }

  std::vector<Sample> samples;
  if (o.task == Task::node) {
    for (std::size_t i = 0; i < o.nodes; ++i) {
      samples.push_back({static_cast<SampleId>(i), {static_cast<NodeId>(i)}, block(i)});
    }
  } else {
    // Positives are existing edges; negatives are rejection-sampled non-edges.
    auto positives = graph.edges();
    std::shuffle(positives.begin(), positives.end(), rng);
    const std::size_t max_pairs = o.nodes * (o.nodes - 1) / 2;
    const std::size_t half = std::min({o.link_samples / 2, positives.size(), max_pairs - positives.size()});
    positives.resize(half);
    std::set<Edge> negatives;
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(o.nodes - 1));
    while (negatives.size() < half) {
      NodeId u = pick(rng);
      NodeId v = pick(rng);
      if (u == v || graph.has_edge(u, v)) continue;
      negatives.insert({std::min(u, v), std::max(u, v)});
    }
    SampleId id = 0;
    for (const auto& [u, v] : positives) samples.push_back({id++, {u, v}, 1});
    for (const auto& [u, v] : negatives) samples.push_back({id++, {u, v}, 0});
  }

  std::vector<SampleId> ids;
  for (const auto& s : samples) ids.push_back(s.id);
  Splits splits = split_ids(std::move(ids), o, rng);
  return Dataset(std::move(graph), std::move(samples), std::move(features), std::move(splits), o.task, o.hops);
}

}  // namespace mccl
