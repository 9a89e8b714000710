#include "mccl/dedup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace mccl {

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // Positions i..j (0-based) share ranks i+1..j+1.
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

RankingMatrix rank_samples(const IndexScoreTable& table) {
  RankingMatrix out;
  out.indices = table.indices;
  for (std::size_t c = 0; c < table.indices.size(); ++c) {
    out.columns.push_back(average_ranks(table.normalized.column(c)));
  }
  return out;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
  if (x.size() < 2) throw std::invalid_argument("pearson: need at least two values");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

CorrelationMatrix correlation_matrix(const RankingMatrix& ranking) {
  CorrelationMatrix out;
  out.indices = ranking.indices;
  const std::size_t m = ranking.columns.size();
  out.values.assign(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    out.values[i][i] = 1.0;
    for (std::size_t j = i + 1; j < m; ++j) {
      const double r = pearson(ranking.columns[i], ranking.columns[j]);
      out.values[i][j] = r;
      out.values[j][i] = r;
    }
  }
  return out;
}

namespace {

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

}  // namespace

ClusterAssignment kmeans_cluster(const CorrelationMatrix& corr, int k, std::uint64_t seed,
                                 int max_iterations) {
  const std::size_t m = corr.size();
  if (k < 1 || static_cast<std::size_t>(k) > m) {
    throw std::invalid_argument("kmeans_cluster: k must be in 1..number of indices");
  }
  const auto& points = corr.values;
  std::mt19937_64 rng(seed);

  // k-means++ seeding.
  std::vector<std::vector<double>> centers;
  centers.push_back(points[std::uniform_int_distribution<std::size_t>(0, m - 1)(rng)]);
  std::vector<double> d2(m);
  while (centers.size() < static_cast<std::size_t>(k)) {
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& c : centers) best = std::min(best, squared_distance(points[i], c));
      d2[i] = best;
      total += best;
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      double u = std::uniform_real_distribution<double>(0.0, total)(rng);
      for (std::size_t i = 0; i < m; ++i) {
        if (d2[i] == 0.0) continue;
        pick = i;  // last positive candidate absorbs rounding
        if (u < d2[i]) break;
        u -= d2[i];
      }
    } else {
      // Fewer distinct rows than k: the extra centers duplicate existing ones
      // and end up empty.
      pick = std::uniform_int_distribution<std::size_t>(0, m - 1)(rng);
    }
    centers.push_back(points[pick]);
  }

  ClusterAssignment out;
  out.indices = corr.indices;
  out.requested_k = k;
  out.seed = seed;
  std::vector<int> label(m, -1);
  auto assign = [&] {
    bool changed = false;
    for (std::size_t i = 0; i < m; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < centers.size(); ++c) {
        const double d = squared_distance(points[i], centers[c]);
        if (d < best_d) {
          best_d = d;
          best = static_cast<int>(c);
        }
      }
      if (label[i] != best) {
        label[i] = best;
        changed = true;
      }
    }
    return changed;
  };
  auto objective = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += squared_distance(points[i], centers[label[i]]);
    return s;
  };
  auto update_centers = [&] {
    std::vector<std::vector<double>> sums(centers.size(), std::vector<double>(m, 0.0));
    std::vector<std::size_t> counts(centers.size(), 0);
    for (std::size_t i = 0; i < m; ++i) {
      ++counts[label[i]];
      for (std::size_t j = 0; j < m; ++j) sums[label[i]][j] += points[i][j];
    }
    std::vector<std::vector<double>> kept;
    std::vector<int> remap(centers.size(), -1);
    for (std::size_t c = 0; c < centers.size(); ++c) {
      if (counts[c] == 0) continue;  // dropped
      for (double& v : sums[c]) v /= static_cast<double>(counts[c]);
      remap[c] = static_cast<int>(kept.size());
      kept.push_back(std::move(sums[c]));
    }
    for (int& l : label) l = remap[l];
    centers = std::move(kept);
  };

  assign();
  int it = 0;
  for (; it < max_iterations; ++it) {
    update_centers();
    out.objective_history.push_back(objective());
    if (!assign()) break;
  }
  out.iterations = it;
  if (out.objective_history.empty()) {
    update_centers();
    out.objective_history.push_back(objective());
  }

  // Compact ids in order of first appearance.
  std::vector<int> remap(centers.size(), -1);
  int next = 0;
  out.cluster.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (remap[label[i]] < 0) remap[label[i]] = next++;
    out.cluster[i] = remap[label[i]];
  }
  out.cluster_count = next;
  return out;
}

std::vector<IndexId> select_representatives(const ClusterAssignment& assignment, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<IndexId> reps;
  for (int c = 0; c < assignment.cluster_count; ++c) {
    std::vector<IndexId> members;
    for (std::size_t i = 0; i < assignment.cluster.size(); ++i) {
      if (assignment.cluster[i] == c) members.push_back(assignment.indices[i]);
    }
    if (members.empty()) continue;
    reps.push_back(members[std::uniform_int_distribution<std::size_t>(0, members.size() - 1)(rng)]);
  }
  std::sort(reps.begin(), reps.end());
  return reps;
}

DedupResult deduplicate(const IndexScoreTable& table, int k, std::uint64_t seed,
                        std::span<const IndexId> pinned) {
  DedupResult out;
  out.correlation = correlation_matrix(rank_samples(table));
  const int clusters = std::min<int>(k, static_cast<int>(table.indices.size()));
  out.assignment = kmeans_cluster(out.correlation, clusters, seed);
  if (!pinned.empty()) {
    out.representatives.assign(pinned.begin(), pinned.end());
    std::sort(out.representatives.begin(), out.representatives.end());
    out.representatives.erase(std::unique(out.representatives.begin(), out.representatives.end()),
                              out.representatives.end());
    out.pinned = true;
  } else {
    out.representatives = select_representatives(out.assignment, seed);
  }
  return out;
}

std::string dedup_report_json(const DedupResult& result) {
  using nlohmann::json;
  json names = json::array();
  for (IndexId id : result.correlation.indices) names.push_back(name(id));
  json assignments = json::object();
  for (std::size_t i = 0; i < result.assignment.indices.size(); ++i) {
    assignments[std::string(name(result.assignment.indices[i]))] = result.assignment.cluster[i];
  }
  json reps = json::array();
  for (IndexId id : result.representatives) reps.push_back(name(id));
  json report = {
      {"indices", names},
      {"correlation", result.correlation.values},
      {"k", result.assignment.requested_k},
      {"clusters", result.assignment.cluster_count},
      {"seed", result.assignment.seed},
      {"assignments", assignments},
      {"objective_history", result.assignment.objective_history},
      {"representatives", reps},
      {"pinned", result.pinned},
  };
  return report.dump(2);
}

}  // namespace mccl
