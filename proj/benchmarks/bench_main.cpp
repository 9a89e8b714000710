#include <benchmark/benchmark.h>

#include "mccl/dedup.hpp"
#include "mccl/indices.hpp"
#include "mccl/scheduler.hpp"
#include "mccl/subgraph.hpp"
#include "mccl/synthetic.hpp"

using namespace mccl;

namespace {

// Edge probabilities scale down with size so the expected degree (and the
// k-hop view size) matches the 300-node default.
Dataset sbm(std::size_t nodes) {
  SyntheticOptions o;
  const double scale = 300.0 / static_cast<double>(nodes);
  o.p_in *= scale;
  o.p_out *= scale;
  o.nodes = nodes;
  return generate_sbm(o);
}

std::vector<IndexId> every_index() {
  const auto all = all_indices();
  return {all.begin(), all.end()};
}

}  // namespace

static void BM_ComputeIndex(benchmark::State& state) {
  Dataset d = sbm(300);
  const auto id = static_cast<IndexId>(state.range(0));
  std::vector<SubgraphView> views;
  for (SampleId s : d.splits().train) {
    const auto& targets = d.sample(s).targets;
    views.push_back(k_hop_subgraph(d.graph(), targets, d.hops()));
  }
  for (auto _ : state) {
    for (const auto& v : views) benchmark::DoNotOptimize(compute_index(v, id).value);
  }
  state.SetLabel(std::string(name(id)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(views.size()));
}
BENCHMARK(BM_ComputeIndex)->DenseRange(0, static_cast<int>(kIndexCount) - 1)->Unit(benchmark::kMicrosecond);

static void BM_ComputeAll(benchmark::State& state) {
  Dataset d = sbm(static_cast<std::size_t>(state.range(0)));
  const auto ids = every_index();
  for (auto _ : state) benchmark::DoNotOptimize(compute_all(d, ids, {}).table.raw.rows());
}
BENCHMARK(BM_ComputeAll)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_CurriculumIteration(benchmark::State& state) {
  Dataset d = sbm(1000);
  const auto ids = every_index();
  auto table = compute_all(d, ids, {}).table;
  auto reps = deduplicate(table, 10, 0).representatives;
  ScheduleConfig cfg;
  cfg.mechanism = state.range(0) ? Mechanism::model_based : Mechanism::index_based;
  cfg.total_iterations = 10;
  cfg.run_budget = 1;
  auto views = build_views(table, reps, cfg);
  ReferenceLearner learner(d, LearnerVariant::neighborhood, 0);
  for (auto _ : state) {
    // Evaluate the selection at the midpoint, then one training round.
    auto sel = select_view(5, views, &learner, cfg);
    benchmark::DoNotOptimize(learner.train_epoch(sel.subset, {}));
  }
  state.SetLabel(std::string(to_string(cfg.mechanism)));
}
BENCHMARK(BM_CurriculumIteration)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

static void BM_Dedup(benchmark::State& state) {
  Dataset d = sbm(1000);
  auto table = compute_all(d, every_index(), {}).table;
  for (auto _ : state) benchmark::DoNotOptimize(deduplicate(table, 10, 0).representatives.size());
}
BENCHMARK(BM_Dedup)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
