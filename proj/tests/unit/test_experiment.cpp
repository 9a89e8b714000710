#include <algorithm>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "mccl/experiment.hpp"

using namespace mccl;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.dataset.synthetic.nodes = 120;
  cfg.dataset.synthetic.seed = 5;
  cfg.dataset.hops = 1;
  cfg.dataset.synthetic.hops = 1;
  cfg.schedule.total_iterations = 10;
  cfg.dedup.k_clusters = 4;
  cfg.seeds = {0, 1};
  return cfg;
}

std::size_t line_count(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

}  // namespace

TEST(ExperimentConfig, JsonRoundTrip) {
  ExperimentConfig cfg = small_config();
  cfg.schedule.mechanism = Mechanism::model_based;
  cfg.schedule.transition = Transition::hard_to_easy;
  cfg.schedule.random_view = true;
  cfg.dedup.pinned = {IndexId::degree, IndexId::katz_centrality};
  cfg.learner.variant = LearnerVariant::linear;
  cfg.learner.metric = Metric::f1_positive;
  cfg.indices = {IndexId::degree, IndexId::katz_centrality, IndexId::subgraph_density};
  const auto j = to_json(cfg);
  const auto back = experiment_config_from_json(j);
  EXPECT_EQ(to_json(back), j);
  EXPECT_EQ(back.schedule.mechanism, Mechanism::model_based);
  EXPECT_EQ(back.dedup.pinned, cfg.dedup.pinned);
}

TEST(ExperimentConfig, MissingKeysKeepDefaultsAndBadValuesThrow) {
  auto cfg = experiment_config_from_json(nlohmann::json::object());
  EXPECT_EQ(to_json(cfg), to_json(ExperimentConfig{}));
  EXPECT_THROW(experiment_config_from_json({{"schedule", {{"mechanism", "both"}}}}), DataError);
  EXPECT_THROW(experiment_config_from_json({{"schedule", {{"total_iterations", 0}}}}), DataError);
  EXPECT_THROW(experiment_config_from_json({{"seeds", "x"}}), DataError);
}

TEST(ExperimentConfig, MetricDefaultsByTask) {
  ExperimentConfig cfg;
  EXPECT_EQ(cfg.metric(Task::node), Metric::accuracy);
  EXPECT_EQ(cfg.metric(Task::link), Metric::f1_positive);
  cfg.learner.metric = Metric::accuracy;
  EXPECT_EQ(cfg.metric(Task::link), Metric::accuracy);
}

TEST(Experiment, RunWritesLogsAndComparesBaseline) {
  fixtures::TempDir dir;
  ExperimentConfig cfg = small_config();
  cfg.out_dir = dir.path();
  cfg.compare_baseline = true;
  cfg.schedule.random_view = true;
  auto prepared = prepare_experiment(cfg);
  EXPECT_EQ(prepared.cache, CacheStatus::miss);
  auto report = run_experiment(cfg, prepared);
  EXPECT_FALSE(report.failed);
  ASSERT_EQ(report.curriculum.size(), 2u);
  ASSERT_EQ(report.baseline.size(), 2u);
  ASSERT_TRUE(report.t_test.has_value());
  ASSERT_TRUE(report.random_share.has_value());
  for (const auto& o : report.curriculum) {
    EXPECT_EQ(o.result.log.records.size(), 10u);
    ASSERT_TRUE(o.log_path.has_value());
    std::ifstream in(*o.log_path);
    EXPECT_EQ(read_selection_log(in).records.size(), 10u);
    std::size_t total = 0;
    for (const auto& row : o.histogram) total += row.count;
    EXPECT_EQ(total, 10u);
    ASSERT_TRUE(o.audit.has_value());
    EXPECT_TRUE(o.audit->matches_schedule);
  }
  const auto j = nlohmann::json::parse(fixtures::read(dir / "report.json"));
  EXPECT_TRUE(j.contains("t_test"));
  EXPECT_TRUE(j.contains("random_share"));
  EXPECT_EQ(fixtures::read(dir / "histogram_seed0.csv").rfind("phase,index_name,count\n", 0), 0u);

  // Second preparation reuses the cache.
  EXPECT_EQ(prepare_experiment(cfg).cache, CacheStatus::hit);
}

TEST(Experiment, SeedsAreReproducible) {
  ExperimentConfig cfg = small_config();
  cfg.schedule.mechanism = Mechanism::model_based;
  auto prepared = prepare_experiment(cfg);
  auto a = run_experiment(cfg, prepared);
  auto b = run_experiment(cfg, prepared);
  for (std::size_t s = 0; s < a.curriculum.size(); ++s) {
    std::ostringstream la, lb;
    write_selection_log(a.curriculum[s].result.log, la);
    write_selection_log(b.curriculum[s].result.log, lb);
    EXPECT_EQ(la.str(), lb.str());
  }
  EXPECT_EQ(a.mean_best_val(false), b.mean_best_val(false));
}

TEST(Experiment, NoValidationSplitCheckpointsOnTrainLoss) {
  ExperimentConfig cfg = small_config();
  cfg.dataset.synthetic.train_fraction = 0.8;
  cfg.dataset.synthetic.val_fraction = 0.0;
  cfg.seeds = {0};
  auto prepared = prepare_experiment(cfg);
  ASSERT_TRUE(prepared.dataset.splits().val.empty());
  auto report = run_experiment(cfg, prepared);
  ASSERT_EQ(report.curriculum.size(), 1u);
  EXPECT_TRUE(report.curriculum[0].result.report.checkpoint_on_train_loss);
  EXPECT_FALSE(report.curriculum[0].result.log.notes.empty());
}

TEST(Ablation, EightCellsSharedRepresentativesDeterministic) {
  ExperimentConfig cfg = small_config();
  cfg.schedule.total_iterations = 6;
  auto prepared = prepare_experiment(cfg);
  auto a = run_ablation(cfg, prepared);
  ASSERT_EQ(a.cells.size(), 8u);
  EXPECT_EQ(a.representatives, prepared.dedup.representatives);
  for (const auto& cell : a.cells) {
    EXPECT_FALSE(cell.failed) << cell.error;
    ASSERT_EQ(cell.logs.size(), 2u);
    for (const auto& log : cell.logs) {
      ASSERT_EQ(log.size(), 6u);
      for (const auto& rec : log) EXPECT_EQ(rec.criteria.size(), prepared.dedup.representatives.size());
    }
  }
  const std::string csv = ablation_csv(a);
  EXPECT_EQ(line_count(csv), 9u);
  EXPECT_EQ(csv.rfind("index_order,mechanism,transition_order,mean_best_val,mean_test,failed\n", 0), 0u);
  const auto& best = a.best_cell();
  for (const auto& cell : a.cells) EXPECT_LE(cell.mean_best_val, best.mean_best_val);

  auto b = run_ablation(cfg, prepared);
  EXPECT_EQ(ablation_csv(b), csv);
  EXPECT_EQ(b.baseline_mean_best_val, a.baseline_mean_best_val);
}
