#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mccl/dataset.hpp"
#include "mccl/dedup.hpp"
#include "mccl/indices.hpp"
#include "mccl/learner.hpp"
#include "mccl/metrics.hpp"
#include "mccl/scheduler.hpp"
#include "mccl/score_table.hpp"
#include "mccl/synthetic.hpp"

namespace mccl {

struct DatasetSource {
  // Files take precedence; otherwise the synthetic generator is used.
  std::optional<DatasetPaths> files;
  Task task = Task::node;
  int hops = 2;
  SyntheticOptions synthetic;
};

struct DedupConfig {
  int k_clusters = 10;
  std::uint64_t seed = 0;
  std::vector<IndexId> pinned;
};

struct LearnerConfig {
  LearnerVariant variant = LearnerVariant::neighborhood;
  double learning_rate = 0.5;
  std::size_t batch_size = 16;
  int epochs_per_iteration = 1;
  std::optional<Metric> metric;  // default: accuracy for node, f1_positive for link
};

struct ExperimentConfig {
  DatasetSource dataset;
  std::vector<IndexId> indices;  // empty: all
  IndexParams index_params;
  DedupConfig dedup;
  ScheduleConfig schedule;
  LearnerConfig learner;
  std::vector<std::uint64_t> seeds{0};
  std::filesystem::path out_dir;  // empty: nothing written
  bool baseline_only = false;
  bool compare_baseline = false;
  unsigned threads = 0;

  Metric metric(Task task) const;
};

nlohmann::json to_json(const ExperimentConfig& config);
/// Missing keys keep their defaults. Throws DataError on bad values.
ExperimentConfig experiment_config_from_json(const nlohmann::json& json);

Dataset load_experiment_dataset(const ExperimentConfig& config);

struct PreparedExperiment {
  Dataset dataset;
  IndexScoreTable table;
  CacheStatus cache = CacheStatus::disabled;
  DedupResult dedup;
};

/// Loads the dataset, computes (or reloads) scores into out_dir/cache, and
/// deduplicates the indices.
PreparedExperiment prepare_experiment(const ExperimentConfig& config, std::ostream* log = nullptr);

struct SeedOutcome {
  std::uint64_t seed = 0;
  CurriculumResult result;
  std::optional<PassAudit> audit;  // curriculum runs only
  std::optional<std::filesystem::path> log_path;
  std::vector<HistogramRow> histogram;
};

struct RunReport {
  nlohmann::json config;
  std::vector<IndexId> representatives;
  std::vector<SeedOutcome> curriculum;  // empty when baseline_only
  std::vector<SeedOutcome> baseline;    // filled when baseline_only or compare_baseline
  std::optional<TTestResult> t_test;    // curriculum vs baseline best validation metric
  bool failed = false;
  double wall_seconds = 0.0;

  double mean_best_val(bool baseline_runs) const;
  double mean_test(bool baseline_runs) const;
  /// Share of iterations in which the Random view was chosen, per phase and
  /// overall, averaged over curriculum seeds. Empty unless random_view was on.
  std::optional<std::vector<std::pair<std::string, double>>> random_share;
};

nlohmann::json to_json(const RunReport& report);

/// Curriculum (and/or baseline) training for every seed. Writes
/// selection_log_seed<S>.jsonl, histogram_seed<S>.csv and report.json under
/// out_dir when it is set.
RunReport run_experiment(const ExperimentConfig& config, const PreparedExperiment& prepared);

struct AblationCell {
  SortOrder sort_order = SortOrder::ascending;
  Mechanism mechanism = Mechanism::index_based;
  Transition transition = Transition::easy_to_hard;
  double mean_best_val = 0.0;
  double mean_test = 0.0;
  bool failed = false;
  std::string error;
  std::vector<std::vector<SelectionRecord>> logs;  // per seed
};

struct AblationReport {
  std::vector<AblationCell> cells;  // always 8
  double baseline_mean_best_val = 0.0;
  double baseline_mean_test = 0.0;
  std::vector<IndexId> representatives;
  double wall_seconds = 0.0;

  const AblationCell& best_cell() const;
};

/// {ascending, descending} x {model_based, index_based} x
/// {easy_to_hard, hard_to_easy}, all sharing one dedup result, plus the
/// no-curriculum baseline on the same seeds.
AblationReport run_ablation(const ExperimentConfig& config, const PreparedExperiment& prepared);
std::string ablation_csv(const AblationReport& report);
nlohmann::json to_json(const AblationReport& report);

}  // namespace mccl
