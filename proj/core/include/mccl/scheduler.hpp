#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mccl/dataset.hpp"
#include "mccl/index_id.hpp"
#include "mccl/learner.hpp"
#include "mccl/metrics.hpp"
#include "mccl/score_table.hpp"

namespace mccl {

enum class SortOrder { ascending, descending };
enum class Transition { easy_to_hard, hard_to_easy };
enum class Mechanism { model_based, index_based };

/// competence: c(t) = min(1, (t (1 - c0^p) / T + c0^p)^(1/p)), subsets of
///             max(1, ceil(c(t) n)) samples.
/// linear:     c(t) = min(1, t / T), subsets of ceil(n t / T) samples (0 at
///             t = 0). This is the pacing the closed-form pass counts assume.
enum class Pacing { competence, linear };

std::string_view to_string(SortOrder v);
std::string_view to_string(Transition v);
std::string_view to_string(Mechanism v);
std::string_view to_string(Pacing v);
SortOrder parse_sort_order(std::string_view text);
Transition parse_transition(std::string_view text);
Mechanism parse_mechanism(std::string_view text);
Pacing parse_pacing(std::string_view text);

struct ScheduleConfig {
  int total_iterations = 100;  // T
  double sharpness = 2.0;      // p
  double initial_competence = 0.01;  // c0
  SortOrder sort_order = SortOrder::ascending;
  Transition transition = Transition::easy_to_hard;
  Mechanism mechanism = Mechanism::index_based;
  Pacing pacing = Pacing::competence;
  bool random_view = false;
  std::uint64_t random_seed = 0;
  int run_budget = 0;  // iterations to run; 0 means T

  /// Throws std::invalid_argument unless 0 < c0 <= 1, T >= 1, p > 0.
  void validate() const;
  int budget() const { return run_budget > 0 ? run_budget : total_iterations; }
};

double competence(int t, const ScheduleConfig& cfg);
std::size_t subset_size(int t, std::size_t n, const ScheduleConfig& cfg);

struct SortedView {
  ViewId id = IndexId::degree;
  std::vector<SampleId> order;   // train sample ids, easiest-first per sort order
  std::vector<double> scores;    // normalized score of order[i]
};

using SortedViews = std::vector<SortedView>;

/// One view per representative (in the given order), sorted by normalized
/// score with ties by ascending sample id, plus the Random view when enabled.
/// The Random view scores samples with seeded uniform draws normalized like
/// a real index.
SortedViews build_views(const IndexScoreTable& table, std::span<const IndexId> representatives,
                        const ScheduleConfig& cfg);

struct Selection {
  std::size_t chosen = 0;           // position in the views vector
  ViewId chosen_id = IndexId::degree;
  std::vector<SampleId> subset;
  std::vector<double> criteria;     // e_i per view
  std::uint64_t forward_passes = 0; // spent on model-based selection
};

/// Evaluates every view's top slice and picks argmin (easy_to_hard) or
/// argmax (hard_to_easy) of the criterion; ties go to the lowest view code.
/// `learner` may be null in index-based mode.
Selection select_view(int t, const SortedViews& views, const Learner* learner,
                      const ScheduleConfig& cfg);

struct SelectionRecord {
  int iteration = 0;
  double competence = 0.0;
  std::size_t subset_size = 0;
  ViewId chosen = IndexId::degree;
  std::vector<std::pair<ViewId, double>> criteria;
  double train_loss = 0.0;
  double val_metric = 0.0;
  std::uint64_t train_forward = 0;   // cumulative
  std::uint64_t train_backward = 0;  // cumulative
  std::uint64_t selection_forward = 0;  // cumulative
};

struct SelectionLog {
  std::vector<SelectionRecord> records;
  std::vector<std::string> notes;
};

std::string to_json_line(const SelectionRecord& record);
SelectionRecord selection_record_from_json(std::string_view line);
void write_selection_log(const SelectionLog& log, std::ostream& out);
SelectionLog read_selection_log(std::istream& in);

struct TrainConfig {
  EpochOptions epoch;
  int epochs_per_iteration = 1;
  Metric metric = Metric::accuracy;
};

struct TrainReport {
  std::vector<double> loss_curve;
  std::vector<double> val_metric;
  int best_iteration = -1;
  double best_val_metric = 0.0;
  double test_metric = 0.0;
  // No validation split: checkpoints were chosen on (negated) training loss.
  bool checkpoint_on_train_loss = false;
};

struct CurriculumResult {
  SelectionLog log;
  TrainReport report;
  bool diverged = false;
  std::string error;
};

/// Runs the curriculum loop for cfg.budget() iterations: competence, view
/// selection, one training round on the chosen slice, validation and
/// best-checkpoint tracking. The learner ends at its best checkpoint. A
/// non-finite loss stops the loop and returns the log so far.
CurriculumResult run_curriculum(const Dataset& dataset, const SortedViews& views, Learner& learner,
                                const ScheduleConfig& cfg, const TrainConfig& train);

/// Full training split every iteration, same budget and checkpointing.
CurriculumResult run_baseline(const Dataset& dataset, Learner& learner, int iterations,
                              const TrainConfig& train);

/// Forward+backward passes the closed forms predict for n samples and e
/// iterations under linear pacing. Model-based selection adds one forward
/// pass per sample of each evaluated view; with one view this is 1.5 n (e-1).
double predicted_passes(std::size_t n, int e, Mechanism mechanism, std::size_t views = 1);

struct PassAudit {
  std::uint64_t measured_training = 0;
  std::uint64_t measured_selection = 0;
  std::uint64_t schedule_training = 0;   // 2 * sum of subset sizes
  std::uint64_t schedule_selection = 0;  // views * sum of subset sizes (model-based)
  double predicted = 0.0;                // closed form
  bool matches_schedule = false;
  bool at_least_predicted = false;
  // Linear pacing only: measured - predicted < e * (2 + views).
  std::optional<bool> within_rounding_bound;
};

/// Compares the log's cumulative counters with the subset sizes it records
/// and with the closed form (scaled by epochs_per_iteration for training).
PassAudit audit_passes(const SelectionLog& log, std::size_t n, const ScheduleConfig& cfg,
                       std::size_t views, int epochs_per_iteration = 1);

enum class Phase { initial, middle, end };
std::string_view to_string(Phase phase);
/// Equal thirds of [0, T); iterations at or past T count as `end`.
Phase phase_of(int iteration, int total_iterations);

struct HistogramRow {
  Phase phase = Phase::initial;
  ViewId view = IndexId::degree;
  std::size_t count = 0;
};

/// Chosen-view counts per phase, ordered by phase then view code.
std::vector<HistogramRow> phase_histogram(const SelectionLog& log, int total_iterations);
std::string histogram_csv(std::span<const HistogramRow> rows);

}  // namespace mccl
