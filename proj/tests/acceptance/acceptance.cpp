// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "gradient_check.hpp"
#include "index_suite.hpp"
#include "mccl/dedup.hpp"
#include "mccl/experiment.hpp"
#include "mccl/scheduler.hpp"

using namespace mccl;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(int number, const char* title, double limit_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_seconds > 0 && secs >= limit_seconds) {
    out.pass = false;
    out.detail += " [over time limit " + std::to_string(limit_seconds) + " s]";
  }
  if (!out.pass) ++failures;
  std::printf("%s criterion %d (%s): %s (%.3f s)\n", out.pass ? "PASS" : "FAIL", number, title, out.detail.c_str(),
              secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Graph path_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return Graph::from_edges(n, edges);
}

ExperimentConfig desk_config() {
  ExperimentConfig cfg;  // built-in 300-node SBM
  cfg.seeds = {0, 1, 2, 3, 4};
  cfg.schedule.total_iterations = 50;
  return cfg;
}

std::string serialize_logs(const AblationReport& r) {
  std::ostringstream out;
  for (const auto& cell : r.cells) {
    for (const auto& log : cell.logs) {
      for (const auto& rec : log) out << to_json_line(rec) << '\n';
    }
  }
  return out.str();
}

Outcome competence_exactness() {
  double worst = 0;
  bool endpoints = true;
  for (int T : {10, 100}) {
    for (double p : {1.0, 2.0, 3.0}) {
      for (double c0 : {0.01, 0.1}) {
        ScheduleConfig cfg;
        cfg.total_iterations = T;
        cfg.sharpness = p;
        cfg.initial_competence = c0;
        for (int t = 0; t <= T; ++t) {
          const double closed = std::min(1.0, std::pow(t * (1 - std::pow(c0, p)) / T + std::pow(c0, p), 1 / p));
          worst = std::max(worst, std::abs(competence(t, cfg) - closed));
        }
        endpoints = endpoints && competence(0, cfg) == c0 && competence(T, cfg) == 1.0;
      }
    }
  }
  return {worst <= 1e-12 && endpoints,
          fmt("max error %.3g", worst) + (endpoints ? ", endpoints exact" : ", endpoint mismatch")};
}

Outcome index_oracles() {
  auto r = suite::run_index_suite(20240, 60);
  std::ostringstream d;
  d << r.graphs << " graphs, " << r.exact_checks << " exact / " << r.residual_checks << " residual / "
    << r.heuristic_checks << " heuristic checks, max exact error " << r.max_exact_error << ", katz residual "
    << r.max_katz_residual << ", eigen residual " << r.max_eigen_residual;
  if (!r.failures.empty()) d << ", first failure: " << r.failures.front();
  const bool ok = r.graphs >= 50 && r.failures.empty() && r.max_exact_error <= 1e-9 &&
                  r.max_katz_residual <= 1e-6 && r.max_eigen_residual <= 1e-6;
  return {ok, d.str()};
}

Outcome pass_counts() {
  bool ok = true;
  std::ostringstream d;
  for (std::size_t n : {40u, 100u}) {
    Dataset data = fixtures::node_dataset(path_graph(n));
    std::vector<IndexId> one{IndexId::degree};
    auto table = compute_all(data, one, {}).table;
    for (int e : {5, 10}) {
      ScheduleConfig cfg;
      cfg.total_iterations = e;
      cfg.pacing = Pacing::linear;
      for (Mechanism mech : {Mechanism::index_based, Mechanism::model_based}) {
        cfg.mechanism = mech;
        auto views = build_views(table, one, cfg);
        ReferenceLearner learner(data, LearnerVariant::linear, 1);
        TrainConfig train;
        train.epoch.learning_rate = 0.01;
        auto r = run_curriculum(data, views, learner, cfg, train);
        const auto audit = audit_passes(r.log, n, cfg, 1);
        const std::uint64_t measured = mech == Mechanism::index_based
                                           ? audit.measured_training
                                           : audit.measured_training + audit.measured_selection;
        const double expected = (mech == Mechanism::index_based ? 1.0 : 1.5) * static_cast<double>(n) * (e - 1);
        const bool cell = !r.diverged && static_cast<double>(measured) == expected && audit.matches_schedule;
        ok = ok && cell;
        if (!cell) d << "n=" << n << " e=" << e << " " << to_string(mech) << ": " << measured << " != " << expected << "; ";
      }
    }
  }
  if (ok) d << "8 cells exact (index-based n(e-1), model-based 1.5 n(e-1))";
  return {ok, d.str()};
}

Outcome scheduler_invariants() {
  ExperimentConfig cfg = desk_config();
  cfg.schedule.total_iterations = 30;
  auto prepared = prepare_experiment(cfg);
  const auto& reps = prepared.dedup.representatives;
  const std::size_t n = prepared.dataset.splits().train.size();
  std::ostringstream d;

  bool sizes = true;
  std::size_t prev = 0;
  for (int t = 0; t <= 35; ++t) {
    const std::size_t s = subset_size(t, n, cfg.schedule);
    const auto expected = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(competence(t, cfg.schedule) * static_cast<double>(n) - 1e-9)));
    sizes = sizes && s == expected && s >= prev;
    prev = s;
  }

  auto chosen = [&](const IndexScoreTable& table, Learner& learner) {
    auto views = build_views(table, reps, cfg.schedule);
    TrainConfig train;
    train.epoch.learning_rate = cfg.learner.learning_rate;
    train.epoch.batch_size = cfg.learner.batch_size;
    auto r = run_curriculum(prepared.dataset, views, learner, cfg.schedule, train);
    std::vector<int> seq;
    for (const auto& rec : r.log.records) seq.push_back(rec.chosen.code());
    return seq;
  };
  ReferenceLearner a(prepared.dataset, LearnerVariant::neighborhood, 11);
  ReferenceLearner b(prepared.dataset, LearnerVariant::neighborhood, 12345);
  const auto seq_a = chosen(prepared.table, a);
  const auto seq_b = chosen(prepared.table, b);

  auto scaled = prepared.table;
  for (std::size_t r = 0; r < scaled.normalized.rows(); ++r) {
    for (std::size_t c = 0; c < scaled.normalized.cols(); ++c) scaled.normalized(r, c) *= 4.0;
  }
  ReferenceLearner c(prepared.dataset, LearnerVariant::neighborhood, 11);
  const auto seq_c = chosen(scaled, c);

  d << "subset sizes " << (sizes ? "ok" : "WRONG") << ", learner-init invariance "
    << (seq_a == seq_b ? "ok" : "WRONG") << ", rescaling invariance " << (seq_a == seq_c ? "ok" : "WRONG")
    << " (" << seq_a.size() << " iterations, " << reps.size() << " views)";
  return {sizes && seq_a == seq_b && seq_a == seq_c && seq_a.size() == 30, d.str()};
}

Outcome dedup_correctness() {
  SyntheticOptions o;  // 300-node SBM
  Dataset data = generate_sbm(o);
  const auto all = all_indices();
  std::vector<IndexId> ids(all.begin(), all.end());
  auto table = compute_all(data, ids, {}).table;
  auto corr = correlation_matrix(rank_samples(table));
  double asym = 0, diag = 0;
  for (std::size_t i = 0; i < corr.size(); ++i) {
    diag = std::max(diag, std::abs(corr.values[i][i] - 1.0));
    for (std::size_t j = 0; j < corr.size(); ++j) asym = std::max(asym, std::abs(corr.values[i][j] - corr.values[j][i]));
  }
  auto col = table.normalized.column(0);
  const double self = pearson(col, col);
  auto assignment = kmeans_cluster(corr, 10, 0);
  bool monotone = !assignment.objective_history.empty();
  for (std::size_t i = 1; i < assignment.objective_history.size(); ++i) {
    monotone = monotone && assignment.objective_history[i] <= assignment.objective_history[i - 1];
  }
  auto first = deduplicate(table, 10, 0);
  auto second = deduplicate(table, 10, 0);
  const bool same = first.representatives == second.representatives &&
                    dedup_report_json(first) == dedup_report_json(second);
  std::ostringstream d;
  d << "asymmetry " << asym << ", diagonal error " << diag << ", pearson(x,x)-1 = " << self - 1.0
    << ", k-means objective " << (monotone ? "non-increasing" : "INCREASED") << ", "
    << first.representatives.size() << " representatives" << (same ? ", deterministic" : ", NOT deterministic");
  return {asym <= 1e-12 && diag <= 1e-12 && std::abs(self - 1.0) <= 1e-12 && monotone &&
              first.representatives.size() <= 10 && !first.representatives.empty() && same,
          d.str()};
}

AblationReport desk_ablation() {
  ExperimentConfig cfg = desk_config();
  auto prepared = prepare_experiment(cfg);
  return run_ablation(cfg, prepared);
}

AblationReport first_desk_run;

Outcome desk_experiment() {
  first_desk_run = desk_ablation();
  const auto& best = first_desk_run.best_cell();
  std::ostringstream d;
  d.precision(6);
  d << "best cell " << to_string(best.sort_order) << "/" << to_string(best.mechanism) << "/"
    << to_string(best.transition) << " mean val " << best.mean_best_val << " vs baseline "
    << first_desk_run.baseline_mean_best_val << " (margin 0.01), grid wall " << first_desk_run.wall_seconds << " s";
  bool any_failed = false;
  for (const auto& c : first_desk_run.cells) any_failed = any_failed || c.failed;
  if (any_failed) d << ", some cells failed";
  return {best.mean_best_val >= first_desk_run.baseline_mean_best_val - 0.01 && !best.failed &&
              first_desk_run.wall_seconds < 600.0,
          d.str()};
}

Outcome random_view_share() {
  ExperimentConfig cfg = desk_config();
  cfg.seeds = {0, 1, 2};
  cfg.schedule.mechanism = Mechanism::index_based;
  cfg.schedule.random_view = true;
  auto prepared = prepare_experiment(cfg);
  auto report = run_experiment(cfg, prepared);
  if (!report.random_share) return {false, "no random share reported"};
  std::ostringstream d;
  d.precision(4);
  double overall = 1.0;
  for (const auto& [phase, share] : *report.random_share) {
    d << phase << " " << share << " ";
    if (phase == "overall") overall = share;
  }
  d << "(bound 0.35)";
  return {!report.failed && overall < 0.35, d.str()};
}

Outcome gradient_checks() {
  auto lin = suite::check_gradients(LearnerVariant::linear, 20, 808);
  auto nbr = suite::check_gradients(LearnerVariant::neighborhood, 20, 909);
  std::ostringstream d;
  d << "linear max rel error " << lin.max_relative_error << " over " << lin.parameters
    << " params, neighborhood " << nbr.max_relative_error << " over " << nbr.parameters << " params (20 instances each)";
  return {lin.instances == 20 && nbr.instances == 20 && lin.max_relative_error <= 1e-4 &&
              nbr.max_relative_error <= 1e-4,
          d.str()};
}

Outcome determinism() {
  auto again = desk_ablation();
  const bool logs = serialize_logs(again) == serialize_logs(first_desk_run);
  const bool metrics = ablation_csv(again) == ablation_csv(first_desk_run) &&
                       again.baseline_mean_best_val == first_desk_run.baseline_mean_best_val &&
                       again.baseline_mean_test == first_desk_run.baseline_mean_test;
  std::ostringstream d;
  d << "selection logs " << (logs ? "byte-identical" : "DIFFER") << ", metrics "
    << (metrics ? "identical" : "DIFFER") << " (" << serialize_logs(again).size() << " log bytes)";
  return {logs && metrics && !first_desk_run.cells.empty(), d.str()};
}

}  // namespace

int main() {
  criterion(1, "competence exactness", 1.0, competence_exactness);
  criterion(2, "index oracle suite", 60.0, index_oracles);
  criterion(3, "pass-count audit", 30.0, pass_counts);
  criterion(4, "scheduler invariants", 0, scheduler_invariants);
  criterion(5, "dedup correctness", 0, dedup_correctness);
  criterion(6, "desk experiment", 600.0, desk_experiment);
  criterion(7, "random view share", 0, random_view_share);
  criterion(8, "gradient checks", 10.0, gradient_checks);
  criterion(9, "determinism", 0, determinism);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
