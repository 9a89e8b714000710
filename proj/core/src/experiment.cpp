#include "mccl/experiment.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "mccl/errors.hpp"

namespace mccl {

using nlohmann::json;

Metric ExperimentConfig::metric(Task task) const {
  if (learner.metric) return *learner.metric;
  return task == Task::node ? Metric::accuracy : Metric::f1_positive;
}

namespace {

json index_list(std::span<const IndexId> ids) {
  json out = json::array();
  for (IndexId id : ids) out.push_back(std::string(name(id)));
  return out;
}

std::vector<IndexId> parse_index_list(const json& j) {
  std::vector<IndexId> out;
  for (const auto& v : j) {
    auto id = parse_index(v.get<std::string>());
    if (!id) throw DataError("unknown index '" + v.get<std::string>() + "'");
    out.push_back(*id);
  }
  return out;
}

json synthetic_json(const SyntheticOptions& s) {
  return {{"nodes", s.nodes},
          {"blocks", s.blocks},
          {"p_in", s.p_in},
          {"p_out", s.p_out},
          {"feature_dim", s.feature_dim},
          {"signal", s.signal},
          {"noise", s.noise},
          {"train_fraction", s.train_fraction},
          {"val_fraction", s.val_fraction},
          {"link_samples", s.link_samples},
          {"seed", s.seed}};
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

json to_json(const ExperimentConfig& c) {
  json dataset = {{"task", to_string(c.dataset.task)},
                  {"hops", c.dataset.hops},
                  {"synthetic", synthetic_json(c.dataset.synthetic)}};
  if (c.dataset.files) {
    dataset["graph"] = c.dataset.files->graph.string();
    dataset["features"] = c.dataset.files->features.string();
    dataset["labels"] = c.dataset.files->labels.string();
    dataset["splits"] = c.dataset.files->splits.string();
  }
  const auto& p = c.index_params;
  json params = {
      {"katz",
       {{"alpha", p.katz.alpha},
        {"alpha_scale", p.katz.alpha_scale},
        {"beta", p.katz.beta},
        {"max_iter", p.katz.max_iter},
        {"tol", p.katz.tol},
        {"lambda_iterations", p.katz.lambda_iterations}}},
      {"eigenvector", {{"max_iter", p.eigenvector.max_iter}, {"tol", p.eigenvector.tol}}},
      {"connectivity",
       {{"exact_limit", p.connectivity.exact_limit},
        {"sampled_pairs", p.connectivity.sampled_pairs},
        {"seed", p.connectivity.seed}}},
  };
  const auto& s = c.schedule;
  json schedule = {{"total_iterations", s.total_iterations},
                   {"sharpness", s.sharpness},
                   {"initial_competence", s.initial_competence},
                   {"sort_order", to_string(s.sort_order)},
                   {"transition", to_string(s.transition)},
                   {"mechanism", to_string(s.mechanism)},
                   {"pacing", to_string(s.pacing)},
                   {"random_view", s.random_view},
                   {"random_seed", s.random_seed},
                   {"run_budget", s.run_budget}};
  json learner = {{"variant", to_string(c.learner.variant)},
                  {"learning_rate", c.learner.learning_rate},
                  {"batch_size", c.learner.batch_size},
                  {"epochs_per_iteration", c.learner.epochs_per_iteration}};
  if (c.learner.metric) learner["metric"] = to_string(*c.learner.metric);
  return {{"dataset", dataset},
          {"indices", index_list(c.indices)},
          {"index_params", params},
          {"dedup", {{"k_clusters", c.dedup.k_clusters}, {"seed", c.dedup.seed}, {"pinned", index_list(c.dedup.pinned)}}},
          {"schedule", schedule},
          {"learner", learner},
          {"seeds", c.seeds},
          {"out_dir", c.out_dir.string()},
          {"baseline_only", c.baseline_only},
          {"compare_baseline", c.compare_baseline},
          {"threads", c.threads}};
}

ExperimentConfig experiment_config_from_json(const json& j) {
  ExperimentConfig c;
  try {
    if (!j.is_object()) throw DataError("config must be a JSON object");
    if (j.contains("dataset")) {
      const json& d = j.at("dataset");
      if (d.contains("task")) c.dataset.task = parse_task(d.at("task").get<std::string>());
      read(d, "hops", c.dataset.hops);
      if (d.contains("graph")) {
        DatasetPaths paths;
        paths.graph = d.at("graph").get<std::string>();
        paths.features = d.at("features").get<std::string>();
        paths.labels = d.at("labels").get<std::string>();
        paths.splits = d.at("splits").get<std::string>();
        c.dataset.files = paths;
      }
      if (d.contains("synthetic")) {
        const json& s = d.at("synthetic");
        auto& o = c.dataset.synthetic;
        read(s, "nodes", o.nodes);
        read(s, "blocks", o.blocks);
        read(s, "p_in", o.p_in);
        read(s, "p_out", o.p_out);
        read(s, "feature_dim", o.feature_dim);
        read(s, "signal", o.signal);
        read(s, "noise", o.noise);
        read(s, "train_fraction", o.train_fraction);
        read(s, "val_fraction", o.val_fraction);
        read(s, "link_samples", o.link_samples);
        read(s, "seed", o.seed);
      }
    }
    if (j.contains("indices")) c.indices = parse_index_list(j.at("indices"));
    if (j.contains("index_params")) {
      const json& p = j.at("index_params");
      auto& ip = c.index_params;
      if (p.contains("katz")) {
        const json& k = p.at("katz");
        read(k, "alpha", ip.katz.alpha);
        read(k, "alpha_scale", ip.katz.alpha_scale);
        read(k, "beta", ip.katz.beta);
        read(k, "max_iter", ip.katz.max_iter);
        read(k, "tol", ip.katz.tol);
        read(k, "lambda_iterations", ip.katz.lambda_iterations);
      }
      if (p.contains("eigenvector")) {
        read(p.at("eigenvector"), "max_iter", ip.eigenvector.max_iter);
        read(p.at("eigenvector"), "tol", ip.eigenvector.tol);
      }
      if (p.contains("connectivity")) {
        const json& k = p.at("connectivity");
        read(k, "exact_limit", ip.connectivity.exact_limit);
        read(k, "sampled_pairs", ip.connectivity.sampled_pairs);
        read(k, "seed", ip.connectivity.seed);
      }
    }
    if (j.contains("dedup")) {
      const json& d = j.at("dedup");
      read(d, "k_clusters", c.dedup.k_clusters);
      read(d, "seed", c.dedup.seed);
      if (d.contains("pinned")) c.dedup.pinned = parse_index_list(d.at("pinned"));
    }
    if (j.contains("schedule")) {
      const json& s = j.at("schedule");
      auto& sc = c.schedule;
      read(s, "total_iterations", sc.total_iterations);
      read(s, "sharpness", sc.sharpness);
      read(s, "initial_competence", sc.initial_competence);
      if (s.contains("sort_order")) sc.sort_order = parse_sort_order(s.at("sort_order").get<std::string>());
      if (s.contains("transition")) sc.transition = parse_transition(s.at("transition").get<std::string>());
      if (s.contains("mechanism")) sc.mechanism = parse_mechanism(s.at("mechanism").get<std::string>());
      if (s.contains("pacing")) sc.pacing = parse_pacing(s.at("pacing").get<std::string>());
      read(s, "random_view", sc.random_view);
      read(s, "random_seed", sc.random_seed);
      read(s, "run_budget", sc.run_budget);
    }
    if (j.contains("learner")) {
      const json& l = j.at("learner");
      if (l.contains("variant")) c.learner.variant = parse_learner_variant(l.at("variant").get<std::string>());
      read(l, "learning_rate", c.learner.learning_rate);
      read(l, "batch_size", c.learner.batch_size);
      read(l, "epochs_per_iteration", c.learner.epochs_per_iteration);
      if (l.contains("metric")) c.learner.metric = parse_metric(l.at("metric").get<std::string>());
    }
    read(j, "seeds", c.seeds);
    if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();
    read(j, "baseline_only", c.baseline_only);
    read(j, "compare_baseline", c.compare_baseline);
    read(j, "threads", c.threads);
  } catch (const json::exception& e) {
    throw DataError(std::string("config: ") + e.what());
  }
  if (c.seeds.empty()) throw DataError("config: seeds must not be empty");
  if (c.learner.epochs_per_iteration < 1) throw DataError("config: epochs_per_iteration must be >= 1");
  if (c.learner.batch_size < 1) throw DataError("config: batch_size must be >= 1");
  if (c.dedup.k_clusters < 1) throw DataError("config: k_clusters must be >= 1");
  try {
    c.schedule.validate();
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("config: ") + e.what());
  }
  return c;
}

Dataset load_experiment_dataset(const ExperimentConfig& config) {
  if (config.dataset.files) return load_dataset(*config.dataset.files, config.dataset.task, config.dataset.hops);
  SyntheticOptions options = config.dataset.synthetic;
  options.task = config.dataset.task;
  options.hops = config.dataset.hops;
  return generate_sbm(options);
}

PreparedExperiment prepare_experiment(const ExperimentConfig& config, std::ostream* log) {
  PreparedExperiment p;
  p.dataset = load_experiment_dataset(config);
  std::vector<IndexId> indices = config.indices;
  if (indices.empty()) {
    const auto all = all_indices();
    indices.assign(all.begin(), all.end());
  }
  ComputeOptions options;
  if (!config.out_dir.empty()) options.cache_dir = config.out_dir / "cache";
  options.threads = config.threads;
  options.log = log;
  ScoreComputation scores = compute_all(p.dataset, indices, config.index_params, options);
  p.table = std::move(scores.table);
  p.cache = scores.cache;
  const int k = std::min(config.dedup.k_clusters, static_cast<int>(p.table.indices.size()));
  p.dedup = deduplicate(p.table, k, config.dedup.seed, config.dedup.pinned);
  return p;
}

namespace {

TrainConfig train_config(const ExperimentConfig& config, Task task, std::uint64_t seed) {
  TrainConfig t;
  t.epoch.learning_rate = config.learner.learning_rate;
  t.epoch.batch_size = config.learner.batch_size;
  t.epoch.seed = seed;
  t.epochs_per_iteration = config.learner.epochs_per_iteration;
  t.metric = config.metric(task);
  return t;
}

SeedOutcome run_curriculum_seed(const ExperimentConfig& config, const PreparedExperiment& p, std::uint64_t seed) {
  ScheduleConfig schedule = config.schedule;
  schedule.random_seed = config.schedule.random_seed ^ (seed * 0x9e3779b97f4a7c15ULL);
  const SortedViews views = build_views(p.table, p.dedup.representatives, schedule);
  ReferenceLearner learner(p.dataset, config.learner.variant, seed);
  SeedOutcome out;
  out.seed = seed;
  out.result = run_curriculum(p.dataset, views, learner, schedule, train_config(config, p.dataset.task(), seed));
  out.audit = audit_passes(out.result.log, p.table.sample_ids.size(), schedule, views.size(),
                           config.learner.epochs_per_iteration);
  out.histogram = phase_histogram(out.result.log, schedule.total_iterations);
  return out;
}

SeedOutcome run_baseline_seed(const ExperimentConfig& config, const PreparedExperiment& p, std::uint64_t seed) {
  ReferenceLearner learner(p.dataset, config.learner.variant, seed);
  SeedOutcome out;
  out.seed = seed;
  out.result = run_baseline(p.dataset, learner, config.schedule.budget(), train_config(config, p.dataset.task(), seed));
  return out;
}

double mean_of(const std::vector<SeedOutcome>& runs, double TrainReport::*field) {
  if (runs.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& r : runs) sum += r.result.report.*field;
  return sum / static_cast<double>(runs.size());
}

std::vector<double> best_vals(const std::vector<SeedOutcome>& runs) {
  std::vector<double> out;
  for (const auto& r : runs) out.push_back(r.result.report.best_val_metric);
  return out;
}

std::vector<std::pair<std::string, double>> random_share(const std::vector<SeedOutcome>& runs, int total) {
  std::array<double, 3> phase_sum{};
  double overall_sum = 0.0;
  for (const auto& run : runs) {
    std::array<std::size_t, 3> hits{};
    std::array<std::size_t, 3> seen{};
    std::size_t all_hits = 0;
    for (const auto& r : run.result.log.records) {
      const auto ph = static_cast<std::size_t>(phase_of(r.iteration, total));
      ++seen[ph];
      if (r.chosen.is_random()) {
        ++hits[ph];
        ++all_hits;
      }
    }
    for (std::size_t ph = 0; ph < 3; ++ph) {
      phase_sum[ph] += seen[ph] ? static_cast<double>(hits[ph]) / static_cast<double>(seen[ph]) : 0.0;
    }
    const auto n = run.result.log.records.size();
    overall_sum += n ? static_cast<double>(all_hits) / static_cast<double>(n) : 0.0;
  }
  const double k = runs.empty() ? 1.0 : static_cast<double>(runs.size());
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t ph = 0; ph < 3; ++ph) {
    out.emplace_back(std::string(to_string(static_cast<Phase>(ph))), phase_sum[ph] / k);
  }
  out.emplace_back("overall", overall_sum / k);
  return out;
}

json histogram_json(std::span<const HistogramRow> rows) {
  json out = json::array();
  for (const auto& r : rows) out.push_back({{"phase", to_string(r.phase)}, {"index", r.view.name()}, {"count", r.count}});
  return out;
}

json outcome_json(const SeedOutcome& o) {
  const TrainReport& r = o.result.report;
  json j = {{"seed", o.seed},
            {"best_iteration", r.best_iteration},
            {"best_val_metric", r.best_val_metric},
            {"test_metric", r.test_metric},
            {"checkpoint_on_train_loss", r.checkpoint_on_train_loss},
            {"loss_curve", r.loss_curve},
            {"val_metric", r.val_metric},
            {"diverged", o.result.diverged}};
  if (o.result.diverged) j["error"] = o.result.error;
  if (!o.result.log.notes.empty()) j["notes"] = o.result.log.notes;
  if (o.log_path) j["selection_log"] = o.log_path->string();
  if (o.audit) {
    const PassAudit& a = *o.audit;
    j["pass_audit"] = {{"measured_training", a.measured_training},
                       {"measured_selection", a.measured_selection},
                       {"schedule_training", a.schedule_training},
                       {"schedule_selection", a.schedule_selection},
                       {"predicted", a.predicted},
                       {"matches_schedule", a.matches_schedule},
                       {"at_least_predicted", a.at_least_predicted}};
    if (a.within_rounding_bound) j["pass_audit"]["within_rounding_bound"] = *a.within_rounding_bound;
  }
  if (!o.histogram.empty()) j["histogram"] = histogram_json(o.histogram);
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

double RunReport::mean_best_val(bool baseline_runs) const {
  return mean_of(baseline_runs ? baseline : curriculum, &TrainReport::best_val_metric);
}

double RunReport::mean_test(bool baseline_runs) const {
  return mean_of(baseline_runs ? baseline : curriculum, &TrainReport::test_metric);
}

json to_json(const RunReport& r) {
  json j = {{"config", r.config}, {"representatives", index_list(r.representatives)}};
  json cur = json::array();
  for (const auto& o : r.curriculum) cur.push_back(outcome_json(o));
  json base = json::array();
  for (const auto& o : r.baseline) base.push_back(outcome_json(o));
  j["curriculum"] = cur;
  j["baseline"] = base;
  if (!r.curriculum.empty()) {
    j["curriculum_mean_best_val"] = r.mean_best_val(false);
    j["curriculum_mean_test"] = r.mean_test(false);
  }
  if (!r.baseline.empty()) {
    j["baseline_mean_best_val"] = r.mean_best_val(true);
    j["baseline_mean_test"] = r.mean_test(true);
  }
  if (r.t_test) {
    j["t_test"] = {{"variant", "welch"},
                   {"t", r.t_test->t},
                   {"degrees_of_freedom", r.t_test->degrees_of_freedom},
                   {"critical_value", r.t_test->critical_value},
                   {"alpha", r.t_test->alpha},
                   {"significant", r.t_test->significant}};
  }
  if (r.random_share) {
    json share = json::object();
    for (const auto& [phase, value] : *r.random_share) share[phase] = value;
    j["random_share"] = share;
  }
  j["failed"] = r.failed;
  j["wall_seconds"] = r.wall_seconds;
  return j;
}

RunReport run_experiment(const ExperimentConfig& config, const PreparedExperiment& prepared) {
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  report.config = to_json(config);
  report.representatives = prepared.dedup.representatives;
  if (!config.out_dir.empty()) std::filesystem::create_directories(config.out_dir);

  for (std::uint64_t seed : config.seeds) {
    if (!config.baseline_only) {
      SeedOutcome o = run_curriculum_seed(config, prepared, seed);
      if (!config.out_dir.empty()) {
        const auto log_path = config.out_dir / ("selection_log_seed" + std::to_string(seed) + ".jsonl");
        std::ostringstream text;
        write_selection_log(o.result.log, text);
        write_text(log_path, text.str());
        write_text(config.out_dir / ("histogram_seed" + std::to_string(seed) + ".csv"), histogram_csv(o.histogram));
        o.log_path = log_path;
      }
      report.failed = report.failed || o.result.diverged;
      report.curriculum.push_back(std::move(o));
    }
    if (config.baseline_only || config.compare_baseline) {
      SeedOutcome o = run_baseline_seed(config, prepared, seed);
      report.failed = report.failed || o.result.diverged;
      report.baseline.push_back(std::move(o));
    }
  }
  if (report.curriculum.size() >= 2 && report.baseline.size() >= 2) {
    report.t_test = welch_t_test(best_vals(report.curriculum), best_vals(report.baseline));
  }
  if (config.schedule.random_view && !report.curriculum.empty()) {
    report.random_share = random_share(report.curriculum, config.schedule.total_iterations);
  }
  report.wall_seconds = seconds_since(start);
  if (!config.out_dir.empty()) write_text(config.out_dir / "report.json", to_json(report).dump(2) + "\n");
  return report;
}

const AblationCell& AblationReport::best_cell() const {
  if (cells.empty()) throw std::logic_error("ablation report has no cells");
  const AblationCell* best = nullptr;
  for (const auto& c : cells) {
    if (c.failed) continue;
    if (best == nullptr || c.mean_best_val > best->mean_best_val) best = &c;
  }
  return best ? *best : cells.front();
}

AblationReport run_ablation(const ExperimentConfig& config, const PreparedExperiment& prepared) {
  const auto start = std::chrono::steady_clock::now();
  AblationReport report;
  report.representatives = prepared.dedup.representatives;
  for (SortOrder order : {SortOrder::ascending, SortOrder::descending}) {
    for (Mechanism mechanism : {Mechanism::model_based, Mechanism::index_based}) {
      for (Transition transition : {Transition::easy_to_hard, Transition::hard_to_easy}) {
        ExperimentConfig cell_config = config;
        cell_config.schedule.sort_order = order;
        cell_config.schedule.mechanism = mechanism;
        cell_config.schedule.transition = transition;
        AblationCell cell;
        cell.sort_order = order;
        cell.mechanism = mechanism;
        cell.transition = transition;
        std::vector<SeedOutcome> runs;
        try {
          for (std::uint64_t seed : config.seeds) {
            SeedOutcome o = run_curriculum_seed(cell_config, prepared, seed);
            if (o.result.diverged) {
              cell.failed = true;
              cell.error = o.result.error;
            }
            cell.logs.push_back(o.result.log.records);
            runs.push_back(std::move(o));
          }
        } catch (const std::exception& e) {
          cell.failed = true;
          cell.error = e.what();
        }
        cell.mean_best_val = mean_of(runs, &TrainReport::best_val_metric);
        cell.mean_test = mean_of(runs, &TrainReport::test_metric);
        report.cells.push_back(std::move(cell));
      }
    }
  }
  std::vector<SeedOutcome> baseline;
  for (std::uint64_t seed : config.seeds) baseline.push_back(run_baseline_seed(config, prepared, seed));
  report.baseline_mean_best_val = mean_of(baseline, &TrainReport::best_val_metric);
  report.baseline_mean_test = mean_of(baseline, &TrainReport::test_metric);
  report.wall_seconds = seconds_since(start);
  return report;
}

std::string ablation_csv(const AblationReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "index_order,mechanism,transition_order,mean_best_val,mean_test,failed\n";
  for (const auto& c : report.cells) {
    out << to_string(c.sort_order) << ',' << to_string(c.mechanism) << ',' << to_string(c.transition) << ','
        << c.mean_best_val << ',' << c.mean_test << ',' << (c.failed ? 1 : 0) << '\n';
  }
  return out.str();
}

json to_json(const AblationReport& r) {
  json cells = json::array();
  for (const auto& c : r.cells) {
    json cell = {{"index_order", to_string(c.sort_order)},
                 {"mechanism", to_string(c.mechanism)},
                 {"transition_order", to_string(c.transition)},
                 {"mean_best_val", c.mean_best_val},
                 {"mean_test", c.mean_test},
                 {"failed", c.failed}};
    if (!c.error.empty()) cell["error"] = c.error;
    cells.push_back(cell);
  }
  const AblationCell& best = r.best_cell();
  return {{"cells", cells},
          {"representatives", index_list(r.representatives)},
          {"baseline_mean_best_val", r.baseline_mean_best_val},
          {"baseline_mean_test", r.baseline_mean_test},
          {"best_cell",
           {{"index_order", to_string(best.sort_order)},
            {"mechanism", to_string(best.mechanism)},
            {"transition_order", to_string(best.transition)},
            {"mean_best_val", best.mean_best_val}}},
          {"wall_seconds", r.wall_seconds}};
}

}  // namespace mccl
