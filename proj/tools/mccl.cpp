#include <algorithm>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mccl/errors.hpp"
#include "mccl/experiment.hpp"

namespace {

using nlohmann::json;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitDivergence = 3;

struct Overrides {
  std::string config_path;
  std::vector<std::uint64_t> seeds;
  std::string out_dir;
  std::string mechanism;
  std::string sort_order;
  std::string transition;
  std::string pacing;
  bool random_view = false;
  int k_clusters = 0;
  std::vector<std::string> pinned;
  int iterations = 0;
  std::string task;
  int hops = 0;
  std::string graph, features, labels, splits;
  std::string learner;
  double lr = 0.0;
  std::size_t batch_size = 0;
  unsigned threads = 0;
  bool baseline = false;
  bool compare_baseline = false;
};

void add_experiment_options(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "JSON experiment config")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seeds, "run seed (repeatable)");
  cmd->add_option("--out-dir", o.out_dir, "output directory");
  cmd->add_option("--mechanism", o.mechanism, "model_based | index_based");
  cmd->add_option("--sort-order", o.sort_order, "ascending | descending");
  cmd->add_option("--transition", o.transition, "easy_to_hard | hard_to_easy");
  cmd->add_option("--pacing", o.pacing, "competence | linear");
  cmd->add_flag("--random-view", o.random_view, "add the Random view");
  cmd->add_option("--k-clusters", o.k_clusters, "dedup cluster count")->check(CLI::PositiveNumber);
  cmd->add_option("--pin-representatives", o.pinned, "fixed representative indices")->delimiter(',');
  cmd->add_option("--iterations", o.iterations, "total iterations T")->check(CLI::PositiveNumber);
  cmd->add_option("--task", o.task, "node | link");
  cmd->add_option("--hops", o.hops, "subgraph radius k")->check(CLI::PositiveNumber);
  cmd->add_option("--graph", o.graph, "edge list");
  cmd->add_option("--features", o.features, "features CSV");
  cmd->add_option("--labels", o.labels, "samples CSV");
  cmd->add_option("--splits", o.splits, "splits CSV");
  cmd->add_option("--learner", o.learner, "linear | neighborhood");
  cmd->add_option("--lr", o.lr, "learning rate")->check(CLI::PositiveNumber);
  cmd->add_option("--batch-size", o.batch_size, "mini-batch size")->check(CLI::PositiveNumber);
  cmd->add_option("--threads", o.threads, "index worker threads (0: all cores)");
}

mccl::ExperimentConfig build_config(const Overrides& o) {
  json base = json::object();
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    base = json::parse(in, nullptr, false);
    if (base.is_discarded()) throw mccl::DataError("config: " + o.config_path + " is not valid JSON");
  }
  mccl::ExperimentConfig c = mccl::experiment_config_from_json(base);
  if (!o.seeds.empty()) c.seeds = o.seeds;
  if (!o.out_dir.empty()) c.out_dir = o.out_dir;
  if (!o.mechanism.empty()) c.schedule.mechanism = mccl::parse_mechanism(o.mechanism);
  if (!o.sort_order.empty()) c.schedule.sort_order = mccl::parse_sort_order(o.sort_order);
  if (!o.transition.empty()) c.schedule.transition = mccl::parse_transition(o.transition);
  if (!o.pacing.empty()) c.schedule.pacing = mccl::parse_pacing(o.pacing);
  if (o.random_view) c.schedule.random_view = true;
  if (o.k_clusters > 0) c.dedup.k_clusters = o.k_clusters;
  if (!o.pinned.empty()) {
    c.dedup.pinned.clear();
    for (const auto& p : o.pinned) {
      auto id = mccl::parse_index(p);
      if (!id) throw mccl::DataError("unknown index '" + p + "'");
      c.dedup.pinned.push_back(*id);
    }
  }
  if (o.iterations > 0) c.schedule.total_iterations = o.iterations;
  if (!o.task.empty()) c.dataset.task = mccl::parse_task(o.task);
  if (o.hops > 0) c.dataset.hops = o.hops;
  if (!o.graph.empty()) {
    if (o.features.empty() || o.labels.empty() || o.splits.empty()) {
      throw CLI::ValidationError("--graph needs --features, --labels and --splits");
    }
    c.dataset.files = mccl::DatasetPaths{o.graph, o.features, o.labels, o.splits};
  }
  if (!o.learner.empty()) c.learner.variant = mccl::parse_learner_variant(o.learner);
  if (o.lr > 0) c.learner.learning_rate = o.lr;
  if (o.batch_size > 0) c.learner.batch_size = o.batch_size;
  if (o.threads > 0) c.threads = o.threads;
  if (o.baseline) c.baseline_only = true;
  if (o.compare_baseline) c.compare_baseline = true;
  return c;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw mccl::DataError("cannot write " + path.string());
  out << text;
}

int cmd_compute_indices(const Overrides& o) {
  auto config = build_config(o);
  auto dataset = mccl::load_experiment_dataset(config);
  std::vector<mccl::IndexId> indices = config.indices;
  if (indices.empty()) {
    auto all = mccl::all_indices();
    indices.assign(all.begin(), all.end());
  }
  mccl::ComputeOptions options;
  if (!config.out_dir.empty()) options.cache_dir = config.out_dir / "cache";
  options.threads = config.threads;
  options.log = &std::cerr;
  auto scores = mccl::compute_all(dataset, indices, config.index_params, options);
  std::cout << "cache " << mccl::to_string(scores.cache) << "\n";
  std::cout << "index,min,max,mean\n";
  const auto& t = scores.table;
  for (std::size_t c = 0; c < t.indices.size(); ++c) {
    auto col = t.raw.column(c);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double sum = 0.0;
    for (double v : col) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      sum += v;
    }
    const double mean = col.empty() ? 0.0 : sum / static_cast<double>(col.size());
    std::cout << mccl::name(t.indices[c]) << ',' << lo << ',' << hi << ',' << mean << '\n';
  }
  if (!t.flags.empty()) std::cerr << t.flags.size() << " flagged scores (see manifest)\n";
  return 0;
}

int cmd_dedup(const Overrides& o) {
  auto config = build_config(o);
  auto prepared = mccl::prepare_experiment(config, &std::cerr);
  const std::string report = mccl::dedup_report_json(prepared.dedup);
  if (!config.out_dir.empty()) write_file(config.out_dir / "dedup.json", report + "\n");
  std::cout << report << "\n";
  return 0;
}

int cmd_run(const Overrides& o) {
  auto config = build_config(o);
  auto prepared = mccl::prepare_experiment(config, &std::cerr);
  auto report = mccl::run_experiment(config, prepared);
  std::cout << mccl::to_json(report).dump(2) << "\n";
  return report.failed ? kExitDivergence : 0;
}

int cmd_ablation(const Overrides& o) {
  auto config = build_config(o);
  auto prepared = mccl::prepare_experiment(config, &std::cerr);
  auto report = mccl::run_ablation(config, prepared);
  const std::string csv = mccl::ablation_csv(report);
  if (!config.out_dir.empty()) {
    write_file(config.out_dir / "ablation.csv", csv);
    write_file(config.out_dir / "ablation.json", mccl::to_json(report).dump(2) + "\n");
  }
  std::cout << csv;
  std::cerr << "baseline mean best val " << report.baseline_mean_best_val << ", wall " << report.wall_seconds
            << " s\n";
  return 0;
}

int cmd_histogram(const std::string& log_path, int iterations) {
  std::ifstream in(log_path);
  if (!in) throw mccl::DataError("cannot open " + log_path);
  auto log = mccl::read_selection_log(in);
  if (log.records.empty()) throw mccl::DataError("selection log " + log_path + " is empty");
  const int total = iterations > 0 ? iterations : static_cast<int>(log.records.size());
  auto rows = mccl::phase_histogram(log, total);
  std::cout << mccl::histogram_csv(rows);
  return 0;
}

std::vector<double> report_metrics(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw mccl::DataError("cannot open " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw mccl::DataError(path + " is not valid JSON");
  const char* key = j.value("curriculum", json::array()).empty() ? "baseline" : "curriculum";
  std::vector<double> out;
  for (const auto& run : j.value(key, json::array())) out.push_back(run.at("best_val_metric").get<double>());
  return out;
}

int cmd_compare(const std::string& a, const std::string& b, double alpha) {
  auto result = mccl::welch_t_test(report_metrics(a), report_metrics(b), alpha);
  json j = {{"variant", "welch"},
            {"t", result.t},
            {"degrees_of_freedom", result.degrees_of_freedom},
            {"critical_value", result.critical_value},
            {"alpha", result.alpha},
            {"significant", result.significant}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_gen_synthetic(const mccl::SyntheticOptions& options, const std::string& out_dir) {
  auto dataset = mccl::generate_sbm(options);
  std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  mccl::save_dataset(dataset, {dir / "graph.edges", dir / "features.csv", dir / "labels.csv", dir / "splits.csv"});
  std::cout << "wrote " << dataset.graph().node_count() << " nodes, " << dataset.graph().edge_count()
            << " edges, " << dataset.samples().size() << " samples to " << dir.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curriculum training over graph complexity indices"};
  app.require_subcommand(1);

  Overrides o;
  auto* compute = app.add_subcommand("compute-indices", "compute and cache complexity scores");
  add_experiment_options(compute, o);
  auto* dedup = app.add_subcommand("dedup", "cluster correlated indices and pick representatives");
  add_experiment_options(dedup, o);
  auto* run = app.add_subcommand("run", "curriculum and/or baseline training");
  add_experiment_options(run, o);
  run->add_flag("--baseline", o.baseline, "baseline only (full training split every iteration)");
  run->add_flag("--compare-baseline", o.compare_baseline, "also run the baseline and t-test");
  auto* ablation = app.add_subcommand("ablation", "8-cell order/mechanism/transition grid");
  add_experiment_options(ablation, o);

  std::string log_path;
  int hist_iterations = 0;
  auto* histogram = app.add_subcommand("histogram", "per-phase chosen-view counts from a selection log");
  histogram->add_option("log", log_path, "selection log (.jsonl)")->required();
  histogram->add_option("--iterations", hist_iterations, "T (default: record count)");

  std::string report_a, report_b;
  double alpha = 0.01;
  auto* compare = app.add_subcommand("compare", "Welch t-test between two run reports");
  compare->add_option("a", report_a, "report.json")->required();
  compare->add_option("b", report_b, "report.json")->required();
  compare->add_option("--alpha", alpha, "significance level");

  mccl::SyntheticOptions synth;
  std::string synth_dir;
  std::string synth_task = "node";
  auto* gen = app.add_subcommand("gen-synthetic", "write the built-in planted-partition dataset");
  gen->add_option("--out-dir", synth_dir, "output directory")->required();
  gen->add_option("--nodes", synth.nodes);
  gen->add_option("--blocks", synth.blocks);
  gen->add_option("--p-in", synth.p_in);
  gen->add_option("--p-out", synth.p_out);
  gen->add_option("--feature-dim", synth.feature_dim);
  gen->add_option("--signal", synth.signal);
  gen->add_option("--task", synth_task);
  gen->add_option("--seed", synth.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (compute->parsed()) return cmd_compute_indices(o);
    if (dedup->parsed()) return cmd_dedup(o);
    if (run->parsed()) return cmd_run(o);
    if (ablation->parsed()) return cmd_ablation(o);
    if (histogram->parsed()) return cmd_histogram(log_path, hist_iterations);
    if (compare->parsed()) return cmd_compare(report_a, report_b, alpha);
    if (gen->parsed()) {
      synth.task = mccl::parse_task(synth_task);
      return cmd_gen_synthetic(synth, synth_dir);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const mccl::DivergenceError& e) {
    std::cerr << "diverged: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const mccl::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
