#include "mccl/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "mccl/errors.hpp"

namespace mccl {

using nlohmann::json;

std::string_view to_string(SortOrder v) { return v == SortOrder::ascending ? "ascending" : "descending"; }
std::string_view to_string(Transition v) {
  return v == Transition::easy_to_hard ? "easy_to_hard" : "hard_to_easy";
}
std::string_view to_string(Mechanism v) { return v == Mechanism::model_based ? "model_based" : "index_based"; }
std::string_view to_string(Pacing v) { return v == Pacing::competence ? "competence" : "linear"; }

SortOrder parse_sort_order(std::string_view text) {
  if (text == "ascending" || text == "asc") return SortOrder::ascending;
  if (text == "descending" || text == "desc") return SortOrder::descending;
  throw DataError("unknown sort order '" + std::string(text) + "'");
}

Transition parse_transition(std::string_view text) {
  if (text == "easy_to_hard" || text == "min") return Transition::easy_to_hard;
  if (text == "hard_to_easy" || text == "max") return Transition::hard_to_easy;
  throw DataError("unknown transition '" + std::string(text) + "'");
}

Mechanism parse_mechanism(std::string_view text) {
  if (text == "model_based" || text == "model") return Mechanism::model_based;
  if (text == "index_based" || text == "index") return Mechanism::index_based;
  throw DataError("unknown mechanism '" + std::string(text) + "'");
}

Pacing parse_pacing(std::string_view text) {
  if (text == "competence") return Pacing::competence;
  if (text == "linear") return Pacing::linear;
  throw DataError("unknown pacing '" + std::string(text) + "'");
}

void ScheduleConfig::validate() const {
  if (!(initial_competence > 0.0 && initial_competence <= 1.0)) {
    throw std::invalid_argument("initial competence must be in (0, 1]");
  }
  if (total_iterations < 1) throw std::invalid_argument("total iterations must be >= 1");
  if (!(sharpness > 0.0)) throw std::invalid_argument("sharpness must be > 0");
}

double competence(int t, const ScheduleConfig& cfg) {
  if (t < 0) throw std::invalid_argument("competence: negative iteration");
  const double T = static_cast<double>(cfg.total_iterations);
  if (t >= cfg.total_iterations) return 1.0;
  if (cfg.pacing == Pacing::linear) return static_cast<double>(t) / T;
  if (t == 0) return cfg.initial_competence;
  const double c0p = std::pow(cfg.initial_competence, cfg.sharpness);
  const double c = std::pow(static_cast<double>(t) * (1.0 - c0p) / T + c0p, 1.0 / cfg.sharpness);
  return std::min(1.0, c);
}

std::size_t subset_size(int t, std::size_t n, const ScheduleConfig& cfg) {
  if (n == 0) return 0;
  if (cfg.pacing == Pacing::linear) {
    const auto T = static_cast<std::size_t>(cfg.total_iterations);
    const auto tt = std::min(static_cast<std::size_t>(std::max(t, 0)), T);
    return (n * tt + T - 1) / T;
  }
  // The small slack keeps products like 0.5 * 40 from rounding up.
  const double exact = competence(t, cfg) * static_cast<double>(n);
  const auto size = static_cast<std::size_t>(std::ceil(exact - 1e-9));
  return std::clamp<std::size_t>(size, 1, n);
}

namespace {

SortedView sort_view(ViewId id, std::span<const SampleId> samples, std::span<const double> scores,
                     SortOrder order) {
  std::vector<std::size_t> idx(samples.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) {
      return order == SortOrder::ascending ? scores[a] < scores[b] : scores[a] > scores[b];
    }
    return samples[a] < samples[b];
  });
  SortedView view;
  view.id = id;
  for (std::size_t i : idx) {
    view.order.push_back(samples[i]);
    view.scores.push_back(scores[i]);
  }
  return view;
}

}  // namespace

SortedViews build_views(const IndexScoreTable& table, std::span<const IndexId> representatives,
                        const ScheduleConfig& cfg) {
  SortedViews views;
  for (IndexId rep : representatives) {
    auto col = table.column_of(rep);
    if (!col) throw std::invalid_argument("index " + std::string(name(rep)) + " is not in the score table");
    views.push_back(sort_view(rep, table.sample_ids, table.normalized.column(*col), cfg.sort_order));
  }
  if (cfg.random_view) {
    std::mt19937_64 rng(cfg.random_seed);
    std::uniform_real_distribution<double> draw(0.0, 1.0);
    std::vector<double> scores(table.sample_ids.size());
    for (double& s : scores) s = draw(rng);
    views.push_back(sort_view(ViewId::random(), table.sample_ids, normalize_column(scores), cfg.sort_order));
  }
  return views;
}

Selection select_view(int t, const SortedViews& views, const Learner* learner, const ScheduleConfig& cfg) {
  if (views.empty()) throw std::invalid_argument("select_view: no views");
  const std::size_t n = views.front().order.size();
  const std::size_t m = subset_size(t, n, cfg);
  if (cfg.mechanism == Mechanism::model_based && learner == nullptr) {
    throw std::invalid_argument("select_view: model-based selection needs a learner");
  }

  Selection sel;
  sel.criteria.reserve(views.size());
  for (const SortedView& view : views) {
    double e = 0.0;
    if (m > 0) {
      if (cfg.mechanism == Mechanism::index_based) {
        e = std::accumulate(view.scores.begin(), view.scores.begin() + static_cast<std::ptrdiff_t>(m), 0.0) /
            static_cast<double>(m);
      } else {
        auto losses = learner->forward_losses({view.order.data(), m});
        sel.forward_passes += m;
        e = std::accumulate(losses.begin(), losses.end(), 0.0) / static_cast<double>(m);
      }
    }
    sel.criteria.push_back(e);
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < views.size(); ++i) {
    const double a = sel.criteria[i];
    const double b = sel.criteria[best];
    const bool better = cfg.transition == Transition::easy_to_hard ? a < b : a > b;
    if (better || (a == b && views[i].id.code() < views[best].id.code())) best = i;
  }
  sel.chosen = best;
  sel.chosen_id = views[best].id;
  sel.subset.assign(views[best].order.begin(), views[best].order.begin() + static_cast<std::ptrdiff_t>(m));
  return sel;
}

std::string to_json_line(const SelectionRecord& r) {
  json criteria = json::array();
  for (const auto& [id, value] : r.criteria) criteria.push_back({id.name(), value});
  json j = {
      {"t", r.iteration},
      {"competence", r.competence},
      {"subset_size", r.subset_size},
      {"chosen", r.chosen.name()},
      {"criteria", criteria},
      {"train_loss", r.train_loss},
      {"val_metric", r.val_metric},
      {"train_forward", r.train_forward},
      {"train_backward", r.train_backward},
      {"selection_forward", r.selection_forward},
  };
  return j.dump();
}

SelectionRecord selection_record_from_json(std::string_view line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw DataError("selection log: malformed record");
  auto view = [](const json& v) {
    auto id = ViewId::parse(v.get<std::string>());
    if (!id) throw DataError("selection log: unknown view '" + v.get<std::string>() + "'");
    return *id;
  };
  try {
    SelectionRecord r;
    r.iteration = j.at("t").get<int>();
    r.competence = j.at("competence").get<double>();
    r.subset_size = j.at("subset_size").get<std::size_t>();
    r.chosen = view(j.at("chosen"));
    for (const auto& c : j.at("criteria")) r.criteria.emplace_back(view(c.at(0)), c.at(1).get<double>());
    r.train_loss = j.value("train_loss", 0.0);
    r.val_metric = j.value("val_metric", 0.0);
    r.train_forward = j.value("train_forward", std::uint64_t{0});
    r.train_backward = j.value("train_backward", std::uint64_t{0});
    r.selection_forward = j.value("selection_forward", std::uint64_t{0});
    return r;
  } catch (const json::exception& e) {
    throw DataError(std::string("selection log: ") + e.what());
  }
}

void write_selection_log(const SelectionLog& log, std::ostream& out) {
  for (const auto& r : log.records) out << to_json_line(r) << '\n';
}

SelectionLog read_selection_log(std::istream& in) {
  SelectionLog log;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    log.records.push_back(selection_record_from_json(line));
  }
  return log;
}

namespace {

std::uint64_t epoch_seed(std::uint64_t base, int t, int round) {
  return base * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(t) * 1000003ULL +
         static_cast<std::uint64_t>(round);
}

struct Checkpointing {
  const Dataset& dataset;
  Learner& learner;
  const TrainConfig& train;
  TrainReport& report;
  std::optional<ParameterSnapshot> best;

  double validate() {
    const auto& val = dataset.splits().val;
    if (!val.empty()) return evaluate(learner, dataset, val, train.metric);
    report.checkpoint_on_train_loss = true;
    const auto& tr = dataset.splits().train;
    if (tr.empty()) return 0.0;
    auto losses = learner.forward_losses(tr);
    return -std::accumulate(losses.begin(), losses.end(), 0.0) / static_cast<double>(losses.size());
  }

  void observe(int t, double metric) {
    report.val_metric.push_back(metric);
    if (report.best_iteration < 0 || metric > report.best_val_metric) {
      report.best_iteration = t;
      report.best_val_metric = metric;
      best = learner.snapshot();
    }
  }

  void finish() {
    if (best) learner.restore(*best);
    const auto& test = dataset.splits().test;
    report.test_metric = test.empty() ? 0.0 : evaluate(learner, dataset, test, train.metric);
  }
};

}  // namespace

CurriculumResult run_curriculum(const Dataset& dataset, const SortedViews& views, Learner& learner,
                                const ScheduleConfig& cfg, const TrainConfig& train) {
  cfg.validate();
  if (views.empty()) throw std::invalid_argument("run_curriculum: no views");
  CurriculumResult result;
  Checkpointing ckpt{dataset, learner, train, result.report, std::nullopt};

  std::uint64_t train_fwd = 0;
  std::uint64_t train_bwd = 0;
  std::uint64_t sel_fwd = 0;
  for (int t = 0; t < cfg.budget(); ++t) {
    SelectionRecord rec;
    rec.iteration = t;
    rec.competence = competence(t, cfg);

    const PassCounters before = learner.counters();
    Selection sel = select_view(t, views, &learner, cfg);
    const PassCounters after_select = learner.counters();
    sel_fwd += after_select.forward - before.forward;

    rec.subset_size = sel.subset.size();
    rec.chosen = sel.chosen_id;
    for (std::size_t i = 0; i < views.size(); ++i) rec.criteria.emplace_back(views[i].id, sel.criteria[i]);

    try {
      for (int round = 0; round < train.epochs_per_iteration; ++round) {
        EpochOptions opts = train.epoch;
        opts.seed = epoch_seed(train.epoch.seed, t, round);
        rec.train_loss = learner.train_epoch(sel.subset, opts);
      }
    } catch (const DivergenceError& e) {
      const PassCounters now = learner.counters();
      rec.train_forward = train_fwd + (now.forward - after_select.forward);
      rec.train_backward = train_bwd + (now.backward - after_select.backward);
      rec.selection_forward = sel_fwd;
      result.log.records.push_back(rec);
      result.diverged = true;
      result.error = e.what();
      break;
    }
    const PassCounters after_train = learner.counters();
    train_fwd += after_train.forward - after_select.forward;
    train_bwd += after_train.backward - after_select.backward;
    rec.train_forward = train_fwd;
    rec.train_backward = train_bwd;
    rec.selection_forward = sel_fwd;
    result.report.loss_curve.push_back(rec.train_loss);

    rec.val_metric = ckpt.validate();
    ckpt.observe(t, rec.val_metric);
    result.log.records.push_back(std::move(rec));
  }
  if (result.report.checkpoint_on_train_loss) {
    result.log.notes.push_back("no validation split: checkpoints chosen on training loss");
  }
  ckpt.finish();
  return result;
}

CurriculumResult run_baseline(const Dataset& dataset, Learner& learner, int iterations,
                              const TrainConfig& train) {
  CurriculumResult result;
  Checkpointing ckpt{dataset, learner, train, result.report, std::nullopt};
  const auto& all = dataset.splits().train;
  for (int t = 0; t < iterations; ++t) {
    double loss = 0.0;
    try {
      for (int round = 0; round < train.epochs_per_iteration; ++round) {
        EpochOptions opts = train.epoch;
        opts.seed = epoch_seed(train.epoch.seed, t, round);
        loss = learner.train_epoch(all, opts);
      }
    } catch (const DivergenceError& e) {
      result.diverged = true;
      result.error = e.what();
      break;
    }
    result.report.loss_curve.push_back(loss);
    ckpt.observe(t, ckpt.validate());
  }
  ckpt.finish();
  return result;
}

double predicted_passes(std::size_t n, int e, Mechanism mechanism, std::size_t views) {
  if (e < 1) return 0.0;
  const double base = static_cast<double>(n) * static_cast<double>(e - 1);
  if (mechanism == Mechanism::index_based) return base;
  return base + static_cast<double>(views) * base / 2.0;
}

PassAudit audit_passes(const SelectionLog& log, std::size_t n, const ScheduleConfig& cfg, std::size_t views,
                       int epochs_per_iteration) {
  PassAudit audit;
  std::uint64_t size_sum = 0;
  for (const auto& r : log.records) size_sum += r.subset_size;
  if (!log.records.empty()) {
    const auto& last = log.records.back();
    audit.measured_training = last.train_forward + last.train_backward;
    audit.measured_selection = last.selection_forward;
  }
  const auto epochs = static_cast<std::uint64_t>(epochs_per_iteration);
  const bool model = cfg.mechanism == Mechanism::model_based;
  audit.schedule_training = 2 * epochs * size_sum;
  audit.schedule_selection = model ? views * size_sum : 0;

  const double base = static_cast<double>(n) * static_cast<double>(std::max(cfg.total_iterations - 1, 0));
  audit.predicted = static_cast<double>(epochs) * base + (model ? static_cast<double>(views) * base / 2.0 : 0.0);

  audit.matches_schedule = audit.measured_training == audit.schedule_training &&
                           audit.measured_selection == audit.schedule_selection;
  const double measured = static_cast<double>(audit.measured_training + audit.measured_selection);
  audit.at_least_predicted = measured >= audit.predicted;
  if (cfg.pacing == Pacing::linear) {
    const double per_iteration = 2.0 * static_cast<double>(epochs) + (model ? static_cast<double>(views) : 0.0);
    const double excess = measured - audit.predicted;
    audit.within_rounding_bound =
        excess >= 0.0 && excess < static_cast<double>(cfg.total_iterations) * per_iteration;
  }
  return audit;
}

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::initial: return "initial";
    case Phase::middle: return "middle";
    case Phase::end: return "end";
  }
  return "unknown";
}

Phase phase_of(int iteration, int total_iterations) {
  if (total_iterations < 1 || iteration >= total_iterations) return Phase::end;
  const int third = (3 * std::max(iteration, 0)) / total_iterations;
  return static_cast<Phase>(std::min(third, 2));
}

std::vector<HistogramRow> phase_histogram(const SelectionLog& log, int total_iterations) {
  std::map<std::pair<int, int>, std::size_t> counts;
  for (const auto& r : log.records) {
    ++counts[{static_cast<int>(phase_of(r.iteration, total_iterations)), r.chosen.code()}];
  }
  std::vector<HistogramRow> rows;
  for (const auto& [key, count] : counts) {
    HistogramRow row;
    row.phase = static_cast<Phase>(key.first);
    row.view = key.second == static_cast<int>(kIndexCount) ? ViewId::random()
                                                           : ViewId(static_cast<IndexId>(key.second));
    row.count = count;
    rows.push_back(row);
  }
  return rows;
}

std::string histogram_csv(std::span<const HistogramRow> rows) {
  std::ostringstream out;
  out << "phase,index_name,count\n";
  for (const auto& r : rows) out << to_string(r.phase) << ',' << r.view.name() << ',' << r.count << '\n';
  return out.str();
}

}  // namespace mccl
