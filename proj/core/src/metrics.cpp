#include "mccl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

#include "mccl/errors.hpp"

namespace mccl {

std::string_view to_string(Metric metric) {
  return metric == Metric::accuracy ? "accuracy" : "f1_positive";
}

Metric parse_metric(std::string_view text) {
  if (text == "accuracy") return Metric::accuracy;
  if (text == "f1_positive" || text == "f1") return Metric::f1_positive;
  throw DataError("unknown metric '" + std::string(text) + "'");
}

double accuracy(std::span<const int> predictions, std::span<const int> labels) {
  if (predictions.size() != labels.size()) throw std::invalid_argument("accuracy: length mismatch");
  if (labels.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) correct += predictions[i] == labels[i];
  return static_cast<double>(correct) / static_cast<double>(labels.size());
}

double f1_positive(std::span<const int> predictions, std::span<const int> labels) {
  if (predictions.size() != labels.size()) throw std::invalid_argument("f1: length mismatch");
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool p = predictions[i] == 1;
    const bool l = labels[i] == 1;
    tp += p && l;
    fp += p && !l;
    fn += !p && l;
  }
  if (tp == 0) return 0.0;
  const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  const double recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  return 2.0 * precision * recall / (precision + recall);
}

double score(Metric metric, std::span<const int> predictions, std::span<const int> labels) {
  return metric == Metric::accuracy ? accuracy(predictions, labels) : f1_positive(predictions, labels);
}

std::vector<int> predict_labels(const Learner& learner, std::span<const SampleId> samples) {
  std::vector<int> out;
  out.reserve(samples.size());
  for (const auto& probs : learner.predict(samples)) {
    out.push_back(static_cast<int>(std::max_element(probs.begin(), probs.end()) - probs.begin()));
  }
  return out;
}

double evaluate(const Learner& learner, const Dataset& dataset, std::span<const SampleId> samples,
                Metric metric) {
  if (samples.empty()) return 0.0;
  std::vector<int> labels;
  labels.reserve(samples.size());
  for (SampleId id : samples) labels.push_back(dataset.sample(id).label);
  return score(metric, predict_labels(learner, samples), labels);
}

TTestResult welch_t_test(std::span<const double> a, std::span<const double> b, double alpha) {
  if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("welch_t_test: need >= 2 runs per side");
  auto moments = [](std::span<const double> x) {
    const double n = static_cast<double>(x.size());
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return std::pair{mean, ss / (n - 1.0)};
  };
  const auto [ma, va] = moments(a);
  const auto [mb, vb] = moments(b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double sa = va / na;
  const double sb = vb / nb;

  TTestResult r;
  r.alpha = alpha;
  if (sa + sb == 0.0) {
    if (ma == mb) return r;
    r.t = ma > mb ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    r.degrees_of_freedom = na + nb - 2.0;
    r.critical_value = boost::math::quantile(boost::math::students_t(r.degrees_of_freedom), 1.0 - alpha / 2.0);
    r.significant = true;
    return r;
  }
  r.t = (ma - mb) / std::sqrt(sa + sb);
  r.degrees_of_freedom = (sa + sb) * (sa + sb) / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
  r.critical_value = boost::math::quantile(boost::math::students_t(r.degrees_of_freedom), 1.0 - alpha / 2.0);
  r.significant = std::abs(r.t) > r.critical_value;
  return r;
}

}  // namespace mccl
