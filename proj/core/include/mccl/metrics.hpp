#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "mccl/dataset.hpp"
#include "mccl/learner.hpp"

namespace mccl {

enum class Metric { accuracy, f1_positive };

std::string_view to_string(Metric metric);
Metric parse_metric(std::string_view text);

double accuracy(std::span<const int> predictions, std::span<const int> labels);
/// F1 on class 1; 0 when there are no true positives.
double f1_positive(std::span<const int> predictions, std::span<const int> labels);
double score(Metric metric, std::span<const int> predictions, std::span<const int> labels);

/// Argmax class per sample; ties go to the lowest class.
std::vector<int> predict_labels(const Learner& learner, std::span<const SampleId> samples);

double evaluate(const Learner& learner, const Dataset& dataset,
                std::span<const SampleId> samples, Metric metric);

struct TTestResult {
  double t = 0.0;
  double degrees_of_freedom = 0.0;
  double critical_value = 0.0;  // two-sided at alpha
  double alpha = 0.01;
  bool significant = false;
};

/// Welch's unequal-variance t-test, two-sided. Requires >= 2 runs per side.
TTestResult welch_t_test(std::span<const double> a, std::span<const double> b, double alpha = 0.01);

}  // namespace mccl
