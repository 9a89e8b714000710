#pragma once

#include <cstdint>

#include "mccl/learner.hpp"

namespace suite {

struct GradientCheck {
  int instances = 0;
  int parameters = 0;
  double max_relative_error = 0.0;
};

/// Central differences with step h against ReferenceLearner::loss_and_gradient
/// on `instances` seeded random datasets and parameter vectors. Relative
/// error is |a - n| / max(|a| + |n|, 1e-8).
GradientCheck check_gradients(mccl::LearnerVariant variant, int instances, std::uint64_t seed,
                              double h = 1e-5);

}  // namespace suite
