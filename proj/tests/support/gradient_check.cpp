#include "gradient_check.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mccl/synthetic.hpp"

namespace suite {

GradientCheck check_gradients(mccl::LearnerVariant variant, int instances, std::uint64_t seed, double h) {
  GradientCheck out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < instances; ++k) {
    mccl::SyntheticOptions o;
    o.nodes = 20 + static_cast<std::size_t>(rng() % 20);
    o.blocks = 2 + static_cast<int>(rng() % 3);
    o.feature_dim = 2 + static_cast<std::size_t>(rng() % 4);
    o.p_in = 0.3;
    o.p_out = 0.05;
    o.task = (k % 3 == 2) ? mccl::Task::link : mccl::Task::node;
    o.link_samples = 30;
    o.seed = rng();
    mccl::Dataset d = mccl::generate_sbm(o);
    mccl::ReferenceLearner learner(d, variant, rng());

    std::vector<double> params(learner.parameters().begin(), learner.parameters().end());
    for (double& p : params) p = u(rng);
    learner.set_parameters(params);

    const auto& train = d.splits().train;
    std::vector<mccl::SampleId> batch(train.begin(), train.begin() + std::min<std::size_t>(train.size(), 12));
    std::vector<double> grad;
    learner.loss_and_gradient(batch, grad);
    std::vector<double> scratch;
    for (std::size_t i = 0; i < params.size(); ++i) {
      auto probe = params;
      probe[i] = params[i] + h;
      learner.set_parameters(probe);
      const double up = learner.loss_and_gradient(batch, scratch);
      probe[i] = params[i] - h;
      learner.set_parameters(probe);
      const double down = learner.loss_and_gradient(batch, scratch);
      const double numeric = (up - down) / (2 * h);
      const double rel = std::abs(grad[i] - numeric) / std::max(std::abs(grad[i]) + std::abs(numeric), 1e-8);
      out.max_relative_error = std::max(out.max_relative_error, rel);
      ++out.parameters;
    }
    learner.set_parameters(params);
    ++out.instances;
  }
  return out;
}

}  // namespace suite
