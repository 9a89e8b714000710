#include "mccl/learner.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "mccl/errors.hpp"

namespace mccl {

std::string_view to_string(LearnerVariant variant) {
  return variant == LearnerVariant::linear ? "linear" : "neighborhood";
}

LearnerVariant parse_learner_variant(std::string_view text) {
  if (text == "linear") return LearnerVariant::linear;
  if (text == "neighborhood") return LearnerVariant::neighborhood;
  throw DataError("unknown learner variant '" + std::string(text) + "'");
}

void save_snapshot(const ParameterSnapshot& snapshot, const std::filesystem::path& path) {
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    for (double v : snapshot.values) {
      const auto bits = std::bit_cast<std::uint64_t>(v);
      char bytes[8];
      for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
      out.write(bytes, 8);
    }
  }
  std::ofstream manifest(path.string() + ".json");
  if (!manifest) throw DataError("cannot write " + path.string() + ".json");
  manifest << nlohmann::json{{"shape", snapshot.shape}, {"dtype", "float64"}, {"endian", "little"}}.dump()
           << '\n';
}

ParameterSnapshot load_snapshot(const std::filesystem::path& path) {
  std::ifstream manifest(path.string() + ".json");
  if (!manifest) throw DataError("cannot open " + path.string() + ".json");
  auto meta = nlohmann::json::parse(manifest);
  ParameterSnapshot snap;
  snap.shape = meta.at("shape").get<std::vector<std::size_t>>();
  const std::size_t count = std::accumulate(snap.shape.begin(), snap.shape.end(), std::size_t{1},
                                            std::multiplies<>());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  snap.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    unsigned char bytes[8];
    if (!in.read(reinterpret_cast<char*>(bytes), 8)) throw DataError("snapshot is truncated");
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
    snap.values[i] = std::bit_cast<double>(bits);
  }
  return snap;
}

ReferenceLearner::ReferenceLearner(const Dataset& dataset, LearnerVariant variant, std::uint64_t seed)
    : variant_(variant), classes_(static_cast<std::size_t>(dataset.class_count())) {
  const Graph& g = dataset.graph();
  const FeatureMatrix& f = dataset.features();
  const std::size_t fdim = f.cols;
  const std::size_t rdim = variant == LearnerVariant::linear ? fdim : 2 * fdim;

  std::vector<double> repr(g.node_count() * rdim, 0.0);
  for (NodeId u = 0; u < g.node_count(); ++u) {
    auto x = f.row(u);
    double* r = repr.data() + u * rdim;
    std::copy(x.begin(), x.end(), r);
    if (variant == LearnerVariant::neighborhood && g.degree(u) > 0) {
      for (NodeId v : g.neighbors(u)) {
        auto xv = f.row(v);
        for (std::size_t j = 0; j < fdim; ++j) r[fdim + j] += xv[j];
      }
      for (std::size_t j = 0; j < fdim; ++j) r[fdim + j] /= static_cast<double>(g.degree(u));
    }
  }

  input_dim_ = dataset.task() == Task::link ? 2 * rdim : rdim;
  inputs_.assign(dataset.samples().size() * input_dim_, 0.0);
  for (std::size_t i = 0; i < dataset.samples().size(); ++i) {
    const Sample& s = dataset.samples()[i];
    rows_.emplace(s.id, i);
    labels_.push_back(s.label);
    double* x = inputs_.data() + i * input_dim_;
    const double* ru = repr.data() + s.targets[0] * rdim;
    if (dataset.task() == Task::link) {
      const double* rv = repr.data() + s.targets[1] * rdim;
      for (std::size_t j = 0; j < rdim; ++j) {
        x[j] = ru[j] * rv[j];
        x[rdim + j] = ru[j] + rv[j];
      }
    } else {
      std::copy(ru, ru + rdim, x);
    }
  }

  params_.assign(classes_ * (input_dim_ + 1), 0.0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> init(-0.1, 0.1);
  for (std::size_t c = 0; c < classes_; ++c) {
    for (std::size_t j = 0; j < input_dim_; ++j) params_[c * (input_dim_ + 1) + j] = init(rng);
  }
}

std::size_t ReferenceLearner::row_of(SampleId id) const {
  auto it = rows_.find(id);
  if (it == rows_.end()) throw std::invalid_argument("unknown sample id " + std::to_string(id));
  return it->second;
}

std::span<const double> ReferenceLearner::input(SampleId id) const {
  return {inputs_.data() + row_of(id) * input_dim_, input_dim_};
}

void ReferenceLearner::logits(std::span<const double> x, std::span<double> out) const {
  const std::size_t stride = input_dim_ + 1;
  for (std::size_t c = 0; c < classes_; ++c) {
    const double* w = params_.data() + c * stride;
    double z = w[input_dim_];
    for (std::size_t j = 0; j < input_dim_; ++j) z += w[j] * x[j];
    out[c] = z;
  }
}

namespace {

// In-place softmax; returns log-sum-exp.
double softmax(std::span<double> z) {
  const double peak = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - peak);
    sum += v;
  }
  for (double& v : z) v /= sum;
  return peak + std::log(sum);
}

}  // namespace

double ReferenceLearner::accumulate(std::span<const SampleId> samples, std::vector<double>* gradient) const {
  const std::size_t stride = input_dim_ + 1;
  if (gradient) gradient->assign(params_.size(), 0.0);
  std::vector<double> z(classes_);
  double total = 0.0;
  for (SampleId id : samples) {
    const std::size_t row = row_of(id);
    auto x = std::span<const double>(inputs_.data() + row * input_dim_, input_dim_);
    logits(x, z);
    const double label_logit = z[labels_[row]];
    const double lse = softmax(z);
    total += lse - label_logit;
    if (gradient) {
      for (std::size_t c = 0; c < classes_; ++c) {
        const double delta = z[c] - (static_cast<int>(c) == labels_[row] ? 1.0 : 0.0);
        double* g = gradient->data() + c * stride;
        for (std::size_t j = 0; j < input_dim_; ++j) g[j] += delta * x[j];
        g[input_dim_] += delta;
      }
    }
  }
  const double n = static_cast<double>(samples.size());
  if (gradient) {
    for (double& g : *gradient) g /= n;
  }
  return total / n;
}

double ReferenceLearner::loss_and_gradient(std::span<const SampleId> samples,
                                           std::vector<double>& gradient) const {
  if (samples.empty()) throw std::invalid_argument("loss_and_gradient: no samples");
  return accumulate(samples, &gradient);
}

std::vector<double> ReferenceLearner::forward_losses(std::span<const SampleId> samples) const {
  if (samples.empty()) throw std::invalid_argument("forward_losses: no samples");
  std::vector<double> out;
  out.reserve(samples.size());
  std::vector<double> z(classes_);
  for (SampleId id : samples) {
    const std::size_t row = row_of(id);
    logits({inputs_.data() + row * input_dim_, input_dim_}, z);
    const double label_logit = z[labels_[row]];
    out.push_back(softmax(z) - label_logit);
  }
  count_forward(samples.size());
  return out;
}

double ReferenceLearner::train_epoch(std::span<const SampleId> samples, const EpochOptions& options) {
  if (options.learning_rate < 0.0) throw std::invalid_argument("learning rate must be >= 0");
  if (samples.empty()) return 0.0;
  std::vector<SampleId> order(samples.begin(), samples.end());
  std::mt19937_64 rng(options.seed);
  std::shuffle(order.begin(), order.end(), rng);

  const std::size_t batch = std::max<std::size_t>(1, options.batch_size);
  std::vector<double> gradient;
  double loss_sum = 0.0;
  for (std::size_t start = 0; start < order.size(); start += batch) {
    const std::size_t count = std::min(batch, order.size() - start);
    std::span<const SampleId> chunk(order.data() + start, count);
    const double loss = accumulate(chunk, &gradient);
    count_forward(count);
    count_backward(count);
    if (!std::isfinite(loss)) throw DivergenceError("non-finite training loss");
    for (double g : gradient) {
      if (!std::isfinite(g)) throw DivergenceError("non-finite gradient");
    }
    loss_sum += loss * static_cast<double>(count);
    for (std::size_t i = 0; i < params_.size(); ++i) params_[i] -= options.learning_rate * gradient[i];
  }
  return loss_sum / static_cast<double>(order.size());
}

std::vector<std::vector<double>> ReferenceLearner::predict(std::span<const SampleId> samples) const {
  std::vector<std::vector<double>> out;
  out.reserve(samples.size());
  for (SampleId id : samples) {
    std::vector<double> z(classes_);
    logits(input(id), z);
    softmax(z);
    out.push_back(std::move(z));
  }
  count_forward(samples.size());
  return out;
}

ParameterSnapshot ReferenceLearner::snapshot() const {
  return {{classes_, input_dim_ + 1}, params_};
}

void ReferenceLearner::restore(const ParameterSnapshot& snapshot) {
  if (snapshot.shape != std::vector<std::size_t>{classes_, input_dim_ + 1} ||
      snapshot.values.size() != params_.size()) {
    throw std::invalid_argument("snapshot shape does not match learner");
  }
  params_ = snapshot.values;
}

void ReferenceLearner::set_parameters(std::span<const double> values) {
  if (values.size() != params_.size()) throw std::invalid_argument("parameter count mismatch");
  params_.assign(values.begin(), values.end());
}

}  // namespace mccl
