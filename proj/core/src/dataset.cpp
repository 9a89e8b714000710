#include "mccl/dataset.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <string>

#include "mccl/errors.hpp"

namespace mccl {

std::string_view to_string(Task task) { return task == Task::node ? "node" : "link"; }

Task parse_task(std::string_view text) {
  if (text == "node") return Task::node;
  if (text == "link") return Task::link;
  throw DataError("unknown task '" + std::string(text) + "' (expected node|link)");
}

Dataset::Dataset(Graph graph, std::vector<Sample> samples, FeatureMatrix features, Splits splits,
                 Task task, int hops)
    : graph_(std::move(graph)),
      samples_(std::move(samples)),
      features_(std::move(features)),
      splits_(std::move(splits)),
      task_(task),
      hops_(hops) {
  if (hops_ < 1) throw DataError("hop radius must be >= 1");
  const std::size_t n = graph_.node_count();
  if (features_.rows < n) {
    throw DataError("missing feature row for node " + std::to_string(features_.rows));
  }
  if (features_.values.size() != features_.rows * features_.cols) {
    throw DataError("feature matrix has inconsistent dimensions");
  }

  int max_label = 1;
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const Sample& s = samples_[i];
    if (!index_.emplace(s.id, i).second) {
      throw DataError("duplicate sample id " + std::to_string(s.id));
    }
    const std::size_t want = task_ == Task::link ? 2 : 1;
    if (s.targets.size() != want) {
      throw DataError("sample " + std::to_string(s.id) + " has " +
                      std::to_string(s.targets.size()) + " targets, task " +
                      std::string(to_string(task_)) + " needs " + std::to_string(want));
    }
    for (NodeId t : s.targets) {
      if (t >= n) {
        throw DataError("sample " + std::to_string(s.id) + " targets unknown node " +
                        std::to_string(t));
      }
    }
    if (s.targets.size() == 2 && s.targets[0] == s.targets[1]) {
      throw DataError("sample " + std::to_string(s.id) + " pairs a node with itself");
    }
    if (s.label < 0) throw DataError("sample " + std::to_string(s.id) + " has a negative label");
    if (task_ == Task::link && s.label > 1) {
      throw DataError("link sample " + std::to_string(s.id) + " must have a binary label");
    }
    max_label = std::max(max_label, s.label);
  }
  class_count_ = max_label + 1;

  std::set<SampleId> seen;
  for (const auto* split : {&splits_.train, &splits_.val, &splits_.test}) {
    for (SampleId id : *split) {
      if (!index_.contains(id)) {
        throw DataError("split references unknown sample " + std::to_string(id));
      }
      if (!seen.insert(id).second) {
        throw DataError("sample " + std::to_string(id) + " appears in more than one split");
      }
    }
  }
}

const Sample& Dataset::sample(SampleId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw DataError("unknown sample id " + std::to_string(id));
  return samples_[it->second];
}

namespace {

class Fnv1a {
 public:
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      hash_ ^= p[i];
      hash_ *= 0x100000001b3ULL;
    }
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      unsigned char b = static_cast<unsigned char>(v >> (8 * i));
      bytes(&b, 1);
    }
  }
  std::uint64_t value() const { return hash_; }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

}  // namespace

std::uint64_t Dataset::fingerprint() const {
  Fnv1a h;
  h.u64(graph_.node_count());
  for (auto [u, v] : graph_.edges()) {
    h.u64(u);
    h.u64(v);
  }
  h.u64(samples_.size());
  for (const Sample& s : samples_) {
    h.u64(static_cast<std::uint64_t>(s.id));
    h.u64(s.targets.size());
    for (NodeId t : s.targets) h.u64(t);
    h.u64(static_cast<std::uint64_t>(s.label));
  }
  h.u64(features_.rows);
  h.u64(features_.cols);
  for (double x : features_.values) h.u64(std::bit_cast<std::uint64_t>(x));
  for (const auto* split : {&splits_.train, &splits_.val, &splits_.test}) {
    h.u64(split->size());
    for (SampleId id : *split) h.u64(static_cast<std::uint64_t>(id));
  }
  h.u64(task_ == Task::node ? 0 : 1);
  h.u64(static_cast<std::uint64_t>(hops_));
  return h.value();
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view token, T& out) {
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

bool parse_double(std::string_view token, double& out) {
  // from_chars for double is available in libstdc++ 11.
  return parse_number(token, out);
}

// Calls `row` for every data line; a first line whose leading field is not
// numeric is treated as a header.
template <typename Fn>
void for_each_csv_row(const std::filesystem::path& path, Fn&& row) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    auto trimmed = trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    auto fields = split_csv(trimmed);
    if (first) {
      first = false;
      double probe = 0;
      if (!parse_double(fields.front(), probe)) continue;
    }
    row(fields, line_no);
  }
}

FeatureMatrix load_features(const std::filesystem::path& path) {
  FeatureMatrix m;
  for_each_csv_row(path, [&](const std::vector<std::string_view>& fields, std::size_t line_no) {
    if (m.rows == 0) m.cols = fields.size();
    if (fields.size() != m.cols) {
      throw ParseError(path.string(), line_no,
                       "expected " + std::to_string(m.cols) + " feature columns");
    }
    for (auto f : fields) {
      double x = 0;
      if (!parse_double(f, x) || !std::isfinite(x)) {
        throw ParseError(path.string(), line_no, "invalid feature value '" + std::string(f) + "'");
      }
      m.values.push_back(x);
    }
    ++m.rows;
  });
  return m;
}

std::vector<Sample> load_samples(const std::filesystem::path& path, Task task) {
  std::vector<Sample> samples;
  const std::size_t want = task == Task::link ? 4 : 3;
  for_each_csv_row(path, [&](const std::vector<std::string_view>& fields, std::size_t line_no) {
    if (fields.size() != want) {
      throw ParseError(path.string(), line_no,
                       "expected " + std::to_string(want) + " columns for task " +
                           std::string(to_string(task)));
    }
    Sample s;
    if (!parse_number(fields[0], s.id)) throw ParseError(path.string(), line_no, "bad sample id");
    for (std::size_t i = 1; i + 1 < fields.size(); ++i) {
      NodeId t = 0;
      if (!parse_number(fields[i], t)) throw ParseError(path.string(), line_no, "bad target id");
      s.targets.push_back(t);
    }
    if (!parse_number(fields.back(), s.label)) throw ParseError(path.string(), line_no, "bad label");
    samples.push_back(std::move(s));
  });
  return samples;
}

Splits load_splits(const std::filesystem::path& path) {
  Splits splits;
  for_each_csv_row(path, [&](const std::vector<std::string_view>& fields, std::size_t line_no) {
    if (fields.size() != 2) throw ParseError(path.string(), line_no, "expected sample_id,split");
    SampleId id = 0;
    if (!parse_number(fields[0], id)) throw ParseError(path.string(), line_no, "bad sample id");
    if (fields[1] == "train") {
      splits.train.push_back(id);
    } else if (fields[1] == "val") {
      splits.val.push_back(id);
    } else if (fields[1] == "test") {
      splits.test.push_back(id);
    } else {
      throw ParseError(path.string(), line_no, "split must be train, val or test");
    }
  });
  return splits;
}

}  // namespace

Dataset load_dataset(const DatasetPaths& paths, Task task, int hops) {
  FeatureMatrix features = load_features(paths.features);
  // Every node id must have a feature row.
  Graph graph = load_edge_list(paths.graph, features.rows);
  return Dataset(std::move(graph), load_samples(paths.labels, task), std::move(features),
                 load_splits(paths.splits), task, hops);
}

void save_dataset(const Dataset& dataset, const DatasetPaths& paths) {
  auto open = [](const std::filesystem::path& p) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p);
    if (!out) throw DataError("cannot write " + p.string());
    return out;
  };
  {
    auto out = open(paths.graph);
    out << "# " << dataset.graph().node_count() << " nodes\n";
    for (auto [u, v] : dataset.graph().edges()) out << u << ' ' << v << '\n';
  }
  {
    auto out = open(paths.features);
    out << std::setprecision(17);
    const auto& f = dataset.features();
    for (std::size_t r = 0; r < f.rows; ++r) {
      auto row = f.row(r);
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
      out << '\n';
    }
  }
  {
    auto out = open(paths.labels);
    out << (dataset.task() == Task::link ? "sample_id,target_a,target_b,label\n"
                                         : "sample_id,target_a,label\n");
    for (const Sample& s : dataset.samples()) {
      out << s.id;
      for (NodeId t : s.targets) out << ',' << t;
      out << ',' << s.label << '\n';
    }
  }
  {
    auto out = open(paths.splits);
    out << "sample_id,split\n";
    for (SampleId id : dataset.splits().train) out << id << ",train\n";
    for (SampleId id : dataset.splits().val) out << id << ",val\n";
    for (SampleId id : dataset.splits().test) out << id << ",test\n";
  }
}

}  // namespace mccl
