#include "mccl/score_table.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "mccl/errors.hpp"
#include "mccl/subgraph.hpp"

namespace mccl {

using nlohmann::json;

std::vector<double> ScoreMatrix::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

void ScoreMatrix::set_column(std::size_t c, std::span<const double> values) {
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = values[r];
}

std::optional<std::size_t> IndexScoreTable::column_of(IndexId id) const {
  auto it = std::find(indices.begin(), indices.end(), id);
  if (it == indices.end()) return std::nullopt;
  return static_cast<std::size_t>(it - indices.begin());
}

std::string_view to_string(CacheStatus status) {
  switch (status) {
    case CacheStatus::disabled: return "disabled";
    case CacheStatus::hit: return "hit";
    case CacheStatus::miss: return "miss";
    case CacheStatus::mismatch: return "mismatch";
  }
  return "unknown";
}

std::vector<double> normalize_column(std::span<const double> column) {
  std::vector<double> out(column.begin(), column.end());
  if (out.empty()) return out;
  for (double v : out) {
    if (!std::isfinite(v)) throw DataError("non-finite score");
  }
  const double lo = *std::min_element(out.begin(), out.end());
  if (lo < 0.0) {
    for (double& v : out) v -= lo;
  }
  double sq = 0.0;
  for (double v : out) sq += v * v;
  if (sq == 0.0) return out;
  const double norm = std::sqrt(sq);
  for (double& v : out) v /= norm;
  return out;
}

IndexScoreTable normalize(IndexScoreTable table) {
  table.normalized = ScoreMatrix(table.raw.rows(), table.raw.cols());
  for (std::size_t c = 0; c < table.raw.cols(); ++c) {
    const auto column = table.raw.column(c);
    for (std::size_t r = 0; r < column.size(); ++r) {
      if (!std::isfinite(column[r])) {
        throw DataError("non-finite raw score for sample " + std::to_string(table.sample_ids[r]) +
                        ", index " + std::string(name(table.indices[c])));
      }
    }
    table.normalized.set_column(c, normalize_column(column));
  }
  return table;
}

IndexScoreTable compute_raw(const Dataset& dataset, std::span<const SampleId> samples,
                            std::span<const IndexId> indices, const IndexParams& params,
                            unsigned threads) {
  IndexScoreTable table;
  table.sample_ids.assign(samples.begin(), samples.end());
  table.indices.assign(indices.begin(), indices.end());
  table.raw = ScoreMatrix(samples.size(), indices.size());
  std::vector<std::vector<FlaggedScore>> row_flags(samples.size());

  auto work = [&](std::size_t r) {
    const Sample& sample = dataset.sample(samples[r]);
    const SubgraphView view = k_hop_subgraph(dataset.graph(), sample.targets, dataset.hops());
    IndexParams local = params;
    local.connectivity.seed = params.connectivity.seed ^
                              (static_cast<std::uint64_t>(sample.id) * 0x9e3779b97f4a7c15ULL);
    for (std::size_t c = 0; c < indices.size(); ++c) {
      const IndexValue v = compute_index(view, indices[c], local);
      table.raw(r, c) = v.value;
      if (v.flag != IndexFlag::none) row_flags[r].push_back({sample.id, indices[c], v.flag});
    }
  };

  unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, samples.size()));
  if (workers <= 1) {
    for (std::size_t r = 0; r < samples.size(); ++r) work(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t r = next++; r < samples.size() && !failed; r = next++) {
          try {
            work(r);
          } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
          }
        }
      });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
  }

  for (auto& flags : row_flags) table.flags.insert(table.flags.end(), flags.begin(), flags.end());
  return table;
}

std::string cache_key(const Dataset& dataset, std::span<const IndexId> indices,
                      const IndexParams& params) {
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(dataset.fingerprint()));
  json names = json::array();
  for (IndexId id : indices) names.push_back(name(id));
  json key = {
      {"version", kScoreCacheVersion},
      {"dataset_hash", hash},
      {"k", dataset.hops()},
      {"indices", names},
      {"params",
       {{"katz",
         {{"alpha", params.katz.alpha},
          {"alpha_scale", params.katz.alpha_scale},
          {"beta", params.katz.beta},
          {"max_iter", params.katz.max_iter},
          {"tol", params.katz.tol},
          {"lambda_iterations", params.katz.lambda_iterations}}},
        {"eigenvector", {{"max_iter", params.eigenvector.max_iter}, {"tol", params.eigenvector.tol}}},
        {"connectivity",
         {{"exact_limit", params.connectivity.exact_limit},
          {"sampled_pairs", params.connectivity.sampled_pairs},
          {"seed", params.connectivity.seed}}}}},
  };
  return key.dump();
}

namespace {

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

void write_score_cache(const std::filesystem::path& dir, const IndexScoreTable& table,
                       const std::string& key) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "scores.csv", std::ios::binary);
    if (!out) throw DataError("cannot write " + (dir / "scores.csv").string());
    out << "sample_id";
    for (IndexId id : table.indices) out << ',' << name(id);
    out << '\n';
    for (std::size_t r = 0; r < table.sample_ids.size(); ++r) {
      out << table.sample_ids[r];
      for (std::size_t c = 0; c < table.indices.size(); ++c) out << ',' << format_double(table.raw(r, c));
      out << '\n';
    }
  }
  json flags = json::array();
  for (const auto& f : table.flags) {
    flags.push_back({{"sample_id", f.sample}, {"index", name(f.index)}, {"flag", to_string(f.flag)}});
  }
  json manifest = {{"key", json::parse(key)}, {"flags", flags}};
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  if (!out) throw DataError("cannot write " + (dir / "manifest.json").string());
  out << manifest.dump(2) << '\n';
}

std::optional<IndexScoreTable> read_score_cache(const std::filesystem::path& dir,
                                                const std::string& key, std::string* reason) {
  auto fail = [&](std::string why) -> std::optional<IndexScoreTable> {
    if (reason) *reason = std::move(why);
    return std::nullopt;
  };
  std::ifstream mf(dir / "manifest.json");
  if (!mf) return fail("no manifest");
  json manifest = json::parse(mf, nullptr, false);
  if (manifest.is_discarded() || !manifest.is_object() || !manifest.contains("key")) {
    return fail("manifest is corrupted");
  }
  if (manifest["key"] != json::parse(key)) return fail("manifest does not match inputs");

  IndexScoreTable table;
  for (const auto& name_json : manifest["key"]["indices"]) {
    auto id = parse_index(name_json.get<std::string>());
    if (!id) return fail("unknown index in manifest");
    table.indices.push_back(*id);
  }
  if (manifest.contains("flags")) {
    for (const auto& f : manifest["flags"]) {
      FlaggedScore fs;
      fs.sample = f.value("sample_id", SampleId{0});
      fs.index = parse_index(f.value("index", std::string())).value_or(IndexId::degree);
      const std::string flag = f.value("flag", std::string());
      for (auto candidate : {IndexFlag::eigenvector_fallback, IndexFlag::katz_alpha_reduced,
                             IndexFlag::connectivity_sampled}) {
        if (to_string(candidate) == flag) fs.flag = candidate;
      }
      table.flags.push_back(fs);
    }
  }

  std::ifstream in(dir / "scores.csv");
  if (!in) return fail("no scores.csv");
  std::string line;
  if (!std::getline(in, line)) return fail("empty scores.csv");
  {
    std::string expected = "sample_id";
    for (IndexId id : table.indices) expected += "," + std::string(name(id));
    if (line != expected) return fail("scores.csv header does not match manifest");
  }
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t pos = 0;
    std::size_t field = 0;
    while (pos <= line.size()) {
      std::size_t comma = line.find(',', pos);
      if (comma == std::string::npos) comma = line.size();
      const char* b = line.data() + pos;
      const char* e = line.data() + comma;
      if (field == 0) {
        SampleId id = 0;
        auto [p, ec] = std::from_chars(b, e, id);
        if (ec != std::errc() || p != e) return fail("bad sample id in scores.csv");
        table.sample_ids.push_back(id);
      } else {
        double v = 0;
        auto [p, ec] = std::from_chars(b, e, v);
        if (ec != std::errc() || p != e) return fail("bad value in scores.csv");
        values.push_back(v);
      }
      ++field;
      pos = comma + 1;
    }
    if (field != table.indices.size() + 1) return fail("wrong column count in scores.csv");
  }
  table.raw = ScoreMatrix(table.sample_ids.size(), table.indices.size());
  for (std::size_t r = 0; r < table.sample_ids.size(); ++r) {
    for (std::size_t c = 0; c < table.indices.size(); ++c) table.raw(r, c) = values[r * table.indices.size() + c];
  }
  return normalize(std::move(table));
}

ScoreComputation compute_all(const Dataset& dataset, std::span<const IndexId> indices,
                             const IndexParams& params, const ComputeOptions& options) {
  ScoreComputation out;
  const std::string key = cache_key(dataset, indices, params);
  if (options.cache_dir) {
    std::string reason;
    if (auto cached = read_score_cache(*options.cache_dir, key, &reason)) {
      if (cached->sample_ids == dataset.splits().train) {
        out.table = std::move(*cached);
        out.cache = CacheStatus::hit;
        if (options.log) *options.log << "score cache hit: " << options.cache_dir->string() << '\n';
        return out;
      }
      reason = "cached samples differ from the training split";
    }
    const bool existed = std::filesystem::exists(*options.cache_dir / "manifest.json");
    out.cache = existed ? CacheStatus::mismatch : CacheStatus::miss;
    if (existed && options.log) {
      *options.log << "warning: score cache ignored (" << reason << "), recomputing\n";
    }
  }
  out.table = normalize(compute_raw(dataset, dataset.splits().train, indices, params, options.threads));
  if (options.log) {
    for (const auto& f : out.table.flags) {
      *options.log << "flag: sample " << f.sample << " " << name(f.index) << ": " << to_string(f.flag)
                   << '\n';
    }
  }
  if (options.cache_dir) write_score_cache(*options.cache_dir, out.table, key);
  return out;
}

}  // namespace mccl
