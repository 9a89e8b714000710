#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mccl/dataset.hpp"
#include "mccl/index_id.hpp"
#include "mccl/indices.hpp"

namespace mccl {

/// Row-major samples x indices matrix.
class ScoreMatrix {
 public:
  ScoreMatrix() = default;
  ScoreMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), values_(rows * cols) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

  std::vector<double> column(std::size_t c) const;
  void set_column(std::size_t c, std::span<const double> values);

  bool operator==(const ScoreMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

struct FlaggedScore {
  SampleId sample = 0;
  IndexId index = IndexId::degree;
  IndexFlag flag = IndexFlag::none;

  bool operator==(const FlaggedScore&) const = default;
};

struct IndexScoreTable {
  std::vector<SampleId> sample_ids;
  std::vector<IndexId> indices;
  ScoreMatrix raw;
  ScoreMatrix normalized;
  std::vector<FlaggedScore> flags;

  std::optional<std::size_t> column_of(IndexId id) const;
};

/// Shift a column by its minimum when it has negative entries, then divide by
/// its Euclidean norm. All-zero columns stay zero. Throws DataError on a
/// non-finite entry.
std::vector<double> normalize_column(std::span<const double> column);

/// Fills `normalized` from `raw`, column by column.
IndexScoreTable normalize(IndexScoreTable table);

enum class CacheStatus { disabled, hit, miss, mismatch };

std::string_view to_string(CacheStatus status);

struct ComputeOptions {
  std::optional<std::filesystem::path> cache_dir;
  unsigned threads = 0;  // 0: hardware concurrency
  std::ostream* log = nullptr;
};

struct ScoreComputation {
  IndexScoreTable table;
  CacheStatus cache = CacheStatus::disabled;
};

/// Raw (and normalized) scores for every training sample. With a cache
/// directory, a manifest match reloads `scores.csv` bit-identically; any
/// mismatch recomputes and rewrites the cache.
ScoreComputation compute_all(const Dataset& dataset, std::span<const IndexId> indices,
                             const IndexParams& params, const ComputeOptions& options = {});

/// Evaluates the given samples without caching or normalization.
IndexScoreTable compute_raw(const Dataset& dataset, std::span<const SampleId> samples,
                            std::span<const IndexId> indices, const IndexParams& params,
                            unsigned threads = 0);

inline constexpr int kScoreCacheVersion = 1;

/// Compact JSON describing every input that determines the scores: dataset
/// fingerprint, hop radius, index list, parameters and format version.
std::string cache_key(const Dataset& dataset, std::span<const IndexId> indices,
                      const IndexParams& params);

/// Writes `scores.csv` (sample_id,<index>...) and `manifest.json`
/// ({"key": ..., "flags": [...]}) into `dir`.
void write_score_cache(const std::filesystem::path& dir, const IndexScoreTable& table,
                       const std::string& key);

/// Returns the cached raw table (normalized columns recomputed) when the
/// stored key equals `key`; otherwise nullopt with `reason` set.
std::optional<IndexScoreTable> read_score_cache(const std::filesystem::path& dir,
                                                const std::string& key,
                                                std::string* reason = nullptr);

}  // namespace mccl
