#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trajclust/ensemble.hpp"
#include "trajclust/similarity.hpp"

namespace trajclust {

struct FeatureDataset;

// Writes to "<path>.tmp" and renames over `path`, so readers never observe a
// partially written file.
void write_file_atomic(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

// Delimited integer table. The delimiter is a tab if the first data line
// contains one, otherwise a comma. A first line that does not parse as
// numbers is taken as a header. Empty fields and non-integers are rejected.
struct IntTable {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::int64_t> values;  // row-major
};
IntTable parse_int_table(const std::string& text, const std::string& source);

Ensemble read_ensemble_csv(const std::string& path);
std::string format_ensemble_csv(const Ensemble& ensemble);
void write_ensemble_csv(const std::string& path, const Ensemble& ensemble);

// One label per line, optional header.
std::vector<std::int64_t> read_labels_csv(const std::string& path);
std::string format_labels_csv(std::span<const Label> labels);
void write_labels_csv(const std::string& path, std::span<const Label> labels);

// Numeric feature table. With `last_column_is_label` the final column holds
// integer ground-truth classes.
FeatureDataset read_dataset_csv(const std::string& path, bool last_column_is_label);

// Binary lower-triangular cache of a similarity matrix together with the
// parameters that produced it.
struct PtsHeader {
  std::uint64_t size = 0;
  std::uint64_t steps = 0;
  std::uint64_t elite_neighbors = 0;
};
void write_pts_binary(const std::string& path, const SimilarityMatrix& pts, const PtsHeader& header);
std::optional<SimilarityMatrix> read_pts_binary(const std::string& path, const PtsHeader& expected);

}  // namespace trajclust
