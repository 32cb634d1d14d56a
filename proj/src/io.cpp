#include "trajclust/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string_view>

#include "trajclust/error.hpp"
#include "trajclust/generators.hpp"

namespace trajclust {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  return lines;
}

std::vector<std::string_view> split_fields(std::string_view line, char delim) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t end = line.find(delim, start);
    if (end == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, end - start));
    start = end + 1;
  }
  return fields;
}

bool parse_int(std::string_view field, std::int64_t& out) {
  field = trim(field);
  if (field.empty()) return false;
  if (field.front() == '+') field.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
  return ec == std::errc() && ptr == field.data() + field.size();
}

bool parse_double(std::string_view field, double& out) {
  field = trim(field);
  if (field.empty()) return false;
  if (field.front() == '+') field.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
  return ec == std::errc() && ptr == field.data() + field.size() && std::isfinite(out);
}

char detect_delimiter(std::string_view line) {
  return line.find('\t') != std::string_view::npos ? '\t' : ',';
}

struct Table {
  char delim = ',';
  std::size_t first_data = 0;
  std::vector<std::string_view> lines;
};

// Splits text into lines and decides whether line 0 is a header, using
// `is_number` on the first line's fields.
template <typename IsNumber>
Table prepare_table(std::string_view text, const std::string& source, IsNumber is_number) {
  Table t;
  t.lines = split_lines(text);
  require(!t.lines.empty(), ErrorCode::kInvalidInput, source + ": file is empty");
  t.delim = detect_delimiter(t.lines[0]);
  bool header = false;
  for (std::string_view f : split_fields(t.lines[0], t.delim)) {
    if (!trim(f).empty() && !is_number(f)) header = true;
  }
  t.first_data = header ? 1 : 0;
  require(t.lines.size() > t.first_data, ErrorCode::kInvalidInput, source + ": no data rows");
  return t;
}

std::string where(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line + 1);
}

}  // namespace

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw_error(ErrorCode::kIo, "cannot open '" + tmp + "' for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      throw_error(ErrorCode::kIo, "failed writing '" + tmp + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.c_str());
    throw_error(ErrorCode::kIo, "cannot move output into '" + path + "': " + ec.message());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_error(ErrorCode::kIo, "cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw_error(ErrorCode::kIo, "failed reading '" + path + "'");
  return buf.str();
}

IntTable parse_int_table(const std::string& text, const std::string& source) {
  Table t = prepare_table(text, source, [](std::string_view f) {
    std::int64_t v;
    return parse_int(f, v);
  });
  IntTable out;
  for (std::size_t li = t.first_data; li < t.lines.size(); ++li) {
    const auto fields = split_fields(t.lines[li], t.delim);
    if (out.rows == 0) {
      out.cols = fields.size();
    } else if (fields.size() != out.cols) {
      throw_error(ErrorCode::kInvalidInput, where(source, li) + ": expected " +
                                                std::to_string(out.cols) + " columns, found " +
                                                std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      std::int64_t v;
      if (!parse_int(fields[c], v)) {
        throw_error(ErrorCode::kInvalidInput,
                    where(source, li) + ": missing or non-integer value in column " +
                        std::to_string(c + 1) + " ('" + std::string(trim(fields[c])) + "')");
      }
      out.values.push_back(v);
    }
    ++out.rows;
  }
  return out;
}

Ensemble read_ensemble_csv(const std::string& path) {
  const IntTable t = parse_int_table(read_file(path), path);
  return Ensemble::from_labels(t.rows, t.cols, t.values);
}

std::string format_ensemble_csv(const Ensemble& ensemble) {
  std::string out;
  for (std::size_t m = 0; m < ensemble.n_clusterings(); ++m) {
    if (m) out += ',';
    out += "base_" + std::to_string(m);
  }
  out += '\n';
  for (std::size_t i = 0; i < ensemble.n_objects(); ++i) {
    for (std::size_t m = 0; m < ensemble.n_clusterings(); ++m) {
      if (m) out += ',';
      out += std::to_string(ensemble.original_label(m, ensemble.label(i, m)));
    }
    out += '\n';
  }
  return out;
}

void write_ensemble_csv(const std::string& path, const Ensemble& ensemble) {
  write_file_atomic(path, format_ensemble_csv(ensemble));
}

std::vector<std::int64_t> read_labels_csv(const std::string& path) {
  const IntTable t = parse_int_table(read_file(path), path);
  require(t.cols == 1, ErrorCode::kInvalidInput,
          path + ": label file must have exactly one column");
  return t.values;
}

std::string format_labels_csv(std::span<const Label> labels) {
  std::string out;
  out.reserve(labels.size() * 3);
  for (Label l : labels) {
    out += std::to_string(l);
    out += '\n';
  }
  return out;
}

void write_labels_csv(const std::string& path, std::span<const Label> labels) {
  write_file_atomic(path, format_labels_csv(labels));
}

FeatureDataset read_dataset_csv(const std::string& path, bool last_column_is_label) {
  const std::string text = read_file(path);
  Table t = prepare_table(text, path, [](std::string_view f) {
    double v;
    return parse_double(f, v);
  });
  std::size_t cols = 0;
  std::vector<double> values;
  std::vector<std::int64_t> truth;
  std::size_t rows = 0;
  for (std::size_t li = t.first_data; li < t.lines.size(); ++li) {
    const auto fields = split_fields(t.lines[li], t.delim);
    if (rows == 0) cols = fields.size();
    require(fields.size() == cols, ErrorCode::kInvalidInput,
            where(path, li) + ": inconsistent column count");
    const std::size_t n_features = last_column_is_label ? cols - 1 : cols;
    require(n_features >= 1, ErrorCode::kInvalidInput, path + ": no feature columns");
    for (std::size_t c = 0; c < n_features; ++c) {
      double v;
      require(parse_double(fields[c], v), ErrorCode::kInvalidInput,
              where(path, li) + ": missing or non-numeric value in column " + std::to_string(c + 1));
      values.push_back(v);
    }
    if (last_column_is_label) {
      std::int64_t v;
      require(parse_int(fields.back(), v) && v >= 0, ErrorCode::kInvalidInput,
              where(path, li) + ": label column must hold non-negative integers");
      truth.push_back(v);
    }
    ++rows;
  }
  const std::size_t n_features = last_column_is_label ? cols - 1 : cols;
  FeatureDataset ds;
  ds.features = RowMatrix(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(n_features));
  std::memcpy(ds.features.data(), values.data(), values.size() * sizeof(double));
  if (last_column_is_label) ds.truth = canonicalize(std::span<const std::int64_t>(truth));
  return ds;
}

namespace {
constexpr char kPtsMagic[8] = {'T', 'C', 'P', 'T', 'S', '0', '0', '1'};
}

void write_pts_binary(const std::string& path, const SimilarityMatrix& pts, const PtsHeader& header) {
  const std::size_t n = pts.size();
  std::string buf;
  buf.append(kPtsMagic, sizeof(kPtsMagic));
  auto put = [&buf](const void* p, std::size_t bytes) {
    buf.append(static_cast<const char*>(p), bytes);
  };
  put(&header.size, sizeof(header.size));
  put(&header.steps, sizeof(header.steps));
  put(&header.elite_neighbors, sizeof(header.elite_neighbors));
  buf.reserve(buf.size() + n * (n + 1) / 2 * sizeof(double));
  for (std::size_t i = 0; i < n; ++i) put(&pts.values()(static_cast<Eigen::Index>(i), 0), (i + 1) * sizeof(double));
  write_file_atomic(path, buf);
}

std::optional<SimilarityMatrix> read_pts_binary(const std::string& path, const PtsHeader& expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[8];
  PtsHeader h;
  in.read(magic, sizeof(magic));
  in.read(reinterpret_cast<char*>(&h.size), sizeof(h.size));
  in.read(reinterpret_cast<char*>(&h.steps), sizeof(h.steps));
  in.read(reinterpret_cast<char*>(&h.elite_neighbors), sizeof(h.elite_neighbors));
  if (!in || std::memcmp(magic, kPtsMagic, sizeof(magic)) != 0) return std::nullopt;
  if (h.size != expected.size || h.steps != expected.steps ||
      h.elite_neighbors != expected.elite_neighbors)
    return std::nullopt;
  const std::size_t n = h.size;
  SimilarityMatrix s(n);
  for (std::size_t i = 0; i < n; ++i) {
    in.read(reinterpret_cast<char*>(&s.values()(static_cast<Eigen::Index>(i), 0)),
            static_cast<std::streamsize>((i + 1) * sizeof(double)));
  }
  if (!in) return std::nullopt;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) s(j, i) = s(i, j);
  return s;
}

}  // namespace trajclust
