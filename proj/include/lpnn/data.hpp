// Copyright 2026 The lpnn Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LPNN_DATA_HPP
#define LPNN_DATA_HPP

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lpnn/errors.hpp"
#include "lpnn/rng.hpp"

namespace lpnn {

/// How cells equal to missing_marker are treated.
enum class MissingPolicy { DropRow, DropColumn };

struct CsvSchema {
  char delimiter = ',';
  std::string label_column;
  MissingPolicy missing = MissingPolicy::DropRow;
  std::string missing_marker = "?";
  // Columns to one-hot encode. Empty means autodetect: any column whose
  // values do not all parse as numbers is categorical.
  std::vector<std::string> categorical_columns;
};

struct Dataset {
  std::string name;
  std::vector<std::string> feature_names;
  std::vector<std::vector<double>> features;  // row-major
  std::vector<int> labels;
  std::vector<std::string> class_names;
  std::vector<int> train_indices;
  std::vector<int> test_indices;

  int num_rows() const { return static_cast<int>(features.size()); }
  int num_features() const { return static_cast<int>(feature_names.size()); }
  int num_classes() const { return static_cast<int>(class_names.size()); }
};

namespace data_detail {

inline bool parse_number(const std::string& s, double* out) {
  if (s.empty()) return false;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return false;
  *out = v;
  return true;
}

inline std::vector<std::string> split_line(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, delim)) out.push_back(cell);
  if (!line.empty() && line.back() == delim) out.push_back("");
  return out;
}

}  // namespace data_detail

/// Loads a comma-delimited file with a header row. Categorical features
/// are one-hot encoded (distinct values in sorted order); class labels
/// map to indices in sorted order.
inline Dataset load_csv(const std::string& path, const CsvSchema& schema,
                        const std::string& name = "") {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw SchemaError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header =
      data_detail::split_line(line, schema.delimiter);
  const int ncols = static_cast<int>(header.size());

  int label_idx = -1;
  for (int i = 0; i < ncols; ++i)
    if (header[i] == schema.label_column) label_idx = i;
  if (label_idx < 0)
    throw SchemaError(path + ": no label column '" + schema.label_column + "'");

  std::vector<std::vector<std::string>> rows;
  for (int lineno = 2; std::getline(in, line); ++lineno) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = data_detail::split_line(line, schema.delimiter);
    if (static_cast<int>(cells.size()) != ncols)
      throw SchemaError(path + ": row " + std::to_string(lineno) + " has " +
                        std::to_string(cells.size()) + " columns, expected " +
                        std::to_string(ncols));
    rows.push_back(std::move(cells));
  }

  // missing-value handling
  std::vector<bool> keep_col(ncols, true);
  if (schema.missing == MissingPolicy::DropColumn) {
    for (const auto& r : rows)
      for (int c = 0; c < ncols; ++c)
        if (r[c] == schema.missing_marker) keep_col[c] = false;
    if (!keep_col[label_idx])
      throw SchemaError(path + ": missing values in the label column");
  } else {
    std::vector<std::vector<std::string>> kept;
    for (auto& r : rows) {
      bool has_missing = false;
      for (const auto& cell : r)
        if (cell == schema.missing_marker) has_missing = true;
      if (!has_missing) kept.push_back(std::move(r));
    }
    rows = std::move(kept);
  }

  // classify feature columns as numeric or categorical
  std::vector<bool> categorical(ncols, false);
  for (int c = 0; c < ncols; ++c) {
    if (c == label_idx || !keep_col[c]) continue;
    if (!schema.categorical_columns.empty()) {
      categorical[c] =
          std::find(schema.categorical_columns.begin(),
                    schema.categorical_columns.end(),
                    header[c]) != schema.categorical_columns.end();
      continue;
    }
    for (const auto& r : rows) {
      double v;
      if (!data_detail::parse_number(r[c], &v)) {
        categorical[c] = true;
        break;
      }
    }
  }

  Dataset d;
  d.name = name.empty() ? path : name;

  // feature layout: numeric -> one column, categorical -> one per value
  std::vector<std::vector<std::string>> cat_values(ncols);
  for (int c = 0; c < ncols; ++c) {
    if (c == label_idx || !keep_col[c]) continue;
    if (categorical[c]) {
      std::set<std::string> vals;
      for (const auto& r : rows) vals.insert(r[c]);
      cat_values[c].assign(vals.begin(), vals.end());
      for (const auto& v : cat_values[c])
        d.feature_names.push_back(header[c] + "=" + v);
    } else {
      d.feature_names.push_back(header[c]);
    }
  }

  std::set<std::string> label_set;
  for (const auto& r : rows) label_set.insert(r[label_idx]);
  d.class_names.assign(label_set.begin(), label_set.end());
  std::map<std::string, int> label_of;
  for (int i = 0; i < static_cast<int>(d.class_names.size()); ++i)
    label_of[d.class_names[i]] = i;

  for (std::size_t ri = 0; ri < rows.size(); ++ri) {
    const auto& r = rows[ri];
    std::vector<double> feat;
    feat.reserve(d.feature_names.size());
    for (int c = 0; c < ncols; ++c) {
      if (c == label_idx || !keep_col[c]) continue;
      if (categorical[c]) {
        for (const auto& v : cat_values[c]) feat.push_back(r[c] == v ? 1.0 : 0.0);
      } else {
        double v;
        if (!data_detail::parse_number(r[c], &v))
          throw SchemaError(path + ": non-numeric value '" + r[c] +
                            "' in numeric column '" + header[c] + "'");
        feat.push_back(v);
      }
    }
    d.features.push_back(std::move(feat));
    d.labels.push_back(label_of[r[label_idx]]);
  }
  return d;
}

/// Deterministic shuffled split into test_size test rows and the rest
/// as training rows. Index sets come out sorted.
inline void split(Dataset& d, int test_size, std::uint64_t seed) {
  if (test_size < 0 || test_size >= d.num_rows())
    throw ConfigError("split: test_size " + std::to_string(test_size) +
                      " out of range for " + std::to_string(d.num_rows()) +
                      " rows");
  std::vector<int> idx(d.features.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  Rng rng(seed);
  rng.shuffle(idx);
  d.test_indices.assign(idx.begin(), idx.begin() + test_size);
  d.train_indices.assign(idx.begin() + test_size, idx.end());
  std::sort(d.test_indices.begin(), d.test_indices.end());
  std::sort(d.train_indices.begin(), d.train_indices.end());
}

/// Min-max scales every feature column into [0,1] over all rows;
/// constant columns map to 0.
inline void minmax_normalize(Dataset& d) {
  const int nf = d.num_features();
  for (int c = 0; c < nf; ++c) {
    double lo = d.features[0][c], hi = d.features[0][c];
    for (const auto& row : d.features) {
      lo = std::min(lo, row[c]);
      hi = std::max(hi, row[c]);
    }
    for (auto& row : d.features)
      row[c] = hi > lo ? (row[c] - lo) / (hi - lo) : 0.0;
  }
}

}  // namespace lpnn

#endif  // LPNN_DATA_HPP
