// Copyright 2026 The fairaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Declarative dataset recipes: raw CSV -> group-tagged binary classification
// table with one-hot encoded categoricals.
//
// Descriptor files are `key = value` lines; `#` starts a comment. Keys:
//
//   name               free-form identifier
//   source             CSV path, relative to the descriptor's directory or to
//                      $FAIRNESS_AUDIT_DATA_DIR
//   delimiter          one character, or `comma`, `semicolon`, `tab`
//   target             target column
//   positive_threshold numeric rule: value >= threshold is Positive
//   positive_values    value-set rule (comma list) ...
//   negative_values    ... together these must cover every target value
//   protected_column   column holding the protected attribute
//   protected_value    value mapped to Protected; all others NonProtected
//   numeric            comma list of numeric feature columns (repeatable)
//   categorical        comma list of categorical feature columns (repeatable)
//   drop_missing       true|false; drops rows with any missing cell
//   missing_tokens     comma list of extra missing markers (empty is always
//                      missing)
//   expected_raw_rows, expected_rows, expected_ir
//                      optional reference counts checked after loading

#ifndef FAIRAUDIT_DATASET_HPP_
#define FAIRAUDIT_DATASET_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fairaudit/csv.hpp"
#include "fairaudit/types.hpp"

namespace fairaudit {

inline constexpr const char* kDataDirEnv = "FAIRNESS_AUDIT_DATA_DIR";

enum class FeatureKind { Numeric, Categorical };

struct FeatureColumn {
  std::string name;
  FeatureKind kind = FeatureKind::Numeric;
};

struct ThresholdRule {
  double threshold = 0.0;
};

struct ValueSetRule {
  std::vector<std::string> positive;
  std::vector<std::string> negative;
};

using PositiveRule = std::variant<ThresholdRule, ValueSetRule>;

struct DatasetDescriptor {
  std::string name;
  std::filesystem::path source_path;
  std::filesystem::path base_dir;  // directory of the descriptor file
  char delimiter = ',';
  std::string target_column;
  PositiveRule positive_rule = ThresholdRule{};
  std::string protected_column;
  std::string protected_value;
  std::vector<FeatureColumn> feature_columns;
  bool drop_missing = true;
  std::vector<std::string> missing_tokens;
  std::optional<std::size_t> expected_raw_rows;
  std::optional<std::size_t> expected_rows;
  std::optional<double> expected_imbalance_ratio;

  bool has_threshold_rule() const {
    return std::holds_alternative<ThresholdRule>(positive_rule);
  }

  void validate() const {
    if (target_column.empty()) throw Error("descriptor: target is required");
    if (protected_column.empty()) {
      throw Error("descriptor: protected_column is required");
    }
    if (target_column == protected_column) {
      throw Error("descriptor: target and protected column must differ");
    }
    if (const auto* t = std::get_if<ThresholdRule>(&positive_rule);
        t && !std::isfinite(t->threshold)) {
      throw Error("descriptor: threshold must be finite");
    }
    if (const auto* v = std::get_if<ValueSetRule>(&positive_rule);
        v && (v->positive.empty() || v->negative.empty())) {
      throw Error(
          "descriptor: positive_values and negative_values are both required");
    }
    std::vector<std::string> seen;
    for (const auto& f : feature_columns) {
      if (f.name == target_column || f.name == protected_column) {
        throw Error("descriptor: feature '" + f.name +
                    "' is the target or protected column");
      }
      if (std::find(seen.begin(), seen.end(), f.name) != seen.end()) {
        throw Error("descriptor: duplicate feature '" + f.name + "'");
      }
      seen.push_back(f.name);
    }
  }
};

namespace detail {

inline std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto end = s.find(',', start);
    const auto item =
        trim(s.substr(start, end == std::string_view::npos ? s.npos
                                                           : end - start));
    if (!item.empty()) out.emplace_back(item);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

inline bool parse_bool(std::string_view v, const std::string& key) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw Error("descriptor: '" + key + "' expects true or false");
}

inline std::size_t parse_count(std::string_view v, const std::string& key) {
  const auto d = parse_double(v);
  if (!d || *d < 0 || std::floor(*d) != *d) {
    throw Error("descriptor: '" + key + "' expects a non-negative integer");
  }
  return static_cast<std::size_t>(*d);
}

}  // namespace detail

inline DatasetDescriptor parse_descriptor(
    std::istream& in, const std::filesystem::path& base_dir = {}) {
  DatasetDescriptor d;
  d.base_dir = base_dir;
  std::optional<double> threshold;
  std::optional<std::vector<std::string>> pos_values;
  std::optional<std::vector<std::string>> neg_values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv = line;
    if (const auto hash = sv.find('#'); hash != sv.npos) {
      sv = sv.substr(0, hash);
    }
    sv = detail::trim(sv);
    if (sv.empty()) continue;
    const auto eq = sv.find('=');
    if (eq == sv.npos) {
      throw Error("descriptor line " + std::to_string(line_no) +
                  ": expected key = value");
    }
    const std::string key(detail::trim(sv.substr(0, eq)));
    const std::string_view value = detail::trim(sv.substr(eq + 1));
    if (key == "name") {
      d.name = value;
    } else if (key == "source") {
      d.source_path = std::string(value);
    } else if (key == "delimiter") {
      if (value == "comma") {
        d.delimiter = ',';
      } else if (value == "semicolon") {
        d.delimiter = ';';
      } else if (value == "tab") {
        d.delimiter = '\t';
      } else if (value.size() == 1) {
        d.delimiter = value[0];
      } else {
        throw Error("descriptor: bad delimiter '" + std::string(value) + "'");
      }
    } else if (key == "target") {
      d.target_column = value;
    } else if (key == "positive_threshold") {
      threshold = parse_double(value);
      if (!threshold) throw Error("descriptor: positive_threshold not numeric");
    } else if (key == "positive_values") {
      pos_values = detail::split_list(value);
    } else if (key == "negative_values") {
      neg_values = detail::split_list(value);
    } else if (key == "protected_column") {
      d.protected_column = value;
    } else if (key == "protected_value") {
      d.protected_value = value;
    } else if (key == "numeric" || key == "categorical") {
      const auto kind =
          key == "numeric" ? FeatureKind::Numeric : FeatureKind::Categorical;
      for (auto& n : detail::split_list(value)) {
        d.feature_columns.push_back({std::move(n), kind});
      }
    } else if (key == "drop_missing") {
      d.drop_missing = detail::parse_bool(value, key);
    } else if (key == "missing_tokens") {
      d.missing_tokens = detail::split_list(value);
    } else if (key == "expected_raw_rows") {
      d.expected_raw_rows = detail::parse_count(value, key);
    } else if (key == "expected_rows") {
      d.expected_rows = detail::parse_count(value, key);
    } else if (key == "expected_ir") {
      d.expected_imbalance_ratio = parse_double(value);
      if (!d.expected_imbalance_ratio) {
        throw Error("descriptor: expected_ir not numeric");
      }
    } else {
      throw Error("descriptor: unknown key '" + key + "'");
    }
  }
  if (threshold && (pos_values || neg_values)) {
    throw Error("descriptor: give either a threshold or value sets, not both");
  }
  if (threshold) {
    d.positive_rule = ThresholdRule{*threshold};
  } else if (pos_values || neg_values) {
    d.positive_rule = ValueSetRule{pos_values.value_or(std::vector<std::string>{}),
                                   neg_values.value_or(std::vector<std::string>{})};
  } else {
    throw Error("descriptor: a positive rule is required");
  }
  d.validate();
  return d;
}

inline DatasetDescriptor load_descriptor(const std::filesystem::path& path) {
  std::filesystem::path p = path;
  if (!std::filesystem::exists(p) && p.is_relative()) {
    if (const char* root = std::getenv(kDataDirEnv)) {
      const auto alt = std::filesystem::path(root) / p;
      if (std::filesystem::exists(alt)) p = alt;
    }
  }
  std::ifstream in(p);
  if (!in) throw Error("cannot open descriptor '" + path.string() + "'");
  return parse_descriptor(in, p.parent_path());
}

/// Locates the descriptor's CSV: absolute path, then relative to the
/// descriptor, then relative to $FAIRNESS_AUDIT_DATA_DIR.
inline std::optional<std::filesystem::path> find_source(
    const DatasetDescriptor& d) {
  namespace fs = std::filesystem;
  if (d.source_path.empty()) return std::nullopt;
  if (d.source_path.is_absolute()) {
    if (fs::exists(d.source_path)) return d.source_path;
    return std::nullopt;
  }
  if (auto p = d.base_dir / d.source_path; fs::exists(p)) return p;
  if (const char* root = std::getenv(kDataDirEnv)) {
    if (auto p = fs::path(root) / d.source_path; fs::exists(p)) return p;
  }
  return std::nullopt;
}

/// Positives-to-negatives ratio; +infinity when there are no negatives.
inline double imbalance_ratio(std::span<const BinaryLabel> labels) {
  const auto pos = static_cast<double>(
      std::count(labels.begin(), labels.end(), BinaryLabel::Positive));
  const double neg = static_cast<double>(labels.size()) - pos;
  if (neg == 0) return std::numeric_limits<double>::infinity();
  return pos / neg;
}

/// "5.49:1" style rendering.
inline std::string format_imbalance_ratio(double ir) {
  if (!std::isfinite(ir)) return "inf:1";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f:1", ir);
  return buf;
}

struct PreparedDataset {
  std::vector<std::string> feature_names;
  std::vector<double> values;  // row-major, size() * n_features()
  std::vector<BinaryLabel> labels;
  std::vector<GroupTag> groups;
  std::vector<std::size_t> row_ids;  // position among the cleaned rows
  // Raw numeric target, kept when the target is thresholdable.
  std::optional<std::vector<double>> target_values;
  std::size_t raw_row_count = 0;
  double imbalance_ratio = 0.0;

  std::size_t size() const { return labels.size(); }
  std::size_t n_features() const { return feature_names.size(); }

  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * n_features(), n_features()};
  }

  PreparedDataset subset(std::span<const std::size_t> indices) const {
    PreparedDataset out;
    out.feature_names = feature_names;
    out.values.reserve(indices.size() * n_features());
    if (target_values) out.target_values.emplace();
    for (std::size_t i : indices) {
      const auto r = row(i);
      out.values.insert(out.values.end(), r.begin(), r.end());
      out.labels.push_back(labels[i]);
      out.groups.push_back(groups[i]);
      out.row_ids.push_back(row_ids[i]);
      if (target_values) out.target_values->push_back((*target_values)[i]);
    }
    out.raw_row_count = indices.size();
    out.imbalance_ratio = fairaudit::imbalance_ratio(out.labels);
    return out;
  }
};

inline BinaryLabel binarize(double value, double threshold) {
  return value >= threshold ? BinaryLabel::Positive : BinaryLabel::Negative;
}

inline std::vector<BinaryLabel> binarize_by_threshold(
    std::span<const double> values, double threshold) {
  if (!std::isfinite(threshold)) throw Error("threshold must be finite");
  std::vector<BinaryLabel> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(binarize(v, threshold));
  return out;
}

inline std::vector<BinaryLabel> binarize_by_threshold(
    std::span<const std::string> cells, double threshold) {
  std::vector<double> values;
  values.reserve(cells.size());
  for (const auto& c : cells) {
    const auto v = parse_double(c);
    if (!v) throw Error("non-numeric value '" + c + "'");
    values.push_back(*v);
  }
  return binarize_by_threshold(values, threshold);
}

/// Copy of `data` with labels recomputed from the numeric target.
inline PreparedDataset relabel_by_threshold(const PreparedDataset& data,
                                            double threshold) {
  if (!data.target_values) {
    throw Error("dataset has no numeric target to threshold");
  }
  PreparedDataset out = data;
  out.labels = binarize_by_threshold(*data.target_values, threshold);
  out.imbalance_ratio = imbalance_ratio(out.labels);
  return out;
}

inline PreparedDataset prepare(const CsvTable& table,
                               const DatasetDescriptor& d) {
  d.validate();
  const std::size_t target_col = table.require_column(d.target_column);
  const std::size_t group_col = table.require_column(d.protected_column);
  std::vector<std::size_t> feature_cols;
  for (const auto& f : d.feature_columns) {
    feature_cols.push_back(table.require_column(f.name));
  }

  auto is_missing = [&d](const std::string& cell) {
    return cell.empty() || std::find(d.missing_tokens.begin(),
                                     d.missing_tokens.end(),
                                     cell) != d.missing_tokens.end();
  };

  std::vector<const std::vector<std::string>*> kept;
  for (const auto& row : table.rows) {
    if (d.drop_missing && std::any_of(row.begin(), row.end(), is_missing)) {
      continue;
    }
    kept.push_back(&row);
  }

  // Category order by first appearance over the kept rows.
  std::vector<std::vector<std::string>> categories(d.feature_columns.size());
  for (std::size_t f = 0; f < d.feature_columns.size(); ++f) {
    if (d.feature_columns[f].kind != FeatureKind::Categorical) continue;
    for (const auto* row : kept) {
      const auto& v = (*row)[feature_cols[f]];
      auto& cats = categories[f];
      if (std::find(cats.begin(), cats.end(), v) == cats.end()) {
        cats.push_back(v);
      }
    }
  }

  PreparedDataset out;
  out.raw_row_count = table.rows.size();
  for (std::size_t f = 0; f < d.feature_columns.size(); ++f) {
    const auto& col = d.feature_columns[f];
    if (col.kind == FeatureKind::Numeric) {
      out.feature_names.push_back(col.name);
    } else {
      for (const auto& c : categories[f]) {
        out.feature_names.push_back(col.name + "=" + c);
      }
    }
  }
  if (d.has_threshold_rule()) out.target_values.emplace();

  for (std::size_t r = 0; r < kept.size(); ++r) {
    const auto& row = *kept[r];
    const std::string& target = row[target_col];
    if (const auto* t = std::get_if<ThresholdRule>(&d.positive_rule)) {
      const auto v = parse_double(target);
      if (!v) {
        throw Error("row " + std::to_string(r + 1) + ": target '" + target +
                    "' is not numeric");
      }
      out.target_values->push_back(*v);
      out.labels.push_back(binarize(*v, t->threshold));
    } else {
      const auto& vs = std::get<ValueSetRule>(d.positive_rule);
      auto in = [&target](const std::vector<std::string>& set) {
        return std::find(set.begin(), set.end(), target) != set.end();
      };
      if (in(vs.positive)) {
        out.labels.push_back(BinaryLabel::Positive);
      } else if (in(vs.negative)) {
        out.labels.push_back(BinaryLabel::Negative);
      } else {
        throw Error("row " + std::to_string(r + 1) + ": target value '" +
                    target + "' not covered by the positive rule");
      }
    }
    out.groups.push_back(row[group_col] == d.protected_value
                             ? GroupTag::Protected
                             : GroupTag::NonProtected);
    for (std::size_t f = 0; f < d.feature_columns.size(); ++f) {
      const std::string& cell = row[feature_cols[f]];
      if (d.feature_columns[f].kind == FeatureKind::Numeric) {
        const auto v = parse_double(cell);
        if (!v) {
          throw Error("row " + std::to_string(r + 1) + ": column '" +
                      d.feature_columns[f].name + "' value '" + cell +
                      "' is not numeric");
        }
        out.values.push_back(*v);
      } else {
        for (const auto& c : categories[f]) {
          out.values.push_back(c == cell ? 1.0 : 0.0);
        }
      }
    }
    out.row_ids.push_back(r);
  }
  out.imbalance_ratio = imbalance_ratio(out.labels);
  return out;
}

inline PreparedDataset load(const DatasetDescriptor& d) {
  const auto path = find_source(d);
  if (!path) {
    throw Error("dataset file not found: '" + d.source_path.string() + "'");
  }
  return prepare(read_csv_file(*path, d.delimiter), d);
}

/// Mismatches between a loaded dataset and the descriptor's reference counts.
inline std::vector<std::string> check_expectations(
    const PreparedDataset& data, const DatasetDescriptor& d) {
  std::vector<std::string> issues;
  if (d.expected_raw_rows && *d.expected_raw_rows != data.raw_row_count) {
    issues.push_back("raw rows " + std::to_string(data.raw_row_count) +
                     ", expected " + std::to_string(*d.expected_raw_rows));
  }
  if (d.expected_rows && *d.expected_rows != data.size()) {
    issues.push_back("rows " + std::to_string(data.size()) + ", expected " +
                     std::to_string(*d.expected_rows));
  }
  if (d.expected_imbalance_ratio &&
      format_imbalance_ratio(data.imbalance_ratio) !=
          format_imbalance_ratio(*d.expected_imbalance_ratio)) {
    issues.push_back("imbalance ratio " +
                     format_imbalance_ratio(data.imbalance_ratio) +
                     ", expected " +
                     format_imbalance_ratio(*d.expected_imbalance_ratio));
  }
  return issues;
}

class SplitSpec {
 public:
  SplitSpec() = default;
  SplitSpec(double train_fraction, std::uint64_t seed)
      : train_fraction_(train_fraction), seed_(seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
      throw Error("train fraction must lie in (0,1)");
    }
  }
  double train_fraction() const { return train_fraction_; }
  std::uint64_t seed() const { return seed_; }

 private:
  double train_fraction_ = 0.7;
  std::uint64_t seed_ = 0;
};

namespace detail {

// Uniform integer in [0, n) by rejection; std distributions are not
// reproducible across standard libraries, the engine is.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t max = std::mt19937_64::max();
  const std::uint64_t limit = max - (max % n + 1) % n;
  for (;;) {
    const std::uint64_t r = rng();
    if (r <= limit) return r % n;
  }
}

}  // namespace detail

/// Seeded Fisher-Yates permutation of 0..n-1.
inline std::vector<std::size_t> shuffled_indices(std::size_t n,
                                                 std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(detail::uniform_below(rng, i));
    std::swap(idx[i - 1], idx[j]);
  }
  return idx;
}

/// Unstratified seeded split: floor(fraction * N) rows to train, rest to test.
inline std::pair<PreparedDataset, PreparedDataset> split(
    const PreparedDataset& data, const SplitSpec& spec) {
  const std::size_t n = data.size();
  if (n < 2) throw Error("split needs at least 2 rows");
  const auto n_train = static_cast<std::size_t>(
      std::floor(spec.train_fraction() * static_cast<double>(n)));
  if (n_train < 1 || n_train >= n) {
    throw Error("split leaves an empty partition");
  }
  const auto idx = shuffled_indices(n, spec.seed());
  const std::span<const std::size_t> all(idx);
  return {data.subset(all.first(n_train)), data.subset(all.subspan(n_train))};
}

/// Writes row_id, features, label (1/0), group (protected/non_protected) and,
/// when present, the numeric target.
inline void write_prepared_csv(std::ostream& out, const PreparedDataset& d) {
  std::vector<std::string> cells{"row_id"};
  cells.insert(cells.end(), d.feature_names.begin(), d.feature_names.end());
  cells.emplace_back("label");
  cells.emplace_back("group");
  if (d.target_values) cells.emplace_back("target");
  write_csv_row(out, cells);
  for (std::size_t i = 0; i < d.size(); ++i) {
    cells.clear();
    cells.push_back(std::to_string(d.row_ids[i]));
    for (double v : d.row(i)) cells.push_back(format_double(v));
    cells.emplace_back(is_positive(d.labels[i]) ? "1" : "0");
    cells.emplace_back(d.groups[i] == GroupTag::Protected ? "protected"
                                                          : "non_protected");
    if (d.target_values) cells.push_back(format_double((*d.target_values)[i]));
    write_csv_row(out, cells);
  }
}

inline PreparedDataset read_prepared_csv(std::istream& in) {
  const CsvTable t = read_csv(in);
  const std::size_t id_col = t.require_column("row_id");
  const std::size_t label_col = t.require_column("label");
  const std::size_t group_col = t.require_column("group");
  const auto target_col = t.column("target");
  if (id_col != 0 || label_col < 1) throw Error("malformed prepared CSV");
  PreparedDataset d;
  d.feature_names.assign(t.header.begin() + 1, t.header.begin() + label_col);
  if (target_col) d.target_values.emplace();
  for (const auto& row : t.rows) {
    const auto id = parse_double(row[id_col]);
    if (!id) throw Error("malformed row_id '" + row[id_col] + "'");
    d.row_ids.push_back(static_cast<std::size_t>(*id));
    for (std::size_t c = 1; c < label_col; ++c) {
      const auto v = parse_double(row[c]);
      if (!v) throw Error("malformed feature value '" + row[c] + "'");
      d.values.push_back(*v);
    }
    if (row[label_col] != "1" && row[label_col] != "0") {
      throw Error("malformed label '" + row[label_col] + "'");
    }
    d.labels.push_back(row[label_col] == "1" ? BinaryLabel::Positive
                                             : BinaryLabel::Negative);
    if (row[group_col] == "protected") {
      d.groups.push_back(GroupTag::Protected);
    } else if (row[group_col] == "non_protected") {
      d.groups.push_back(GroupTag::NonProtected);
    } else {
      throw Error("malformed group '" + row[group_col] + "'");
    }
    if (target_col) {
      const auto v = parse_double(row[*target_col]);
      if (!v) throw Error("malformed target '" + row[*target_col] + "'");
      d.target_values->push_back(*v);
    }
  }
  d.raw_row_count = d.size();
  d.imbalance_ratio = imbalance_ratio(d.labels);
  return d;
}

}  // namespace fairaudit

#endif  // FAIRAUDIT_DATASET_HPP_
