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

// Train / evaluate / audit pipelines and the grade-threshold sweep.

#ifndef FAIRAUDIT_PIPELINE_HPP_
#define FAIRAUDIT_PIPELINE_HPP_

#include <cmath>
#include <future>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fairaudit/audit.hpp"
#include "fairaudit/dataset.hpp"
#include "fairaudit/io.hpp"
#include "fairaudit/models.hpp"
#include "fairaudit/roc.hpp"

namespace fairaudit {

struct RunConfig {
  ModelKind model = ModelKind::DecisionTree;
  SplitSpec split{0.7, 42};
  FairnessPolicy policy;
  DecisionTreeParams tree;
  GnbParams gnb;
};

inline TrainedModel train(const RunConfig& cfg, const PreparedDataset& data) {
  return cfg.model == ModelKind::DecisionTree ? train_decision_tree(data, cfg.tree)
                                              : train_gnb(data, cfg.gnb);
}

/// Test-partition predictions of `model` as audit records.
inline std::vector<PredictionRecord> predict_records(const TrainedModel& model,
                                                     const PreparedDataset& test) {
  const auto scores = model.predict_score(test);
  std::vector<PredictionRecord> out(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    out[i].actual = test.labels[i];
    out[i].predicted = label_from_score(scores[i]);
    out[i].score = scores[i];
    out[i].group = test.groups[i];
  }
  return out;
}

struct RunResult {
  TrainedModel model;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  std::vector<PredictionRecord> predictions;
  FairnessReport report;
  std::optional<AbrocaSlice> slice;
};

inline RunResult run_pipeline(const PreparedDataset& data, const RunConfig& cfg) {
  auto [train_set, test_set] = split(data, cfg.split);
  TrainedModel model = train(cfg, train_set);
  auto predictions = predict_records(model, test_set);
  FairnessReport report = audit(predictions, cfg.policy);
  std::optional<AbrocaSlice> slice;
  try {
    slice = abroca_slice(predictions);
  } catch (const RocUndefined&) {
  }
  return {std::move(model), train_set.size(), test_set.size(),
          std::move(predictions), std::move(report), std::move(slice)};
}

inline Json run_to_json(const RunResult& r, const DatasetDescriptor& d,
                        const PreparedDataset& data, const RunConfig& cfg) {
  Json j;
  j["dataset"] = {{"name", d.name},
                  {"raw_instances", data.raw_row_count},
                  {"instances", data.size()},
                  {"imbalance_ratio", format_imbalance_ratio(data.imbalance_ratio)}};
  j["model"] = to_string(cfg.model);
  j["split"] = {{"train_fraction", cfg.split.train_fraction()},
                {"seed", cfg.split.seed()},
                {"n_train", r.n_train},
                {"n_test", r.n_test}};
  j["report"] = to_json(r.report);
  j["abroca_slice"] = r.slice ? to_json(*r.slice) : Json(nullptr);
  return j;
}

/// Inclusive arithmetic range lo, lo+step, ..., <= hi.
class ThresholdRange {
 public:
  ThresholdRange() = default;
  ThresholdRange(double lo, double hi, double step) : lo_(lo), hi_(hi), step_(step) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !std::isfinite(step)) {
      throw Error("threshold range must be finite");
    }
    if (!(step > 0.0)) throw Error("threshold step must be > 0");
    if (hi < lo) throw Error("threshold range is empty");
  }

  /// Parses "lo:hi:step" (step defaults to 1 when omitted).
  static ThresholdRange parse(std::string_view s) {
    std::vector<double> parts;
    std::size_t start = 0;
    for (;;) {
      const auto end = s.find(':', start);
      const auto v = parse_double(s.substr(start, end == s.npos ? s.npos : end - start));
      if (!v) throw Error("bad threshold range '" + std::string(s) + "'");
      parts.push_back(*v);
      if (end == s.npos) break;
      start = end + 1;
    }
    if (parts.size() == 2) parts.push_back(1.0);
    if (parts.size() != 3) {
      throw Error("threshold range must be lo:hi:step, got '" + std::string(s) + "'");
    }
    return {parts[0], parts[1], parts[2]};
  }

  std::vector<double> values() const {
    const auto n = static_cast<std::size_t>(std::floor((hi_ - lo_) / step_ + 1e-9)) + 1;
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(lo_ + static_cast<double>(i) * step_);
    return out;
  }

 private:
  double lo_ = 4.0;
  double hi_ = 16.0;
  double step_ = 1.0;
};

struct SweepPoint {
  double threshold = 0.0;
  std::size_t n_positive = 0;
  std::size_t n_negative = 0;
  // Unset when the threshold leaves a single class or the model cannot be
  // trained on the split.
  std::optional<FairnessReport> report;
};

struct SweepResult {
  std::vector<SweepPoint> points;
};

inline SweepPoint sweep_point(const PreparedDataset& data, double threshold,
                              const RunConfig& cfg) {
  SweepPoint p;
  p.threshold = threshold;
  const PreparedDataset relabeled = relabel_by_threshold(data, threshold);
  p.n_positive = static_cast<std::size_t>(std::count(
      relabeled.labels.begin(), relabeled.labels.end(), BinaryLabel::Positive));
  p.n_negative = relabeled.size() - p.n_positive;
  if (p.n_positive == 0 || p.n_negative == 0) return p;
  try {
    p.report = run_pipeline(relabeled, cfg).report;
  } catch (const Error&) {
    p.report.reset();
  }
  return p;
}

/// Re-binarizes, re-splits with the same seed, trains and audits at every
/// threshold. Points run concurrently; the result is ordered by threshold.
inline SweepResult sweep(const PreparedDataset& data, const ThresholdRange& range,
                         const RunConfig& cfg) {
  if (!data.target_values) throw Error("sweep needs a numeric target column");
  std::vector<std::future<SweepPoint>> jobs;
  for (double t : range.values()) {
    jobs.push_back(std::async(std::launch::async,
                              [&data, &cfg, t] { return sweep_point(data, t, cfg); }));
  }
  SweepResult out;
  for (auto& j : jobs) out.points.push_back(j.get());
  return out;
}

inline void write_sweep_csv(std::ostream& out, const SweepResult& s) {
  std::vector<std::string> header{"threshold", "n_positive", "n_negative"};
  const auto& cols = report_csv_columns();
  header.insert(header.end(), cols.begin(), cols.end());
  write_csv_row(out, header);
  for (const auto& p : s.points) {
    std::vector<std::string> row{format_double(p.threshold),
                                 std::to_string(p.n_positive),
                                 std::to_string(p.n_negative)};
    const auto cells = report_csv_cells(p.report);
    row.insert(row.end(), cells.begin(), cells.end());
    write_csv_row(out, row);
  }
}

inline Json sweep_to_json(const SweepResult& s, const RunConfig& cfg) {
  Json j;
  j["model"] = to_string(cfg.model);
  j["split"] = {{"train_fraction", cfg.split.train_fraction()},
                {"seed", cfg.split.seed()}};
  Json pts = Json::array();
  for (const auto& p : s.points) {
    pts.push_back({{"threshold", p.threshold},
                   {"n_positive", p.n_positive},
                   {"n_negative", p.n_negative},
                   {"report", p.report ? to_json(*p.report) : Json(nullptr)}});
  }
  j["points"] = std::move(pts);
  return j;
}

}  // namespace fairaudit

#endif  // FAIRAUDIT_PIPELINE_HPP_
