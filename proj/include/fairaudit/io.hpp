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

// Prediction files in, reports and slice series out.
//
// JSON is the canonical report format. The CSV form is a single-row
// projection of the same fields. Not-applicable metrics are null in JSON and
// empty cells in CSV.

#ifndef FAIRAUDIT_IO_HPP_
#define FAIRAUDIT_IO_HPP_

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fairaudit/audit.hpp"
#include "fairaudit/csv.hpp"
#include "fairaudit/roc.hpp"
#include "fairaudit/types.hpp"
#include "json.hpp"

namespace fairaudit {

using Json = nlohmann::ordered_json;

/// Token mapping for prediction CSVs. An unset negative label (non-protected
/// value) accepts every other non-empty token as Negative (NonProtected).
struct PredictionCsvOptions {
  std::string positive_label = "1";
  std::optional<std::string> negative_label;
  std::string protected_value = "1";
  std::optional<std::string> non_protected_value;
};

/// Reads `actual,predicted,group[,score]` (any column order, extra columns
/// ignored). A blank score cell leaves the record unscored.
inline std::vector<PredictionRecord> read_predictions(
    std::istream& in, const PredictionCsvOptions& opt = {}) {
  const CsvTable t = read_csv(in);
  if (t.header.empty() || t.rows.empty()) throw Error("no records");
  const std::size_t a_col = t.require_column("actual");
  const std::size_t p_col = t.require_column("predicted");
  const std::size_t g_col = t.require_column("group");
  const auto s_col = t.column("score");

  std::vector<PredictionRecord> out;
  out.reserve(t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    const std::string where = "row " + std::to_string(i + 1) + ": ";
    auto label = [&](const std::string& tok) {
      if (tok == opt.positive_label) return BinaryLabel::Positive;
      if (tok.empty() || (opt.negative_label && tok != *opt.negative_label)) {
        throw Error(where + "unknown label '" + tok + "'");
      }
      return BinaryLabel::Negative;
    };
    PredictionRecord r;
    r.actual = label(row[a_col]);
    r.predicted = label(row[p_col]);
    const std::string& g = row[g_col];
    if (g == opt.protected_value) {
      r.group = GroupTag::Protected;
    } else if (g.empty() ||
               (opt.non_protected_value && g != *opt.non_protected_value)) {
      throw Error(where + "unknown group value '" + g + "'");
    } else {
      r.group = GroupTag::NonProtected;
    }
    if (s_col && !row[*s_col].empty()) {
      const auto s = parse_double(row[*s_col]);
      if (!s || *s < 0.0 || *s > 1.0) {
        throw Error(where + "score '" + row[*s_col] + "' is not in [0,1]");
      }
      r.score = *s;
    }
    out.push_back(r);
  }
  return out;
}

inline void write_predictions(std::ostream& out,
                              const std::vector<PredictionRecord>& records) {
  const bool scored = std::any_of(records.begin(), records.end(),
                                  [](const auto& r) { return r.score.has_value(); });
  out << (scored ? "actual,predicted,group,score\n" : "actual,predicted,group\n");
  for (const auto& r : records) {
    out << (is_positive(r.actual) ? '1' : '0') << ','
        << (is_positive(r.predicted) ? '1' : '0') << ','
        << (r.group == GroupTag::Protected ? '1' : '0');
    if (scored) {
      out << ',';
      if (r.score) out << format_double(*r.score);
    }
    out << '\n';
  }
}

inline Json to_json(const MetricValue& v) {
  return v ? Json(*v) : Json(nullptr);
}

inline Json to_json(const GroupedConfusion& c) {
  return Json{{"tp_prot", c.prot.tp}, {"fp_prot", c.prot.fp},
              {"fn_prot", c.prot.fn}, {"tn_prot", c.prot.tn},
              {"tp_non", c.non.tp},   {"fp_non", c.non.fp},
              {"fn_non", c.non.fn},   {"tn_non", c.non.tn}};
}

inline Json to_json(const FairnessReport& r) {
  Json j;
  j["n_records"] = r.confusion.total();
  j["groups"] = {{"protected", r.confusion.prot.total()},
                 {"non_protected", r.confusion.non.total()}};
  j["confusion"] = to_json(r.confusion);
  Json m;
  m["accuracy"] = to_json(r.accuracy);
  m["balanced_accuracy"] = to_json(r.balanced_accuracy);
  m["statistical_parity"] = to_json(r.statistical_parity);
  m["equal_opportunity"] = to_json(r.equal_opportunity);
  m["equalized_odds"] = to_json(r.equalized_odds);
  m["predictive_parity"] = to_json(r.predictive_parity);
  m["predictive_equality"] = to_json(r.predictive_equality);
  m["treatment_equality"] = to_json(r.treatment_equality);
  if (r.abroca) m["abroca"] = to_json(*r.abroca);
  j["metrics"] = std::move(m);
  j["fairness_gate"] = {{"epsilon", r.epsilon}, {"passed", r.gate_passed}};
  return j;
}

inline const std::vector<std::string>& report_csv_columns() {
  static const std::vector<std::string> cols{
      "n_records",          "n_protected",         "n_non_protected",
      "tp_prot",            "fp_prot",             "fn_prot",
      "tn_prot",            "tp_non",              "fp_non",
      "fn_non",             "tn_non",              "accuracy",
      "balanced_accuracy",  "statistical_parity",  "equal_opportunity",
      "equalized_odds",     "predictive_parity",   "predictive_equality",
      "treatment_equality", "abroca",              "epsilon",
      "gate_passed"};
  return cols;
}

inline std::string csv_cell(const MetricValue& v) {
  return v ? format_double(*v) : std::string();
}

/// Cells in report_csv_columns() order; all empty for a missing report.
inline std::vector<std::string> report_csv_cells(
    const std::optional<FairnessReport>& report) {
  if (!report) return std::vector<std::string>(report_csv_columns().size());
  const FairnessReport& r = *report;
  const auto& c = r.confusion;
  auto n = [](std::uint64_t v) { return std::to_string(v); };
  return {n(c.total()),
          n(c.prot.total()),
          n(c.non.total()),
          n(c.prot.tp),
          n(c.prot.fp),
          n(c.prot.fn),
          n(c.prot.tn),
          n(c.non.tp),
          n(c.non.fp),
          n(c.non.fn),
          n(c.non.tn),
          csv_cell(r.accuracy),
          csv_cell(r.balanced_accuracy),
          csv_cell(r.statistical_parity),
          csv_cell(r.equal_opportunity),
          csv_cell(r.equalized_odds),
          csv_cell(r.predictive_parity),
          csv_cell(r.predictive_equality),
          csv_cell(r.treatment_equality),
          r.abroca ? csv_cell(*r.abroca) : std::string(),
          format_double(r.epsilon),
          r.gate_passed ? "true" : "false"};
}

inline void write_report_csv(std::ostream& out, const FairnessReport& r) {
  write_csv_row(out, report_csv_columns());
  write_csv_row(out, report_csv_cells(r));
}

inline Json to_json(const AbrocaSlice& s) {
  Json j;
  j["area"] = s.area;
  j["fpr"] = s.fpr;
  j["tpr_protected"] = s.tpr_prot;
  j["tpr_non_protected"] = s.tpr_non;
  return j;
}

inline void write_slice_csv(std::ostream& out, const AbrocaSlice& s) {
  out << "fpr,tpr_protected,tpr_non_protected\n";
  for (std::size_t i = 0; i < s.fpr.size(); ++i) {
    out << format_double(s.fpr[i]) << ',' << format_double(s.tpr_prot[i])
        << ',' << format_double(s.tpr_non[i]) << '\n';
  }
}

/// Reads a slice series written by write_slice_csv (area is recomputed).
inline AbrocaSlice read_slice_csv(std::istream& in) {
  const CsvTable t = read_csv(in);
  const std::size_t f = t.require_column("fpr");
  const std::size_t a = t.require_column("tpr_protected");
  const std::size_t b = t.require_column("tpr_non_protected");
  AbrocaSlice s;
  for (const auto& row : t.rows) {
    const auto x = parse_double(row[f]);
    const auto y0 = parse_double(row[a]);
    const auto y1 = parse_double(row[b]);
    if (!x || !y0 || !y1) throw Error("malformed slice row");
    s.fpr.push_back(*x);
    s.tpr_prot.push_back(*y0);
    s.tpr_non.push_back(*y1);
  }
  s.area = trapezoid_abs_gap(s.fpr, s.tpr_prot, s.tpr_non);
  return s;
}

}  // namespace fairaudit

#endif  // FAIRAUDIT_IO_HPP_
