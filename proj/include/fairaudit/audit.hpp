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

#ifndef FAIRAUDIT_AUDIT_HPP_
#define FAIRAUDIT_AUDIT_HPP_

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>

#include "fairaudit/metrics.hpp"
#include "fairaudit/roc.hpp"
#include "fairaudit/types.hpp"

namespace fairaudit {

struct FairnessReport {
  GroupedConfusion confusion;
  MetricValue accuracy;
  MetricValue balanced_accuracy;
  MetricValue statistical_parity;
  MetricValue equal_opportunity;
  MetricValue equalized_odds;
  MetricValue predictive_parity;
  MetricValue predictive_equality;
  MetricValue treatment_equality;
  // Outer optional: whether ABROCA was computed at all (every record scored).
  // Inner: whether both group ROC curves were defined.
  std::optional<MetricValue> abroca;
  double epsilon = 0.0;
  // |statistical_parity| <= epsilon. An undefined parity never passes.
  bool gate_passed = false;
};

/// All metrics of a GroupedConfusion. ABROCA needs scored records and is left
/// unset here.
inline FairnessReport report_from_confusion(const GroupedConfusion& c,
                                            const FairnessPolicy& policy) {
  FairnessReport r;
  r.confusion = c;
  r.accuracy = accuracy(c);
  r.balanced_accuracy = balanced_accuracy(c);
  r.statistical_parity = statistical_parity(c);
  r.equal_opportunity = equal_opportunity(c);
  r.equalized_odds = equalized_odds(c);
  r.predictive_parity = predictive_parity(c);
  r.predictive_equality = predictive_equality(c);
  r.treatment_equality = treatment_equality(c);
  r.epsilon = policy.epsilon();
  r.gate_passed = r.statistical_parity &&
                  std::fabs(*r.statistical_parity) <= policy.epsilon();
  return r;
}

inline FairnessReport audit(std::span<const PredictionRecord> records,
                            const FairnessPolicy& policy) {
  for (const auto& r : records) validate(r);
  FairnessReport report =
      report_from_confusion(confusion_from_records(records), policy);
  const bool all_scored = std::all_of(
      records.begin(), records.end(),
      [](const PredictionRecord& r) { return r.score.has_value(); });
  if (all_scored) report.abroca = abroca(records);
  return report;
}

}  // namespace fairaudit

#endif  // FAIRAUDIT_AUDIT_HPP_
