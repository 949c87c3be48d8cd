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

// Group fairness measures over a GroupedConfusion.
//
// Every function is pure. A measure that needs a conditional probability whose
// conditioning subpopulation is empty returns not_applicable. Counting is
// exact; the only floating point work is the final divisions.

#ifndef FAIRAUDIT_METRICS_HPP_
#define FAIRAUDIT_METRICS_HPP_

#include <cmath>
#include <cstdint>
#include <span>

#include "fairaudit/types.hpp"

namespace fairaudit {

/// Counts each record into the cell selected by (group, actual, predicted).
inline GroupedConfusion confusion_from_records(
    std::span<const PredictionRecord> records) {
  if (records.empty()) throw Error("no records");
  GroupedConfusion c;
  for (const auto& r : records) {
    ConfusionCounts& g = c.of(r.group);
    const bool actual = is_positive(r.actual);
    const bool predicted = is_positive(r.predicted);
    if (actual && predicted) {
      ++g.tp;
    } else if (!actual && predicted) {
      ++g.fp;
    } else if (actual) {
      ++g.fn;
    } else {
      ++g.tn;
    }
  }
  return c;
}

namespace detail {

inline MetricValue ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return not_applicable;
  return static_cast<double>(num) / static_cast<double>(den);
}

inline MetricValue tpr(const ConfusionCounts& g) {
  return ratio(g.tp, g.actual_positives());
}
inline MetricValue fpr(const ConfusionCounts& g) {
  return ratio(g.fp, g.actual_negatives());
}
inline MetricValue ppv(const ConfusionCounts& g) {
  return ratio(g.tp, g.predicted_positives());
}
inline MetricValue positive_rate(const ConfusionCounts& g) {
  return ratio(g.predicted_positives(), g.total());
}

inline MetricValue abs_gap(const MetricValue& a, const MetricValue& b) {
  if (!a || !b) return not_applicable;
  return std::fabs(*a - *b);
}

}  // namespace detail

/// P(Yhat=+ | non-protected) - P(Yhat=+ | protected). Positive values mean the
/// protected group receives fewer positive predictions.
inline MetricValue statistical_parity(const GroupedConfusion& c) {
  const auto non = detail::positive_rate(c.non);
  const auto prot = detail::positive_rate(c.prot);
  if (!non || !prot) return not_applicable;
  return *non - *prot;
}

/// Absolute true-positive-rate gap (equivalently the false-negative-rate gap).
inline MetricValue equal_opportunity(const GroupedConfusion& c) {
  return detail::abs_gap(detail::tpr(c.non), detail::tpr(c.prot));
}

/// Absolute false-positive-rate gap.
inline MetricValue predictive_equality(const GroupedConfusion& c) {
  return detail::abs_gap(detail::fpr(c.prot), detail::fpr(c.non));
}

/// Sum of the TPR gap and FPR gap. Built from the same two terms as
/// equal_opportunity and predictive_equality so EOd == EO + PE holds bitwise.
inline MetricValue equalized_odds(const GroupedConfusion& c) {
  const auto eo = equal_opportunity(c);
  const auto pe = predictive_equality(c);
  if (!eo || !pe) return not_applicable;
  return *eo + *pe;
}

/// Absolute precision gap.
inline MetricValue predictive_parity(const GroupedConfusion& c) {
  return detail::abs_gap(detail::ppv(c.prot), detail::ppv(c.non));
}

/// FN/FP of the protected group minus FN/FP of the non-protected group.
/// Unbounded; not applicable when either group has no false positives.
inline MetricValue treatment_equality(const GroupedConfusion& c) {
  const auto prot = detail::ratio(c.prot.fn, c.prot.fp);
  const auto non = detail::ratio(c.non.fn, c.non.fp);
  if (!prot || !non) return not_applicable;
  return *prot - *non;
}

/// Pooled (TP+TN)/N.
inline MetricValue accuracy(const GroupedConfusion& c) {
  const ConfusionCounts all = c.pooled();
  return detail::ratio(all.tp + all.tn, all.total());
}

/// Pooled (TPR+TNR)/2.
inline MetricValue balanced_accuracy(const GroupedConfusion& c) {
  const ConfusionCounts all = c.pooled();
  const auto tpr = detail::tpr(all);
  const auto tnr = detail::ratio(all.tn, all.actual_negatives());
  if (!tpr || !tnr) return not_applicable;
  return (*tpr + *tnr) / 2.0;
}

}  // namespace fairaudit

#endif  // FAIRAUDIT_METRICS_HPP_
