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

// Per-group ROC curves and the absolute area between them (ABROCA).

#ifndef FAIRAUDIT_ROC_HPP_
#define FAIRAUDIT_ROC_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "fairaudit/types.hpp"

namespace fairaudit {

class RocUndefined : public Error {
 public:
  explicit RocUndefined(const std::string& why)
      : Error("ROC undefined: " + why) {}
};

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  friend bool operator==(const RocPoint&, const RocPoint&) = default;
};

/// Polyline from (0,0) to (1,1), non-decreasing in both coordinates. Several
/// consecutive points may share an FPR (a vertical step).
struct RocCurve {
  std::vector<RocPoint> points;

  /// TPR reached when approaching `fpr` from the left (lowest TPR at a step).
  double lower_at(double fpr) const;
  /// TPR when leaving `fpr` to the right (highest TPR at a step).
  double upper_at(double fpr) const;
};

/// ROC of a single group by a descending sweep over distinct scores. Records
/// sharing a score enter the same step, which yields a diagonal segment.
inline RocCurve roc_curve(std::span<const PredictionRecord> records) {
  std::vector<std::pair<double, bool>> scored;
  scored.reserve(records.size());
  std::size_t positives = 0;
  for (const auto& r : records) {
    if (!r.score) throw RocUndefined("record without score");
    validate(r);
    const bool pos = is_positive(r.actual);
    positives += pos ? 1 : 0;
    scored.emplace_back(*r.score, pos);
  }
  const std::size_t negatives = scored.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw RocUndefined("group needs both an actual positive and negative");
  }
  std::sort(scored.begin(), scored.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });

  RocCurve curve;
  curve.points.push_back({0.0, 0.0});
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t i = 0; i < scored.size();) {
    std::size_t j = i;
    for (; j < scored.size() && scored[j].first == scored[i].first; ++j) {
      (scored[j].second ? tp : fp) += 1;
    }
    curve.points.push_back({static_cast<double>(fp) / negatives,
                            static_cast<double>(tp) / positives});
    i = j;
  }
  return curve;
}

/// ROC of the records carrying `group`.
inline RocCurve roc_curve(std::span<const PredictionRecord> records,
                          GroupTag group) {
  std::vector<PredictionRecord> subset;
  for (const auto& r : records) {
    if (r.group == group) subset.push_back(r);
  }
  return roc_curve(subset);
}

namespace detail {

// Index of the first point with fpr >= x.
inline std::size_t first_at_or_after(const std::vector<RocPoint>& pts,
                                     double x) {
  return static_cast<std::size_t>(
      std::lower_bound(pts.begin(), pts.end(), x,
                       [](const RocPoint& p, double v) { return p.fpr < v; }) -
      pts.begin());
}

inline double lerp_segment(const RocPoint& a, const RocPoint& b, double x) {
  const double w = (x - a.fpr) / (b.fpr - a.fpr);
  return a.tpr + w * (b.tpr - a.tpr);
}

}  // namespace detail

inline double RocCurve::lower_at(double fpr) const {
  const std::size_t i = detail::first_at_or_after(points, fpr);
  if (i == points.size()) return points.back().tpr;
  if (points[i].fpr == fpr || i == 0) return points[i].tpr;
  return detail::lerp_segment(points[i - 1], points[i], fpr);
}

inline double RocCurve::upper_at(double fpr) const {
  std::size_t i = detail::first_at_or_after(points, fpr);
  if (i == points.size()) return points.back().tpr;
  if (points[i].fpr != fpr) {
    return i == 0 ? points[i].tpr
                  : detail::lerp_segment(points[i - 1], points[i], fpr);
  }
  while (i + 1 < points.size() && points[i + 1].fpr == fpr) ++i;
  return points[i].tpr;
}

/// Both group curves sampled on a common FPR grid.
///
/// The grid holds every breakpoint of either curve plus the points where the
/// curves cross, so |tpr_prot - tpr_non| is linear between consecutive rows
/// and the trapezoid rule over the rows is the exact area. Where either curve
/// has a vertical step the FPR value appears twice: first with the values
/// reached from the left, then with the values leaving to the right. The grid
/// is therefore non-decreasing, and a repeated value spans zero width.
struct AbrocaSlice {
  std::vector<double> fpr;
  std::vector<double> tpr_prot;
  std::vector<double> tpr_non;
  double area = 0.0;
};

/// Trapezoid integral of |tpr_prot - tpr_non| over the slice rows.
inline double trapezoid_abs_gap(std::span<const double> fpr,
                                std::span<const double> a,
                                std::span<const double> b) {
  double area = 0.0;
  for (std::size_t i = 1; i < fpr.size(); ++i) {
    const double width = fpr[i] - fpr[i - 1];
    area += 0.5 * width *
            (std::fabs(a[i - 1] - b[i - 1]) + std::fabs(a[i] - b[i]));
  }
  return area;
}

/// Merges the two curves onto a common grid. `extra_grid` adds FPR values
/// (clamped to [0,1]) to the grid; they never change the area beyond rounding.
inline AbrocaSlice abroca_slice(const RocCurve& prot, const RocCurve& non,
                                std::span<const double> extra_grid = {}) {
  std::vector<double> xs;
  xs.reserve(prot.points.size() + non.points.size() + extra_grid.size() + 2);
  xs.push_back(0.0);
  xs.push_back(1.0);
  for (const auto& p : prot.points) xs.push_back(p.fpr);
  for (const auto& p : non.points) xs.push_back(p.fpr);
  for (double x : extra_grid) xs.push_back(std::clamp(x, 0.0, 1.0));
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  AbrocaSlice s;
  auto emit = [&s](double x, double a, double b) {
    s.fpr.push_back(x);
    s.tpr_prot.push_back(a);
    s.tpr_non.push_back(b);
  };

  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double x = xs[k];
    if (k > 0) {
      // Within (xs[k-1], x) both curves are linear; split at a sign change.
      const double x0 = s.fpr.back();
      const double d0 = s.tpr_prot.back() - s.tpr_non.back();
      const double a1 = prot.lower_at(x);
      const double b1 = non.lower_at(x);
      const double d1 = a1 - b1;
      if ((d0 < 0.0 && d1 > 0.0) || (d0 > 0.0 && d1 < 0.0)) {
        const double xc = x0 + (x - x0) * (d0 / (d0 - d1));
        if (xc > x0 && xc < x) emit(xc, prot.lower_at(xc), non.lower_at(xc));
      }
    }
    const double al = prot.lower_at(x);
    const double bl = non.lower_at(x);
    emit(x, al, bl);
    const double au = prot.upper_at(x);
    const double bu = non.upper_at(x);
    if (au != al || bu != bl) emit(x, au, bu);
  }
  s.area = trapezoid_abs_gap(s.fpr, s.tpr_prot, s.tpr_non);
  return s;
}

/// Slice for the protected and non-protected groups of `records`. Throws
/// RocUndefined when either group has no valid ROC.
inline AbrocaSlice abroca_slice(std::span<const PredictionRecord> records) {
  return abroca_slice(roc_curve(records, GroupTag::Protected),
                      roc_curve(records, GroupTag::NonProtected));
}

/// Absolute area between the two group ROC curves, integrated over FPR.
inline MetricValue abroca(std::span<const PredictionRecord> records) {
  try {
    return abroca_slice(records).area;
  } catch (const RocUndefined&) {
    return not_applicable;
  }
}

}  // namespace fairaudit

#endif  // FAIRAUDIT_ROC_HPP_
