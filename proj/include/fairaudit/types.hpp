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

#ifndef FAIRAUDIT_TYPES_HPP_
#define FAIRAUDIT_TYPES_HPP_

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace fairaudit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class BinaryLabel : std::uint8_t { Negative = 0, Positive = 1 };

/// Membership in the protected (discriminated) or non-protected group.
enum class GroupTag : std::uint8_t { NonProtected = 0, Protected = 1 };

constexpr GroupTag other(GroupTag g) noexcept {
  return g == GroupTag::Protected ? GroupTag::NonProtected
                                  : GroupTag::Protected;
}

constexpr bool is_positive(BinaryLabel l) noexcept {
  return l == BinaryLabel::Positive;
}

/// A metric that may be undefined because one of its denominators is zero.
/// An empty optional is the NotApplicable marker.
using MetricValue = std::optional<double>;

inline constexpr std::nullopt_t not_applicable = std::nullopt;

struct PredictionRecord {
  BinaryLabel actual = BinaryLabel::Negative;
  BinaryLabel predicted = BinaryLabel::Negative;
  std::optional<double> score;  // P(Positive), in [0, 1]
  GroupTag group = GroupTag::NonProtected;

  friend bool operator==(const PredictionRecord&,
                         const PredictionRecord&) = default;
};

/// Throws unless the record's score, when present, lies in [0, 1].
inline void validate(const PredictionRecord& r) {
  if (r.score && !(*r.score >= 0.0 && *r.score <= 1.0)) {
    throw Error("score outside [0,1]: " + std::to_string(*r.score));
  }
}

/// Confusion counts of a single group.
struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  constexpr std::uint64_t total() const noexcept { return tp + fp + fn + tn; }
  constexpr std::uint64_t actual_positives() const noexcept { return tp + fn; }
  constexpr std::uint64_t actual_negatives() const noexcept { return fp + tn; }
  constexpr std::uint64_t predicted_positives() const noexcept {
    return tp + fp;
  }

  constexpr ConfusionCounts& operator+=(const ConfusionCounts& o) noexcept {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    tn += o.tn;
    return *this;
  }

  friend constexpr ConfusionCounts operator+(ConfusionCounts a,
                                             const ConfusionCounts& b) {
    return a += b;
  }
  friend bool operator==(const ConfusionCounts&,
                         const ConfusionCounts&) = default;
};

/// TP/FP/FN/TN split by protected and non-protected group.
struct GroupedConfusion {
  ConfusionCounts prot;
  ConfusionCounts non;

  constexpr const ConfusionCounts& of(GroupTag g) const noexcept {
    return g == GroupTag::Protected ? prot : non;
  }
  constexpr ConfusionCounts& of(GroupTag g) noexcept {
    return g == GroupTag::Protected ? prot : non;
  }
  constexpr ConfusionCounts pooled() const noexcept { return prot + non; }
  constexpr std::uint64_t total() const noexcept {
    return prot.total() + non.total();
  }

  /// The same counts with the group roles exchanged.
  constexpr GroupedConfusion swapped() const noexcept { return {non, prot}; }

  friend bool operator==(const GroupedConfusion&,
                         const GroupedConfusion&) = default;
};

/// Tolerance for the statistical-parity pass/fail gate.
class FairnessPolicy {
 public:
  FairnessPolicy() = default;
  explicit FairnessPolicy(double epsilon) : epsilon_(epsilon) {
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
      throw Error("epsilon must be a finite value >= 0");
    }
  }
  double epsilon() const noexcept { return epsilon_; }

 private:
  double epsilon_ = 0.05;
};

}  // namespace fairaudit

#endif  // FAIRAUDIT_TYPES_HPP_
