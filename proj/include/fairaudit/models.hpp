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

// Baseline classifiers: a CART decision tree (Gini) and Gaussian naive Bayes.

#ifndef FAIRAUDIT_MODELS_HPP_
#define FAIRAUDIT_MODELS_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fairaudit/dataset.hpp"
#include "fairaudit/types.hpp"
#include "json.hpp"

namespace fairaudit {

inline constexpr double kDecisionThreshold = 0.5;

inline BinaryLabel label_from_score(double score) {
  return score >= kDecisionThreshold ? BinaryLabel::Positive
                                     : BinaryLabel::Negative;
}

/// Gini impurity of a node holding `pos` positives out of `n`.
inline double gini(std::size_t pos, std::size_t n) {
  if (n == 0) return 0.0;
  const double p = static_cast<double>(pos) / static_cast<double>(n);
  return 2.0 * p * (1.0 - p);
}

struct DecisionTreeParams {
  std::optional<std::size_t> max_depth;  // unset = unlimited
  std::size_t min_samples_split = 2;

  void validate() const {
    if (min_samples_split < 2) throw Error("min_samples_split must be >= 2");
    if (max_depth && *max_depth == 0) throw Error("max_depth must be >= 1");
  }
};

class DecisionTree {
 public:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;  // rows with value <= threshold go left
    int left = -1;
    int right = -1;
    std::size_t n_samples = 0;
    std::size_t n_positive = 0;

    bool is_leaf() const { return feature < 0; }
    double score() const {
      return n_samples == 0 ? 0.0
                            : static_cast<double>(n_positive) /
                                  static_cast<double>(n_samples);
    }
  };

  static DecisionTree fit(const PreparedDataset& train,
                          const DecisionTreeParams& params = {}) {
    params.validate();
    if (train.size() == 0) throw Error("empty training set");
    DecisionTree tree;
    tree.params_ = params;
    tree.n_features_ = train.n_features();
    std::vector<std::size_t> idx(train.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    tree.grow(train, idx, 0);
    return tree;
  }

  double predict_score(std::span<const double> row) const {
    const Node* n = &nodes_.front();
    while (!n->is_leaf()) {
      n = &nodes_[static_cast<std::size_t>(
          row[static_cast<std::size_t>(n->feature)] <= n->threshold
              ? n->left
              : n->right)];
    }
    return n->score();
  }

  std::size_t depth() const { return depth_of(0); }
  std::size_t n_features() const { return n_features_; }
  const DecisionTreeParams& params() const { return params_; }
  const std::vector<Node>& nodes() const { return nodes_; }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json p;
    p["max_depth"] = params_.max_depth ? nlohmann::ordered_json(*params_.max_depth)
                                       : nlohmann::ordered_json(nullptr);
    p["min_samples_split"] = params_.min_samples_split;
    p["impurity"] = "gini";
    nlohmann::ordered_json j;
    j["params"] = std::move(p);
    j["tree"] = node_to_json(0);
    return j;
  }

  static DecisionTree from_json(const nlohmann::ordered_json& j,
                                std::size_t n_features) {
    DecisionTree t;
    t.n_features_ = n_features;
    const auto& p = j.at("params");
    if (!p.at("max_depth").is_null()) {
      t.params_.max_depth = p.at("max_depth").get<std::size_t>();
    }
    t.params_.min_samples_split = p.at("min_samples_split").get<std::size_t>();
    t.params_.validate();
    t.node_from_json(j.at("tree"));
    return t;
  }

 private:
  struct Split {
    int feature = -1;
    double threshold = 0.0;
    double quality = -std::numeric_limits<double>::infinity();
  };

  // Larger is better: sum over children of (pos^2 + neg^2) / size, which
  // ranks splits exactly as the weighted child Gini does (inverted).
  static double split_quality(std::size_t lp, std::size_t ln, std::size_t rp,
                              std::size_t rn) {
    auto part = [](double p, double n) { return (p * p + n * n) / (p + n); };
    return part(static_cast<double>(lp), static_cast<double>(ln)) +
           part(static_cast<double>(rp), static_cast<double>(rn));
  }

  Split best_split(const PreparedDataset& data,
                   const std::vector<std::size_t>& idx) const {
    // Distinct split qualities differ by at least ~1/n^2, far above this.
    constexpr double kTieTolerance = 1e-9;
    Split best;
    std::vector<std::pair<double, bool>> col(idx.size());
    std::size_t total_pos = 0;
    for (std::size_t i : idx) total_pos += is_positive(data.labels[i]) ? 1 : 0;
    for (std::size_t f = 0; f < n_features_; ++f) {
      for (std::size_t k = 0; k < idx.size(); ++k) {
        col[k] = {data.row(idx[k])[f], is_positive(data.labels[idx[k]])};
      }
      std::sort(col.begin(), col.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      std::size_t left_pos = 0;
      for (std::size_t k = 0; k + 1 < col.size(); ++k) {
        left_pos += col[k].second ? 1 : 0;
        if (col[k].first == col[k + 1].first) continue;
        double thr = col[k].first + (col[k + 1].first - col[k].first) / 2.0;
        if (thr >= col[k + 1].first) thr = col[k].first;
        const std::size_t nl = k + 1;
        const std::size_t nr = col.size() - nl;
        const std::size_t rp = total_pos - left_pos;
        const double q = split_quality(left_pos, nl - left_pos, rp, nr - rp);
        if (q > best.quality + kTieTolerance) {
          best = {static_cast<int>(f), thr, q};
        }
      }
    }
    return best;
  }

  int grow(const PreparedDataset& data, const std::vector<std::size_t>& idx,
           std::size_t depth) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    Node node;
    node.n_samples = idx.size();
    for (std::size_t i : idx) node.n_positive += is_positive(data.labels[i]) ? 1 : 0;
    const bool pure = node.n_positive == 0 || node.n_positive == idx.size();
    const bool depth_reached = params_.max_depth && depth >= *params_.max_depth;
    if (pure || depth_reached || idx.size() < params_.min_samples_split) {
      nodes_[static_cast<std::size_t>(id)] = node;
      return id;
    }
    const Split s = best_split(data, idx);
    if (s.feature < 0) {
      nodes_[static_cast<std::size_t>(id)] = node;
      return id;
    }
    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (std::size_t i : idx) {
      (data.row(i)[static_cast<std::size_t>(s.feature)] <= s.threshold ? left
                                                                      : right)
          .push_back(i);
    }
    node.feature = s.feature;
    node.threshold = s.threshold;
    node.left = grow(data, left, depth + 1);
    node.right = grow(data, right, depth + 1);
    nodes_[static_cast<std::size_t>(id)] = node;
    return id;
  }

  std::size_t depth_of(int id) const {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    if (n.is_leaf()) return 0;
    return 1 + std::max(depth_of(n.left), depth_of(n.right));
  }

  nlohmann::ordered_json node_to_json(int id) const {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    nlohmann::ordered_json j;
    j["n_samples"] = n.n_samples;
    j["n_positive"] = n.n_positive;
    if (!n.is_leaf()) {
      j["feature"] = n.feature;
      j["threshold"] = n.threshold;
      j["left"] = node_to_json(n.left);
      j["right"] = node_to_json(n.right);
    }
    return j;
  }

  int node_from_json(const nlohmann::ordered_json& j) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    Node n;
    n.n_samples = j.at("n_samples").get<std::size_t>();
    n.n_positive = j.at("n_positive").get<std::size_t>();
    if (j.contains("feature")) {
      n.feature = j.at("feature").get<int>();
      if (n.feature < 0 || static_cast<std::size_t>(n.feature) >= n_features_) {
        throw Error("model: split feature out of range");
      }
      n.threshold = j.at("threshold").get<double>();
      n.left = node_from_json(j.at("left"));
      n.right = node_from_json(j.at("right"));
    }
    nodes_[static_cast<std::size_t>(id)] = n;
    return id;
  }

  DecisionTreeParams params_;
  std::size_t n_features_ = 0;
  std::vector<Node> nodes_;
};

struct GnbParams {
  double variance_floor_fraction = 1e-9;

  void validate() const {
    if (!(variance_floor_fraction > 0.0)) {
      throw Error("variance_floor_fraction must be > 0");
    }
  }
};

class GaussianNB {
 public:
  struct ClassStats {
    std::size_t count = 0;
    std::vector<double> mean;
    std::vector<double> var;  // includes the floor
  };

  static GaussianNB fit(const PreparedDataset& train,
                        const GnbParams& params = {}) {
    params.validate();
    const std::size_t f = train.n_features();
    GaussianNB m;
    m.params_ = params;
    for (auto& c : m.classes_) {
      c.mean.assign(f, 0.0);
      c.var.assign(f, 0.0);
    }
    for (std::size_t i = 0; i < train.size(); ++i) {
      auto& c = m.classes_[is_positive(train.labels[i]) ? 1 : 0];
      ++c.count;
      const auto row = train.row(i);
      for (std::size_t k = 0; k < f; ++k) c.mean[k] += row[k];
    }
    if (m.classes_[0].count == 0 || m.classes_[1].count == 0) {
      throw Error("priors degenerate: training data holds a single class");
    }
    for (auto& c : m.classes_) {
      for (auto& v : c.mean) v /= static_cast<double>(c.count);
    }

    std::vector<double> all_mean(f, 0.0);
    for (std::size_t i = 0; i < train.size(); ++i) {
      const auto row = train.row(i);
      for (std::size_t k = 0; k < f; ++k) all_mean[k] += row[k];
    }
    for (auto& v : all_mean) v /= static_cast<double>(train.size());
    std::vector<double> all_var(f, 0.0);
    for (std::size_t i = 0; i < train.size(); ++i) {
      const auto row = train.row(i);
      auto& c = m.classes_[is_positive(train.labels[i]) ? 1 : 0];
      for (std::size_t k = 0; k < f; ++k) {
        const double d = row[k] - c.mean[k];
        c.var[k] += d * d;
        const double da = row[k] - all_mean[k];
        all_var[k] += da * da;
      }
    }
    double max_var = 0.0;
    for (auto& v : all_var) {
      v /= static_cast<double>(train.size());
      max_var = std::max(max_var, v);
    }
    // All-constant features leave no scale; fall back to a unit scale.
    m.epsilon_ =
        params.variance_floor_fraction * (max_var > 0.0 ? max_var : 1.0);
    for (auto& c : m.classes_) {
      for (auto& v : c.var) {
        v = v / static_cast<double>(c.count) + m.epsilon_;
      }
    }
    return m;
  }

  /// {P(Negative | row), P(Positive | row)}.
  std::array<double, 2> posterior(std::span<const double> row) const {
    const std::size_t total = classes_[0].count + classes_[1].count;
    std::array<double, 2> lj{};
    for (std::size_t c = 0; c < 2; ++c) {
      const auto& s = classes_[c];
      double l = std::log(static_cast<double>(s.count) /
                          static_cast<double>(total));
      for (std::size_t k = 0; k < s.mean.size(); ++k) {
        const double d = row[k] - s.mean[k];
        l -= 0.5 * (std::log(2.0 * std::numbers::pi * s.var[k]) +
                    d * d / s.var[k]);
      }
      lj[c] = l;
    }
    const double hi = std::max(lj[0], lj[1]);
    const double e0 = std::exp(lj[0] - hi);
    const double e1 = std::exp(lj[1] - hi);
    return {e0 / (e0 + e1), e1 / (e0 + e1)};
  }

  double predict_score(std::span<const double> row) const {
    return posterior(row)[1];
  }

  std::size_t n_features() const { return classes_[0].mean.size(); }
  const GnbParams& params() const { return params_; }
  const std::array<ClassStats, 2>& classes() const { return classes_; }
  double epsilon() const { return epsilon_; }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["params"] = {{"variance_floor_fraction", params_.variance_floor_fraction}};
    j["epsilon"] = epsilon_;
    nlohmann::ordered_json cls = nlohmann::ordered_json::array();
    for (std::size_t c = 0; c < 2; ++c) {
      nlohmann::ordered_json e;
      e["label"] = c == 1 ? "positive" : "negative";
      e["count"] = classes_[c].count;
      e["mean"] = classes_[c].mean;
      e["var"] = classes_[c].var;
      cls.push_back(std::move(e));
    }
    j["classes"] = std::move(cls);
    return j;
  }

  static GaussianNB from_json(const nlohmann::ordered_json& j,
                              std::size_t n_features) {
    GaussianNB m;
    m.params_.variance_floor_fraction =
        j.at("params").at("variance_floor_fraction").get<double>();
    m.params_.validate();
    m.epsilon_ = j.at("epsilon").get<double>();
    const auto& cls = j.at("classes");
    if (!cls.is_array() || cls.size() != 2) throw Error("model: need 2 classes");
    for (std::size_t c = 0; c < 2; ++c) {
      auto& s = m.classes_[c];
      s.count = cls[c].at("count").get<std::size_t>();
      s.mean = cls[c].at("mean").get<std::vector<double>>();
      s.var = cls[c].at("var").get<std::vector<double>>();
      if (s.mean.size() != n_features || s.var.size() != n_features) {
        throw Error("model: class statistics dimension mismatch");
      }
      if (s.count == 0) throw Error("priors degenerate");
    }
    return m;
  }

 private:
  GnbParams params_;
  double epsilon_ = 0.0;
  std::array<ClassStats, 2> classes_;
};

enum class ModelKind { DecisionTree, GaussianNB };

inline std::string to_string(ModelKind k) {
  return k == ModelKind::DecisionTree ? "dt" : "gnb";
}

inline ModelKind parse_model_kind(std::string_view s) {
  if (s == "dt" || s == "decision_tree") return ModelKind::DecisionTree;
  if (s == "gnb" || s == "nb" || s == "gaussian_nb") return ModelKind::GaussianNB;
  throw Error("unknown model '" + std::string(s) + "' (expected dt or gnb)");
}

class TrainedModel {
 public:
  static constexpr int kFormatVersion = 1;

  explicit TrainedModel(DecisionTree t) : impl_(std::move(t)) {}
  explicit TrainedModel(GaussianNB m) : impl_(std::move(m)) {}

  ModelKind kind() const {
    return std::holds_alternative<DecisionTree>(impl_) ? ModelKind::DecisionTree
                                                       : ModelKind::GaussianNB;
  }

  std::size_t n_features() const {
    return std::visit([](const auto& m) { return m.n_features(); }, impl_);
  }

  double predict_score(std::span<const double> row) const {
    if (row.size() != n_features()) {
      throw Error("dimension mismatch: model expects " +
                  std::to_string(n_features()) + " features, row has " +
                  std::to_string(row.size()));
    }
    return std::visit([row](const auto& m) { return m.predict_score(row); },
                      impl_);
  }

  BinaryLabel predict(std::span<const double> row) const {
    return label_from_score(predict_score(row));
  }

  std::vector<double> predict_score(const PreparedDataset& rows) const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      out.push_back(predict_score(rows.row(i)));
    }
    return out;
  }

  std::vector<BinaryLabel> predict(const PreparedDataset& rows) const {
    std::vector<BinaryLabel> out;
    out.reserve(rows.size());
    for (double s : predict_score(rows)) out.push_back(label_from_score(s));
    return out;
  }

  const DecisionTree* tree() const { return std::get_if<DecisionTree>(&impl_); }
  const GaussianNB* gnb() const { return std::get_if<GaussianNB>(&impl_); }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["format"] = "fairaudit-model";
    j["version"] = kFormatVersion;
    j["kind"] = kind() == ModelKind::DecisionTree ? "decision_tree" : "gaussian_nb";
    j["n_features"] = n_features();
    auto body = std::visit([](const auto& m) { return m.to_json(); }, impl_);
    for (auto& [k, v] : body.items()) j[k] = v;
    return j;
  }

  std::string serialize() const { return to_json().dump(2) + "\n"; }

  static TrainedModel from_json(const nlohmann::ordered_json& j) {
    try {
      if (j.at("format") != "fairaudit-model") throw Error("not a model file");
      if (j.at("version").get<int>() != kFormatVersion) {
        throw Error("unsupported model version");
      }
      const auto n = j.at("n_features").get<std::size_t>();
      const auto kind = j.at("kind").get<std::string>();
      if (kind == "decision_tree") return TrainedModel(DecisionTree::from_json(j, n));
      if (kind == "gaussian_nb") return TrainedModel(GaussianNB::from_json(j, n));
      throw Error("unknown model kind '" + kind + "'");
    } catch (const nlohmann::json::exception& e) {
      throw Error(std::string("malformed model: ") + e.what());
    }
  }

  static TrainedModel deserialize(std::string_view text) {
    try {
      return from_json(nlohmann::ordered_json::parse(text));
    } catch (const nlohmann::json::exception& e) {
      throw Error(std::string("malformed model: ") + e.what());
    }
  }

 private:
  std::variant<DecisionTree, GaussianNB> impl_;
};

inline TrainedModel train_decision_tree(const PreparedDataset& train,
                                        const DecisionTreeParams& p = {}) {
  return TrainedModel(DecisionTree::fit(train, p));
}

inline TrainedModel train_gnb(const PreparedDataset& train,
                              const GnbParams& p = {}) {
  return TrainedModel(GaussianNB::fit(train, p));
}

inline TrainedModel train(ModelKind kind, const PreparedDataset& data) {
  return kind == ModelKind::DecisionTree ? train_decision_tree(data)
                                         : train_gnb(data);
}

}  // namespace fairaudit

#endif  // FAIRAUDIT_MODELS_HPP_
