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

// fairaudit: audit predictions, run train/evaluate pipelines, sweep grade
// thresholds and emit ABROCA slice series.
//
// Exit codes: 0 success, 1 error, 2 (audit only) fairness gate failed.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "fairaudit.hpp"

namespace {

using namespace fairaudit;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitGateFailed = 2;

struct CommonOptions {
  std::string format = "json";
  std::string out;
};

struct LabelOptions {
  std::string positive_label = "1";
  std::string negative_label;
  std::string protected_value = "1";
  std::string non_protected_value;

  PredictionCsvOptions to_csv_options() const {
    PredictionCsvOptions o;
    o.positive_label = positive_label;
    if (!negative_label.empty()) o.negative_label = negative_label;
    o.protected_value = protected_value;
    if (!non_protected_value.empty()) o.non_protected_value = non_protected_value;
    return o;
  }
};

struct PipelineOptions {
  std::string dataset;
  std::string model = "dt";
  std::uint64_t seed = 42;
  double split = 0.7;
  double epsilon = 0.05;
  int max_depth = 0;
  std::size_t min_samples_split = 2;
  double variance_floor = 1e-9;

  RunConfig to_config() const {
    RunConfig cfg;
    cfg.model = parse_model_kind(model);
    cfg.split = SplitSpec(split, seed);
    cfg.policy = FairnessPolicy(epsilon);
    if (max_depth > 0) cfg.tree.max_depth = static_cast<std::size_t>(max_depth);
    cfg.tree.min_samples_split = min_samples_split;
    cfg.gnb.variance_floor_fraction = variance_floor;
    return cfg;
  }
};

void emit(const CommonOptions& opt, const std::string& text) {
  if (opt.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(opt.out, std::ios::binary);
  if (!f) throw Error("cannot write '" + opt.out + "'");
  f << text;
}

std::vector<PredictionRecord> read_prediction_file(const std::string& path,
                                                   const LabelOptions& labels) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_predictions(in, labels.to_csv_options());
}

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--format", opt.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd->add_option("--out", opt.out, "Output path (default stdout)");
}

void add_labels(CLI::App* cmd, LabelOptions& opt) {
  cmd->add_option("--positive-label", opt.positive_label,
                  "Token for the positive class")
      ->capture_default_str();
  cmd->add_option("--negative-label", opt.negative_label,
                  "Token for the negative class (default: any other token)");
  cmd->add_option("--protected-value", opt.protected_value,
                  "Group value of the protected group")
      ->capture_default_str();
  cmd->add_option("--non-protected-value", opt.non_protected_value,
                  "Group value of the non-protected group (default: any other)");
}

void add_pipeline(CLI::App* cmd, PipelineOptions& opt) {
  cmd->add_option("--dataset", opt.dataset, "Dataset descriptor file")->required();
  cmd->add_option("--model", opt.model, "dt or gnb")
      ->check(CLI::IsMember({"dt", "gnb"}))
      ->capture_default_str();
  cmd->add_option("--seed", opt.seed, "Split seed")->capture_default_str();
  cmd->add_option("--split", opt.split, "Training fraction")->capture_default_str();
  cmd->add_option("--epsilon", opt.epsilon, "Statistical parity tolerance")
      ->capture_default_str();
  cmd->add_option("--max-depth", opt.max_depth, "Tree depth limit (0 = none)")
      ->capture_default_str();
  cmd->add_option("--min-samples-split", opt.min_samples_split,
                  "Smallest node the tree may split")
      ->capture_default_str();
  cmd->add_option("--variance-floor", opt.variance_floor,
                  "Naive Bayes variance floor fraction")
      ->capture_default_str();
}

PreparedDataset load_checked(const DatasetDescriptor& d) {
  PreparedDataset data = load(d);
  for (const auto& issue : check_expectations(data, d)) {
    std::cerr << "warning: " << (d.name.empty() ? "dataset" : d.name) << ": "
              << issue << "\n";
  }
  return data;
}

int cmd_audit(const std::string& path, const LabelOptions& labels, double epsilon,
              const CommonOptions& opt) {
  const auto records = read_prediction_file(path, labels);
  const FairnessReport report = audit(records, FairnessPolicy(epsilon));
  if (opt.format == "json") {
    emit(opt, to_json(report).dump(2) + "\n");
  } else {
    std::ostringstream s;
    write_report_csv(s, report);
    emit(opt, s.str());
  }
  return report.gate_passed ? kExitOk : kExitGateFailed;
}

int cmd_roc(const std::string& path, const LabelOptions& labels,
            const CommonOptions& opt) {
  const auto records = read_prediction_file(path, labels);
  const AbrocaSlice slice = abroca_slice(records);
  if (opt.format == "json") {
    emit(opt, to_json(slice).dump(2) + "\n");
  } else {
    std::ostringstream s;
    write_slice_csv(s, slice);
    emit(opt, s.str());
    std::cerr << "abroca=" << format_double(slice.area) << "\n";
  }
  return kExitOk;
}

int cmd_run(const PipelineOptions& p, const CommonOptions& opt,
            const std::string& slice_out, const std::string& model_out,
            const std::string& predictions_out) {
  const RunConfig cfg = p.to_config();
  const DatasetDescriptor d = load_descriptor(p.dataset);
  const PreparedDataset data = load_checked(d);
  const RunResult r = run_pipeline(data, cfg);
  if (opt.format == "json") {
    emit(opt, run_to_json(r, d, data, cfg).dump(2) + "\n");
  } else {
    std::ostringstream s;
    write_report_csv(s, r.report);
    emit(opt, s.str());
  }
  auto write_file = [](const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write '" + path + "'");
    f << text;
  };
  if (!slice_out.empty()) {
    if (!r.slice) throw Error("ROC undefined: no slice to write");
    std::ostringstream s;
    write_slice_csv(s, *r.slice);
    write_file(slice_out, s.str());
  }
  if (!model_out.empty()) write_file(model_out, r.model.serialize());
  if (!predictions_out.empty()) {
    std::ostringstream s;
    write_predictions(s, r.predictions);
    write_file(predictions_out, s.str());
  }
  return kExitOk;
}

int cmd_sweep(const PipelineOptions& p, const std::string& range,
              const CommonOptions& opt) {
  const RunConfig cfg = p.to_config();
  const DatasetDescriptor d = load_descriptor(p.dataset);
  if (!d.has_threshold_rule()) {
    throw Error("sweep needs a descriptor with positive_threshold");
  }
  const PreparedDataset data = load_checked(d);
  const SweepResult result = sweep(data, ThresholdRange::parse(range), cfg);
  if (opt.format == "json") {
    emit(opt, sweep_to_json(result, cfg).dump(2) + "\n");
  } else {
    std::ostringstream s;
    write_sweep_csv(s, result);
    emit(opt, s.str());
  }
  return kExitOk;
}

int cmd_prepare(const std::string& dataset, const CommonOptions& opt) {
  const DatasetDescriptor d = load_descriptor(dataset);
  const PreparedDataset data = load_checked(d);
  std::ostringstream s;
  write_prepared_csv(s, data);
  emit(opt, s.str());
  std::cerr << data.size() << " instances (" << data.raw_row_count
            << " raw), IR " << format_imbalance_ratio(data.imbalance_ratio)
            << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Group fairness audits for binary classifiers"};
  app.require_subcommand(1);

  CommonOptions audit_out;
  LabelOptions audit_labels;
  std::string audit_path;
  double audit_epsilon = 0.05;
  auto* audit_cmd = app.add_subcommand("audit", "Audit a prediction CSV");
  audit_cmd->add_option("predictions", audit_path, "actual,predicted,group[,score] CSV")
      ->required();
  audit_cmd->add_option("--epsilon", audit_epsilon, "Statistical parity tolerance")
      ->capture_default_str();
  add_labels(audit_cmd, audit_labels);
  add_common(audit_cmd, audit_out);

  CommonOptions roc_out;
  LabelOptions roc_labels;
  std::string roc_path;
  auto* roc_cmd = app.add_subcommand("roc", "ABROCA slice series of a scored prediction CSV");
  roc_cmd->add_option("predictions", roc_path, "CSV with a score column")->required();
  add_labels(roc_cmd, roc_labels);
  add_common(roc_cmd, roc_out);

  CommonOptions run_out;
  PipelineOptions run_opts;
  std::string slice_out;
  std::string model_out;
  std::string predictions_out;
  auto* run_cmd = app.add_subcommand("run", "Train, predict on the test split and audit");
  add_pipeline(run_cmd, run_opts);
  add_common(run_cmd, run_out);
  run_cmd->add_option("--slice-out", slice_out, "Write the ABROCA slice CSV here");
  run_cmd->add_option("--model-out", model_out, "Write the trained model here");
  run_cmd->add_option("--predictions-out", predictions_out,
                      "Write test-split predictions here");

  CommonOptions sweep_out;
  sweep_out.format = "csv";
  PipelineOptions sweep_opts;
  std::string range = "4:16:1";
  auto* sweep_cmd = app.add_subcommand("sweep", "Audit across grade thresholds");
  add_pipeline(sweep_cmd, sweep_opts);
  add_common(sweep_cmd, sweep_out);
  sweep_cmd->add_option("--threshold-range", range, "lo:hi:step")->capture_default_str();

  CommonOptions prepare_out;
  prepare_out.format = "csv";
  std::string prepare_dataset;
  auto* prepare_cmd = app.add_subcommand("prepare", "Write the prepared dataset as CSV");
  prepare_cmd->add_option("--dataset", prepare_dataset, "Dataset descriptor file")
      ->required();
  prepare_cmd->add_option("--out", prepare_out.out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*audit_cmd) return cmd_audit(audit_path, audit_labels, audit_epsilon, audit_out);
    if (*roc_cmd) return cmd_roc(roc_path, roc_labels, roc_out);
    if (*run_cmd) return cmd_run(run_opts, run_out, slice_out, model_out, predictions_out);
    if (*sweep_cmd) return cmd_sweep(sweep_opts, range, sweep_out);
    if (*prepare_cmd) return cmd_prepare(prepare_dataset, prepare_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
