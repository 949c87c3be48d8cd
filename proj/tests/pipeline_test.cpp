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

#include "fairaudit/pipeline.hpp"

#include <filesystem>
#include <string>
#include <sstream>

#include <unistd.h>

#include "gtest/gtest.h"
#include "test_support.hpp"

namespace fairaudit {
namespace {

namespace fs = std::filesystem;

std::vector<PredictionRecord> Read(const std::string& text,
                                   const PredictionCsvOptions& opt = {}) {
  std::istringstream in(text);
  return read_predictions(in, opt);
}

TEST(ReadPredictions, ParsesColumnsByName) {
  const auto r = Read("group,actual,predicted,score\nf,pass,fail,0.25\nm,fail,fail,\n",
                      {.positive_label = "pass",
                       .negative_label = "fail",
                       .protected_value = "f",
                       .non_protected_value = "m"});
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].group, GroupTag::Protected);
  EXPECT_EQ(r[0].actual, BinaryLabel::Positive);
  EXPECT_EQ(r[0].predicted, BinaryLabel::Negative);
  EXPECT_EQ(r[0].score, 0.25);
  EXPECT_EQ(r[1].group, GroupTag::NonProtected);
  EXPECT_FALSE(r[1].score.has_value());
}

TEST(ReadPredictions, Errors) {
  EXPECT_THROW(Read(""), Error);
  EXPECT_THROW(Read("actual,predicted,group\n"), Error);
  try {
    Read("");
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "no records");
  }
  EXPECT_THROW(Read("actual,predicted\n1,1\n"), Error);
  EXPECT_THROW(Read("actual,predicted,group\n1,1\n"), Error);
  EXPECT_THROW(Read("actual,predicted,group,score\n1,1,1,1.5\n"), Error);
  EXPECT_THROW(Read("actual,predicted,group,score\n1,1,1,abc\n"), Error);
  EXPECT_THROW(Read("actual,predicted,group\n1,1,x\n", {.non_protected_value = "0"}),
               Error);
  EXPECT_THROW(Read("actual,predicted,group\n1,2,1\n", {.negative_label = "0"}), Error);
}

TEST(ReadPredictions, WriteReadRoundTrip) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const auto records = testing::random_records(rng, 100, 0.5);
    std::stringstream s;
    write_predictions(s, records);
    EXPECT_EQ(read_predictions(s), records);
  }
}

TEST(ReportJson, WorkedExampleFieldsAndNulls) {
  const auto j = to_json(audit(testing::worked_example_records(), FairnessPolicy(0.05)));
  EXPECT_EQ(j["n_records"], 100);
  EXPECT_EQ(j["confusion"]["tp_non"], 38);
  EXPECT_NEAR(j["metrics"]["equalized_odds"].get<double>(), 0.1253, 1e-4);
  EXPECT_EQ(j["fairness_gate"]["passed"], true);
  EXPECT_FALSE(j["metrics"].contains("abroca"));

  const auto one_group = to_json(audit(testing::records_from_counts(1, 1, 1, 1, 0, 0, 0, 0),
                                       FairnessPolicy()));
  EXPECT_TRUE(one_group["metrics"]["statistical_parity"].is_null());
  EXPECT_TRUE(one_group["metrics"]["treatment_equality"].is_null());
}

TEST(ReportCsv, NullsAreEmptyCells) {
  std::ostringstream s;
  write_report_csv(s, audit(testing::records_from_counts(1, 1, 1, 1, 0, 0, 0, 0),
                            FairnessPolicy()));
  std::istringstream in(s.str());
  const CsvTable t = read_csv(in);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.header, report_csv_columns());
  EXPECT_EQ(t.rows[0][*t.column("statistical_parity")], "");
  EXPECT_EQ(t.rows[0][*t.column("accuracy")], "0.5");
  EXPECT_EQ(t.rows[0][*t.column("gate_passed")], "false");
}

TEST(SliceCsv, ReintegratesToTheReportedArea) {
  std::mt19937_64 rng(42);
  int checked = 0;
  while (checked < 30) {
    const auto r = testing::random_records(rng, 200, 1.0);
    std::optional<AbrocaSlice> s;
    try {
      s = abroca_slice(r);
    } catch (const RocUndefined&) {
      continue;
    }
    std::stringstream out;
    write_slice_csv(out, *s);
    EXPECT_NEAR(read_slice_csv(out).area, s->area, 1e-9);
    ++checked;
  }
}

class PipelineTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() /
           ("fairaudit_pipeline_test_" + std::to_string(::getpid()));
    descriptor_path_ = testing::write_synthetic_student_data(dir_, 400, 17);
  }
  static void TearDownTestSuite() { fs::remove_all(dir_); }
  static fs::path dir_;
  static fs::path descriptor_path_;
};
fs::path PipelineTest::dir_;
fs::path PipelineTest::descriptor_path_;

TEST_F(PipelineTest, RunIsDeterministicAndComplete) {
  const auto d = load_descriptor(descriptor_path_);
  const auto data = load(d);
  for (ModelKind kind : {ModelKind::DecisionTree, ModelKind::GaussianNB}) {
    RunConfig cfg;
    cfg.model = kind;
    cfg.split = SplitSpec(0.7, 42);
    const auto a = run_to_json(run_pipeline(data, cfg), d, data, cfg).dump(2);
    const auto b = run_to_json(run_pipeline(load(d), cfg), d, data, cfg).dump(2);
    EXPECT_EQ(a, b);
    const auto j = Json::parse(a);
    for (const char* k : {"accuracy", "balanced_accuracy", "statistical_parity",
                          "equal_opportunity", "equalized_odds", "predictive_parity",
                          "predictive_equality", "treatment_equality", "abroca"}) {
      EXPECT_TRUE(j["report"]["metrics"].contains(k)) << k;
    }
    EXPECT_EQ(j["split"]["n_train"], 280);
    EXPECT_EQ(j["split"]["n_test"], 120);
    EXPECT_EQ(j["report"]["n_records"], 120);
  }
}

TEST_F(PipelineTest, AuditOfRunPredictionsMatchesReport) {
  const auto data = load(load_descriptor(descriptor_path_));
  RunConfig cfg;
  const RunResult r = run_pipeline(data, cfg);
  std::stringstream s;
  write_predictions(s, r.predictions);
  const auto parsed = read_predictions(s);
  EXPECT_EQ(to_json(audit(parsed, cfg.policy)).dump(), to_json(r.report).dump());
}

TEST_F(PipelineTest, SweepStructure) {
  const auto data = load(load_descriptor(descriptor_path_));
  RunConfig cfg;
  const SweepResult s = sweep(data, ThresholdRange(4, 16, 1), cfg);
  ASSERT_EQ(s.points.size(), 13u);
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    EXPECT_EQ(s.points[i].threshold, 4.0 + static_cast<double>(i));
    if (i) {
      EXPECT_LE(s.points[i].n_positive, s.points[i - 1].n_positive);
    }
  }
  std::ostringstream a;
  std::ostringstream b;
  write_sweep_csv(a, s);
  write_sweep_csv(b, sweep(data, ThresholdRange(4, 16, 1), cfg));
  EXPECT_EQ(a.str(), b.str());
}

TEST_F(PipelineTest, DegenerateThresholdYieldsNullRow) {
  const auto data = load(load_descriptor(descriptor_path_));
  RunConfig cfg;
  const SweepResult s = sweep(data, ThresholdRange(21, 22, 1), cfg);
  ASSERT_EQ(s.points.size(), 2u);
  for (const auto& p : s.points) {
    EXPECT_FALSE(p.report.has_value());
    EXPECT_EQ(p.n_positive, 0u);
  }
  std::ostringstream out;
  write_sweep_csv(out, s);
  std::istringstream in(out.str());
  const CsvTable t = read_csv(in);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0][*t.column("equalized_odds")], "");
  EXPECT_TRUE(sweep_to_json(s, cfg)["points"][0]["report"].is_null());
}

TEST(ThresholdRange, ParseAndEnumerate) {
  EXPECT_EQ(ThresholdRange::parse("4:16:1").values().size(), 13u);
  EXPECT_EQ(ThresholdRange::parse("0:1:0.1").values().size(), 11u);
  EXPECT_EQ(ThresholdRange::parse("5:5:1").values(), std::vector<double>{5.0});
  EXPECT_EQ(ThresholdRange::parse("4:6").values().size(), 3u);
  EXPECT_THROW(ThresholdRange::parse("4:16:0"), Error);
  EXPECT_THROW(ThresholdRange::parse("16:4:1"), Error);
  EXPECT_THROW(ThresholdRange::parse("a:b:c"), Error);
}

}  // namespace
}  // namespace fairaudit
