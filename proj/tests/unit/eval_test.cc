// Copyright 2026 The WOI Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "json.hpp"
#include "support/fixtures.h"
#include "woi/intent.h"

namespace woi {
namespace {

EvalOptions quick_options(std::vector<StreamKind> streams) {
  EvalOptions opts;
  opts.k = 3;
  opts.seed = 21;
  opts.streams = std::move(streams);
  for (StreamKind s : all_streams()) opts.epochs[s] = 2;
  opts.speech2vec.epochs = 1;
  opts.speech2vec.dim = 16;
  return opts;
}

const EvalReport& full_report() {
  static const EvalReport report = evaluate_kfold(
      testing::fixture_corpus(), quick_options(all_streams()), FeatureResources::bundled());
  return report;
}

TEST(EvalTest, RowsForAllFourStreams) {
  const EvalReport& r = full_report();
  std::vector<std::string> names;
  for (const auto& row : r.rows) names.push_back(row.name);
  const std::vector<std::string> want = {"1",     "2",     "3",     "4",       "1,2,3",
                                         "1,2,4", "1,3,4", "2,3,4", "1,2,3,4", "new weights"};
  EXPECT_EQ(names, want);
  EXPECT_EQ(r.folds, 3);
  EXPECT_EQ(r.utterances, testing::kFixtureUtterances);
  ASSERT_EQ(r.fold_weights.size(), 3u);
  for (const auto& w : r.fold_weights) {
    ASSERT_EQ(w.size(), 4u);
    double sum = 0.0;
    for (double x : w) sum += x;
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
  EXPECT_TRUE(r.row("new weights").weighted);
  EXPECT_FALSE(r.row("1,2,3,4").weighted);
  EXPECT_THROW(r.row("5"), ValidationError);
}

TEST(EvalTest, ConfusionsAreConsistent) {
  const EvalReport& r = full_report();
  const auto& records = testing::fixture_corpus().records();
  long keywords = 0;
  std::vector<long> support(kNumIntents, 0);
  for (const auto& rec : records) {
    keywords += static_cast<long>(rec.keywords.size());
    ++support[static_cast<std::size_t>(rec.intent)];
  }
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.utterance.total(), static_cast<long>(records.size())) << row.name;
    EXPECT_EQ(row.word.total(), keywords) << row.name;
    for (int c = 0; c < kNumIntents; ++c) {
      EXPECT_EQ(row.utterance.support(c), support[static_cast<std::size_t>(c)]);
    }
    EXPECT_DOUBLE_EQ(row.utterance_accuracy,
                     static_cast<double>(row.utterance.correct()) / row.utterance.total());
    EXPECT_DOUBLE_EQ(row.word_accuracy,
                     static_cast<double>(row.word.correct()) / row.word.total());
    EXPECT_DOUBLE_EQ(row.utterance_f1, macro_f1(row.utterance));
  }
}

TEST(EvalTest, JsonMatchesReport) {
  const EvalReport& r = full_report();
  const auto j = nlohmann::json::parse(report_json(r));
  ASSERT_EQ(j["rows"].size(), r.rows.size());
  EXPECT_EQ(j["classes"].size(), static_cast<std::size_t>(kNumIntents));
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const auto& jr = j["rows"][i];
    EXPECT_EQ(jr["name"], r.rows[i].name);
    EXPECT_DOUBLE_EQ(jr["utterance"]["accuracy"].get<double>(), r.rows[i].utterance_accuracy);
    EXPECT_DOUBLE_EQ(jr["word"]["macro_f1"].get<double>(), r.rows[i].word_f1);
    EXPECT_EQ(jr["utterance"]["confusion"][0][0].get<long>(), r.rows[i].utterance.at(0, 0));
  }
  const std::string table = report_table(r);
  EXPECT_NE(table.find("new weights"), std::string::npos);
  EXPECT_NE(table.find("folds: 3  utterances: 90"), std::string::npos);
}

TEST(EvalTest, ThreeStreamsGiveOneTripleRow) {
  const EvalReport r =
      evaluate_kfold(testing::fixture_corpus(),
                     quick_options({StreamKind::kAcoustic, StreamKind::kPhone, StreamKind::kWord2Vec}),
                     FeatureResources::bundled());
  std::vector<std::string> names;
  for (const auto& row : r.rows) names.push_back(row.name);
  EXPECT_EQ(names, (std::vector<std::string>{"1", "2", "3", "1,2,3", "new weights"}));
  // Same seed, same per-stream models as in the four-stream run.
  EXPECT_EQ(r.row("2").utterance_accuracy, full_report().row("2").utterance_accuracy);
}

TEST(EvalTest, SingleStreamHasNoFusedRows) {
  const EvalReport r = evaluate_kfold(testing::fixture_corpus(),
                                      quick_options({StreamKind::kPhone}),
                                      FeatureResources::bundled());
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.rows[0].name, "2");
  EXPECT_TRUE(r.fold_weights.empty());
}

TEST(EvalTest, RejectsBadRequests) {
  EXPECT_THROW(evaluate_kfold(testing::fixture_corpus(), quick_options({}),
                              FeatureResources::bundled()),
               ValidationError);
  EXPECT_THROW(evaluate_kfold(testing::fixture_corpus(),
                              quick_options({StreamKind::kPhone, StreamKind::kPhone}),
                              FeatureResources::bundled()),
               ValidationError);
}

TEST(EvalTest, SubsetNames) {
  const std::vector<StreamKind> s = {StreamKind::kAcoustic, StreamKind::kSpeech2Vec};
  EXPECT_EQ(subset_name(s), "1,4");
}

}  // namespace
}  // namespace woi
