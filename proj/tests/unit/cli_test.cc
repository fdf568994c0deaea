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

#include <fstream>
#include <sstream>

#include "cli.h"
#include "json.hpp"
#include "support/fixtures.h"

namespace woi {
namespace {

struct Invocation {
  int code = 0;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  Invocation r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> quick_model_flags() {
  return {"--epochs-acoustic", "1", "--epochs-phone", "1", "--epochs-word2vec", "1",
          "--epochs-speech2vec", "1", "--s2v-epochs", "1", "--s2v-dim", "8"};
}

std::vector<std::string> cat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new testing::TempDir("cli");
    ASSERT_EQ(invoke({"corpus-gen", "--seed", "5", "--n", "18", "--out", corpus()}).code, 0);
  }
  static void TearDownTestSuite() {
    delete dir_;
    dir_ = nullptr;
  }
  static std::string corpus() { return (*dir_ / "corpus").string(); }
  static std::string path(const std::string& name) { return (*dir_ / name).string(); }

  static testing::TempDir* dir_;
};

testing::TempDir* CliTest::dir_ = nullptr;

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(invoke({}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"bogus"}).code, cli::kExitUsage);
  const Invocation missing = invoke({"corpus-gen", "--out", path("x")});
  EXPECT_EQ(missing.code, cli::kExitUsage);
  EXPECT_NE(missing.err.find("--seed"), std::string::npos);
  EXPECT_NE(missing.err.find("woi corpus-gen --help"), std::string::npos);
  EXPECT_EQ(invoke({"train", "--seed", "1", "--corpus", corpus(), "--out", path("t"), "--streams",
                 "bogus"})
                .code,
            cli::kExitUsage);
  EXPECT_EQ(invoke({"train", "--seed", "1", "--corpus", corpus(), "--out", path("t"), "--streams",
                 "1,1"})
                .code,
            cli::kExitUsage);
  EXPECT_EQ(invoke({"eval", "--seed", "1", "--corpus", corpus(), "--out", path("e"), "--k", "1"}).code,
            cli::kExitUsage);
  EXPECT_EQ(invoke({"train", "--seed", "1", "--corpus", path("nope"), "--out", path("t")}).code,
            cli::kExitUsage);
}

TEST_F(CliTest, HelpExitsZero) {
  const Invocation r = invoke({"stream", "--help"});
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_NE(r.out.find("--spotter"), std::string::npos);
  EXPECT_EQ(invoke({"--help"}).code, cli::kExitOk);
}

TEST_F(CliTest, RuntimeErrorsExitOne) {
  const Invocation r = invoke({"corpus-gen", "--seed", "1", "--n", "3", "--out", path("small")});
  EXPECT_EQ(r.code, cli::kExitRuntime);
  EXPECT_NE(r.err.find("woi: "), std::string::npos);
}

TEST_F(CliTest, CorpusGenWritesArtifacts) {
  const auto j = nlohmann::json::parse(testing::read_file(*dir_ / "corpus" / "artifacts.json"));
  EXPECT_EQ(j["command"], "corpus-gen");
  EXPECT_EQ(j["seed"], 5);
  // manifest + 18 wavs
  EXPECT_EQ(j["outputs"].size(), 19u);
  for (const auto& o : j["outputs"]) {
    EXPECT_EQ(std::filesystem::file_size(*dir_ / "corpus" / o["path"].get<std::string>()),
              o["bytes"].get<std::uintmax_t>());
  }
}

TEST_F(CliTest, ConfigFileWithFlagOverride) {
  const std::string cfg = path("gen.conf");
  {
    std::ofstream f(cfg);
    f << "# corpus settings\nseed = 9\nn = 27 ; inline\nout = \"" << path("from_conf") << "\"\n";
  }
  ASSERT_EQ(invoke({"corpus-gen", "--config", cfg, "--n", "18"}).code, 0);
  const auto j = nlohmann::json::parse(testing::read_file(*dir_ / "from_conf" / "artifacts.json"));
  EXPECT_EQ(j["seed"], 9);
  EXPECT_EQ(j["outputs"].size(), 19u);

  const std::string bad = path("bad.conf");
  {
    std::ofstream f(bad);
    f << "seed 9\n";
  }
  const Invocation r = invoke({"corpus-gen", "--config", bad});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find(":1:"), std::string::npos);
}

TEST_F(CliTest, TrainSingleStreamAndDefaults) {
  const Invocation one = invoke({"train", "--seed", "2", "--corpus", corpus(), "--out", path("m1"),
                       "--streams", "acoustic", "--epochs-acoustic", "1"});
  ASSERT_EQ(one.code, 0) << one.err;
  EXPECT_TRUE(std::filesystem::exists(*dir_ / "m1" / "stream_acoustic.ckpt"));
  EXPECT_FALSE(std::filesystem::exists(*dir_ / "m1" / "stream_phone.ckpt"));
  EXPECT_NE(one.out.find("acoustic"), std::string::npos);

  const Invocation all = invoke({"train", "--seed", "2", "--corpus", corpus(), "--out", path("m4"),
                       "--s2v-epochs", "1", "--s2v-dim", "8"});
  ASSERT_EQ(all.code, 0) << all.err;
  const auto rep = nlohmann::json::parse(testing::read_file(*dir_ / "m4" / "train_report.json"));
  EXPECT_EQ(rep["streams"]["acoustic"]["epochs"], 30);
  EXPECT_EQ(rep["streams"]["phone"]["epochs"], 20);
  EXPECT_EQ(rep["streams"]["word2vec"]["epochs"], 15);
  EXPECT_EQ(rep["streams"]["speech2vec"]["epochs"], 15);
  EXPECT_EQ(rep["fusion_weights"].size(), 4u);
  EXPECT_EQ(rep["utterances"], 18);

  const Invocation weighted = invoke(cat({"train", "--seed", "2", "--corpus", corpus(), "--out",
                                path("mw"), "--weights", "1,3"},
                               quick_model_flags()));
  EXPECT_EQ(weighted.code, cli::kExitUsage);
}

TEST_F(CliTest, EvalAndStreamWriteReports) {
  const Invocation e = invoke(cat({"eval", "--seed", "3", "--corpus", corpus(), "--out", path("ev"), "--k",
                         "2"},
                        quick_model_flags()));
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_NE(e.out.find("new weights"), std::string::npos);
  const auto rep = nlohmann::json::parse(testing::read_file(*dir_ / "ev" / "report.json"));
  EXPECT_EQ(rep["rows"].size(), 10u);
  EXPECT_EQ(testing::read_file(*dir_ / "ev" / "report.txt"), e.out);

  ASSERT_EQ(invoke(cat({"train", "--seed", "3", "--corpus", corpus(), "--out", path("sm")},
                    quick_model_flags()))
                .code,
            0);
  const Invocation s = invoke({"stream", "--seed", "4", "--corpus", corpus(), "--models", path("sm"),
                     "--out", path("st"), "--split-k", "2"});
  ASSERT_EQ(s.code, 0) << s.err;
  const auto stats = nlohmann::json::parse(testing::read_file(*dir_ / "st" / "stream_stats.json"));
  EXPECT_EQ(stats["utterances"], 9);
  EXPECT_EQ(stats["recall"], 1.0);
  const std::string log = testing::read_file(*dir_ / "st" / "decisions.jsonl");
  EXPECT_EQ(static_cast<int>(std::count(log.begin(), log.end(), '\n')), stats["decisions"].get<int>());
  EXPECT_EQ(invoke({"stream", "--seed", "4", "--corpus", corpus(), "--models", path("sm"), "--out",
                 path("st2"), "--tau", "1.01"})
                .code,
            cli::kExitUsage);
}

TEST_F(CliTest, GloveFixture) {
  const Invocation r = invoke({"glove-fixture", "--out", path("g.txt"), "--dim", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(testing::read_file(*dir_ / "g.txt"));
  std::string word;
  double x;
  in >> word;
  int n = 0;
  while (in >> x) ++n;
  EXPECT_GE(n, 4);
}

}  // namespace
}  // namespace woi
