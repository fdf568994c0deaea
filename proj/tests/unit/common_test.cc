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

#include <set>

#include "woi/common.h"

namespace woi {
namespace {

TEST(IntentTest, NamesRoundTripAndAreContiguous) {
  const auto all = all_intents();
  ASSERT_EQ(all.size(), static_cast<std::size_t>(kNumIntents));
  std::set<std::string> names;
  for (int i = 0; i < kNumIntents; ++i) {
    EXPECT_EQ(static_cast<int>(all[static_cast<std::size_t>(i)]), i);
    const std::string name(intent_name(all[static_cast<std::size_t>(i)]));
    names.insert(name);
    EXPECT_EQ(parse_intent(name), all[static_cast<std::size_t>(i)]);
  }
  EXPECT_EQ(names.size(), 9u);
  EXPECT_EQ(intent_name(Intent::kDoor), "door");
  EXPECT_EQ(intent_name(Intent::kOther), "other");
}

TEST(IntentTest, LongFormNamesMapToShortClasses) {
  EXPECT_EQ(parse_intent("faster"), Intent::kFast);
  EXPECT_EQ(parse_intent("Slower"), Intent::kSlow);
  EXPECT_EQ(parse_intent("destination"), Intent::kDest);
  EXPECT_THROW(parse_intent("teleport"), ValidationError);
}

TEST(StreamKindTest, ParsesNamesAndOneBasedNumbers) {
  for (StreamKind k : all_streams()) {
    EXPECT_EQ(parse_stream(stream_name(k)), k);
    EXPECT_EQ(parse_stream(std::to_string(stream_number(k))), k);
  }
  EXPECT_EQ(stream_number(StreamKind::kAcoustic), 1);
  EXPECT_EQ(stream_number(StreamKind::kSpeech2Vec), 4);
  EXPECT_THROW(parse_stream("5"), ValidationError);
  EXPECT_THROW(parse_stream(""), ValidationError);
}

TEST(SeedTest, DerivedSeedsAreStableAndNamespaced) {
  EXPECT_EQ(derive_seed(1, "a"), derive_seed(1, "a"));
  EXPECT_NE(derive_seed(1, "a"), derive_seed(1, "b"));
  EXPECT_NE(derive_seed(1, "a"), derive_seed(2, "a"));
}

TEST(RngTest, SameSeedSameStream) {
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(a.next_u64(), b.next_u64());
    EXPECT_EQ(a.normal(), b.normal());
  }
}

TEST(RngTest, UniformAndIndexStayInRange) {
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(rng.index(7), 7u);
  }
}

TEST(RngTest, NormalHasRoughlyUnitMoments) {
  Rng rng(5);
  double sum = 0.0;
  double sq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sq += x * x;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.03);
  EXPECT_NEAR(sq / n, 1.0, 0.05);
}

TEST(RngTest, PermutationIsAPermutation) {
  Rng rng(9);
  auto p = rng.permutation(50);
  std::sort(p.begin(), p.end());
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(p[i], i);
}

TEST(StringTest, SplitTrimLower) {
  EXPECT_EQ(split("a,b,,c", ','), (std::vector<std::string>{"a", "b", "", "c"}));
  EXPECT_EQ(split_ws("  a \t b\n"), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(trim("  x y \t"), "x y");
  EXPECT_EQ(to_lower("AbC"), "abc");
}

}  // namespace
}  // namespace woi
