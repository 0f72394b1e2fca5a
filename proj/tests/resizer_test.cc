// Copyright 2026 The Trimsim Authors
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

#include <algorithm>
#include <map>
#include <numeric>
#include <vector>

#include "boost/math/distributions/chi_squared.hpp"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"
#include "trimsim/distributions.h"
#include "trimsim/ledger.h"
#include "trimsim/resizer.h"

namespace trimsim {
namespace {

using trimsim::testing::Padded;

// N rows with values 0..N-1; the first t are genuine.
PaddedTable Input(size_t n, size_t t, OperatorId origin = 3) {
  std::vector<Value> values(n);
  std::iota(values.begin(), values.end(), Value{0});
  std::vector<uint8_t> valid(n, 0);
  std::fill(valid.begin(), valid.begin() + t, 1);
  return Padded(values, valid, "v", origin);
}

std::vector<Value> ValidValues(const PaddedTable& t) {
  std::vector<Value> out;
  for (size_t i = 0; i < t.size(); ++i)
    if (t.valid(i)) out.push_back(t.row(i)[0]);
  std::sort(out.begin(), out.end());
  return out;
}

TEST(MarkTest, CoinTossKeepsEveryGenuineRow) {
  PaddedTable in = Input(1000, 300);
  for (double p : {0.0, 0.3, 1.0}) {
    ASSERT_OK_AND_ASSIGN(KeepColumn keep, MarkCoinToss(in, p, Stream(1)));
    size_t fillers = 0;
    for (size_t j = 0; j < in.size(); ++j) {
      if (in.valid(j)) EXPECT_TRUE(keep[j]);
      else fillers += keep[j];
    }
    if (p == 0) EXPECT_EQ(fillers, 0u);
    if (p == 1) EXPECT_EQ(fillers, 700u);
  }
  EXPECT_FALSE(MarkCoinToss(in, 1.5, Stream(1)).ok());
}

TEST(MarkTest, CoinTossFillerRate) {
  PaddedTable in = Input(200'000, 0);
  ASSERT_OK_AND_ASSIGN(KeepColumn keep, MarkCoinToss(in, 0.25, Stream(2)));
  const double kept = std::accumulate(keep.begin(), keep.end(), 0.0);
  // 5 binomial standard deviations.
  EXPECT_NEAR(kept, 50'000, 5 * std::sqrt(200'000 * 0.25 * 0.75));
}

TEST(MarkTest, CounterKeepsExactlyEtaFillers) {
  PaddedTable in = Padded({1, 2, 3, 4, 5, 6}, {0, 1, 0, 0, 1, 0});
  KeepColumn keep = MarkCounter(in, 2);
  EXPECT_THAT(keep, ::testing::ElementsAre(1, 1, 1, 0, 1, 0));
  KeepColumn all = MarkCounter(in, 100);
  EXPECT_EQ(std::accumulate(all.begin(), all.end(), 0), 6);
}

TEST(ShuffleTest, IsAPermutationCarryingFlags) {
  PaddedTable in = Input(50, 20);
  KeepColumn keep(50, 0);
  for (size_t j = 0; j < 50; j += 3) keep[j] = 1;
  Stream rng(4);
  ASSERT_OK_AND_ASSIGN(ShuffledTable s, Shuffle(in, keep, rng));
  EXPECT_EQ(s.table.size(), 50u);
  std::vector<Value> seen;
  for (size_t j = 0; j < 50; ++j) {
    const Value v = s.table.row(j)[0];
    seen.push_back(v);
    EXPECT_EQ(s.table.valid(j), v < 20);
    EXPECT_EQ(s.keep[j], keep[v]);
  }
  std::sort(seen.begin(), seen.end());
  std::vector<Value> expect(50);
  std::iota(expect.begin(), expect.end(), Value{0});
  EXPECT_EQ(seen, expect);
}

TEST(ShuffleTest, ChiSquareOverPermutationsOfFour) {
  constexpr int kDraws = 240'000;
  std::map<std::vector<size_t>, int> counts;
  Stream rng(5);
  for (int i = 0; i < kDraws; ++i) ++counts[UniformPermutation(4, rng)];
  ASSERT_EQ(counts.size(), 24u);
  const double expected = kDraws / 24.0;
  double chi2 = 0;
  for (const auto& [perm, c] : counts) chi2 += (c - expected) * (c - expected) / expected;
  const boost::math::chi_squared_distribution<double> dist(23);
  EXPECT_LT(chi2, boost::math::quantile(complement(dist, 1e-3)));
}

TEST(ShuffleTest, EveryPositionEquallyLikely) {
  // Position of a fixed element after shuffling 10 items.
  constexpr int kDraws = 100'000;
  std::vector<int> where(10, 0);
  Stream rng(6);
  for (int i = 0; i < kDraws; ++i) {
    std::vector<size_t> p = UniformPermutation(10, rng);
    ++where[std::find(p.begin(), p.end(), 0) - p.begin()];
  }
  double chi2 = 0;
  for (int c : where) chi2 += (c - kDraws / 10.0) * (c - kDraws / 10.0) / (kDraws / 10.0);
  const boost::math::chi_squared_distribution<double> dist(9);
  EXPECT_LT(chi2, boost::math::quantile(complement(dist, 1e-3)));
}

TEST(TrimTest, KeepsMarkedRowsAndRecordsSize) {
  PaddedTable in = Input(6, 2);
  LeakageLedger ledger;
  ASSERT_OK_AND_ASSIGN(PaddedTable out, Trim(in, {1, 1, 0, 1, 0, 0}, ledger));
  EXPECT_EQ(out.size(), 3u);
  EXPECT_EQ(out.true_count(), 2u);
  EXPECT_EQ(out.origin(), 3);
  EXPECT_THAT(ledger.entries(), ::testing::ElementsAre(Disclosure{
                                    3, DisclosureKind::kTrimmedSize, 3}));
}

TEST(TrimTest, RefusesToDropGenuineRows) {
  PaddedTable in = Input(4, 2);
  LeakageLedger ledger;
  EXPECT_EQ(Trim(in, {1, 0, 1, 1}, ledger).status().code(),
            absl::StatusCode::kInternal);
  EXPECT_FALSE(Trim(in, {1, 1}, ledger).ok());
  EXPECT_EQ(ledger.size(), 0u);
}

TEST(SortAndCutTest, GenuineFirstThenEtaFillers) {
  PaddedTable in = Padded({10, 11, 12, 13, 14}, {0, 1, 0, 1, 0});
  LeakageLedger ledger;
  ASSERT_OK_AND_ASSIGN(PaddedTable out, SortAndCut(in, 1, ledger));
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out.row(0)[0], 11);
  EXPECT_EQ(out.row(1)[0], 13);
  EXPECT_EQ(out.row(2)[0], 10);
  EXPECT_FALSE(out.valid(2));
  ASSERT_OK_AND_ASSIGN(PaddedTable all, SortAndCut(in, 99, ledger));
  EXPECT_EQ(all.size(), 5u);
  EXPECT_EQ(ledger.Count(DisclosureKind::kTrimmedSize), 2u);
}

TEST(ResizeTest, FusedPathEqualsShuffleThenTrim) {
  const std::vector<TrimStrategy> strategies = {
      TrimStrategy::CoinToss(BetaParams{2, 6}),
      TrimStrategy::Counter(TLapParams{0.5, 5e-5, 1, false}),
      TrimStrategy::CoinToss(FixedFractionParams{0.5})};
  PaddedTable in = Input(300, 40);
  for (const TrimStrategy& s : strategies) {
    ResizerStreams fused = ResizerStreams::For(9, 3);
    LeakageLedger l1;
    ASSERT_OK_AND_ASSIGN(PaddedTable a, Resize(in, s, fused, l1));

    // Same draws, done step by step.
    ResizerStreams step = ResizerStreams::For(9, 3);
    KeepColumn keep;
    if (s.kind == TrimKind::kCoinToss) {
      ASSERT_OK_AND_ASSIGN(double p,
                           SampleKeepProbability(*s.distribution, 300, 40,
                                                 step.distribution));
      ASSERT_OK_AND_ASSIGN(keep, MarkCoinToss(in, p, step.mark));
    } else {
      ASSERT_OK_AND_ASSIGN(uint64_t eta, SampleFillerCount(*s.distribution, 300,
                                                           40, step.distribution));
      keep = MarkCounter(in, eta);
    }
    ASSERT_OK_AND_ASSIGN(ShuffledTable sh, Shuffle(in, keep, step.shuffle));
    LeakageLedger l2;
    ASSERT_OK_AND_ASSIGN(PaddedTable b, Trim(sh.table, sh.keep, l2));
    EXPECT_EQ(a.values(), b.values());
    EXPECT_EQ(std::vector<uint8_t>(a.validity().begin(), a.validity().end()),
              std::vector<uint8_t>(b.validity().begin(), b.validity().end()));
    EXPECT_EQ(l1.entries(), l2.entries());
  }
}

TEST(ResizeTest, LosslessForEveryStrategy) {
  const std::vector<TrimStrategy> strategies = {
      TrimStrategy::None(),
      TrimStrategy::CoinToss(BetaParams{2, 6}),
      TrimStrategy::CoinToss(TLapParams{0.5, 5e-5, 1, false}),
      TrimStrategy::Counter(BetaParams{1, 1}),
      TrimStrategy::SortAndCut(TLapParams{0.5, 5e-5, 1, true}),
      TrimStrategy::Counter(FixedFractionParams{0})};
  Stream rng(10);
  for (int trial = 0; trial < 30; ++trial) {
    const size_t n = rng.Below(200);
    const size_t t = n == 0 ? 0 : rng.Below(n + 1);
    PaddedTable in = Input(n, t);
    for (const TrimStrategy& s : strategies) {
      ResizerStreams streams = ResizerStreams::For(trial, 3);
      LeakageLedger ledger;
      ASSERT_OK_AND_ASSIGN(PaddedTable out, Resize(in, s, streams, ledger));
      EXPECT_EQ(ValidValues(out), ValidValues(in));
      EXPECT_LE(out.size(), n);
      EXPECT_GE(out.size(), t);
      EXPECT_EQ(ledger.size(), s.kind == TrimKind::kNone ? 0u : 1u);
      if (ledger.size() == 1) EXPECT_EQ(ledger.entries()[0].value, out.size());
    }
  }
}

TEST(ResizeTest, FixedZeroRevealsTrueCount) {
  PaddedTable in = Input(100, 17);
  ResizerStreams streams = ResizerStreams::For(1, 3);
  LeakageLedger ledger;
  ASSERT_OK_AND_ASSIGN(
      PaddedTable out,
      Resize(in, TrimStrategy::CoinToss(FixedFractionParams{0}), streams, ledger));
  EXPECT_EQ(out.size(), 17u);
}

TEST(ResizeTest, DeterministicPerSeedAndOperator) {
  PaddedTable in = Input(500, 50);
  const TrimStrategy s = TrimStrategy::CoinToss(BetaParams{2, 6});
  auto run = [&](uint64_t seed, OperatorId op) {
    ResizerStreams streams = ResizerStreams::For(seed, op);
    LeakageLedger ledger;
    return Resize(in, s, streams, ledger)->values();
  };
  EXPECT_EQ(run(1, 3), run(1, 3));
  EXPECT_NE(run(1, 3), run(2, 3));
  EXPECT_NE(run(1, 3), run(1, 4));
}

// The output order carries no information about which input slots were
// genuine: a genuine row's output position is uniform.
TEST(ResizeTest, GenuinePositionIsUniform) {
  PaddedTable in = Input(8, 1);
  const TrimStrategy s = TrimStrategy::Counter(FixedFractionParams{1});
  std::vector<int> where(8, 0);
  constexpr int kRuns = 40'000;
  for (int i = 0; i < kRuns; ++i) {
    ResizerStreams streams = ResizerStreams::For(i, 0);
    LeakageLedger ledger;
    PaddedTable out = *Resize(in, s, streams, ledger);
    for (size_t j = 0; j < out.size(); ++j) where[j] += out.valid(j);
  }
  double chi2 = 0;
  for (int c : where) chi2 += (c - kRuns / 8.0) * (c - kRuns / 8.0) / (kRuns / 8.0);
  const boost::math::chi_squared_distribution<double> dist(7);
  EXPECT_LT(chi2, boost::math::quantile(complement(dist, 1e-3)));
}

}  // namespace
}  // namespace trimsim
