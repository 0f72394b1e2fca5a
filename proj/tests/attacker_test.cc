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

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "test_util.h"
#include "trimsim/attacker.h"
#include "trimsim/distributions.h"
#include "trimsim/metric.h"

namespace trimsim {
namespace {

const TLapParams kNarrow{0.5, 5e-5, 1, false};

OperatorConfig Config(uint64_t n, uint64_t t, TrimStrategy s) {
  OperatorConfig c;
  c.n = n;
  c.t = t;
  c.strategy = std::move(s);
  c.op = 7;
  return c;
}

double Mean(const std::vector<uint64_t>& xs) {
  double s = 0;
  for (uint64_t x : xs) s += static_cast<double>(x);
  return s / static_cast<double>(xs.size());
}

TEST(ObserveTest, FixedZeroDisclosesT) {
  ASSERT_OK_AND_ASSIGN(
      ObservationSeries s,
      ObserveRounds(Config(100, 37, TrimStrategy::Counter(FixedFractionParams{0})),
                    20, Stream(1)));
  EXPECT_EQ(s.sizes, std::vector<uint64_t>(20, 37));
  EXPECT_EQ(s.op, 7);
}

TEST(ObserveTest, NoneDisclosesNothing) {
  ASSERT_OK_AND_ASSIGN(
      ObservationSeries s,
      ObserveRounds(Config(100, 37, TrimStrategy::None()), 5, Stream(1)));
  EXPECT_TRUE(s.sizes.empty());
  EXPECT_FALSE(EstimateTrueSize(s, 0).ok());
}

TEST(ObserveTest, BetaMeanMatchesBetaBinomial) {
  const OperatorConfig c =
      Config(10'000, 1'000, TrimStrategy::CoinToss(BetaParams{2, 6}));
  ASSERT_OK_AND_ASSIGN(ObservationSeries s, ObserveRounds(c, 1000, Stream(2)));
  ASSERT_OK_AND_ASSIGN(MomentEstimate m, MomentsOfS(c.strategy, c.n, c.t));
  EXPECT_DOUBLE_EQ(m.mean, 3250);
  EXPECT_NEAR(Mean(s.sizes), 3250, 3 * std::sqrt(m.variance / 1000));
  for (uint64_t x : s.sizes) {
    EXPECT_GE(x, c.t);
    EXPECT_LE(x, c.n);
  }
}

TEST(ObserveTest, RejectsBadInput) {
  EXPECT_FALSE(ObserveRounds(Config(10, 11, TrimStrategy::None()), 1, Stream(1)).ok());
  EXPECT_FALSE(ObserveRounds(Config(10, 1, TrimStrategy::None()), 0, Stream(1)).ok());
}

TEST(ObserveTest, LongerSeriesExtendsShorter) {
  const OperatorConfig c = Config(500, 50, TrimStrategy::CoinToss(BetaParams{2, 6}));
  ASSERT_OK_AND_ASSIGN(ObservationSeries a, ObserveRounds(c, 10, Stream(3)));
  ASSERT_OK_AND_ASSIGN(ObservationSeries b, ObserveRounds(c, 20, Stream(3)));
  EXPECT_EQ(a.sizes, std::vector<uint64_t>(b.sizes.begin(), b.sizes.begin() + 10));
}

TEST(ObserveTest, MaterializedCounterPathMatchesSampledExactly) {
  const OperatorConfig c = Config(300, 30, TrimStrategy::Counter(kNarrow));
  ASSERT_OK_AND_ASSIGN(ObservationSeries fast, ObserveRounds(c, 200, Stream(4)));
  ASSERT_OK_AND_ASSIGN(
      ObservationSeries full,
      ObserveRounds(c, 200, Stream(4), ObservationPath::kMaterialized));
  EXPECT_EQ(fast.sizes, full.sizes);
}

TEST(ObserveTest, MaterializedCoinTossPathAgreesInDistribution) {
  const OperatorConfig c = Config(400, 40, TrimStrategy::CoinToss(BetaParams{2, 6}));
  constexpr int kRounds = 3000;
  ASSERT_OK_AND_ASSIGN(ObservationSeries fast, ObserveRounds(c, kRounds, Stream(5)));
  ASSERT_OK_AND_ASSIGN(
      ObservationSeries full,
      ObserveRounds(c, kRounds, Stream(6), ObservationPath::kMaterialized));
  ASSERT_OK_AND_ASSIGN(MomentEstimate m, MomentsOfS(c.strategy, c.n, c.t));
  const double se = std::sqrt(2 * m.variance / kRounds);
  EXPECT_NEAR(Mean(fast.sizes), Mean(full.sizes), 3 * se);
  EXPECT_NEAR(Mean(full.sizes), m.mean, 3 * std::sqrt(m.variance / kRounds));
}

TEST(EstimateTest, ExactObservationsRecoverT) {
  ObservationSeries s;
  s.sizes = {118, 118, 118};
  ASSERT_OK_AND_ASSIGN(double t, EstimateTrueSize(s, 18));
  EXPECT_DOUBLE_EQ(t, 100);
  AttackOutcome o = ScoreAttack(t, 100, 0.5);
  EXPECT_TRUE(o.success);
  EXPECT_EQ(o.abs_error, 0);
  EXPECT_FALSE(ScoreAttack(98.9, 100, 1).success);
  EXPECT_TRUE(ScoreAttack(99, 100, 1).success);
}

TEST(EstimateTest, SingleObservationErrorIsOrderSigma) {
  const OperatorConfig c = Config(10'000, 500, TrimStrategy::CoinToss(BetaParams{2, 6}));
  ASSERT_OK_AND_ASSIGN(MomentEstimate m, MomentsOfS(c.strategy, c.n, c.t));
  double sq = 0;
  constexpr int kTrials = 2000;
  for (int i = 0; i < kTrials; ++i) {
    ASSERT_OK_AND_ASSIGN(ObservationSeries s, ObserveRounds(c, 1, Stream(100 + i)));
    const double e = *EstimateTrueSize(s, m.filler_mean) - c.t;
    sq += e * e;
  }
  EXPECT_NEAR(std::sqrt(sq / kTrials), std::sqrt(m.variance),
              0.1 * std::sqrt(m.variance));
}

TEST(AttackTest, BetaSucceedsAtAnalyticRounds) {
  const OperatorConfig c =
      Config(100'000, 5'000, TrimStrategy::CoinToss(BetaParams{2, 6}));
  ASSERT_OK_AND_ASSIGN(double mu, PublicFillerMean(c, 1));
  ASSERT_OK_AND_ASSIGN(double rate, SuccessRate(c, 2037, 1000, mu, 400, Stream(7)));
  EXPECT_GE(rate, 0.99);
}

// Mean of the estimate is T for every built-in strategy.
TEST(AttackTest, EstimatorIsUnbiased) {
  const std::vector<TrimStrategy> strategies = {
      TrimStrategy::CoinToss(BetaParams{2, 6}),
      TrimStrategy::CoinToss(kNarrow),
      TrimStrategy::Counter(kNarrow),
      TrimStrategy::Counter(BetaParams{2, 6}),
      TrimStrategy::SortAndCut(kNarrow),
      TrimStrategy::SortAndCut(BetaParams{1, 3}),
      TrimStrategy::CoinToss(FixedFractionParams{0.4})};
  for (const TrimStrategy& s : strategies) {
    const OperatorConfig c = Config(2000, 200, s);
    ASSERT_OK_AND_ASSIGN(MomentEstimate m, MomentsOfS(s, c.n, c.t));
    constexpr int kTrials = 2000;
    ASSERT_OK_AND_ASSIGN(ObservationSeries series,
                         ObserveRounds(c, kTrials, Stream(8)));
    const double mean_est = Mean(series.sizes) - m.filler_mean;
    const double se = std::hypot(std::sqrt(m.variance / kTrials), m.mean_stderr);
    EXPECT_NEAR(mean_est, 200, 3 * se + 1e-9) << s.Describe();
  }
}

struct ConsistencyCase {
  TrimStrategy strategy;
  double err;
};

// At the analytic RtR the attack succeeds with probability about alpha.
TEST(AttackTest, SuccessAtAnalyticRtRIsNearAlpha) {
  const uint64_t n = 20'000, t = 1'000;
  const std::vector<ConsistencyCase> cases = {
      {TrimStrategy::CoinToss(BetaParams{2, 6}), 200},
      {TrimStrategy::Counter(BetaParams{2, 6}), 200},
      {TrimStrategy::CoinToss(kNarrow), 1},
      {TrimStrategy::Counter(kNarrow), 1},
      {TrimStrategy::SortAndCut(kNarrow), 1},
      {TrimStrategy::CoinToss(FixedFractionParams{0.5}), 5}};
  for (const ConsistencyCase& k : cases) {
    const OperatorConfig c = Config(n, t, k.strategy);
    ASSERT_OK_AND_ASSIGN(MomentEstimate m, MomentsOfS(k.strategy, n, t));
    ASSERT_OK_AND_ASSIGN(Rounds r, RoundsToRecover({m.variance, k.err, 0.999}));
    ASSERT_OK_AND_ASSIGN(double rate, SuccessRate(c, r.value(), k.err,
                                                  m.filler_mean, 400, Stream(9)));
    EXPECT_GE(rate, 0.999 - 0.05) << k.strategy.Describe() << " r=" << r.ToString();
  }
}

TEST(EmpiricalRtrTest, ZeroVarianceNeedsOneRound) {
  const OperatorConfig c = Config(1000, 100, TrimStrategy::Counter(FixedFractionParams{0}));
  AttackOptions o;
  o.trials = 100;
  ASSERT_OK_AND_ASSIGN(EmpiricalRtr r, EmpiricalRoundsToRecover(c, 1, 0, o, Stream(1)));
  EXPECT_EQ(r.rounds, Rounds::Finite(1));
  EXPECT_FALSE(r.exceeded_ceiling);
}

TEST(EmpiricalRtrTest, NoneIsInfinite) {
  const OperatorConfig c = Config(1000, 100, TrimStrategy::None());
  AttackOptions o;
  o.trials = 100;
  ASSERT_OK_AND_ASSIGN(EmpiricalRtr r, EmpiricalRoundsToRecover(c, 1, 0, o, Stream(1)));
  EXPECT_TRUE(r.rounds.infinite());
}

TEST(EmpiricalRtrTest, CounterNarrowNearAnalytic) {
  const OperatorConfig c = Config(1'000'000, 100'000, TrimStrategy::Counter(kNarrow));
  ASSERT_OK_AND_ASSIGN(MomentEstimate m, MomentsOfS(c.strategy, c.n, c.t));
  ASSERT_OK_AND_ASSIGN(Rounds analytic, RoundsToRecover({m.variance, 1, 0.999}));
  AttackOptions o;
  o.trials = 2000;
  ASSERT_OK_AND_ASSIGN(EmpiricalRtr r,
                       EmpiricalRoundsToRecover(c, 1, m.filler_mean, o, Stream(2)));
  ASSERT_FALSE(r.rounds.infinite());
  EXPECT_GE(r.rounds.value(), 0.7 * analytic.value());
  EXPECT_LE(r.rounds.value(), 1.3 * analytic.value());
  EXPECT_GE(r.success_rate, r.threshold);
}

TEST(EmpiricalRtrTest, HalvingErrQuadruplesRounds) {
  const OperatorConfig c = Config(1000, 50, TrimStrategy::CoinToss(BetaParams{2, 6}));
  ASSERT_OK_AND_ASSIGN(double mu, PublicFillerMean(c, 1));
  AttackOptions o;
  o.trials = 400;
  ASSERT_OK_AND_ASSIGN(EmpiricalRtr wide, EmpiricalRoundsToRecover(c, 20, mu, o, Stream(3)));
  ASSERT_OK_AND_ASSIGN(EmpiricalRtr narrow,
                       EmpiricalRoundsToRecover(c, 10, mu, o, Stream(3)));
  const double ratio = static_cast<double>(narrow.rounds.value()) /
                       static_cast<double>(wide.rounds.value());
  EXPECT_NEAR(ratio, 4, 4 * 0.3);
}

TEST(EmpiricalRtrTest, CeilingIsReported) {
  const OperatorConfig c = Config(10'000, 100, TrimStrategy::CoinToss(BetaParams{2, 6}));
  AttackOptions o;
  o.trials = 100;
  o.ceiling = 8;
  ASSERT_OK_AND_ASSIGN(EmpiricalRtr r,
                       EmpiricalRoundsToRecover(c, 1, 2475, o, Stream(4)));
  EXPECT_TRUE(r.exceeded_ceiling);
  EXPECT_TRUE(r.rounds.infinite());
}

TEST(EmpiricalRtrTest, Preconditions) {
  const OperatorConfig c = Config(100, 10, TrimStrategy::Counter(kNarrow));
  AttackOptions o;
  o.trials = 99;
  EXPECT_FALSE(EmpiricalRoundsToRecover(c, 1, 0, o, Stream(1)).ok());
  o.trials = 100;
  EXPECT_FALSE(EmpiricalRoundsToRecover(c, 0, 0, o, Stream(1)).ok());
}

}  // namespace
}  // namespace trimsim
