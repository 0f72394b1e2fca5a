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

#include "boost/math/distributions/normal.hpp"
#include "gtest/gtest.h"
#include "test_util.h"
#include "trimsim/metric.h"

namespace trimsim {
namespace {

TEST(ZScoreTest, KnownConfidences) {
  EXPECT_NEAR(*ZScore(0.999), 3.291, 1e-3);
  EXPECT_NEAR(*ZScore(0.95), 1.960, 1e-3);
  EXPECT_DOUBLE_EQ(*TabulatedZScore(0.999), 3.291);
  EXPECT_DOUBLE_EQ(*TabulatedZScore(0.95), 1.96);
}

TEST(ZScoreTest, MatchesReferenceQuantile) {
  const boost::math::normal_distribution<double> normal;
  for (double p = 1e-9; p < 1; p = p < 0.01 ? p * 3 : p + 0.0137) {
    EXPECT_NEAR(NormalQuantile(p), boost::math::quantile(normal, p), 1e-6)
        << "p=" << p;
  }
  for (double alpha : {0.5, 0.8, 0.9, 0.99, 0.999, 0.9999}) {
    EXPECT_NEAR(*ZScore(alpha),
                boost::math::quantile(normal, 1 - (1 - alpha) / 2), 1e-6);
  }
}

TEST(ZScoreTest, Symmetry) {
  for (double alpha : {0.1, 0.6, 0.95, 0.999}) {
    EXPECT_NEAR(*ZScore(alpha), -NormalQuantile((1 - alpha) / 2), 1e-12);
    EXPECT_NEAR(*ZScore(alpha), NormalQuantile(1 - (1 - alpha) / 2), 1e-9);
  }
}

TEST(ZScoreTest, RejectsOutOfRange) {
  EXPECT_FALSE(ZScore(0).ok());
  EXPECT_FALSE(ZScore(1).ok());
  EXPECT_FALSE(ZScore(-0.5).ok());
  EXPECT_FALSE(ZScore(std::nan("")).ok());
}

TEST(RoundsTest, CounterPlateauExample) {
  ASSERT_OK_AND_ASSIGN(Rounds r, RoundsToRecover({8, 1, 0.999}));
  EXPECT_EQ(r, Rounds::Finite(87));
}

TEST(RoundsTest, ZeroVarianceNeedsOneRound) {
  ASSERT_OK_AND_ASSIGN(Rounds r, RoundsToRecover({0, 1, 0.999}));
  EXPECT_EQ(r, Rounds::Finite(1));
}

TEST(RoundsTest, DoublingErrQuartersTheBound) {
  for (double v : {3.0, 8.0, 1234.5}) {
    const double a = *RoundsBound({v, 1, 0.999});
    const double b = *RoundsBound({v, 2, 0.999});
    EXPECT_NEAR(a / b, 4, 1e-12);
  }
}

TEST(RoundsTest, ExactWideEndpoint) {
  ASSERT_OK_AND_ASSIGN(Rounds r, RoundsToRecover({8e6, 1, 0.999}));
  EXPECT_EQ(r, Rounds::Finite(86'645'448));
}

TEST(RoundsTest, BetaPlateauClosedForm) {
  // n (n + 8) / 48 with n = 0.95 N and err = 0.01 N.
  for (double big_n : {4e4, 1e5, 1e6}) {
    const double n = 0.95 * big_n;
    ASSERT_OK_AND_ASSIGN(Rounds r,
                         RoundsToRecover({n * (n + 8) / 48, 0.01 * big_n, 0.999}));
    EXPECT_EQ(r, Rounds::Finite(2037)) << big_n;
  }
}

TEST(RoundsTest, Monotone) {
  Rounds prev = Rounds::Finite(1);
  for (double v = 0; v < 100; v += 0.7) {
    Rounds r = *RoundsToRecover({v, 1, 0.999});
    EXPECT_GE(r, prev);
    prev = r;
  }
  for (double err = 0.5; err < 10; err += 0.5) {
    EXPECT_GE(*RoundsToRecover({50, err, 0.999}),
              *RoundsToRecover({50, err + 0.5, 0.999}));
  }
  for (double alpha = 0.5; alpha < 0.999; alpha += 0.05) {
    EXPECT_LE(*RoundsToRecover({50, 1, alpha}),
              *RoundsToRecover({50, 1, alpha + 0.04}));
  }
}

TEST(RoundsTest, Errors) {
  EXPECT_FALSE(RoundsToRecover({1, 0, 0.999}).ok());
  EXPECT_FALSE(RoundsToRecover({-1, 1, 0.999}).ok());
  EXPECT_FALSE(RoundsToRecover({1, 1, 1}).ok());
  EXPECT_EQ(RoundsToRecover({1e30, 1, 0.999}).status().code(),
            absl::StatusCode::kOutOfRange);
}

TEST(RoundsTest, InfiniteSentinel) {
  EXPECT_EQ(Rounds::Infinite().ToString(), "inf");
  EXPECT_EQ(Rounds::Finite(12).ToString(), "12");
  EXPECT_GT(Rounds::Infinite(), Rounds::Finite(UINT64_MAX));
  EXPECT_EQ(Rounds::Infinite(), Rounds::Infinite());
  EXPECT_LT(Rounds::Finite(3), Rounds::Finite(4));
}

}  // namespace
}  // namespace trimsim
