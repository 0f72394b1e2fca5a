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

#ifndef TRIMSIM_DISTRIBUTIONS_H_
#define TRIMSIM_DISTRIBUTIONS_H_

#include <cstdint>

#include "absl/status/statusor.h"
#include "trimsim/rng.h"
#include "trimsim/strategy.h"

namespace trimsim {

// Nearest integer, halves rounded up; negative and NaN give 0.
uint64_t RoundToCount(double x);

double SampleStandardNormal(Stream& rng);
// Marsaglia-Tsang; shape > 0.
double SampleGamma(double shape, Stream& rng);
// Ratio of two Gamma draws.
absl::StatusOr<double> SampleBeta(double alpha, double beta, Stream& rng);
// Laplace(location, scale) for an operator of size n, redrawn until the
// value is non-negative.
absl::StatusOr<double> SampleEtaTLap(const TLapParams& dist, uint64_t n,
                                     Stream& rng);
// min(N - T, eta) / (N - T); 0 when there are no fillers.
double PFromEta(double eta, uint64_t n, uint64_t t);
// Binomial(trials, p).
uint64_t SampleBinomial(uint64_t trials, double p, Stream& rng);

// Keep probability for a coin-toss resizer over an operator with N rows of
// which T are genuine. T only enters through eta-to-p conversion.
absl::StatusOr<double> SampleKeepProbability(const FillerDistribution& dist,
                                             uint64_t n, uint64_t t,
                                             Stream& rng);
// Filler budget eta for counter-based and sort-and-cut resizers. Real
// draws are rounded to the nearest integer; the result is not clamped.
absl::StatusOr<uint64_t> SampleFillerCount(const FillerDistribution& dist,
                                           uint64_t n, uint64_t t,
                                           Stream& rng);
// Number of fillers a resizer with `strategy` retains, drawn without
// materializing any rows. S = T + the returned value.
absl::StatusOr<uint64_t> SampleRetainedFillers(const TrimStrategy& strategy,
                                               uint64_t n, uint64_t t,
                                               Stream& rng);

enum class MomentMethod { kAnalytic, kMonteCarlo };

// Mean and variance of the disclosed size S.
struct MomentEstimate {
  double mean = 0;
  double variance = 0;
  MomentMethod method = MomentMethod::kAnalytic;
  uint64_t samples = 0;  // Monte-Carlo only
  double mean_stderr = 0;
  double variance_stderr = 0;
  // E[S] - T: expected retained fillers.
  double filler_mean = 0;
};

struct MomentOptions {
  // Force simulation even when a closed form exists.
  bool force_monte_carlo = false;
  uint64_t samples = 1'000'000;
  uint64_t seed = 0x5eed;
};

// Closed forms: coin-toss with Beta (Beta-Binomial) or fixed fraction
// (Binomial); counter/sort-and-cut with a fixed fraction (constant) or
// TLap (exact sum over the rounded, clamped distribution). Everything else
// is simulated; coin-toss with a random p then combines the sampled
// moments of p through the law of total variance.
absl::StatusOr<MomentEstimate> MomentsOfS(const TrimStrategy& strategy,
                                          uint64_t n, uint64_t t,
                                          const MomentOptions& options = {});

}  // namespace trimsim

#endif  // TRIMSIM_DISTRIBUTIONS_H_
