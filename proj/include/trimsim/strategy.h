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

#ifndef TRIMSIM_STRATEGY_H_
#define TRIMSIM_STRATEGY_H_

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "absl/status/status.h"

namespace trimsim {

// Beta(alpha, beta) over the keep probability p.
struct BetaParams {
  double alpha = 1;
  double beta = 1;
};

// Laplace(location, scale) truncated to [0, inf), over the filler count.
//   scale    b  = sensitivity / epsilon
//   location mu = b * ln(1 / (2 delta))
// The location rule is a reconstruction: it puts mass delta below zero
// before truncation. With `sensitivity_sqrt_n` the sensitivity is
// sqrt(N) of the operator being resized instead of `sensitivity`.
struct TLapParams {
  double epsilon = 0.5;
  double delta = 5e-5;
  double sensitivity = 1;
  bool sensitivity_sqrt_n = false;

  double Sensitivity(uint64_t n) const;
  double Scale(uint64_t n) const;
  double Location(uint64_t n) const;
};

// Constant keep fraction f.
struct FixedFractionParams {
  double f = 0;
};

using FillerDistribution =
    std::variant<BetaParams, TLapParams, FixedFractionParams>;

absl::Status ValidateDistribution(const FillerDistribution& dist);
std::string DescribeDistribution(const FillerDistribution& dist);

enum class TrimKind { kNone, kCoinToss, kCounter, kSortAndCut };

std::string_view TrimKindName(TrimKind kind);

// How a resizer decides which fillers survive.
//   coin-toss   each filler kept independently with probability p
//   counter     the first eta fillers in row order are kept
//   sort-and-cut valid rows first, then the first eta fillers
// p (or eta) is drawn from `distribution` once per execution.
struct TrimStrategy {
  TrimKind kind = TrimKind::kNone;
  std::optional<FillerDistribution> distribution;

  static TrimStrategy None() { return {}; }
  static TrimStrategy CoinToss(FillerDistribution d) {
    return {TrimKind::kCoinToss, d};
  }
  static TrimStrategy Counter(FillerDistribution d) {
    return {TrimKind::kCounter, d};
  }
  static TrimStrategy SortAndCut(FillerDistribution d) {
    return {TrimKind::kSortAndCut, d};
  }

  absl::Status Validate() const;
  std::string Describe() const;
};

}  // namespace trimsim

#endif  // TRIMSIM_STRATEGY_H_
