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

#include "trimsim/strategy.h"

#include <cmath>

#include "absl/strings/str_cat.h"

namespace trimsim {

double TLapParams::Sensitivity(uint64_t n) const {
  return sensitivity_sqrt_n ? std::sqrt(static_cast<double>(n)) : sensitivity;
}

double TLapParams::Scale(uint64_t n) const { return Sensitivity(n) / epsilon; }

double TLapParams::Location(uint64_t n) const {
  return Scale(n) * std::log(1.0 / (2.0 * delta));
}

absl::Status ValidateDistribution(const FillerDistribution& dist) {
  if (const auto* b = std::get_if<BetaParams>(&dist)) {
    if (!(b->alpha > 0) || !(b->beta > 0) || !std::isfinite(b->alpha) ||
        !std::isfinite(b->beta)) {
      return absl::InvalidArgumentError("Beta parameters must be positive");
    }
  } else if (const auto* t = std::get_if<TLapParams>(&dist)) {
    if (!(t->epsilon > 0) || !std::isfinite(t->epsilon)) {
      return absl::InvalidArgumentError("TLap epsilon must be positive");
    }
    if (!(t->delta > 0 && t->delta < 0.5)) {
      return absl::InvalidArgumentError(
          "TLap delta must lie in (0, 0.5) for a positive location");
    }
    if (!t->sensitivity_sqrt_n &&
        (!(t->sensitivity > 0) || !std::isfinite(t->sensitivity))) {
      return absl::InvalidArgumentError("TLap sensitivity must be positive");
    }
  } else {
    const double f = std::get<FixedFractionParams>(dist).f;
    if (!(f >= 0 && f <= 1)) {
      return absl::InvalidArgumentError("fixed fraction must lie in [0, 1]");
    }
  }
  return absl::OkStatus();
}

std::string DescribeDistribution(const FillerDistribution& dist) {
  if (const auto* b = std::get_if<BetaParams>(&dist)) {
    return absl::StrCat("Beta(", b->alpha, ",", b->beta, ")");
  }
  if (const auto* t = std::get_if<TLapParams>(&dist)) {
    return absl::StrCat("TLap(", t->epsilon, ",", t->delta, ",",
                        t->sensitivity_sqrt_n ? std::string("sqrtN")
                                              : absl::StrCat(t->sensitivity),
                        ")");
  }
  return absl::StrCat("Fixed(", std::get<FixedFractionParams>(dist).f, ")");
}

std::string_view TrimKindName(TrimKind kind) {
  switch (kind) {
    case TrimKind::kNone:
      return "none";
    case TrimKind::kCoinToss:
      return "coin-toss";
    case TrimKind::kCounter:
      return "counter-based";
    case TrimKind::kSortAndCut:
      return "sort-and-cut";
  }
  return "unknown";
}

absl::Status TrimStrategy::Validate() const {
  if (kind == TrimKind::kNone) {
    if (distribution.has_value()) {
      return absl::InvalidArgumentError(
          "strategy 'none' must not carry a distribution");
    }
    return absl::OkStatus();
  }
  if (!distribution.has_value()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "strategy '", std::string(TrimKindName(kind)), "' needs a distribution"));
  }
  return ValidateDistribution(*distribution);
}

std::string TrimStrategy::Describe() const {
  if (!distribution) return std::string(TrimKindName(kind));
  return absl::StrCat(std::string(TrimKindName(kind)), ":",
                      DescribeDistribution(*distribution));
}

}  // namespace trimsim
