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

#ifndef TRIMSIM_METRIC_H_
#define TRIMSIM_METRIC_H_

#include <compare>
#include <cstdint>
#include <string>

#include "absl/status/statusor.h"

namespace trimsim {

// Standard normal quantile.
double NormalQuantile(double p);

// Two-sided critical value z_{alpha/2} for confidence `alpha`, i.e. the
// z with P(|Z| <= z) = alpha.
absl::StatusOr<double> ZScore(double alpha);

// z_{alpha/2} rounded to three decimals, as read from a printed table
// (3.291 at 99.9%). Rounds-to-recover is computed with this value.
absl::StatusOr<double> TabulatedZScore(double alpha);

// Number of observations; "infinite" for operators whose size is never
// disclosed.
class Rounds {
 public:
  static Rounds Finite(uint64_t r) { return Rounds(r, false); }
  static Rounds Infinite() { return Rounds(0, true); }

  bool infinite() const { return infinite_; }
  // Only meaningful when finite.
  uint64_t value() const { return value_; }
  std::string ToString() const;

  friend bool operator==(const Rounds&, const Rounds&) = default;
  friend std::strong_ordering operator<=>(const Rounds& a, const Rounds& b) {
    if (a.infinite_ != b.infinite_) {
      return a.infinite_ ? std::strong_ordering::greater
                         : std::strong_ordering::less;
    }
    return a.value_ <=> b.value_;
  }

 private:
  Rounds(uint64_t v, bool inf) : value_(v), infinite_(inf) {}
  uint64_t value_;
  bool infinite_;
};

struct RtRQuery {
  double variance = 0;  // of the disclosed size S
  double err = 1;       // tolerated absolute error on T
  double alpha = 0.999;
};

// ceil(z^2 * variance / err^2), at least 1.
absl::StatusOr<Rounds> RoundsToRecover(const RtRQuery& query);

// The bound before rounding up.
absl::StatusOr<double> RoundsBound(const RtRQuery& query);

}  // namespace trimsim

#endif  // TRIMSIM_METRIC_H_
