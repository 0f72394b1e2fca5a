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

#ifndef TRIMSIM_BENCH_H_
#define TRIMSIM_BENCH_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "trimsim/relational.h"
#include "trimsim/strategy.h"

namespace trimsim {

// N rows of `columns` random values, T = floor(N / 10) of them genuine at
// random positions.
absl::StatusOr<PaddedTable> BenchTable(uint64_t rows, uint64_t columns,
                                       uint64_t seed);

struct BenchPoint {
  uint64_t rows = 0;
  uint64_t columns = 0;
  std::vector<double> seconds;  // one per repeat
  double median_seconds = 0;
};

// Wall time of Resize over a BenchTable, after one untimed warm-up run.
absl::StatusOr<BenchPoint> TimeResize(uint64_t rows, uint64_t columns,
                                      const TrimStrategy& strategy,
                                      uint64_t repeats, uint64_t seed);

// Least-squares slope of log(y) against log(x). Empty with fewer than two
// distinct x or any non-positive value.
std::optional<double> LogLogSlope(std::span<const double> x,
                                  std::span<const double> y);

}  // namespace trimsim

#endif  // TRIMSIM_BENCH_H_
