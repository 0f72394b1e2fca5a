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

#include "trimsim/bench.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "trimsim/ledger.h"
#include "trimsim/resizer.h"
#include "trimsim/rng.h"

namespace trimsim {

absl::StatusOr<PaddedTable> BenchTable(uint64_t rows, uint64_t columns,
                                       uint64_t seed) {
  if (rows == 0 || columns == 0) {
    return absl::InvalidArgumentError("bench table needs rows and columns");
  }
  if (rows > (uint64_t{1} << 40) / columns) {
    return absl::ResourceExhaustedError(
        absl::StrCat("bench table of ", rows, " x ", columns, " is too large"));
  }
  std::vector<std::string> names;
  for (uint64_t c = 0; c < columns; ++c) names.push_back(absl::StrCat("c", c));
  absl::StatusOr<Schema> schema = Schema::Create(std::move(names));
  if (!schema.ok()) return schema.status();
  Stream rng = Stream::Derive(seed, 0, "bench-table");
  std::vector<Value> values(rows * columns);
  for (Value& v : values) v = static_cast<Value>(rng() >> 1);
  std::vector<uint8_t> valid(rows, 0);
  std::vector<size_t> order = UniformPermutation(rows, rng);
  for (uint64_t i = 0; i < rows / 10; ++i) valid[order[i]] = 1;
  return PaddedTable::FromParts(*std::move(schema), std::move(values),
                                std::move(valid), 0);
}

absl::StatusOr<BenchPoint> TimeResize(uint64_t rows, uint64_t columns,
                                      const TrimStrategy& strategy,
                                      uint64_t repeats, uint64_t seed) {
  if (repeats == 0) return absl::InvalidArgumentError("repeats must be >= 1");
  absl::StatusOr<PaddedTable> table = BenchTable(rows, columns, seed);
  if (!table.ok()) return table.status();
  BenchPoint point{rows, columns, {}, 0};
  for (uint64_t r = 0; r <= repeats; ++r) {
    LeakageLedger ledger;
    ResizerStreams streams = ResizerStreams::For(seed + r, 0);
    const auto start = std::chrono::steady_clock::now();
    absl::StatusOr<PaddedTable> out = Resize(*table, strategy, streams, ledger);
    const auto stop = std::chrono::steady_clock::now();
    if (!out.ok()) return out.status();
    if (r == 0) continue;  // warm-up
    point.seconds.push_back(std::chrono::duration<double>(stop - start).count());
  }
  std::vector<double> sorted = point.seconds;
  std::sort(sorted.begin(), sorted.end());
  const size_t m = sorted.size();
  point.median_seconds =
      m % 2 ? sorted[m / 2] : (sorted[m / 2 - 1] + sorted[m / 2]) / 2;
  return point;
}

std::optional<double> LogLogSlope(std::span<const double> x,
                                  std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) return std::nullopt;
  double sx = 0, sy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0 && y[i] > 0)) return std::nullopt;
    sx += std::log(x[i]);
    sy += std::log(y[i]);
  }
  const double n = static_cast<double>(x.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y[i]) - my);
  }
  if (sxx == 0) return std::nullopt;
  return sxy / sxx;
}

}  // namespace trimsim
