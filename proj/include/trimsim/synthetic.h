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

#ifndef TRIMSIM_SYNTHETIC_H_
#define TRIMSIM_SYNTHETIC_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "trimsim/relational.h"

namespace trimsim {

// Columns of every generated table. `flt` is the filter column (genuine
// rows hold kFilterMatch), `ka` joins to the previous table in the chain,
// `kb` to the next one, `grp` is a small-domain grouping key.
inline constexpr const char* kSyntheticColumns[] = {"id", "flt", "ka",
                                                    "kb", "grp", "val"};
inline constexpr Value kFilterMatch = 1;

// A left-deep join chain t1 ⋈ t2 ⋈ ... ⋈ tk (on t_i.kb = t_{i+1}.ka),
// optionally with an equality filter `flt = 1` directly above each scan.
//
// Filter selectivity is passing rows / N. Join selectivity is true matches
// / (product of the true input sizes). Target counts are rounded down.
struct SyntheticSpec {
  std::vector<int64_t> table_sizes;
  // Empty means no filters; otherwise one flag per table.
  std::vector<bool> filtered;
  double selectivity = 0.1;
  Value key_domain = 1'000'000'000;
  Value group_domain = 8;

  absl::Status Validate() const;
};

struct OperatorReport {
  std::string name;  // "filter(t1)", "join(1)", ...
  std::string kind;  // "filter" | "join"
  std::vector<int64_t> input_true_sizes;
  int64_t target = 0;
  int64_t achieved = 0;
  double achieved_selectivity = 0;
};

struct SyntheticCatalog {
  std::vector<std::string> names;  // "t1".."tk"
  std::vector<Table> tables;
  std::vector<OperatorReport> report;
};

absl::StatusOr<SyntheticCatalog> GenerateSynthetic(const SyntheticSpec& spec,
                                                   uint64_t seed);

// floor(s * count), tolerant of binary rounding of s (0.29 * 100 is 29).
int64_t TargetCount(double s, int64_t count);

// Assignment of left bundles (weights = how many join rows each stands for)
// and unit-weight right rows to equality groups so that
//   sum over groups of (left weight in group) * (right rows in group)
// equals `target`. Group -1 means "matches nothing".
struct PairGroups {
  std::vector<int> left_group;
  std::vector<int> right_group;
  std::vector<int64_t> group_left_weight;
};

absl::StatusOr<PairGroups> SolvePairCount(int64_t target,
                                          std::span<const int64_t> left_weights,
                                          int64_t right_count);

}  // namespace trimsim

#endif  // TRIMSIM_SYNTHETIC_H_
