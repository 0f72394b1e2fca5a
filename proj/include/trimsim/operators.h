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

#ifndef TRIMSIM_OPERATORS_H_
#define TRIMSIM_OPERATORS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "trimsim/ledger.h"
#include "trimsim/relational.h"

namespace trimsim {

// Oblivious relational operators. Every output size depends only on the
// input sizes; which rows are genuine lives in the validity column.

struct EqualityTest {
  std::string column;
  Value constant;
};

// Conjunction of column = constant tests.
struct PredicateSpec {
  std::vector<EqualityTest> conjuncts;
};

enum class AggregateFunction { kCount, kSum };

struct AggSpec {
  std::string group_key;
  AggregateFunction function = AggregateFunction::kCount;
  std::string sum_column;  // only for kSum
  std::string output_column = "agg";
};

// Default bound on rows materialized by one join.
inline constexpr uint64_t kDefaultMaxJoinRows = uint64_t{1} << 27;

// N = |t|, every row genuine.
PaddedTable ObliviousScan(const Table& table, OperatorId id);

// Same rows and order; valid_out = valid_in AND predicate.
absl::StatusOr<PaddedTable> ObliviousFilter(const PaddedTable& in,
                                            const PredicateSpec& pred,
                                            OperatorId id);

// Nested-loop join, left-major: output slot i * N_r + j pairs left row i
// with right row j and is genuine iff both are genuine and the keys match.
// Fails before allocating when N_l * N_r overflows or exceeds `max_rows`.
absl::StatusOr<PaddedTable> ObliviousJoin(const PaddedTable& left,
                                          const PaddedTable& right,
                                          const std::string& left_key,
                                          const std::string& right_key,
                                          OperatorId id,
                                          uint64_t max_rows = kDefaultMaxJoinRows);

// Sort-based group-by. Rows are sorted by (valid desc, key asc, input
// position); the last row of every run of equal genuine keys is valid and
// carries the group's aggregate. Output columns are (group key, aggregate)
// and the output size equals the input size.
absl::StatusOr<PaddedTable> ObliviousGroupBy(const PaddedTable& in,
                                             const AggSpec& agg, OperatorId id);

// Sorted by (valid desc, key asc, input position). N and T unchanged.
absl::StatusOr<PaddedTable> ObliviousOrderBy(const PaddedTable& in,
                                             const std::string& key,
                                             OperatorId id);

// Opens the final output: returns the genuine rows and records their count
// as the final-result disclosure.
ResultSet ToResult(const PaddedTable& in, LeakageLedger& ledger);

// Row permutation sorting by (valid desc, column asc, position).
std::vector<size_t> ValidFirstOrder(const PaddedTable& in, size_t key_index);

// Copies rows `order[0..]` of `in` into a new table.
PaddedTable Gather(const PaddedTable& in, const std::vector<size_t>& order,
                   OperatorId id);

}  // namespace trimsim

#endif  // TRIMSIM_OPERATORS_H_
