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

#include "trimsim/operators.h"

#include <algorithm>
#include <numeric>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace trimsim {

PaddedTable ObliviousScan(const Table& table, OperatorId id) {
  absl::StatusOr<PaddedTable> out = PaddedTable::FromParts(
      table.schema(), table.values(),
      std::vector<uint8_t>(table.num_rows(), 1), id);
  return *std::move(out);
}

absl::StatusOr<PaddedTable> ObliviousFilter(const PaddedTable& in,
                                            const PredicateSpec& pred,
                                            OperatorId id) {
  if (pred.conjuncts.empty()) {
    return absl::InvalidArgumentError("filter needs at least one conjunct");
  }
  std::vector<std::pair<size_t, Value>> tests;
  for (const EqualityTest& t : pred.conjuncts) {
    absl::StatusOr<size_t> col = in.schema().IndexOf(t.column);
    if (!col.ok()) return col.status();
    tests.emplace_back(*col, t.constant);
  }
  std::vector<uint8_t> valid(in.validity().begin(), in.validity().end());
  for (size_t i = 0; i < in.size(); ++i) {
    std::span<const Value> row = in.row(i);
    uint8_t match = 1;
    for (const auto& [col, constant] : tests) match &= row[col] == constant;
    valid[i] &= match;
  }
  return PaddedTable::FromParts(in.schema(), in.values(), std::move(valid), id);
}

absl::StatusOr<PaddedTable> ObliviousJoin(const PaddedTable& left,
                                          const PaddedTable& right,
                                          const std::string& left_key,
                                          const std::string& right_key,
                                          OperatorId id, uint64_t max_rows) {
  absl::StatusOr<size_t> lk = left.schema().IndexOf(left_key);
  if (!lk.ok()) return lk.status();
  absl::StatusOr<size_t> rk = right.schema().IndexOf(right_key);
  if (!rk.ok()) return rk.status();
  absl::StatusOr<Schema> schema = left.schema().Concat(right.schema());
  if (!schema.ok()) return schema.status();

  uint64_t n = 0;
  if (__builtin_mul_overflow(uint64_t{left.size()}, uint64_t{right.size()},
                             &n)) {
    return absl::OutOfRangeError(absl::StrCat(
        "join output size ", left.size(), " x ", right.size(),
        " overflows the row counter"));
  }
  if (n > max_rows) {
    return absl::ResourceExhaustedError(
        absl::StrCat("join output of ", n, " rows exceeds the limit of ",
                     max_rows, " materialized rows"));
  }
  const size_t lw = left.schema().width();
  const size_t rw = right.schema().width();
  std::vector<Value> values;
  values.reserve(n * (lw + rw));
  std::vector<uint8_t> valid(n);
  size_t slot = 0;
  for (size_t i = 0; i < left.size(); ++i) {
    std::span<const Value> l = left.row(i);
    const bool lv = left.valid(i);
    for (size_t j = 0; j < right.size(); ++j, ++slot) {
      std::span<const Value> r = right.row(j);
      values.insert(values.end(), l.begin(), l.end());
      values.insert(values.end(), r.begin(), r.end());
      valid[slot] = lv && right.valid(j) && l[*lk] == r[*rk];
    }
  }
  return PaddedTable::FromParts(*std::move(schema), std::move(values),
                                std::move(valid), id);
}

std::vector<size_t> ValidFirstOrder(const PaddedTable& in, size_t key_index) {
  std::vector<size_t> order(in.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (in.valid(a) != in.valid(b)) return in.valid(a);
    return in.row(a)[key_index] < in.row(b)[key_index];
  });
  return order;
}

PaddedTable Gather(const PaddedTable& in, const std::vector<size_t>& order,
                   OperatorId id) {
  const size_t w = in.schema().width();
  std::vector<Value> values;
  values.reserve(order.size() * w);
  std::vector<uint8_t> valid;
  valid.reserve(order.size());
  for (size_t i : order) {
    std::span<const Value> r = in.row(i);
    values.insert(values.end(), r.begin(), r.end());
    valid.push_back(in.valid(i));
  }
  return *PaddedTable::FromParts(in.schema(), std::move(values),
                                 std::move(valid), id);
}

absl::StatusOr<PaddedTable> ObliviousGroupBy(const PaddedTable& in,
                                             const AggSpec& agg,
                                             OperatorId id) {
  absl::StatusOr<size_t> key = in.schema().IndexOf(agg.group_key);
  if (!key.ok()) return key.status();
  size_t sum_col = 0;
  if (agg.function == AggregateFunction::kSum) {
    absl::StatusOr<size_t> c = in.schema().IndexOf(agg.sum_column);
    if (!c.ok()) return c.status();
    sum_col = *c;
  }
  // Output rows are (group key, aggregate).
  absl::StatusOr<Schema> schema =
      Schema::Create({agg.group_key, agg.output_column});
  if (!schema.ok()) return schema.status();

  const std::vector<size_t> order = ValidFirstOrder(in, *key);
  std::vector<Value> values;
  values.reserve(in.size() * 2);
  std::vector<uint8_t> valid(in.size(), 0);
  // One pass over the sorted rows, comparing adjacent keys. The running
  // aggregate restarts at every boundary.
  Value running = 0;
  for (size_t pos = 0; pos < order.size(); ++pos) {
    std::span<const Value> row = in.row(order[pos]);
    const bool genuine = in.valid(order[pos]);
    const bool starts_run =
        pos == 0 || !in.valid(order[pos - 1]) ||
        in.row(order[pos - 1])[*key] != row[*key];
    if (starts_run) running = 0;
    if (genuine) {
      const Value step =
          agg.function == AggregateFunction::kCount ? 1 : row[sum_col];
      if (__builtin_add_overflow(running, step, &running)) {
        return absl::OutOfRangeError(
            absl::StrCat("SUM(", agg.sum_column, ") overflows 64 bits"));
      }
    }
    const bool ends_run =
        pos + 1 == order.size() || !in.valid(order[pos + 1]) ||
        in.row(order[pos + 1])[*key] != row[*key];
    valid[pos] = genuine && ends_run;
    values.push_back(row[*key]);
    values.push_back(running);
  }
  return PaddedTable::FromParts(*std::move(schema), std::move(values),
                                std::move(valid), id);
}

absl::StatusOr<PaddedTable> ObliviousOrderBy(const PaddedTable& in,
                                             const std::string& key,
                                             OperatorId id) {
  absl::StatusOr<size_t> k = in.schema().IndexOf(key);
  if (!k.ok()) return k.status();
  return Gather(in, ValidFirstOrder(in, *k), id);
}

ResultSet ToResult(const PaddedTable& in, LeakageLedger& ledger) {
  ResultSet out = ResultSet::FromPadded(in);
  ledger.RecordFinalResultSize(in.origin(), out.num_rows());
  return out;
}

}  // namespace trimsim
