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

#ifndef TRIMSIM_RELATIONAL_H_
#define TRIMSIM_RELATIONAL_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace trimsim {

using Value = int64_t;

// Identifies an operator inside a plan. Resizers reuse the id of the
// operator whose output they trim.
using OperatorId = int;
inline constexpr OperatorId kNoOperator = -1;

// Ordered list of uniquely named 64-bit integer columns.
class Schema {
 public:
  static absl::StatusOr<Schema> Create(std::vector<std::string> columns);

  size_t width() const { return columns_.size(); }
  const std::vector<std::string>& columns() const { return columns_; }
  absl::StatusOr<size_t> IndexOf(std::string_view column) const;

  // Columns of `this` followed by the columns of `other`.
  absl::StatusOr<Schema> Concat(const Schema& other) const;
  // Every column renamed to "<prefix>.<name>".
  Schema Qualified(std::string_view prefix) const;

  friend bool operator==(const Schema&, const Schema&) = default;

 private:
  explicit Schema(std::vector<std::string> columns)
      : columns_(std::move(columns)) {}

  std::vector<std::string> columns_;
};

// Plain relation. Rows are stored row-major in one buffer.
class Table {
 public:
  explicit Table(Schema schema) : schema_(std::move(schema)) {}
  // `values.size()` must be a multiple of the schema width.
  static absl::StatusOr<Table> FromValues(Schema schema,
                                          std::vector<Value> values);
  static absl::StatusOr<Table> FromRows(
      Schema schema, const std::vector<std::vector<Value>>& rows);

  const Schema& schema() const { return schema_; }
  size_t num_rows() const { return values_.size() / schema_.width(); }
  std::span<const Value> row(size_t i) const {
    return {values_.data() + i * schema_.width(), schema_.width()};
  }
  const std::vector<Value>& values() const { return values_; }

  friend bool operator==(const Table&, const Table&) = default;

 private:
  Schema schema_;
  std::vector<Value> values_;
};

// Output of an oblivious operator: N rows of which T are genuine (valid
// flag 1) and the rest are fillers. N is public; the validity column and T
// are secret and must never reach the leakage ledger.
class PaddedTable {
 public:
  explicit PaddedTable(Schema schema, OperatorId origin = kNoOperator)
      : schema_(std::move(schema)), origin_(origin) {}
  static absl::StatusOr<PaddedTable> FromParts(Schema schema,
                                               std::vector<Value> values,
                                               std::vector<uint8_t> valid,
                                               OperatorId origin);

  const Schema& schema() const { return schema_; }
  // Public size N.
  size_t size() const { return valid_.size(); }
  // Secret true count T.
  size_t true_count() const;
  bool valid(size_t i) const { return valid_[i] != 0; }
  std::span<const uint8_t> validity() const { return valid_; }
  std::span<const Value> row(size_t i) const {
    return {values_.data() + i * schema_.width(), schema_.width()};
  }
  const std::vector<Value>& values() const { return values_; }
  OperatorId origin() const { return origin_; }
  PaddedTable WithOrigin(OperatorId origin) const&;
  PaddedTable WithOrigin(OperatorId origin) &&;

 private:
  Schema schema_;
  std::vector<Value> values_;
  std::vector<uint8_t> valid_;
  OperatorId origin_;
};

// Multiset of genuine rows; fillers removed.
class ResultSet {
 public:
  explicit ResultSet(Schema schema) : schema_(std::move(schema)) {}
  static ResultSet FromTable(const Table& table);
  // Keeps exactly the valid rows, in order.
  static ResultSet FromPadded(const PaddedTable& table);

  const Schema& schema() const { return schema_; }
  size_t num_rows() const { return rows_.size(); }
  const std::vector<std::vector<Value>>& rows() const { return rows_; }
  void Add(std::span<const Value> row) { rows_.emplace_back(row.begin(), row.end()); }

 private:
  Schema schema_;
  std::vector<std::vector<Value>> rows_;
};

// Order-insensitive multiset comparison; error on schema mismatch.
absl::StatusOr<bool> MultisetEqual(const ResultSet& a, const ResultSet& b);

// Reads comma-separated decimal integers. With `has_header` the first line
// is skipped. Blank lines are ignored. Errors name the 1-based line.
absl::StatusOr<Table> LoadCsv(const std::string& path, const Schema& schema,
                              bool has_header = false);
// Writes `table` as CSV with a header row of column names.
std::string ToCsv(const Schema& schema,
                  const std::vector<std::vector<Value>>& rows);
std::string ToCsv(const Table& table);

}  // namespace trimsim

#endif  // TRIMSIM_RELATIONAL_H_
