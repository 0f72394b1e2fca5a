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

#include "trimsim/relational.h"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"

namespace trimsim {

absl::StatusOr<Schema> Schema::Create(std::vector<std::string> columns) {
  if (columns.empty()) {
    return absl::InvalidArgumentError("schema needs at least one column");
  }
  std::set<std::string_view> seen;
  for (const std::string& c : columns) {
    if (c.empty()) return absl::InvalidArgumentError("empty column name");
    if (!seen.insert(c).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate column name '", c, "'"));
    }
  }
  return Schema(std::move(columns));
}

absl::StatusOr<size_t> Schema::IndexOf(std::string_view column) const {
  auto it = std::find(columns_.begin(), columns_.end(), column);
  if (it == columns_.end()) {
    return absl::NotFoundError(absl::StrCat("unknown column '", std::string(column),
                                            "' in (",
                                            absl::StrJoin(columns_, ", "),
                                            ")"));
  }
  return static_cast<size_t>(it - columns_.begin());
}

absl::StatusOr<Schema> Schema::Concat(const Schema& other) const {
  std::vector<std::string> all = columns_;
  all.insert(all.end(), other.columns_.begin(), other.columns_.end());
  return Create(std::move(all));
}

Schema Schema::Qualified(std::string_view prefix) const {
  std::vector<std::string> out;
  out.reserve(columns_.size());
  for (const std::string& c : columns_) out.push_back(absl::StrCat(std::string(prefix), ".", c));
  return Schema(std::move(out));
}

absl::StatusOr<Table> Table::FromValues(Schema schema,
                                        std::vector<Value> values) {
  if (values.size() % schema.width() != 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("value count ", values.size(),
                     " is not a multiple of width ", schema.width()));
  }
  Table t(std::move(schema));
  t.values_ = std::move(values);
  return t;
}

absl::StatusOr<Table> Table::FromRows(
    Schema schema, const std::vector<std::vector<Value>>& rows) {
  std::vector<Value> values;
  values.reserve(rows.size() * schema.width());
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != schema.width()) {
      return absl::InvalidArgumentError(
          absl::StrCat("row ", i, " has ", rows[i].size(),
                       " values, schema width is ", schema.width()));
    }
    values.insert(values.end(), rows[i].begin(), rows[i].end());
  }
  return FromValues(std::move(schema), std::move(values));
}

absl::StatusOr<PaddedTable> PaddedTable::FromParts(Schema schema,
                                                   std::vector<Value> values,
                                                   std::vector<uint8_t> valid,
                                                   OperatorId origin) {
  if (values.size() != valid.size() * schema.width()) {
    return absl::InvalidArgumentError(
        absl::StrCat("padded table: ", values.size(), " values for ",
                     valid.size(), " rows of width ", schema.width()));
  }
  PaddedTable t(std::move(schema), origin);
  t.values_ = std::move(values);
  t.valid_ = std::move(valid);
  for (uint8_t& v : t.valid_) v = v != 0;
  return t;
}

size_t PaddedTable::true_count() const {
  return static_cast<size_t>(
      std::count(valid_.begin(), valid_.end(), uint8_t{1}));
}

PaddedTable PaddedTable::WithOrigin(OperatorId origin) const& {
  PaddedTable copy = *this;
  copy.origin_ = origin;
  return copy;
}

PaddedTable PaddedTable::WithOrigin(OperatorId origin) && {
  origin_ = origin;
  return std::move(*this);
}

ResultSet ResultSet::FromTable(const Table& table) {
  ResultSet r(table.schema());
  r.rows_.reserve(table.num_rows());
  for (size_t i = 0; i < table.num_rows(); ++i) r.Add(table.row(i));
  return r;
}

ResultSet ResultSet::FromPadded(const PaddedTable& table) {
  ResultSet r(table.schema());
  for (size_t i = 0; i < table.size(); ++i) {
    if (table.valid(i)) r.Add(table.row(i));
  }
  return r;
}

absl::StatusOr<bool> MultisetEqual(const ResultSet& a, const ResultSet& b) {
  if (!(a.schema() == b.schema())) {
    return absl::InvalidArgumentError("multiset comparison: schema mismatch");
  }
  if (a.num_rows() != b.num_rows()) return false;
  std::vector<std::vector<Value>> x = a.rows();
  std::vector<std::vector<Value>> y = b.rows();
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return x == y;
}

absl::StatusOr<Table> LoadCsv(const std::string& path, const Schema& schema,
                              bool has_header) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open '", path, "'"));
  std::vector<Value> values;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (has_header && line_no == 1) continue;
    absl::string_view text = absl::StripAsciiWhitespace(line);
    if (text.empty()) continue;
    std::vector<absl::string_view> fields = absl::StrSplit(text, ',');
    if (fields.size() != schema.width()) {
      return absl::InvalidArgumentError(
          absl::StrCat(path, ":", line_no, ": expected ", schema.width(),
                       " fields, found ", fields.size()));
    }
    for (absl::string_view f : fields) {
      Value v;
      if (!absl::SimpleAtoi(absl::StripAsciiWhitespace(f), &v)) {
        return absl::InvalidArgumentError(absl::StrCat(
            path, ":", line_no, ": not a 64-bit integer: '", f, "'"));
      }
      values.push_back(v);
    }
  }
  return Table::FromValues(schema, std::move(values));
}

std::string ToCsv(const Schema& schema,
                  const std::vector<std::vector<Value>>& rows) {
  std::string out = absl::StrCat(absl::StrJoin(schema.columns(), ","), "\n");
  for (const auto& row : rows) absl::StrAppend(&out, absl::StrJoin(row, ","), "\n");
  return out;
}

std::string ToCsv(const Table& table) {
  std::string out =
      absl::StrCat(absl::StrJoin(table.schema().columns(), ","), "\n");
  for (size_t i = 0; i < table.num_rows(); ++i) {
    absl::StrAppend(&out, absl::StrJoin(table.row(i), ","), "\n");
  }
  return out;
}

}  // namespace trimsim
