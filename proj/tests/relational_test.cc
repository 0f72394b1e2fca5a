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

#include <cstdio>
#include <fstream>
#include <string>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"
#include "trimsim/relational.h"

namespace trimsim {
namespace {

using ::testing::ElementsAre;
using ::testing::HasSubstr;
using trimsim::testing::MakeSchema;

std::string TempFile(const std::string& name, const std::string& contents) {
  const std::string path = ::testing::TempDir() + "/" + name;
  std::ofstream(path) << contents;
  return path;
}

TEST(SchemaTest, RejectsDuplicateAndEmptyNames) {
  EXPECT_FALSE(Schema::Create({}).ok());
  EXPECT_FALSE(Schema::Create({"a", ""}).ok());
  absl::StatusOr<Schema> dup = Schema::Create({"a", "b", "a"});
  ASSERT_FALSE(dup.ok());
  EXPECT_THAT(std::string(dup.status().message()), HasSubstr("'a'"));
}

TEST(SchemaTest, IndexOfAndQualify) {
  Schema s = MakeSchema({"id", "key"});
  ASSERT_OK_AND_ASSIGN(size_t k, s.IndexOf("key"));
  EXPECT_EQ(k, 1u);
  EXPECT_EQ(s.IndexOf("nope").status().code(), absl::StatusCode::kNotFound);
  EXPECT_THAT(s.Qualified("t1").columns(), ElementsAre("t1.id", "t1.key"));
}

TEST(SchemaTest, ConcatRejectsClashes) {
  Schema a = MakeSchema({"x", "y"});
  ASSERT_OK_AND_ASSIGN(Schema ab, a.Concat(MakeSchema({"z"})));
  EXPECT_THAT(ab.columns(), ElementsAre("x", "y", "z"));
  EXPECT_FALSE(a.Concat(MakeSchema({"y"})).ok());
}

TEST(TableTest, FromValuesChecksShape) {
  EXPECT_FALSE(Table::FromValues(MakeSchema({"a", "b"}), {1, 2, 3}).ok());
  ASSERT_OK_AND_ASSIGN(Table t,
                       Table::FromValues(MakeSchema({"a", "b"}), {1, 2, 3, 4}));
  EXPECT_EQ(t.num_rows(), 2u);
  EXPECT_EQ(std::vector<Value>(t.row(1).begin(), t.row(1).end()),
            (std::vector<Value>{3, 4}));
}

TEST(TableTest, FromRowsChecksWidth) {
  EXPECT_FALSE(Table::FromRows(MakeSchema({"a"}), {{1}, {2, 3}}).ok());
}

TEST(PaddedTableTest, CountsTrueRows) {
  PaddedTable p = testing::Padded({5, 6, 7, 8}, {1, 0, 1, 1});
  EXPECT_EQ(p.size(), 4u);
  EXPECT_EQ(p.true_count(), 3u);
  EXPECT_FALSE(p.valid(1));
  EXPECT_EQ(p.WithOrigin(9).origin(), 9);
}

TEST(PaddedTableTest, RejectsMismatchedSizes) {
  EXPECT_FALSE(
      PaddedTable::FromParts(MakeSchema({"v"}), {1, 2}, {1}, 0).ok());
}

TEST(PaddedTableTest, NonzeroFlagsMeanValid) {
  ASSERT_OK_AND_ASSIGN(
      PaddedTable p, PaddedTable::FromParts(MakeSchema({"v"}), {1, 2}, {0, 2}, 0));
  EXPECT_EQ(p.true_count(), 1u);
}

TEST(ResultSetTest, FromPaddedKeepsValidRowsInOrder) {
  ResultSet r = ResultSet::FromPadded(testing::Padded({5, 6, 7}, {0, 1, 1}));
  EXPECT_THAT(r.rows(), ElementsAre(ElementsAre(6), ElementsAre(7)));
}

TEST(ResultSetTest, MultisetEquality) {
  ResultSet a = ResultSet::FromPadded(testing::Padded({1, 2, 2}, {1, 1, 1}));
  ResultSet b = ResultSet::FromPadded(testing::Padded({2, 1, 2}, {1, 1, 1}));
  ResultSet c = ResultSet::FromPadded(testing::Padded({2, 1, 1}, {1, 1, 1}));
  EXPECT_TRUE(*MultisetEqual(a, b));
  EXPECT_FALSE(*MultisetEqual(a, c));
  ResultSet other = ResultSet::FromPadded(testing::Padded({1}, {1}, "w"));
  EXPECT_FALSE(MultisetEqual(a, other).ok());
}

TEST(CsvTest, LoadsWithHeaderAndBlankLines) {
  const std::string path =
      TempFile("ok.csv", "a,b\n1,2\n\n 3 , -4\n");
  ASSERT_OK_AND_ASSIGN(Table t, LoadCsv(path, MakeSchema({"a", "b"}), true));
  EXPECT_EQ(t.values(), (std::vector<Value>{1, 2, 3, -4}));
}

TEST(CsvTest, ReportsLineOfBadField) {
  const std::string path = TempFile("bad.csv", "1,2\n3,x\n");
  absl::StatusOr<Table> t = LoadCsv(path, MakeSchema({"a", "b"}));
  ASSERT_FALSE(t.ok());
  EXPECT_THAT(std::string(t.status().message()), HasSubstr("bad.csv:2"));
}

TEST(CsvTest, ReportsWrongFieldCount) {
  const std::string path = TempFile("short.csv", "1,2\n3\n");
  EXPECT_FALSE(LoadCsv(path, MakeSchema({"a", "b"})).ok());
}

TEST(CsvTest, MissingFile) {
  EXPECT_EQ(LoadCsv("/nonexistent/x.csv", MakeSchema({"a"})).status().code(),
            absl::StatusCode::kNotFound);
}

TEST(CsvTest, RoundTrip) {
  ASSERT_OK_AND_ASSIGN(Table t,
                       Table::FromValues(MakeSchema({"a", "b"}), {1, 2, 3, 4}));
  const std::string text = ToCsv(t);
  EXPECT_EQ(text, "a,b\n1,2\n3,4\n");
  ASSERT_OK_AND_ASSIGN(Table back,
                       LoadCsv(TempFile("rt.csv", text), t.schema(), true));
  EXPECT_EQ(back, t);
}

}  // namespace
}  // namespace trimsim
