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

#ifndef TRIMSIM_TESTS_TEST_UTIL_H_
#define TRIMSIM_TESTS_TEST_UTIL_H_

#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "gtest/gtest.h"
#include "trimsim/relational.h"

#define TRIMSIM_CONCAT_INNER(a, b) a##b
#define TRIMSIM_CONCAT(a, b) TRIMSIM_CONCAT_INNER(a, b)

#define ASSERT_OK(expr)                                   \
  do {                                                    \
    const absl::Status _st = (expr);                      \
    ASSERT_TRUE(_st.ok()) << _st.ToString();              \
  } while (0)

#define EXPECT_OK(expr)                                   \
  do {                                                    \
    const absl::Status _st = (expr);                      \
    EXPECT_TRUE(_st.ok()) << _st.ToString();              \
  } while (0)

#define ASSERT_OK_AND_ASSIGN(lhs, expr) \
  ASSERT_OK_AND_ASSIGN_IMPL(TRIMSIM_CONCAT(_statusor_, __LINE__), lhs, expr)

#define ASSERT_OK_AND_ASSIGN_IMPL(tmp, lhs, expr)        \
  auto tmp = (expr);                                     \
  ASSERT_TRUE(tmp.ok()) << tmp.status().ToString();      \
  lhs = *std::move(tmp)

namespace trimsim::testing {

inline Schema MakeSchema(std::vector<std::string> cols) {
  return *Schema::Create(std::move(cols));
}

// Single-column padded table: values with validity flags.
inline PaddedTable Padded(const std::vector<Value>& values,
                          const std::vector<uint8_t>& valid,
                          const std::string& column = "v",
                          OperatorId origin = 0) {
  return *PaddedTable::FromParts(MakeSchema({column}), values, valid, origin);
}

inline std::vector<std::vector<Value>> SortedRows(const ResultSet& r) {
  std::vector<std::vector<Value>> rows = r.rows();
  std::sort(rows.begin(), rows.end());
  return rows;
}

}  // namespace trimsim::testing

#endif  // TRIMSIM_TESTS_TEST_UTIL_H_
