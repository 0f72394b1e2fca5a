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

#ifndef TRIMSIM_PLAN_H_
#define TRIMSIM_PLAN_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "trimsim/ledger.h"
#include "trimsim/operators.h"
#include "trimsim/relational.h"
#include "trimsim/strategy.h"

namespace trimsim {

enum class NodeKind { kScan, kFilter, kJoin, kGroupBy, kOrderBy, kResizer };

std::string_view NodeKindName(NodeKind kind);

struct PlanNode {
  NodeKind kind = NodeKind::kScan;
  // Post-order position among non-resizer nodes. A resizer shares the id
  // of the operator below it.
  OperatorId id = kNoOperator;

  std::string table;           // scan
  PredicateSpec predicate;     // filter
  std::string left_key;        // join
  std::string right_key;       // join
  AggSpec agg;                 // groupby
  std::string order_key;       // orderby
  TrimStrategy strategy;       // resizer

  std::vector<PlanNode> children;

  static PlanNode Scan(std::string table);
  static PlanNode Filter(PredicateSpec pred, PlanNode child);
  static PlanNode Join(std::string left_key, std::string right_key,
                       PlanNode left, PlanNode right);
  static PlanNode GroupBy(AggSpec agg, PlanNode child);
  static PlanNode OrderBy(std::string key, PlanNode child);
  static PlanNode Resizer(TrimStrategy strategy, PlanNode child);
};

// A validated tree with ids assigned.
class Plan {
 public:
  static absl::StatusOr<Plan> Create(PlanNode root);

  const PlanNode& root() const { return root_; }
  // Number of nodes, resizers included.
  size_t size() const;
  size_t Count(NodeKind kind) const;
  // Non-resizer operators.
  size_t num_operators() const { return size() - Count(NodeKind::kResizer); }
  // Same tree without resizer nodes.
  Plan Stripped() const;

 private:
  explicit Plan(PlanNode root) : root_(std::move(root)) {}
  PlanNode root_;
};

enum class PlacementKind {
  kNone,
  kFullyRevealed,
  kAfterAll,
  kAfterJoins,
  kAfterGroupBys,
};

std::string_view PlacementKindName(PlacementKind kind);
absl::StatusOr<PlacementKind> ParsePlacementKind(std::string_view name);

struct PlacementRule {
  PlacementKind kind = PlacementKind::kNone;
  // Ignored for none and fully-revealed.
  TrimStrategy strategy;
};

// Inserts a resizer above every matching non-root operator that does not
// already have one.
absl::StatusOr<Plan> PlaceResizers(const Plan& plan, const PlacementRule& rule);

using Catalog = std::map<std::string, Table>;

struct OperatorStat {
  OperatorId id = kNoOperator;
  NodeKind kind = NodeKind::kScan;
  uint64_t n = 0;          // output size of the operator itself
  uint64_t delivered = 0;  // size handed to the parent (after a resizer)
  // Secret true count; absent in size-only runs.
  std::optional<uint64_t> t;
  bool resized = false;
};

struct ExecStats {
  // Post-order.
  std::vector<OperatorStat> operators;
  // Sum of delivered sizes over all operators.
  uint64_t total = 0;
};

struct ExecOptions {
  uint64_t seed = 0;
  uint64_t max_join_rows = kDefaultMaxJoinRows;
};

struct Execution {
  ResultSet result;
  LeakageLedger ledger;
  ExecStats stats;
};

absl::StatusOr<Execution> Execute(const Plan& plan, const Catalog& catalog,
                                  const ExecOptions& options);

// Padded sizes only. Valid for plans without resizers, where every size is
// a function of the base sizes.
absl::StatusOr<ExecStats> ExecuteSizes(
    const Plan& plan, const std::map<std::string, uint64_t>& base_sizes);

// Textbook evaluation with resizers ignored.
absl::StatusOr<ResultSet> ExecutePlaintext(const Plan& plan,
                                           const Catalog& catalog);

struct CostOptions {
  // Size the root as if it were trimmed too (only when the plan has
  // resizers). Off, the total matches Execute's stats.
  bool trim_root = true;
};

// Expected tuple count: every resized operator delivers T + f(N - T),
// rounded as a FixedFraction resizer rounds. Filter true counts are s times
// the input true count, join true counts s times the product of the input
// true counts. Scans have T = N, order-by keeps T.
absl::StatusOr<unsigned __int128> CostModel(
    const Plan& plan, const std::map<std::string, uint64_t>& base_sizes,
    double s, double f, const CostOptions& options = {});

std::string Uint128ToString(unsigned __int128 v);

// Left-deep chain t1 join t2 join ... on t_i.kb = t_{i+1}.ka over the synthetic
// tables, with optional "flt = 1" filters per table.
absl::StatusOr<Plan> ChainPlan(int tables, const std::vector<bool>& filtered);
absl::StatusOr<Plan> ThreeJoinPlan();
// Shapes of the clinical harness queries over synthetic tables.
absl::StatusOr<Plan> ComorbidityPlan();
absl::StatusOr<Plan> DosagePlan();
absl::StatusOr<Plan> AspirinCountPlan();
absl::StatusOr<Plan> NamedPlan(std::string_view name);

}  // namespace trimsim

#endif  // TRIMSIM_PLAN_H_
