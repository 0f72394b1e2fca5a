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

#include "trimsim/plan.h"

#include <algorithm>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "trimsim/distributions.h"
#include "trimsim/resizer.h"
#include "trimsim/synthetic.h"

namespace trimsim {
namespace {

size_t Arity(NodeKind kind) {
  switch (kind) {
    case NodeKind::kScan:
      return 0;
    case NodeKind::kJoin:
      return 2;
    default:
      return 1;
  }
}

absl::Status ValidateNode(const PlanNode& node, bool parent_is_resizer) {
  const std::string name(NodeKindName(node.kind));
  if (node.children.size() != Arity(node.kind)) {
    return absl::InvalidArgumentError(
        absl::StrCat(name, " takes ", Arity(node.kind), " input(s), got ",
                     node.children.size()));
  }
  switch (node.kind) {
    case NodeKind::kScan:
      if (node.table.empty()) {
        return absl::InvalidArgumentError("scan without a table name");
      }
      break;
    case NodeKind::kFilter:
      if (node.predicate.conjuncts.empty()) {
        return absl::InvalidArgumentError("filter needs at least one conjunct");
      }
      break;
    case NodeKind::kJoin:
      if (node.left_key.empty() || node.right_key.empty()) {
        return absl::InvalidArgumentError("join needs both key columns");
      }
      break;
    case NodeKind::kGroupBy:
      if (node.agg.group_key.empty() || node.agg.output_column.empty()) {
        return absl::InvalidArgumentError(
            "group-by needs a key and an output column");
      }
      if (node.agg.function == AggregateFunction::kSum &&
          node.agg.sum_column.empty()) {
        return absl::InvalidArgumentError("SUM needs a column");
      }
      break;
    case NodeKind::kOrderBy:
      if (node.order_key.empty()) {
        return absl::InvalidArgumentError("order-by needs a key column");
      }
      break;
    case NodeKind::kResizer:
      if (parent_is_resizer) {
        return absl::InvalidArgumentError("resizer directly above a resizer");
      }
      if (absl::Status st = node.strategy.Validate(); !st.ok()) return st;
      break;
  }
  for (const PlanNode& child : node.children) {
    if (absl::Status st =
            ValidateNode(child, node.kind == NodeKind::kResizer);
        !st.ok()) {
      return st;
    }
  }
  return absl::OkStatus();
}

void AssignIds(PlanNode& node, OperatorId& next) {
  for (PlanNode& child : node.children) AssignIds(child, next);
  node.id = node.kind == NodeKind::kResizer ? node.children[0].id : next++;
}

size_t CountNodes(const PlanNode& node, std::optional<NodeKind> kind) {
  size_t n = !kind || node.kind == *kind ? 1 : 0;
  for (const PlanNode& child : node.children) n += CountNodes(child, kind);
  return n;
}

PlanNode Strip(const PlanNode& node) {
  if (node.kind == NodeKind::kResizer) return Strip(node.children[0]);
  PlanNode out = node;
  out.children.clear();
  for (const PlanNode& child : node.children) out.children.push_back(Strip(child));
  return out;
}

bool Matches(PlacementKind rule, NodeKind kind) {
  switch (rule) {
    case PlacementKind::kNone:
      return false;
    case PlacementKind::kFullyRevealed:
    case PlacementKind::kAfterAll:
      return true;
    case PlacementKind::kAfterJoins:
      return kind == NodeKind::kJoin;
    case PlacementKind::kAfterGroupBys:
      return kind == NodeKind::kGroupBy;
  }
  return false;
}

PlanNode Place(const PlanNode& node, const PlacementKind rule,
               const TrimStrategy& strategy, bool is_root,
               bool parent_is_resizer) {
  PlanNode out = node;
  out.children.clear();
  const bool resizer = node.kind == NodeKind::kResizer;
  for (const PlanNode& child : node.children) {
    out.children.push_back(Place(child, rule, strategy, false, resizer));
  }
  if (resizer || is_root || parent_is_resizer || !Matches(rule, node.kind)) {
    return out;
  }
  return PlanNode::Resizer(strategy, std::move(out));
}

absl::Status CheckedAdd(uint64_t& total, uint64_t v) {
  if (__builtin_add_overflow(total, v, &total)) {
    return absl::OutOfRangeError("tuple total overflows 64 bits");
  }
  return absl::OkStatus();
}

// --- oblivious execution ---------------------------------------------------

struct ExecContext {
  const Catalog& catalog;
  const ExecOptions& options;
  LeakageLedger ledger;
  std::vector<OperatorStat> stats;
};

absl::StatusOr<Table> QualifiedTable(const Catalog& catalog,
                                     const std::string& name) {
  auto it = catalog.find(name);
  if (it == catalog.end()) {
    return absl::NotFoundError(absl::StrCat("unknown table '", name, "'"));
  }
  return Table::FromValues(it->second.schema().Qualified(name),
                           it->second.values());
}

absl::StatusOr<PaddedTable> Eval(const PlanNode& node, ExecContext& ctx) {
  if (node.kind == NodeKind::kResizer) {
    absl::StatusOr<PaddedTable> in = Eval(node.children[0], ctx);
    if (!in.ok()) return in.status();
    ResizerStreams streams = ResizerStreams::For(ctx.options.seed, node.id);
    absl::StatusOr<PaddedTable> out =
        Resize(*in, node.strategy, streams, ctx.ledger);
    if (!out.ok()) return out.status();
    OperatorStat& below = ctx.stats.back();
    below.delivered = out->size();
    below.resized = node.strategy.kind != TrimKind::kNone;
    return out;
  }

  std::vector<PaddedTable> inputs;
  for (const PlanNode& child : node.children) {
    absl::StatusOr<PaddedTable> in = Eval(child, ctx);
    if (!in.ok()) return in.status();
    inputs.push_back(*std::move(in));
  }
  absl::StatusOr<PaddedTable> out = absl::InternalError("unreachable");
  switch (node.kind) {
    case NodeKind::kScan: {
      absl::StatusOr<Table> table = QualifiedTable(ctx.catalog, node.table);
      if (!table.ok()) return table.status();
      out = ObliviousScan(*table, node.id);
      ctx.ledger.RecordBaseSize(node.id, out->size());
      break;
    }
    case NodeKind::kFilter:
      out = ObliviousFilter(inputs[0], node.predicate, node.id);
      break;
    case NodeKind::kJoin:
      out = ObliviousJoin(inputs[0], inputs[1], node.left_key, node.right_key,
                          node.id, ctx.options.max_join_rows);
      break;
    case NodeKind::kGroupBy:
      out = ObliviousGroupBy(inputs[0], node.agg, node.id);
      break;
    case NodeKind::kOrderBy:
      out = ObliviousOrderBy(inputs[0], node.order_key, node.id);
      break;
    case NodeKind::kResizer:
      break;
  }
  if (!out.ok()) return out.status();
  OperatorStat stat;
  stat.id = node.id;
  stat.kind = node.kind;
  stat.n = out->size();
  stat.delivered = stat.n;
  stat.t = out->true_count();
  ctx.stats.push_back(stat);
  return out;
}

absl::StatusOr<uint64_t> EvalSizes(
    const PlanNode& node, const std::map<std::string, uint64_t>& base_sizes,
    std::vector<OperatorStat>& stats) {
  if (node.kind == NodeKind::kResizer) {
    return absl::FailedPreconditionError(
        "size-only execution needs a plan without resizers");
  }
  std::vector<uint64_t> in;
  for (const PlanNode& child : node.children) {
    absl::StatusOr<uint64_t> n = EvalSizes(child, base_sizes, stats);
    if (!n.ok()) return n.status();
    in.push_back(*n);
  }
  uint64_t n = 0;
  if (node.kind == NodeKind::kScan) {
    auto it = base_sizes.find(node.table);
    if (it == base_sizes.end()) {
      return absl::NotFoundError(
          absl::StrCat("unknown table '", node.table, "'"));
    }
    n = it->second;
  } else if (node.kind == NodeKind::kJoin) {
    if (__builtin_mul_overflow(in[0], in[1], &n)) {
      return absl::OutOfRangeError(absl::StrCat(
          "join output size ", in[0], " x ", in[1], " overflows 64 bits"));
    }
  } else {
    n = in[0];
  }
  OperatorStat stat;
  stat.id = node.id;
  stat.kind = node.kind;
  stat.n = n;
  stat.delivered = n;
  stats.push_back(stat);
  return n;
}

// --- plaintext engine ------------------------------------------------------

struct Relation {
  Schema schema;
  std::vector<std::vector<Value>> rows;
};

absl::StatusOr<Relation> EvalPlain(const PlanNode& node,
                                   const Catalog& catalog) {
  if (node.kind == NodeKind::kResizer) {
    return EvalPlain(node.children[0], catalog);
  }
  std::vector<Relation> in;
  for (const PlanNode& child : node.children) {
    absl::StatusOr<Relation> r = EvalPlain(child, catalog);
    if (!r.ok()) return r.status();
    in.push_back(*std::move(r));
  }
  switch (node.kind) {
    case NodeKind::kScan: {
      absl::StatusOr<Table> table = QualifiedTable(catalog, node.table);
      if (!table.ok()) return table.status();
      Relation out{table->schema(), {}};
      for (size_t i = 0; i < table->num_rows(); ++i) {
        std::span<const Value> r = table->row(i);
        out.rows.emplace_back(r.begin(), r.end());
      }
      return out;
    }
    case NodeKind::kFilter: {
      std::vector<std::pair<size_t, Value>> tests;
      for (const EqualityTest& t : node.predicate.conjuncts) {
        absl::StatusOr<size_t> col = in[0].schema.IndexOf(t.column);
        if (!col.ok()) return col.status();
        tests.emplace_back(*col, t.constant);
      }
      Relation out{in[0].schema, {}};
      for (auto& row : in[0].rows) {
        bool keep = true;
        for (const auto& [col, c] : tests) keep = keep && row[col] == c;
        if (keep) out.rows.push_back(std::move(row));
      }
      return out;
    }
    case NodeKind::kJoin: {
      absl::StatusOr<size_t> lk = in[0].schema.IndexOf(node.left_key);
      if (!lk.ok()) return lk.status();
      absl::StatusOr<size_t> rk = in[1].schema.IndexOf(node.right_key);
      if (!rk.ok()) return rk.status();
      absl::StatusOr<Schema> schema = in[0].schema.Concat(in[1].schema);
      if (!schema.ok()) return schema.status();
      Relation out{*std::move(schema), {}};
      for (const auto& l : in[0].rows) {
        for (const auto& r : in[1].rows) {
          if (l[*lk] != r[*rk]) continue;
          std::vector<Value> row = l;
          row.insert(row.end(), r.begin(), r.end());
          out.rows.push_back(std::move(row));
        }
      }
      return out;
    }
    case NodeKind::kGroupBy: {
      absl::StatusOr<size_t> key = in[0].schema.IndexOf(node.agg.group_key);
      if (!key.ok()) return key.status();
      size_t sum_col = 0;
      if (node.agg.function == AggregateFunction::kSum) {
        absl::StatusOr<size_t> c = in[0].schema.IndexOf(node.agg.sum_column);
        if (!c.ok()) return c.status();
        sum_col = *c;
      }
      absl::StatusOr<Schema> schema =
          Schema::Create({node.agg.group_key, node.agg.output_column});
      if (!schema.ok()) return schema.status();
      std::map<Value, Value> groups;
      for (const auto& row : in[0].rows) {
        const Value step = node.agg.function == AggregateFunction::kCount
                               ? 1
                               : row[sum_col];
        Value& acc = groups[row[*key]];
        if (__builtin_add_overflow(acc, step, &acc)) {
          return absl::OutOfRangeError(
              absl::StrCat("SUM(", node.agg.sum_column, ") overflows 64 bits"));
        }
      }
      Relation out{*std::move(schema), {}};
      for (const auto& [k, v] : groups) out.rows.push_back({k, v});
      return out;
    }
    case NodeKind::kOrderBy: {
      absl::StatusOr<size_t> key = in[0].schema.IndexOf(node.order_key);
      if (!key.ok()) return key.status();
      Relation out = std::move(in[0]);
      std::stable_sort(out.rows.begin(), out.rows.end(),
                       [k = *key](const auto& a, const auto& b) {
                         return a[k] < b[k];
                       });
      return out;
    }
    case NodeKind::kResizer:
      break;
  }
  return absl::InternalError("unhandled node kind");
}

// --- cost model ------------------------------------------------------------

using u128 = unsigned __int128;

struct CostSizes {
  u128 delivered = 0;
  u128 t = 0;
};

struct CostContext {
  const std::map<std::string, uint64_t>& base_sizes;
  double s;
  double f;
  bool trim_root;
  u128 total = 0;
};

absl::StatusOr<u128> Target(double s, u128 count) {
  if (count > (u128{1} << 62)) {
    return absl::OutOfRangeError("true count too large for the cost model");
  }
  return static_cast<u128>(TargetCount(s, static_cast<int64_t>(count)));
}

absl::StatusOr<CostSizes> EvalCost(const PlanNode& node, CostContext& ctx,
                                   bool is_root, bool resized) {
  if (node.kind == NodeKind::kResizer) {
    return EvalCost(node.children[0], ctx, false,
                    node.strategy.kind != TrimKind::kNone);
  }
  std::vector<CostSizes> in;
  for (const PlanNode& child : node.children) {
    absl::StatusOr<CostSizes> c = EvalCost(child, ctx, false, false);
    if (!c.ok()) return c.status();
    in.push_back(*c);
  }
  u128 n = 0;
  absl::StatusOr<u128> t = u128{0};
  switch (node.kind) {
    case NodeKind::kScan: {
      auto it = ctx.base_sizes.find(node.table);
      if (it == ctx.base_sizes.end()) {
        return absl::NotFoundError(
            absl::StrCat("unknown table '", node.table, "'"));
      }
      n = it->second;
      t = n;
      break;
    }
    case NodeKind::kJoin: {
      n = in[0].delivered * in[1].delivered;
      if (in[0].delivered != 0 && n / in[0].delivered != in[1].delivered) {
        return absl::OutOfRangeError("join size overflows 128 bits");
      }
      t = Target(ctx.s, in[0].t * in[1].t);
      break;
    }
    case NodeKind::kFilter:
    case NodeKind::kGroupBy:
      n = in[0].delivered;
      t = Target(ctx.s, in[0].t);
      break;
    case NodeKind::kOrderBy:
      n = in[0].delivered;
      t = in[0].t;
      break;
    case NodeKind::kResizer:
      break;
  }
  if (!t.ok()) return t.status();
  CostSizes out{n, std::min(*t, n)};
  if (resized || (is_root && ctx.trim_root)) {
    out.delivered =
        out.t + RoundToCount(ctx.f * static_cast<double>(n - out.t));
  }
  ctx.total += out.delivered;
  if (ctx.total < out.delivered) {
    return absl::OutOfRangeError("tuple total overflows 128 bits");
  }
  return out;
}

absl::StatusOr<Plan> Finish(PlanNode root) { return Plan::Create(std::move(root)); }

PlanNode FilteredScan(const std::string& table, bool filtered) {
  PlanNode scan = PlanNode::Scan(table);
  if (!filtered) return scan;
  return PlanNode::Filter({{{absl::StrCat(table, ".flt"), kFilterMatch}}},
                          std::move(scan));
}

PlanNode ChainNode(int tables, const std::vector<bool>& filtered) {
  auto flag = [&](int i) { return !filtered.empty() && filtered[i]; };
  PlanNode acc = FilteredScan("t1", flag(0));
  for (int i = 1; i < tables; ++i) {
    const std::string right = absl::StrCat("t", i + 1);
    acc = PlanNode::Join(absl::StrCat("t", i, ".kb"),
                         absl::StrCat(right, ".ka"), std::move(acc),
                         FilteredScan(right, flag(i)));
  }
  return acc;
}

}  // namespace

std::string_view NodeKindName(NodeKind kind) {
  switch (kind) {
    case NodeKind::kScan:
      return "scan";
    case NodeKind::kFilter:
      return "filter";
    case NodeKind::kJoin:
      return "join";
    case NodeKind::kGroupBy:
      return "groupby";
    case NodeKind::kOrderBy:
      return "orderby";
    case NodeKind::kResizer:
      return "resizer";
  }
  return "?";
}

PlanNode PlanNode::Scan(std::string table) {
  PlanNode n;
  n.kind = NodeKind::kScan;
  n.table = std::move(table);
  return n;
}

PlanNode PlanNode::Filter(PredicateSpec pred, PlanNode child) {
  PlanNode n;
  n.kind = NodeKind::kFilter;
  n.predicate = std::move(pred);
  n.children.push_back(std::move(child));
  return n;
}

PlanNode PlanNode::Join(std::string left_key, std::string right_key,
                        PlanNode left, PlanNode right) {
  PlanNode n;
  n.kind = NodeKind::kJoin;
  n.left_key = std::move(left_key);
  n.right_key = std::move(right_key);
  n.children.push_back(std::move(left));
  n.children.push_back(std::move(right));
  return n;
}

PlanNode PlanNode::GroupBy(AggSpec agg, PlanNode child) {
  PlanNode n;
  n.kind = NodeKind::kGroupBy;
  n.agg = std::move(agg);
  n.children.push_back(std::move(child));
  return n;
}

PlanNode PlanNode::OrderBy(std::string key, PlanNode child) {
  PlanNode n;
  n.kind = NodeKind::kOrderBy;
  n.order_key = std::move(key);
  n.children.push_back(std::move(child));
  return n;
}

PlanNode PlanNode::Resizer(TrimStrategy strategy, PlanNode child) {
  PlanNode n;
  n.kind = NodeKind::kResizer;
  n.strategy = std::move(strategy);
  n.children.push_back(std::move(child));
  return n;
}

absl::StatusOr<Plan> Plan::Create(PlanNode root) {
  if (root.kind == NodeKind::kResizer) {
    return absl::InvalidArgumentError(
        "the root operator cannot be followed by a resizer");
  }
  if (absl::Status st = ValidateNode(root, false); !st.ok()) return st;
  OperatorId next = 0;
  AssignIds(root, next);
  return Plan(std::move(root));
}

size_t Plan::size() const { return CountNodes(root_, std::nullopt); }

size_t Plan::Count(NodeKind kind) const { return CountNodes(root_, kind); }

Plan Plan::Stripped() const { return Plan(Strip(root_)); }

std::string_view PlacementKindName(PlacementKind kind) {
  switch (kind) {
    case PlacementKind::kNone:
      return "none";
    case PlacementKind::kFullyRevealed:
      return "fully-revealed";
    case PlacementKind::kAfterAll:
      return "after-all";
    case PlacementKind::kAfterJoins:
      return "after-joins";
    case PlacementKind::kAfterGroupBys:
      return "after-groupbys";
  }
  return "?";
}

absl::StatusOr<PlacementKind> ParsePlacementKind(std::string_view name) {
  for (PlacementKind k :
       {PlacementKind::kNone, PlacementKind::kFullyRevealed,
        PlacementKind::kAfterAll, PlacementKind::kAfterJoins,
        PlacementKind::kAfterGroupBys}) {
    if (PlacementKindName(k) == name) return k;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown placement rule '", std::string(name), "'"));
}

absl::StatusOr<Plan> PlaceResizers(const Plan& plan,
                                   const PlacementRule& rule) {
  if (rule.kind == PlacementKind::kNone) return plan;
  TrimStrategy strategy = rule.strategy;
  if (rule.kind == PlacementKind::kFullyRevealed) {
    strategy = TrimStrategy::Counter(FixedFractionParams{0});
  }
  if (absl::Status st = strategy.Validate(); !st.ok()) return st;
  return Plan::Create(Place(plan.root(), rule.kind, strategy, true, false));
}

absl::StatusOr<Execution> Execute(const Plan& plan, const Catalog& catalog,
                                  const ExecOptions& options) {
  ExecContext ctx{catalog, options, {}, {}};
  absl::StatusOr<PaddedTable> out = Eval(plan.root(), ctx);
  if (!out.ok()) return out.status();
  Execution exec{ToResult(*out, ctx.ledger), std::move(ctx.ledger), {}};
  exec.stats.operators = std::move(ctx.stats);
  for (const OperatorStat& s : exec.stats.operators) {
    if (absl::Status st = CheckedAdd(exec.stats.total, s.delivered); !st.ok()) {
      return st;
    }
  }
  return exec;
}

absl::StatusOr<ExecStats> ExecuteSizes(
    const Plan& plan, const std::map<std::string, uint64_t>& base_sizes) {
  ExecStats stats;
  absl::StatusOr<uint64_t> root = EvalSizes(plan.root(), base_sizes,
                                            stats.operators);
  if (!root.ok()) return root.status();
  for (const OperatorStat& s : stats.operators) {
    if (absl::Status st = CheckedAdd(stats.total, s.delivered); !st.ok()) {
      return st;
    }
  }
  return stats;
}

absl::StatusOr<ResultSet> ExecutePlaintext(const Plan& plan,
                                           const Catalog& catalog) {
  absl::StatusOr<Relation> rel = EvalPlain(plan.root(), catalog);
  if (!rel.ok()) return rel.status();
  ResultSet out(rel->schema);
  for (const auto& row : rel->rows) out.Add(row);
  return out;
}

absl::StatusOr<unsigned __int128> CostModel(
    const Plan& plan, const std::map<std::string, uint64_t>& base_sizes,
    double s, double f, const CostOptions& options) {
  if (!(s > 0 && s <= 1)) {
    return absl::InvalidArgumentError("selectivity must lie in (0, 1]");
  }
  if (!(f >= 0 && f <= 1)) {
    return absl::InvalidArgumentError("filler fraction must lie in [0, 1]");
  }
  const bool trims = plan.Count(NodeKind::kResizer) > 0;
  CostContext ctx{base_sizes, s, f, options.trim_root && trims};
  absl::StatusOr<CostSizes> root = EvalCost(plan.root(), ctx, true, false);
  if (!root.ok()) return root.status();
  return ctx.total;
}

std::string Uint128ToString(unsigned __int128 v) {
  if (v == 0) return "0";
  std::string out;
  while (v > 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

absl::StatusOr<Plan> ChainPlan(int tables, const std::vector<bool>& filtered) {
  if (tables < 1) return absl::InvalidArgumentError("need at least one table");
  if (!filtered.empty() && filtered.size() != static_cast<size_t>(tables)) {
    return absl::InvalidArgumentError("one filter flag per table");
  }
  return Finish(ChainNode(tables, filtered));
}

absl::StatusOr<Plan> ThreeJoinPlan() { return ChainPlan(4, {}); }

absl::StatusOr<Plan> ComorbidityPlan() {
  AggSpec agg;
  agg.group_key = "t1.grp";
  PlanNode grouped = PlanNode::GroupBy(agg, FilteredScan("t1", true));
  return Finish(PlanNode::OrderBy(agg.output_column, std::move(grouped)));
}

absl::StatusOr<Plan> DosagePlan() { return ChainPlan(2, {true, true}); }

absl::StatusOr<Plan> AspirinCountPlan() {
  AggSpec agg;
  agg.group_key = "t1.grp";
  return Finish(PlanNode::GroupBy(agg, ChainNode(2, {true, true})));
}

absl::StatusOr<Plan> NamedPlan(std::string_view name) {
  if (name == "three_join") return ThreeJoinPlan();
  if (name == "comorbidity") return ComorbidityPlan();
  if (name == "dosage") return DosagePlan();
  if (name == "aspirin_count") return AspirinCountPlan();
  return absl::NotFoundError(
      absl::StrCat("unknown plan '", std::string(name), "'"));
}

}  // namespace trimsim
