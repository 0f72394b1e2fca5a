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

#include "trimsim/config.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "json.hpp"
#include "trimsim/distributions.h"

namespace trimsim {
namespace {

using Json = nlohmann::json;

absl::Status Bad(const std::string& where, const std::string& what) {
  return absl::InvalidArgumentError(absl::StrCat("config: ", where, ": ", what));
}

std::string Child(const std::string& where, const std::string& key) {
  return where.empty() ? key : absl::StrCat(where, ".", key);
}

std::string Child(const std::string& where, size_t index) {
  return absl::StrCat(where, "[", index, "]");
}

absl::Status RequireObject(const Json& j, const std::string& where) {
  if (!j.is_object()) return Bad(where, "expected an object");
  return absl::OkStatus();
}

absl::Status CheckKeys(const Json& j, const std::string& where,
                       const std::set<std::string>& allowed) {
  if (absl::Status st = RequireObject(j, where); !st.ok()) return st;
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) {
      return Bad(Child(where, key),
                 absl::StrCat("unknown key (expected one of: ",
                              absl::StrJoin(allowed, ", "), ")"));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<uint64_t> AsU64(const Json& j, const std::string& where) {
  if (j.is_number_unsigned()) return j.get<uint64_t>();
  if (j.is_number_integer()) {
    const int64_t v = j.get<int64_t>();
    if (v < 0) return Bad(where, "must be >= 0");
    return static_cast<uint64_t>(v);
  }
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (v >= 0 && v < 1.8446744073709552e19 && std::floor(v) == v) {
      return static_cast<uint64_t>(v);
    }
  }
  return Bad(where, "expected a non-negative integer");
}

absl::StatusOr<int64_t> AsI64(const Json& j, const std::string& where) {
  if (j.is_number_integer() && !j.is_number_unsigned()) return j.get<int64_t>();
  absl::StatusOr<uint64_t> u = AsU64(j, where);
  if (!u.ok()) return Bad(where, "expected an integer");
  if (*u > static_cast<uint64_t>(INT64_MAX)) return Bad(where, "too large");
  return static_cast<int64_t>(*u);
}

absl::StatusOr<double> AsDouble(const Json& j, const std::string& where) {
  if (!j.is_number()) return Bad(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) return Bad(where, "must be finite");
  return v;
}

absl::StatusOr<std::string> AsString(const Json& j, const std::string& where) {
  if (!j.is_string()) return Bad(where, "expected a string");
  return j.get<std::string>();
}

absl::StatusOr<bool> AsBool(const Json& j, const std::string& where) {
  if (!j.is_boolean()) return Bad(where, "expected true or false");
  return j.get<bool>();
}

template <typename T, typename F>
absl::StatusOr<std::vector<T>> AsList(const Json& j, const std::string& where,
                                      F each) {
  std::vector<T> out;
  if (!j.is_array()) {
    // A scalar is a one-element list.
    absl::StatusOr<T> v = each(j, where);
    if (!v.ok()) return v.status();
    out.push_back(*std::move(v));
    return out;
  }
  for (size_t i = 0; i < j.size(); ++i) {
    absl::StatusOr<T> v = each(j[i], Child(where, i));
    if (!v.ok()) return v.status();
    out.push_back(*std::move(v));
  }
  return out;
}

#define TRIMSIM_ASSIGN_OR_RETURN(lhs, expr) \
  TRIMSIM_ASSIGN_OR_RETURN_IMPL(TRIMSIM_CONCAT(_st_, __LINE__), lhs, expr)
#define TRIMSIM_CONCAT_INNER(a, b) a##b
#define TRIMSIM_CONCAT(a, b) TRIMSIM_CONCAT_INNER(a, b)
#define TRIMSIM_ASSIGN_OR_RETURN_IMPL(tmp, lhs, expr) \
  auto tmp = (expr);                                  \
  if (!tmp.ok()) return tmp.status();                 \
  lhs = *std::move(tmp)

#define TRIMSIM_RETURN_IF_ERROR(expr)        \
  do {                                       \
    if (absl::Status _st = (expr); !_st.ok()) \
      return _st;                            \
  } while (0)

absl::StatusOr<TrimStrategy> StrategyFromJson(const Json& j,
                                              const std::string& where) {
  TRIMSIM_RETURN_IF_ERROR(RequireObject(j, where));
  if (!j.contains("kind")) return Bad(where, "missing \"kind\"");
  TRIMSIM_ASSIGN_OR_RETURN(const std::string kind,
                           AsString(j["kind"], Child(where, "kind")));
  TrimStrategy s;
  if (kind == "none") {
    TRIMSIM_RETURN_IF_ERROR(CheckKeys(j, where, {"kind"}));
    return s;
  } else if (kind == "coin-toss") {
    s.kind = TrimKind::kCoinToss;
  } else if (kind == "counter") {
    s.kind = TrimKind::kCounter;
  } else if (kind == "sort-and-cut") {
    s.kind = TrimKind::kSortAndCut;
  } else {
    return Bad(Child(where, "kind"),
               absl::StrCat("unknown strategy '", kind,
                            "' (none, coin-toss, counter, sort-and-cut)"));
  }
  if (!j.contains("dist")) return Bad(where, "missing \"dist\"");
  TRIMSIM_ASSIGN_OR_RETURN(const std::string dist,
                           AsString(j["dist"], Child(where, "dist")));
  if (dist == "beta") {
    TRIMSIM_RETURN_IF_ERROR(CheckKeys(j, where, {"kind", "dist", "alpha", "beta"}));
    BetaParams b;
    if (j.contains("alpha")) {
      TRIMSIM_ASSIGN_OR_RETURN(b.alpha, AsDouble(j["alpha"], Child(where, "alpha")));
    }
    if (j.contains("beta")) {
      TRIMSIM_ASSIGN_OR_RETURN(b.beta, AsDouble(j["beta"], Child(where, "beta")));
    }
    s.distribution = b;
  } else if (dist == "tlap") {
    TRIMSIM_RETURN_IF_ERROR(
        CheckKeys(j, where, {"kind", "dist", "epsilon", "delta", "sensitivity"}));
    TLapParams t;
    if (j.contains("epsilon")) {
      TRIMSIM_ASSIGN_OR_RETURN(t.epsilon,
                               AsDouble(j["epsilon"], Child(where, "epsilon")));
    }
    if (j.contains("delta")) {
      TRIMSIM_ASSIGN_OR_RETURN(t.delta, AsDouble(j["delta"], Child(where, "delta")));
    }
    if (j.contains("sensitivity")) {
      const Json& sj = j["sensitivity"];
      if (sj.is_string()) {
        if (sj.get<std::string>() != "sqrt_n") {
          return Bad(Child(where, "sensitivity"), "expected a number or \"sqrt_n\"");
        }
        t.sensitivity_sqrt_n = true;
      } else {
        TRIMSIM_ASSIGN_OR_RETURN(t.sensitivity,
                                 AsDouble(sj, Child(where, "sensitivity")));
      }
    }
    s.distribution = t;
  } else if (dist == "fixed") {
    TRIMSIM_RETURN_IF_ERROR(CheckKeys(j, where, {"kind", "dist", "f"}));
    FixedFractionParams f;
    if (!j.contains("f")) return Bad(where, "missing \"f\"");
    TRIMSIM_ASSIGN_OR_RETURN(f.f, AsDouble(j["f"], Child(where, "f")));
    s.distribution = f;
  } else {
    return Bad(Child(where, "dist"),
               absl::StrCat("unknown distribution '", dist, "' (beta, tlap, fixed)"));
  }
  if (absl::Status st = s.Validate(); !st.ok()) {
    return Bad(where, std::string(st.message()));
  }
  return s;
}

absl::StatusOr<PlanNode> NodeFromJson(const Json& j, const std::string& where);

absl::StatusOr<std::vector<PlanNode>> ChildrenFromJson(const Json& j,
                                                       const std::string& where) {
  std::vector<PlanNode> out;
  if (!j.contains("children")) return out;
  const Json& c = j["children"];
  if (!c.is_array()) return Bad(Child(where, "children"), "expected an array");
  for (size_t i = 0; i < c.size(); ++i) {
    TRIMSIM_ASSIGN_OR_RETURN(PlanNode node,
                             NodeFromJson(c[i], Child(Child(where, "children"), i)));
    out.push_back(std::move(node));
  }
  return out;
}

absl::StatusOr<std::string> RequiredString(const Json& j, const std::string& where,
                                           const std::string& key) {
  if (!j.contains(key)) return Bad(where, absl::StrCat("missing \"", key, "\""));
  return AsString(j[key], Child(where, key));
}

absl::StatusOr<PlanNode> NodeFromJson(const Json& j, const std::string& where) {
  TRIMSIM_RETURN_IF_ERROR(RequireObject(j, where));
  TRIMSIM_ASSIGN_OR_RETURN(const std::string op, RequiredString(j, where, "op"));
  PlanNode node;
  if (op == "scan") {
    TRIMSIM_RETURN_IF_ERROR(CheckKeys(j, where, {"op", "table", "children"}));
    node.kind = NodeKind::kScan;
    TRIMSIM_ASSIGN_OR_RETURN(node.table, RequiredString(j, where, "table"));
  } else if (op == "filter") {
    TRIMSIM_RETURN_IF_ERROR(CheckKeys(j, where, {"op", "predicate", "children"}));
    node.kind = NodeKind::kFilter;
    if (!j.contains("predicate") || !j["predicate"].is_object()) {
      return Bad(Child(where, "predicate"),
                 "expected an object of column: constant tests");
    }
    for (const auto& [column, value] : j["predicate"].items()) {
      TRIMSIM_ASSIGN_OR_RETURN(
          const int64_t v, AsI64(value, Child(Child(where, "predicate"), column)));
      node.predicate.conjuncts.push_back({column, v});
    }
  } else if (op == "join") {
    TRIMSIM_RETURN_IF_ERROR(
        CheckKeys(j, where, {"op", "left_key", "right_key", "children"}));
    node.kind = NodeKind::kJoin;
    TRIMSIM_ASSIGN_OR_RETURN(node.left_key, RequiredString(j, where, "left_key"));
    TRIMSIM_ASSIGN_OR_RETURN(node.right_key, RequiredString(j, where, "right_key"));
  } else if (op == "groupby") {
    TRIMSIM_RETURN_IF_ERROR(CheckKeys(
        j, where, {"op", "key", "agg", "sum_column", "output", "children"}));
    node.kind = NodeKind::kGroupBy;
    TRIMSIM_ASSIGN_OR_RETURN(node.agg.group_key, RequiredString(j, where, "key"));
    std::string fn = "count";
    if (j.contains("agg")) {
      TRIMSIM_ASSIGN_OR_RETURN(fn, AsString(j["agg"], Child(where, "agg")));
    }
    if (fn == "count") {
      node.agg.function = AggregateFunction::kCount;
    } else if (fn == "sum") {
      node.agg.function = AggregateFunction::kSum;
      TRIMSIM_ASSIGN_OR_RETURN(node.agg.sum_column,
                               RequiredString(j, where, "sum_column"));
    } else {
      return Bad(Child(where, "agg"), "expected \"count\" or \"sum\"");
    }
    if (j.contains("output")) {
      TRIMSIM_ASSIGN_OR_RETURN(node.agg.output_column,
                               AsString(j["output"], Child(where, "output")));
    }
  } else if (op == "orderby") {
    TRIMSIM_RETURN_IF_ERROR(CheckKeys(j, where, {"op", "key", "children"}));
    node.kind = NodeKind::kOrderBy;
    TRIMSIM_ASSIGN_OR_RETURN(node.order_key, RequiredString(j, where, "key"));
  } else if (op == "resizer") {
    TRIMSIM_RETURN_IF_ERROR(CheckKeys(j, where, {"op", "strategy", "children"}));
    node.kind = NodeKind::kResizer;
    if (!j.contains("strategy")) return Bad(where, "missing \"strategy\"");
    TRIMSIM_ASSIGN_OR_RETURN(node.strategy,
                             StrategyFromJson(j["strategy"], Child(where, "strategy")));
  } else {
    return Bad(Child(where, "op"), absl::StrCat("unknown operator '", op, "'"));
  }
  TRIMSIM_ASSIGN_OR_RETURN(node.children, ChildrenFromJson(j, where));
  return node;
}

absl::StatusOr<PlanNode> PlanFromJson(const Json& j, const std::string& where) {
  TRIMSIM_RETURN_IF_ERROR(RequireObject(j, where));
  absl::StatusOr<Plan> plan;
  if (j.contains("named")) {
    TRIMSIM_RETURN_IF_ERROR(CheckKeys(j, where, {"named"}));
    TRIMSIM_ASSIGN_OR_RETURN(const std::string name,
                             AsString(j["named"], Child(where, "named")));
    plan = NamedPlan(name);
  } else if (j.contains("chain")) {
    TRIMSIM_RETURN_IF_ERROR(CheckKeys(j, where, {"chain"}));
    const std::string cw = Child(where, "chain");
    const Json& c = j["chain"];
    TRIMSIM_RETURN_IF_ERROR(CheckKeys(c, cw, {"tables", "filtered"}));
    if (!c.contains("tables")) return Bad(cw, "missing \"tables\"");
    TRIMSIM_ASSIGN_OR_RETURN(const uint64_t tables,
                             AsU64(c["tables"], Child(cw, "tables")));
    std::vector<bool> filtered;
    if (c.contains("filtered")) {
      TRIMSIM_ASSIGN_OR_RETURN(filtered,
                               AsList<bool>(c["filtered"], Child(cw, "filtered"), AsBool));
    }
    if (tables > 64) return Bad(Child(cw, "tables"), "at most 64 tables");
    plan = ChainPlan(static_cast<int>(tables), filtered);
  } else {
    TRIMSIM_ASSIGN_OR_RETURN(PlanNode root, NodeFromJson(j, where));
    plan = Plan::Create(std::move(root));
  }
  if (!plan.ok()) return Bad(where, std::string(plan.status().message()));
  return plan->root();
}

absl::StatusOr<CatalogSource> CatalogFromJson(const Json& j, const std::string& where,
                                              const std::string& base_dir) {
  TRIMSIM_RETURN_IF_ERROR(CheckKeys(j, where, {"generate", "csv", "sizes"}));
  if (j.size() != 1) {
    return Bad(where, "expected exactly one of \"generate\", \"csv\", \"sizes\"");
  }
  CatalogSource out;
  if (j.contains("generate")) {
    const std::string gw = Child(where, "generate");
    const Json& g = j["generate"];
    TRIMSIM_RETURN_IF_ERROR(CheckKeys(
        g, gw, {"table_sizes", "filtered", "selectivity", "key_domain", "group_domain"}));
    out.kind = CatalogSource::Kind::kGenerated;
    SyntheticSpec& spec = out.generate;
    if (!g.contains("table_sizes")) return Bad(gw, "missing \"table_sizes\"");
    TRIMSIM_ASSIGN_OR_RETURN(
        spec.table_sizes,
        AsList<int64_t>(g["table_sizes"], Child(gw, "table_sizes"), AsI64));
    if (g.contains("filtered")) {
      TRIMSIM_ASSIGN_OR_RETURN(
          spec.filtered, AsList<bool>(g["filtered"], Child(gw, "filtered"), AsBool));
    }
    if (g.contains("selectivity")) {
      TRIMSIM_ASSIGN_OR_RETURN(spec.selectivity,
                               AsDouble(g["selectivity"], Child(gw, "selectivity")));
    }
    if (g.contains("key_domain")) {
      TRIMSIM_ASSIGN_OR_RETURN(spec.key_domain,
                               AsI64(g["key_domain"], Child(gw, "key_domain")));
    }
    if (g.contains("group_domain")) {
      TRIMSIM_ASSIGN_OR_RETURN(spec.group_domain,
                               AsI64(g["group_domain"], Child(gw, "group_domain")));
    }
    if (absl::Status st = spec.Validate(); !st.ok()) {
      return Bad(gw, std::string(st.message()));
    }
  } else if (j.contains("csv")) {
    const std::string cw = Child(where, "csv");
    TRIMSIM_RETURN_IF_ERROR(RequireObject(j["csv"], cw));
    out.kind = CatalogSource::Kind::kCsv;
    for (const auto& [name, t] : j["csv"].items()) {
      const std::string tw = Child(cw, name);
      TRIMSIM_RETURN_IF_ERROR(CheckKeys(t, tw, {"path", "columns", "header"}));
      CsvTableSource src;
      TRIMSIM_ASSIGN_OR_RETURN(const std::string path, RequiredString(t, tw, "path"));
      std::filesystem::path p(path);
      src.path = p.is_absolute() ? path : (std::filesystem::path(base_dir) / p).string();
      if (!t.contains("columns")) return Bad(tw, "missing \"columns\"");
      TRIMSIM_ASSIGN_OR_RETURN(
          src.columns,
          AsList<std::string>(t["columns"], Child(tw, "columns"), AsString));
      if (absl::StatusOr<Schema> s = Schema::Create(src.columns); !s.ok()) {
        return Bad(Child(tw, "columns"), std::string(s.status().message()));
      }
      if (t.contains("header")) {
        TRIMSIM_ASSIGN_OR_RETURN(src.header, AsBool(t["header"], Child(tw, "header")));
      }
      out.csv.emplace(name, std::move(src));
    }
    if (out.csv.empty()) return Bad(cw, "no tables");
  } else {
    const std::string sw = Child(where, "sizes");
    TRIMSIM_RETURN_IF_ERROR(RequireObject(j["sizes"], sw));
    out.kind = CatalogSource::Kind::kSizes;
    for (const auto& [name, n] : j["sizes"].items()) {
      TRIMSIM_ASSIGN_OR_RETURN(const uint64_t v, AsU64(n, Child(sw, name)));
      out.sizes.emplace(name, v);
    }
    if (out.sizes.empty()) return Bad(sw, "no tables");
  }
  return out;
}

absl::Status MetricFromJson(const Json& j, const std::string& where,
                            MetricSettings& m) {
  TRIMSIM_RETURN_IF_ERROR(CheckKeys(
      j, where, {"err_policy", "err", "alpha", "monte_carlo", "samples", "moment_seed"}));
  if (j.contains("err_policy")) {
    TRIMSIM_ASSIGN_OR_RETURN(const std::string p,
                             AsString(j["err_policy"], Child(where, "err_policy")));
    if (p == "absolute") {
      m.err_policy = ErrPolicy::kAbsolute;
    } else if (p == "fraction_of_n") {
      m.err_policy = ErrPolicy::kFractionOfN;
    } else {
      return Bad(Child(where, "err_policy"),
                 "expected \"absolute\" or \"fraction_of_n\"");
    }
  }
  if (j.contains("err")) {
    TRIMSIM_ASSIGN_OR_RETURN(m.err, AsDouble(j["err"], Child(where, "err")));
    if (!(m.err > 0)) return Bad(Child(where, "err"), "must be > 0");
  }
  if (j.contains("alpha")) {
    TRIMSIM_ASSIGN_OR_RETURN(m.alpha, AsDouble(j["alpha"], Child(where, "alpha")));
    if (!(m.alpha > 0 && m.alpha < 1)) {
      return Bad(Child(where, "alpha"), "must lie in (0, 1)");
    }
  }
  if (j.contains("monte_carlo")) {
    TRIMSIM_ASSIGN_OR_RETURN(m.moments.force_monte_carlo,
                             AsBool(j["monte_carlo"], Child(where, "monte_carlo")));
  }
  if (j.contains("samples")) {
    TRIMSIM_ASSIGN_OR_RETURN(m.moments.samples,
                             AsU64(j["samples"], Child(where, "samples")));
    if (m.moments.samples < 2) return Bad(Child(where, "samples"), "must be >= 2");
  }
  if (j.contains("moment_seed")) {
    TRIMSIM_ASSIGN_OR_RETURN(m.moments.seed,
                             AsU64(j["moment_seed"], Child(where, "moment_seed")));
  }
  return absl::OkStatus();
}

absl::Status SweepFromJson(const Json& j, const std::string& where, SweepAxes& s) {
  TRIMSIM_RETURN_IF_ERROR(CheckKeys(j, where,
                                    {"n", "f", "selectivity", "columns", "strategies",
                                     "t_fraction", "repeats", "bench_columns",
                                     "bench_rows"}));
  if (j.contains("n")) {
    TRIMSIM_ASSIGN_OR_RETURN(s.n, AsList<uint64_t>(j["n"], Child(where, "n"), AsU64));
  }
  if (j.contains("f")) {
    TRIMSIM_ASSIGN_OR_RETURN(s.f, AsList<double>(j["f"], Child(where, "f"), AsDouble));
    for (size_t i = 0; i < s.f.size(); ++i) {
      if (!(s.f[i] >= 0 && s.f[i] <= 1)) {
        return Bad(Child(Child(where, "f"), i), "must lie in [0, 1]");
      }
    }
  }
  if (j.contains("selectivity")) {
    TRIMSIM_ASSIGN_OR_RETURN(
        s.selectivity,
        AsList<double>(j["selectivity"], Child(where, "selectivity"), AsDouble));
    for (size_t i = 0; i < s.selectivity.size(); ++i) {
      if (!(s.selectivity[i] > 0 && s.selectivity[i] <= 1)) {
        return Bad(Child(Child(where, "selectivity"), i), "must lie in (0, 1]");
      }
    }
  }
  if (j.contains("columns")) {
    TRIMSIM_ASSIGN_OR_RETURN(
        s.columns, AsList<uint64_t>(j["columns"], Child(where, "columns"), AsU64));
  }
  if (j.contains("strategies")) {
    TRIMSIM_ASSIGN_OR_RETURN(
        s.strategies,
        AsList<TrimStrategy>(j["strategies"], Child(where, "strategies"),
                             StrategyFromJson));
  }
  if (j.contains("t_fraction")) {
    TRIMSIM_ASSIGN_OR_RETURN(s.t_fraction,
                             AsDouble(j["t_fraction"], Child(where, "t_fraction")));
    if (!(s.t_fraction >= 0 && s.t_fraction <= 1)) {
      return Bad(Child(where, "t_fraction"), "must lie in [0, 1]");
    }
  }
  if (j.contains("repeats")) {
    TRIMSIM_ASSIGN_OR_RETURN(s.repeats, AsU64(j["repeats"], Child(where, "repeats")));
  }
  if (j.contains("bench_columns")) {
    TRIMSIM_ASSIGN_OR_RETURN(
        s.bench_columns, AsU64(j["bench_columns"], Child(where, "bench_columns")));
  }
  if (j.contains("bench_rows")) {
    TRIMSIM_ASSIGN_OR_RETURN(s.bench_rows,
                             AsU64(j["bench_rows"], Child(where, "bench_rows")));
  }
  return absl::OkStatus();
}

absl::StatusOr<AttackTarget> TargetFromJson(const Json& j, const std::string& where) {
  TRIMSIM_RETURN_IF_ERROR(
      CheckKeys(j, where, {"n", "t", "t_fraction", "strategy", "err"}));
  AttackTarget t;
  if (!j.contains("n")) return Bad(where, "missing \"n\"");
  TRIMSIM_ASSIGN_OR_RETURN(t.n, AsU64(j["n"], Child(where, "n")));
  if (j.contains("t") == j.contains("t_fraction")) {
    return Bad(where, "expected exactly one of \"t\", \"t_fraction\"");
  }
  if (j.contains("t")) {
    TRIMSIM_ASSIGN_OR_RETURN(t.t, AsU64(j["t"], Child(where, "t")));
  } else {
    TRIMSIM_ASSIGN_OR_RETURN(const double frac,
                             AsDouble(j["t_fraction"], Child(where, "t_fraction")));
    if (!(frac >= 0 && frac <= 1)) {
      return Bad(Child(where, "t_fraction"), "must lie in [0, 1]");
    }
    t.t = RoundToCount(frac * static_cast<double>(t.n));
  }
  if (!j.contains("strategy")) return Bad(where, "missing \"strategy\"");
  TRIMSIM_ASSIGN_OR_RETURN(t.strategy,
                           StrategyFromJson(j["strategy"], Child(where, "strategy")));
  if (j.contains("err")) {
    TRIMSIM_ASSIGN_OR_RETURN(const double err, AsDouble(j["err"], Child(where, "err")));
    if (!(err > 0)) return Bad(Child(where, "err"), "must be > 0");
    t.err = err;
  }
  if (t.t > t.n) return Bad(where, "t exceeds n");
  return t;
}

absl::Status ParseInto(const Json& j, const std::string& base_dir,
                       ExperimentConfig& c) {
  TRIMSIM_RETURN_IF_ERROR(CheckKeys(
      j, "",
      {"experiment", "plan", "catalog", "placement", "overrides", "seed", "metric",
       "sweep", "execution", "cost", "max_join_rows", "attack"}));
  if (j.contains("experiment")) {
    TRIMSIM_ASSIGN_OR_RETURN(c.experiment, AsString(j["experiment"], "experiment"));
    if (c.experiment.find_first_of(",\"\n") != std::string::npos) {
      return Bad("experiment", "must not contain commas, quotes or newlines");
    }
  }
  if (j.contains("plan")) {
    TRIMSIM_ASSIGN_OR_RETURN(c.plan, PlanFromJson(j["plan"], "plan"));
  }
  if (j.contains("catalog")) {
    TRIMSIM_ASSIGN_OR_RETURN(c.catalog,
                             CatalogFromJson(j["catalog"], "catalog", base_dir));
  }
  if (j.contains("placement")) {
    const Json& p = j["placement"];
    TRIMSIM_RETURN_IF_ERROR(CheckKeys(p, "placement", {"rule", "strategy"}));
    if (p.contains("rule")) {
      TRIMSIM_ASSIGN_OR_RETURN(const std::string rule,
                               AsString(p["rule"], "placement.rule"));
      absl::StatusOr<PlacementKind> kind = ParsePlacementKind(rule);
      if (!kind.ok()) return Bad("placement.rule", std::string(kind.status().message()));
      c.placement.kind = *kind;
    }
    if (p.contains("strategy")) {
      TRIMSIM_ASSIGN_OR_RETURN(c.placement.strategy,
                               StrategyFromJson(p["strategy"], "placement.strategy"));
    }
  }
  if (j.contains("overrides")) {
    const Json& o = j["overrides"];
    if (!o.is_array()) return Bad("overrides", "expected an array");
    for (size_t i = 0; i < o.size(); ++i) {
      const std::string ow = Child("overrides", i);
      TRIMSIM_RETURN_IF_ERROR(CheckKeys(o[i], ow, {"op", "strategy"}));
      if (!o[i].contains("op") || !o[i].contains("strategy")) {
        return Bad(ow, "expected \"op\" and \"strategy\"");
      }
      StrategyOverride ov;
      TRIMSIM_ASSIGN_OR_RETURN(const uint64_t op, AsU64(o[i]["op"], Child(ow, "op")));
      if (op > 1'000'000) return Bad(Child(ow, "op"), "operator id out of range");
      ov.op = static_cast<OperatorId>(op);
      TRIMSIM_ASSIGN_OR_RETURN(ov.strategy,
                               StrategyFromJson(o[i]["strategy"], Child(ow, "strategy")));
      c.overrides.push_back(std::move(ov));
    }
  }
  if (j.contains("seed")) {
    TRIMSIM_ASSIGN_OR_RETURN(c.seed, AsU64(j["seed"], "seed"));
  }
  if (j.contains("metric")) {
    TRIMSIM_RETURN_IF_ERROR(MetricFromJson(j["metric"], "metric", c.metric));
  }
  if (j.contains("sweep")) {
    TRIMSIM_RETURN_IF_ERROR(SweepFromJson(j["sweep"], "sweep", c.sweep));
  }
  if (j.contains("execution")) {
    TRIMSIM_ASSIGN_OR_RETURN(const std::string mode,
                             AsString(j["execution"], "execution"));
    if (mode == "materialize") {
      c.execution = ExecutionMode::kMaterialize;
    } else if (mode == "sizes") {
      c.execution = ExecutionMode::kSizes;
    } else {
      return Bad("execution", "expected \"materialize\" or \"sizes\"");
    }
  }
  if (j.contains("cost")) {
    TRIMSIM_RETURN_IF_ERROR(CheckKeys(j["cost"], "cost", {"trim_root"}));
    if (j["cost"].contains("trim_root")) {
      TRIMSIM_ASSIGN_OR_RETURN(c.trim_root,
                               AsBool(j["cost"]["trim_root"], "cost.trim_root"));
    }
  }
  if (j.contains("max_join_rows")) {
    TRIMSIM_ASSIGN_OR_RETURN(c.max_join_rows,
                             AsU64(j["max_join_rows"], "max_join_rows"));
  }
  if (j.contains("attack")) {
    const Json& a = j["attack"];
    TRIMSIM_RETURN_IF_ERROR(CheckKeys(a, "attack", {"trials", "ceiling", "targets"}));
    if (a.contains("trials")) {
      TRIMSIM_ASSIGN_OR_RETURN(c.trials, AsU64(a["trials"], "attack.trials"));
    }
    if (a.contains("ceiling")) {
      TRIMSIM_ASSIGN_OR_RETURN(c.ceiling, AsU64(a["ceiling"], "attack.ceiling"));
      if (c.ceiling < 1) return Bad("attack.ceiling", "must be >= 1");
    }
    if (a.contains("targets")) {
      TRIMSIM_ASSIGN_OR_RETURN(
          c.attacks, AsList<AttackTarget>(a["targets"], "attack.targets", TargetFromJson));
    }
  }
  return absl::OkStatus();
}

bool HasResizer(const PlanNode& node) {
  if (node.kind == NodeKind::kResizer) return true;
  for (const PlanNode& c : node.children) {
    if (HasResizer(c)) return true;
  }
  return false;
}

}  // namespace

absl::StatusOr<TrimStrategy> ParseStrategy(std::string_view text) {
  Json j = Json::parse(text.begin(), text.end(), nullptr, false);
  if (j.is_discarded()) return Bad("strategy", "not valid JSON");
  return StrategyFromJson(j, "strategy");
}

absl::StatusOr<ExperimentConfig> ParseConfig(std::string_view text,
                                             const std::string& base_dir) {
  Json j = Json::parse(text.begin(), text.end(), nullptr, false);
  if (j.is_discarded()) return Bad("document", "not valid JSON");
  if (!j.is_object()) return Bad("document", "expected a JSON object");
  ExperimentConfig c;
  TRIMSIM_RETURN_IF_ERROR(ParseInto(j, base_dir, c));
  return c;
}

absl::StatusOr<ExperimentConfig> LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::InvalidArgumentError(
        absl::StrCat("config: cannot open '", path, "'"));
  }
  std::stringstream buf;
  buf << in.rdbuf();
  std::string dir = std::filesystem::path(path).parent_path().string();
  if (dir.empty()) dir = ".";
  return ParseConfig(buf.str(), dir);
}

std::string_view CommandName(Command command) {
  switch (command) {
    case Command::kRun:
      return "run";
    case Command::kRtr:
      return "rtr";
    case Command::kAttack:
      return "attack";
    case Command::kCost:
      return "cost";
    case Command::kGenData:
      return "gen-data";
    case Command::kBench:
      return "bench";
  }
  return "?";
}

absl::StatusOr<Command> ParseCommand(std::string_view name) {
  for (Command c : {Command::kRun, Command::kRtr, Command::kAttack, Command::kCost,
                    Command::kGenData, Command::kBench}) {
    if (CommandName(c) == name) return c;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown command '", std::string(name), "'"));
}

absl::StatusOr<Plan> BuildPlan(const ExperimentConfig& config) {
  if (!config.plan) return Bad("plan", "missing");
  TRIMSIM_ASSIGN_OR_RETURN(Plan base, Plan::Create(*config.plan));
  TRIMSIM_ASSIGN_OR_RETURN(Plan placed, PlaceResizers(base, config.placement));
  if (config.overrides.empty()) return placed;
  PlanNode root = placed.root();
  for (size_t i = 0; i < config.overrides.size(); ++i) {
    const StrategyOverride& ov = config.overrides[i];
    bool found = false;
    std::function<void(PlanNode&)> visit = [&](PlanNode& node) {
      if (node.kind == NodeKind::kResizer && node.id == ov.op) {
        node.strategy = ov.strategy;
        found = true;
      }
      for (PlanNode& c : node.children) visit(c);
    };
    visit(root);
    if (!found) {
      return Bad(Child("overrides", i),
                 absl::StrCat("operator ", ov.op, " has no resizer"));
    }
  }
  return Plan::Create(std::move(root));
}

absl::Status ValidateFor(const ExperimentConfig& config, Command command) {
  const bool has_resizer_rule = config.placement.kind != PlacementKind::kNone;
  if (has_resizer_rule && config.placement.kind != PlacementKind::kFullyRevealed &&
      config.placement.strategy.kind == TrimKind::kNone) {
    return Bad("placement.strategy",
               absl::StrCat("rule '", std::string(PlacementKindName(config.placement.kind)),
                            "' needs a strategy"));
  }
  const bool needs_plan = command == Command::kRun || command == Command::kCost ||
                          (command == Command::kRtr && config.plan.has_value());
  std::optional<Plan> plan;
  if (needs_plan) {
    if (!config.plan) return Bad("plan", "required by this command");
    absl::StatusOr<Plan> p = BuildPlan(config);
    if (!p.ok()) return p.status();
    plan = *std::move(p);
  }
  const auto need_catalog = [&]() -> absl::Status {
    if (!config.catalog) return Bad("catalog", "required by this command");
    return absl::OkStatus();
  };
  switch (command) {
    case Command::kRun:
      TRIMSIM_RETURN_IF_ERROR(need_catalog());
      if (config.execution == ExecutionMode::kSizes) {
        if (HasResizer(plan->root())) {
          return Bad("execution",
                     "size-only runs need a plan without resizers (rule none)");
        }
      } else if (config.catalog->kind == CatalogSource::Kind::kSizes) {
        return Bad("catalog", "materialized runs need generated or CSV tables");
      }
      break;
    case Command::kRtr:
      if (config.plan) {
        TRIMSIM_RETURN_IF_ERROR(need_catalog());
        if (config.catalog->kind == CatalogSource::Kind::kSizes) {
          return Bad("catalog", "rtr over a plan needs generated or CSV tables");
        }
        if (!config.sweep.n.empty() &&
            config.catalog->kind != CatalogSource::Kind::kGenerated) {
          return Bad("sweep.n", "an N sweep over a plan needs a generated catalog");
        }
      } else if (config.sweep.n.empty()) {
        return Bad("sweep.n", "rtr needs a plan or an N sweep");
      } else {
        for (size_t i = 0; i < config.sweep.n.size(); ++i) {
          if (config.sweep.n[i] == 0) {
            return Bad(Child("sweep.n", i), "must be >= 1");
          }
        }
      }
      break;
    case Command::kAttack:
      if (config.attacks.empty()) return Bad("attack.targets", "required by attack");
      if (config.trials < 100) return Bad("attack.trials", "must be >= 100");
      for (size_t i = 0; i < config.attacks.size(); ++i) {
        const AttackTarget& t = config.attacks[i];
        if (t.n == 0) return Bad(Child("attack.targets", i), "n must be >= 1");
        if (!t.err && config.metric.err_policy == ErrPolicy::kFractionOfN &&
            !(config.metric.err * static_cast<double>(t.n) > 0)) {
          return Bad(Child("attack.targets", i), "error margin is zero");
        }
      }
      break;
    case Command::kCost:
      TRIMSIM_RETURN_IF_ERROR(need_catalog());
      if (config.catalog->kind == CatalogSource::Kind::kCsv) {
        return Bad("catalog", "cost needs sizes or a generation spec, not CSV paths");
      }
      if (config.sweep.f.empty()) return Bad("sweep.f", "required by cost");
      if (config.sweep.selectivity.empty() &&
          config.catalog->kind != CatalogSource::Kind::kGenerated) {
        return Bad("sweep.selectivity", "required unless the catalog is generated");
      }
      break;
    case Command::kGenData:
      TRIMSIM_RETURN_IF_ERROR(need_catalog());
      if (config.catalog->kind != CatalogSource::Kind::kGenerated) {
        return Bad("catalog", "gen-data needs a \"generate\" catalog");
      }
      if (!config.seed) return Bad("seed", "gen-data needs --seed or \"seed\"");
      break;
    case Command::kBench:
      if (config.sweep.n.empty() && config.sweep.columns.empty()) {
        return Bad("sweep", "bench needs \"n\" and/or \"columns\"");
      }
      if (config.sweep.repeats < 5) return Bad("sweep.repeats", "must be >= 5");
      for (uint64_t n : config.sweep.n) {
        if (n == 0) return Bad("sweep.n", "sizes must be >= 1");
      }
      for (uint64_t c : config.sweep.columns) {
        if (c == 0) return Bad("sweep.columns", "widths must be >= 1");
      }
      if (config.sweep.bench_columns == 0 || config.sweep.bench_rows == 0) {
        return Bad("sweep", "bench_rows and bench_columns must be >= 1");
      }
      break;
  }
  return absl::OkStatus();
}

}  // namespace trimsim
