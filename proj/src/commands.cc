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

#include "trimsim/commands.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "trimsim/attacker.h"
#include "trimsim/bench.h"
#include "trimsim/distributions.h"
#include "trimsim/plan.h"
#include "trimsim/rng.h"
#include "trimsim/rtr.h"
#include "trimsim/synthetic.h"

namespace trimsim {
namespace {

#define TRIMSIM_ASSIGN_OR_RETURN(lhs, expr) \
  TRIMSIM_ASSIGN_OR_RETURN_IMPL(TRIMSIM_CONCAT(_st_, __LINE__), lhs, expr)
#define TRIMSIM_CONCAT_INNER(a, b) a##b
#define TRIMSIM_CONCAT(a, b) TRIMSIM_CONCAT_INNER(a, b)
#define TRIMSIM_ASSIGN_OR_RETURN_IMPL(tmp, lhs, expr) \
  auto tmp = (expr);                                  \
  if (!tmp.ok()) return tmp.status();                 \
  lhs = *std::move(tmp)

std::string Num(double x) { return absl::StrFormat("%.10g", x); }

// Builds a CSV document row by row.
class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : width_(header.size()) {
    Add(header);
  }
  void Add(const std::vector<std::string>& row) {
    std::vector<std::string> quoted;
    quoted.reserve(row.size());
    for (const std::string& f : row) quoted.push_back(CsvField(f));
    absl::StrAppend(&text_, absl::StrJoin(quoted, ","), "\n");
  }
  size_t width() const { return width_; }
  std::string Take() && { return std::move(text_); }

 private:
  size_t width_;
  std::string text_;
};

std::string OptionalCount(const std::optional<uint64_t>& v) {
  return v ? absl::StrCat(*v) : "";
}

std::vector<uint64_t> SortedUnique(std::vector<uint64_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<TrimStrategy> StrategyAxis(const ExperimentConfig& c) {
  if (!c.sweep.strategies.empty()) return c.sweep.strategies;
  return {c.placement.strategy};
}

ExperimentConfig WithTableSize(const ExperimentConfig& c, uint64_t n) {
  ExperimentConfig out = c;
  for (int64_t& size : out.catalog->generate.table_sizes) {
    size = static_cast<int64_t>(n);
  }
  return out;
}

absl::StatusOr<CommandOutput> CmdRun(const ExperimentConfig& c) {
  TRIMSIM_ASSIGN_OR_RETURN(const Plan plan, BuildPlan(c));
  const uint64_t seed = *c.seed;
  const std::string seed_text = absl::StrCat(seed);
  ExecStats stats;
  std::optional<Execution> exec;
  if (c.execution == ExecutionMode::kSizes) {
    TRIMSIM_ASSIGN_OR_RETURN(const auto sizes, CatalogSizes(*c.catalog));
    TRIMSIM_ASSIGN_OR_RETURN(stats, ExecuteSizes(plan, sizes));
  } else {
    TRIMSIM_ASSIGN_OR_RETURN(const Catalog catalog, LoadCatalog(*c.catalog, seed));
    ExecOptions options;
    options.seed = seed;
    options.max_join_rows = c.max_join_rows;
    TRIMSIM_ASSIGN_OR_RETURN(exec, Execute(plan, catalog, options));
    stats = exec->stats;
  }

  Csv stats_csv({"experiment", "seed", "op", "kind", "n", "t", "delivered", "resized"});
  for (const OperatorStat& s : stats.operators) {
    stats_csv.Add({c.experiment, seed_text, absl::StrCat(s.id),
                   std::string(NodeKindName(s.kind)), absl::StrCat(s.n),
                   OptionalCount(s.t), absl::StrCat(s.delivered), s.resized ? "1" : "0"});
  }
  Csv summary({"experiment", "seed", "rule", "operators", "resizers", "total_tuples",
               "result_rows"});
  summary.Add({c.experiment, seed_text, std::string(PlacementKindName(c.placement.kind)),
               absl::StrCat(plan.num_operators()),
               absl::StrCat(plan.Count(NodeKind::kResizer)), absl::StrCat(stats.total),
               exec ? absl::StrCat(exec->result.num_rows()) : ""});

  CommandOutput out;
  if (exec) {
    out.files.push_back({"result.csv", ToCsv(exec->result.schema(), exec->result.rows())});
    out.files.push_back({"ledger.json", exec->ledger.ToJson()});
  }
  out.files.push_back({"stats.csv", std::move(stats_csv).Take()});
  out.files.push_back({"summary.csv", std::move(summary).Take()});
  out.primary = out.files.size() - 1;
  return out;
}

// `kind` is empty for single-operator sweeps, which have no plan.
std::vector<std::string> RtrRow(const ExperimentConfig& c, const std::string& axis_n,
                                const std::string& strategy, const OperatorRtr& r,
                                const std::string& kind) {
  return {c.experiment,
          absl::StrCat(*c.seed),
          axis_n,
          strategy,
          "operator",
          absl::StrCat(r.id),
          kind,
          absl::StrCat(r.n),
          absl::StrCat(r.t),
          Num(r.err),
          Num(r.mean),
          Num(r.variance),
          r.rounds.ToString()};
}

absl::StatusOr<CommandOutput> CmdRtr(const ExperimentConfig& c) {
  Csv csv({"experiment", "seed", "axis_n", "strategy", "scope", "op", "kind", "n", "t",
           "err", "mean", "variance", "rtr"});
  const std::vector<TrimStrategy> strategies = StrategyAxis(c);
  if (c.plan) {
    std::vector<std::optional<uint64_t>> axis;
    for (uint64_t n : SortedUnique(c.sweep.n)) axis.push_back(n);
    if (axis.empty()) axis.push_back(std::nullopt);
    for (const std::optional<uint64_t>& n : axis) {
      for (const TrimStrategy& strategy : strategies) {
        ExperimentConfig point = n ? WithTableSize(c, *n) : c;
        point.placement.strategy = strategy;
        TRIMSIM_ASSIGN_OR_RETURN(const Plan plan, BuildPlan(point));
        TRIMSIM_ASSIGN_OR_RETURN(const Catalog catalog,
                                 LoadCatalog(*point.catalog, *c.seed));
        ExecOptions options;
        options.seed = *c.seed;
        options.max_join_rows = c.max_join_rows;
        TRIMSIM_ASSIGN_OR_RETURN(const Execution exec, Execute(plan, catalog, options));
        TRIMSIM_ASSIGN_OR_RETURN(const RtRReport report,
                                 PlanRoundsToRecover(plan, exec.stats, c.metric));
        const std::string axis_text = n ? absl::StrCat(*n) : "";
        const std::string label =
            c.placement.kind == PlacementKind::kFullyRevealed
                ? std::string(PlacementKindName(c.placement.kind))
                : strategy.Describe();
        for (const OperatorRtr& r : report.operators) {
          csv.Add(RtrRow(c, axis_text, label, r, std::string(NodeKindName(r.kind))));
        }
        csv.Add({c.experiment, absl::StrCat(*c.seed), axis_text, label, "plan-min", "",
                 "", "", "", "", "", "", report.minimum.ToString()});
      }
    }
  } else {
    for (uint64_t n : SortedUnique(c.sweep.n)) {
      const uint64_t t = RoundToCount(c.sweep.t_fraction * static_cast<double>(n));
      for (const TrimStrategy& strategy : strategies) {
        TRIMSIM_ASSIGN_OR_RETURN(OperatorRtr r,
                                 OperatorRoundsToRecover(strategy, n, t, c.metric));
        r.id = 0;
        csv.Add(RtrRow(c, absl::StrCat(n), strategy.Describe(), r, ""));
      }
    }
  }
  CommandOutput out;
  out.files.push_back({"rtr.csv", std::move(csv).Take()});
  return out;
}

absl::StatusOr<CommandOutput> CmdAttack(const ExperimentConfig& c) {
  const uint64_t seed = *c.seed;
  Csv csv({"experiment", "seed", "target", "n", "t", "strategy", "err", "trials",
           "analytic_rtr", "empirical_rtr", "empirical_over_analytic",
           "success_at_analytic", "threshold", "ceiling_exceeded"});
  for (size_t i = 0; i < c.attacks.size(); ++i) {
    const AttackTarget& target = c.attacks[i];
    OperatorConfig op{target.n, target.t, target.strategy, static_cast<OperatorId>(i)};
    if (absl::Status st = op.Validate(); !st.ok()) return st;
    double err = 0;
    if (target.err) {
      err = *target.err;
    } else {
      TRIMSIM_ASSIGN_OR_RETURN(err, c.metric.ErrFor(target.n));
    }
    MetricSettings absolute = c.metric;
    absolute.err_policy = ErrPolicy::kAbsolute;
    absolute.err = err;
    TRIMSIM_ASSIGN_OR_RETURN(const OperatorRtr analytic,
                             OperatorRoundsToRecover(target.strategy, target.n,
                                                     target.t, absolute));
    const Stream rng = Stream::Derive(seed, i, "attack");
    std::string empirical_text = "inf", ratio, success, threshold;
    bool exceeded = false;
    if (target.strategy.kind != TrimKind::kNone) {
      TRIMSIM_ASSIGN_OR_RETURN(const double mu, PublicFillerMean(op, seed));
      AttackOptions options;
      options.trials = c.trials;
      options.alpha = c.metric.alpha;
      options.ceiling = c.ceiling;
      TRIMSIM_ASSIGN_OR_RETURN(const EmpiricalRtr empirical,
                               EmpiricalRoundsToRecover(op, err, mu, options,
                                                        rng.Fork(0)));
      exceeded = empirical.exceeded_ceiling;
      empirical_text = empirical.rounds.ToString();
      threshold = Num(empirical.threshold);
      if (!empirical.rounds.infinite() && !analytic.rounds.infinite()) {
        ratio = Num(static_cast<double>(empirical.rounds.value()) /
                    static_cast<double>(analytic.rounds.value()));
      }
      if (!analytic.rounds.infinite() && analytic.rounds.value() <= c.ceiling) {
        TRIMSIM_ASSIGN_OR_RETURN(
            const double rate, SuccessRate(op, analytic.rounds.value(), err, mu,
                                           c.trials, rng.Fork(1)));
        success = Num(rate);
      } else {
        exceeded = true;
      }
    }
    csv.Add({c.experiment, absl::StrCat(seed), absl::StrCat(i), absl::StrCat(target.n),
             absl::StrCat(target.t), target.strategy.Describe(), Num(err),
             absl::StrCat(c.trials), analytic.rounds.ToString(), empirical_text, ratio,
             success, threshold, exceeded ? "1" : "0"});
  }
  CommandOutput out;
  out.files.push_back({"attack.csv", std::move(csv).Take()});
  return out;
}

absl::StatusOr<CommandOutput> CmdCost(const ExperimentConfig& c) {
  TRIMSIM_ASSIGN_OR_RETURN(const Plan plan, BuildPlan(c));
  TRIMSIM_ASSIGN_OR_RETURN(const auto sizes, CatalogSizes(*c.catalog));
  std::vector<double> s_axis = c.sweep.selectivity;
  if (s_axis.empty()) s_axis.push_back(c.catalog->generate.selectivity);
  std::vector<double> f_axis = c.sweep.f;
  std::sort(s_axis.begin(), s_axis.end());
  std::sort(f_axis.begin(), f_axis.end());
  Csv csv({"experiment", "rule", "s", "f", "total_tuples"});
  CostOptions options;
  options.trim_root = c.trim_root;
  for (double s : s_axis) {
    for (double f : f_axis) {
      TRIMSIM_ASSIGN_OR_RETURN(const unsigned __int128 total,
                               CostModel(plan, sizes, s, f, options));
      csv.Add({c.experiment, std::string(PlacementKindName(c.placement.kind)), Num(s),
               Num(f), Uint128ToString(total)});
    }
  }
  CommandOutput out;
  out.files.push_back({"cost.csv", std::move(csv).Take()});
  return out;
}

absl::StatusOr<CommandOutput> CmdGenData(const ExperimentConfig& c) {
  const uint64_t seed = *c.seed;
  TRIMSIM_ASSIGN_OR_RETURN(const SyntheticCatalog cat,
                           GenerateSynthetic(c.catalog->generate, seed));
  CommandOutput out;
  for (size_t i = 0; i < cat.names.size(); ++i) {
    out.files.push_back({cat.names[i] + ".csv", ToCsv(cat.tables[i])});
  }
  Csv report({"experiment", "seed", "operator", "kind", "input_true_sizes", "target",
              "achieved", "achieved_selectivity"});
  for (const OperatorReport& r : cat.report) {
    report.Add({c.experiment, absl::StrCat(seed), r.name, r.kind,
                absl::StrJoin(r.input_true_sizes, ";"), absl::StrCat(r.target),
                absl::StrCat(r.achieved), Num(r.achieved_selectivity)});
  }
  out.files.push_back({"generation_report.csv", std::move(report).Take()});
  out.primary = out.files.size() - 1;
  return out;
}

absl::StatusOr<CommandOutput> CmdBench(const ExperimentConfig& c) {
  TrimStrategy strategy = TrimStrategy::CoinToss(BetaParams{2, 6});
  if (!c.sweep.strategies.empty()) {
    strategy = c.sweep.strategies.front();
  } else if (c.placement.strategy.kind != TrimKind::kNone) {
    strategy = c.placement.strategy;
  }
  const uint64_t seed = c.seed.value_or(0);
  Csv rows({"experiment", "axis", "rows", "columns", "repeats", "strategy",
            "median_seconds"});
  Csv fits({"experiment", "axis", "points", "slope"});
  const auto sweep = [&](const std::string& axis, const std::vector<uint64_t>& values,
                         bool vary_rows) -> absl::Status {
    std::vector<double> x, y;
    for (uint64_t v : SortedUnique(values)) {
      const uint64_t n = vary_rows ? v : c.sweep.bench_rows;
      const uint64_t w = vary_rows ? c.sweep.bench_columns : v;
      absl::StatusOr<BenchPoint> p = TimeResize(n, w, strategy, c.sweep.repeats, seed);
      if (!p.ok()) return p.status();
      rows.Add({c.experiment, axis, absl::StrCat(n), absl::StrCat(w),
                absl::StrCat(c.sweep.repeats), strategy.Describe(),
                absl::StrFormat("%.6e", p->median_seconds)});
      x.push_back(static_cast<double>(v));
      y.push_back(p->median_seconds);
    }
    if (std::optional<double> slope = LogLogSlope(x, y)) {
      fits.Add({c.experiment, axis, absl::StrCat(x.size()), absl::StrFormat("%.4f", *slope)});
    }
    return absl::OkStatus();
  };
  if (absl::Status st = sweep("rows", c.sweep.n, true); !st.ok()) return st;
  if (absl::Status st = sweep("columns", c.sweep.columns, false); !st.ok()) return st;
  CommandOutput out;
  out.files.push_back({"bench.csv", std::move(rows).Take()});
  out.files.push_back({"bench_fit.csv", std::move(fits).Take()});
  return out;
}

}  // namespace

std::string CsvField(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

absl::StatusOr<Catalog> LoadCatalog(const CatalogSource& source, uint64_t seed) {
  Catalog out;
  switch (source.kind) {
    case CatalogSource::Kind::kGenerated: {
      TRIMSIM_ASSIGN_OR_RETURN(SyntheticCatalog cat,
                               GenerateSynthetic(source.generate, seed));
      for (size_t i = 0; i < cat.names.size(); ++i) {
        out.emplace(cat.names[i], std::move(cat.tables[i]));
      }
      return out;
    }
    case CatalogSource::Kind::kCsv:
      for (const auto& [name, src] : source.csv) {
        TRIMSIM_ASSIGN_OR_RETURN(Schema schema, Schema::Create(src.columns));
        TRIMSIM_ASSIGN_OR_RETURN(Table t, LoadCsv(src.path, schema, src.header));
        out.emplace(name, std::move(t));
      }
      return out;
    case CatalogSource::Kind::kSizes:
      break;
  }
  return absl::FailedPreconditionError("a sizes-only catalog has no table contents");
}

absl::StatusOr<std::map<std::string, uint64_t>> CatalogSizes(
    const CatalogSource& source) {
  std::map<std::string, uint64_t> out;
  switch (source.kind) {
    case CatalogSource::Kind::kSizes:
      return source.sizes;
    case CatalogSource::Kind::kGenerated:
      for (size_t i = 0; i < source.generate.table_sizes.size(); ++i) {
        out.emplace(absl::StrCat("t", i + 1),
                    static_cast<uint64_t>(source.generate.table_sizes[i]));
      }
      return out;
    case CatalogSource::Kind::kCsv: {
      TRIMSIM_ASSIGN_OR_RETURN(const Catalog catalog, LoadCatalog(source, 0));
      for (const auto& [name, t] : catalog) out.emplace(name, t.num_rows());
      return out;
    }
  }
  return out;
}

absl::StatusOr<CommandOutput> RunCommand(Command command,
                                         const ExperimentConfig& config) {
  if (absl::Status st = ValidateFor(config, command); !st.ok()) return st;
  switch (command) {
    case Command::kRun:
      return CmdRun(config);
    case Command::kRtr:
      return CmdRtr(config);
    case Command::kAttack:
      return CmdAttack(config);
    case Command::kCost:
      return CmdCost(config);
    case Command::kGenData:
      return CmdGenData(config);
    case Command::kBench:
      return CmdBench(config);
  }
  return absl::InternalError("unknown command");
}

absl::Status WriteOutputs(const CommandOutput& output, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    return absl::InternalError(
        absl::StrCat("cannot create '", dir, "': ", ec.message()));
  }
  std::vector<fs::path> temps;
  const auto cleanup = [&] {
    for (const fs::path& p : temps) fs::remove(p, ec);
  };
  for (const OutputFile& f : output.files) {
    const fs::path tmp = fs::path(dir) / (f.name + ".partial");
    temps.push_back(tmp);
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << f.contents;
    out.close();
    if (!out) {
      cleanup();
      return absl::InternalError(absl::StrCat("cannot write '", tmp.string(), "'"));
    }
  }
  for (size_t i = 0; i < output.files.size(); ++i) {
    fs::rename(temps[i], fs::path(dir) / output.files[i].name, ec);
    if (ec) {
      cleanup();
      return absl::InternalError(
          absl::StrCat("cannot rename '", temps[i].string(), "': ", ec.message()));
    }
  }
  return absl::OkStatus();
}

}  // namespace trimsim
