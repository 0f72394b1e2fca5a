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

#include <string>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"
#include "trimsim/config.h"

namespace trimsim {
namespace {

using ::testing::HasSubstr;

TEST(ParseStrategyTest, AllKinds) {
  ASSERT_OK_AND_ASSIGN(TrimStrategy none, ParseStrategy(R"({"kind": "none"})"));
  EXPECT_EQ(none.kind, TrimKind::kNone);
  ASSERT_OK_AND_ASSIGN(
      TrimStrategy beta,
      ParseStrategy(R"({"kind": "coin-toss", "dist": "beta", "alpha": 2, "beta": 6})"));
  EXPECT_EQ(beta.Describe(), "coin-toss:Beta(2,6)");
  ASSERT_OK_AND_ASSIGN(
      TrimStrategy tlap,
      ParseStrategy(R"({"kind": "counter", "dist": "tlap", "epsilon": 0.5,
                        "delta": 5e-5, "sensitivity": "sqrt_n"})"));
  EXPECT_TRUE(std::get<TLapParams>(*tlap.distribution).sensitivity_sqrt_n);
  ASSERT_OK_AND_ASSIGN(
      TrimStrategy fixed,
      ParseStrategy(R"({"kind": "sort-and-cut", "dist": "fixed", "f": 0.25})"));
  EXPECT_EQ(std::get<FixedFractionParams>(*fixed.distribution).f, 0.25);
}

TEST(ParseStrategyTest, Rejects) {
  EXPECT_FALSE(ParseStrategy(R"({"kind": "coin-toss"})").ok());
  EXPECT_FALSE(ParseStrategy(R"({"kind": "magic", "dist": "beta"})").ok());
  EXPECT_FALSE(ParseStrategy(R"({"kind": "counter", "dist": "fixed", "f": 2})").ok());
  EXPECT_FALSE(
      ParseStrategy(R"({"kind": "coin-toss", "dist": "beta", "alpha": -1})").ok());
  EXPECT_FALSE(ParseStrategy(R"({"kind": "none", "dist": "beta"})").ok());
  EXPECT_FALSE(
      ParseStrategy(R"({"kind": "counter", "dist": "tlap", "sensitivity": "n"})").ok());
  EXPECT_FALSE(ParseStrategy("[1, 2]").ok());
}

TEST(ParseConfigTest, Defaults) {
  ASSERT_OK_AND_ASSIGN(ExperimentConfig c, ParseConfig("{}"));
  EXPECT_EQ(c.experiment, "experiment");
  EXPECT_FALSE(c.plan.has_value());
  EXPECT_EQ(c.placement.kind, PlacementKind::kNone);
  EXPECT_EQ(c.metric.alpha, 0.999);
  EXPECT_EQ(c.sweep.repeats, 5u);
}

TEST(ParseConfigTest, FullDocument) {
  ASSERT_OK_AND_ASSIGN(ExperimentConfig c, ParseConfig(R"({
    "experiment": "x",
    "plan": {"op": "join", "left_key": "a.k", "right_key": "b.k",
             "children": [{"op": "scan", "table": "a"}, {"op": "scan", "table": "b"}]},
    "catalog": {"csv": {"a": {"path": "a.csv", "columns": ["k"]},
                        "b": {"path": "/abs/b.csv", "columns": ["k"], "header": false}}},
    "placement": {"rule": "after-all",
                  "strategy": {"kind": "counter", "dist": "fixed", "f": 0}},
    "seed": 12,
    "metric": {"err_policy": "fraction_of_n", "err": 0.01, "alpha": 0.99,
               "monte_carlo": true, "samples": 1000},
    "sweep": {"n": [3, 1e3], "f": 0.5, "selectivity": [0.1, 1],
              "t_fraction": 0.05},
    "execution": "sizes",
    "cost": {"trim_root": false},
    "attack": {"trials": 200, "targets": [
      {"n": 100, "t_fraction": 0.1, "err": 2,
       "strategy": {"kind": "none"}}]}
  })", "/base"));
  EXPECT_EQ(c.experiment, "x");
  ASSERT_TRUE(c.plan.has_value());
  EXPECT_EQ(c.plan->kind, NodeKind::kJoin);
  EXPECT_EQ(c.catalog->csv.at("a").path, "/base/a.csv");
  EXPECT_EQ(c.catalog->csv.at("b").path, "/abs/b.csv");
  EXPECT_FALSE(c.catalog->csv.at("b").header);
  EXPECT_EQ(c.placement.kind, PlacementKind::kAfterAll);
  EXPECT_EQ(c.seed, 12u);
  EXPECT_EQ(c.metric.err_policy, ErrPolicy::kFractionOfN);
  EXPECT_TRUE(c.metric.moments.force_monte_carlo);
  EXPECT_EQ(c.sweep.n, (std::vector<uint64_t>{3, 1000}));
  EXPECT_EQ(c.sweep.f, (std::vector<double>{0.5}));
  EXPECT_EQ(c.execution, ExecutionMode::kSizes);
  EXPECT_FALSE(c.trim_root);
  EXPECT_EQ(c.trials, 200u);
  ASSERT_EQ(c.attacks.size(), 1u);
  EXPECT_EQ(c.attacks[0].t, 10u);
  EXPECT_EQ(c.attacks[0].err, 2.0);
}

TEST(ParseConfigTest, NamedAndChainPlans) {
  ASSERT_OK_AND_ASSIGN(ExperimentConfig named,
                       ParseConfig(R"({"plan": {"named": "three_join"}})"));
  ASSERT_OK_AND_ASSIGN(Plan p, Plan::Create(*named.plan));
  EXPECT_EQ(p.size(), 7u);
  ASSERT_OK_AND_ASSIGN(
      ExperimentConfig chain,
      ParseConfig(R"({"plan": {"chain": {"tables": 2, "filtered": [true, false]}}})"));
  ASSERT_OK_AND_ASSIGN(Plan q, Plan::Create(*chain.plan));
  EXPECT_EQ(q.Count(NodeKind::kFilter), 1u);
}

TEST(ParseConfigTest, ErrorsNameTheField) {
  struct Case {
    const char* json;
    const char* field;
  };
  const Case cases[] = {
      {R"({"seed": -1})", "seed"},
      {R"({"seed": 1.5})", "seed"},
      {R"({"sweep": {"f": [0.5, 2]}})", "sweep.f[1]"},
      {R"({"sweep": {"selectivity": 0}})", "sweep.selectivity[0]"},
      {R"({"metric": {"alpha": 1}})", "metric.alpha"},
      {R"({"metric": {"err_policy": "relative"}})", "metric.err_policy"},
      {R"({"placement": {"rule": "sometimes"}})", "placement.rule"},
      {R"({"plan": {"op": "scan"}})", "plan"},
      {R"({"plan": {"op": "sort", "key": "x"}})", "plan.op"},
      {R"({"plan": {"op": "filter", "predicate": {"a": "x"},
                    "children": [{"op": "scan", "table": "a"}]}})",
       "plan.predicate.a"},
      {R"({"plan": {"op": "join", "left_key": "a", "right_key": "b",
                    "children": [{"op": "scan", "table": "a"}]}})",
       "plan"},
      {R"({"catalog": {"sizes": {"t1": 1}, "generate": {}}})", "catalog"},
      {R"({"catalog": {"generate": {"table_sizes": [10], "selectivity": 0}}})",
       "catalog.generate"},
      {R"({"catalog": {"csv": {"a": {"path": "a.csv", "columns": ["k", "k"]}}}})",
       "catalog.csv.a.columns"},
      {R"({"attack": {"targets": [{"n": 10, "t": 20,
           "strategy": {"kind": "none"}}]}})",
       "attack.targets[0]"},
      {R"({"execution": "lazy"})", "execution"},
      {R"({"overrides": [{"op": 1}]})", "overrides[0]"},
      {R"({"experiment": "a,b"})", "experiment"},
  };
  for (const Case& c : cases) {
    absl::StatusOr<ExperimentConfig> parsed = ParseConfig(c.json);
    ASSERT_FALSE(parsed.ok()) << c.json;
    EXPECT_EQ(parsed.status().code(), absl::StatusCode::kInvalidArgument);
    EXPECT_THAT(parsed.status().message(), HasSubstr(std::string(c.field) + ":"))
        << c.json;
  }
}

TEST(ParseConfigTest, NotJson) {
  EXPECT_FALSE(ParseConfig("{").ok());
  EXPECT_FALSE(ParseConfig("[]").ok());
  EXPECT_FALSE(LoadConfig("/nonexistent/config.json").ok());
}

TEST(BuildPlanTest, PlacementAndOverrides) {
  ASSERT_OK_AND_ASSIGN(ExperimentConfig c, ParseConfig(R"({
    "plan": {"named": "three_join"},
    "placement": {"rule": "after-joins",
                  "strategy": {"kind": "counter", "dist": "fixed", "f": 0.5}},
    "overrides": [{"op": 4, "strategy": {"kind": "coin-toss", "dist": "beta",
                                          "alpha": 2, "beta": 6}}]
  })"));
  ASSERT_OK_AND_ASSIGN(Plan p, BuildPlan(c));
  EXPECT_EQ(p.Count(NodeKind::kResizer), 2u);
  // Root join (id 6) over resizer(join 4) and scan 5.
  const PlanNode& over4 = p.root().children[0];
  ASSERT_EQ(over4.kind, NodeKind::kResizer);
  EXPECT_EQ(over4.id, 4);
  EXPECT_EQ(over4.strategy.kind, TrimKind::kCoinToss);
  const PlanNode& over2 = over4.children[0].children[0];
  ASSERT_EQ(over2.kind, NodeKind::kResizer);
  EXPECT_EQ(over2.strategy.kind, TrimKind::kCounter);
}

TEST(BuildPlanTest, OverrideWithoutResizerFails) {
  ASSERT_OK_AND_ASSIGN(ExperimentConfig c, ParseConfig(R"({
    "plan": {"named": "three_join"},
    "overrides": [{"op": 2, "strategy": {"kind": "none"}}]
  })"));
  EXPECT_FALSE(BuildPlan(c).ok());
  EXPECT_FALSE(ValidateFor(c, Command::kCost).ok());
}

TEST(ValidateForTest, RequiredPieces) {
  ASSERT_OK_AND_ASSIGN(ExperimentConfig empty, ParseConfig("{}"));
  for (Command cmd : {Command::kRun, Command::kRtr, Command::kAttack, Command::kCost,
                      Command::kGenData, Command::kBench}) {
    EXPECT_FALSE(ValidateFor(empty, cmd).ok()) << CommandName(cmd);
  }
  ASSERT_OK_AND_ASSIGN(ExperimentConfig sizes, ParseConfig(R"({
    "plan": {"named": "three_join"},
    "catalog": {"sizes": {"t1": 10, "t2": 10, "t3": 10, "t4": 10}}
  })"));
  EXPECT_FALSE(ValidateFor(sizes, Command::kRun).ok());  // nothing to materialize
  sizes.execution = ExecutionMode::kSizes;
  EXPECT_OK(ValidateFor(sizes, Command::kRun));
  sizes.placement = {PlacementKind::kFullyRevealed, {}};
  EXPECT_FALSE(ValidateFor(sizes, Command::kRun).ok());  // resizers need data
  sizes.sweep.f = {0.5};
  EXPECT_FALSE(ValidateFor(sizes, Command::kCost).ok());  // no selectivity
  sizes.sweep.selectivity = {0.1};
  EXPECT_OK(ValidateFor(sizes, Command::kCost));
}

TEST(ValidateForTest, RuleNeedsStrategy) {
  ASSERT_OK_AND_ASSIGN(ExperimentConfig c, ParseConfig(R"({
    "plan": {"named": "three_join"},
    "catalog": {"generate": {"table_sizes": [5, 5, 5, 5]}},
    "placement": {"rule": "after-all"}
  })"));
  EXPECT_FALSE(ValidateFor(c, Command::kRun).ok());
}

TEST(ValidateForTest, AttackAndBenchBounds) {
  ASSERT_OK_AND_ASSIGN(ExperimentConfig c, ParseConfig(R"({
    "attack": {"trials": 99, "targets": [{"n": 10, "t": 1,
      "strategy": {"kind": "counter", "dist": "fixed", "f": 0}}]},
    "sweep": {"n": [10], "repeats": 4}
  })"));
  EXPECT_FALSE(ValidateFor(c, Command::kAttack).ok());
  c.trials = 100;
  EXPECT_OK(ValidateFor(c, Command::kAttack));
  EXPECT_FALSE(ValidateFor(c, Command::kBench).ok());
  c.sweep.repeats = 5;
  EXPECT_OK(ValidateFor(c, Command::kBench));
}

TEST(CommandNameTest, RoundTrip) {
  for (Command cmd : {Command::kRun, Command::kRtr, Command::kAttack, Command::kCost,
                      Command::kGenData, Command::kBench}) {
    EXPECT_EQ(*ParseCommand(CommandName(cmd)), cmd);
  }
  EXPECT_FALSE(ParseCommand("walk").ok());
}

}  // namespace
}  // namespace trimsim
