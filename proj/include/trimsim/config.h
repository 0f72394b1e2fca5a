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

#ifndef TRIMSIM_CONFIG_H_
#define TRIMSIM_CONFIG_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "trimsim/plan.h"
#include "trimsim/rtr.h"
#include "trimsim/strategy.h"
#include "trimsim/synthetic.h"

namespace trimsim {

// Experiment configuration, read from one JSON document. The accepted
// layout is listed in docs/config.md.

struct CsvTableSource {
  std::string path;  // resolved against the config file's directory
  std::vector<std::string> columns;
  bool header = true;
};

struct CatalogSource {
  enum class Kind { kGenerated, kCsv, kSizes };
  Kind kind = Kind::kGenerated;
  SyntheticSpec generate;
  std::map<std::string, CsvTableSource> csv;
  // Base sizes only; enough for size-only runs and the cost model.
  std::map<std::string, uint64_t> sizes;
};

struct StrategyOverride {
  OperatorId op = kNoOperator;
  TrimStrategy strategy;
};

// One operator for cmd_attack.
struct AttackTarget {
  uint64_t n = 0;
  uint64_t t = 0;
  TrimStrategy strategy;
  // Absolute; when absent the metric settings decide.
  std::optional<double> err;
};

struct SweepAxes {
  std::vector<uint64_t> n;
  std::vector<double> f;
  std::vector<double> selectivity;
  std::vector<uint64_t> columns;
  std::vector<TrimStrategy> strategies;
  // T = round(t_fraction * N) for single-operator sweeps.
  double t_fraction = 0.1;
  uint64_t repeats = 5;
  // Fixed coordinates of the bench sweeps: the row sweep runs at
  // `bench_columns` columns, the column sweep at `bench_rows` rows.
  uint64_t bench_columns = 4;
  uint64_t bench_rows = 10'000;
};

enum class ExecutionMode { kMaterialize, kSizes };

struct ExperimentConfig {
  std::string experiment = "experiment";
  std::optional<PlanNode> plan;
  std::optional<CatalogSource> catalog;
  PlacementRule placement;
  std::vector<StrategyOverride> overrides;
  std::optional<uint64_t> seed;
  MetricSettings metric;
  SweepAxes sweep;
  ExecutionMode execution = ExecutionMode::kMaterialize;
  bool trim_root = true;
  uint64_t max_join_rows = kDefaultMaxJoinRows;
  std::vector<AttackTarget> attacks;
  uint64_t trials = 1000;
  uint64_t ceiling = uint64_t{1} << 20;
};

// Strategy objects look like
//   {"kind": "coin-toss", "dist": "beta", "alpha": 2, "beta": 6}
//   {"kind": "counter", "dist": "tlap", "epsilon": 0.5, "delta": 5e-5,
//    "sensitivity": 1}          ("sensitivity": "sqrt_n" for sqrt(N))
//   {"kind": "sort-and-cut", "dist": "fixed", "f": 0.2}
//   {"kind": "none"}
absl::StatusOr<TrimStrategy> ParseStrategy(std::string_view json);

// Parses and checks field types and ranges. `base_dir` anchors relative
// CSV paths. Errors are InvalidArgument and name the offending field.
absl::StatusOr<ExperimentConfig> ParseConfig(std::string_view json,
                                             const std::string& base_dir = ".");
absl::StatusOr<ExperimentConfig> LoadConfig(const std::string& path);

enum class Command { kRun, kRtr, kAttack, kCost, kGenData, kBench };
std::string_view CommandName(Command command);
absl::StatusOr<Command> ParseCommand(std::string_view name);

// Checks that `config` carries everything `command` needs. Runs before any
// work so configuration problems never leave partial output.
absl::Status ValidateFor(const ExperimentConfig& config, Command command);

// Plan from the config: the plan description with resizers placed by the
// rule and overrides applied.
absl::StatusOr<Plan> BuildPlan(const ExperimentConfig& config);

}  // namespace trimsim

#endif  // TRIMSIM_CONFIG_H_
