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

#ifndef TRIMSIM_COMMANDS_H_
#define TRIMSIM_COMMANDS_H_

#include <map>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "trimsim/config.h"

namespace trimsim {

struct OutputFile {
  std::string name;
  std::string contents;
};

// Everything a command produces, held in memory until it has succeeded.
struct CommandOutput {
  std::vector<OutputFile> files;
  // Index into `files` of the main CSV table.
  size_t primary = 0;
};

// Runs `command`. The config must have passed ValidateFor; `config.seed`
// and `config.trials` already carry any command-line overrides.
//
//   run      result.csv ledger.json stats.csv summary.csv
//            (size-only runs: stats.csv summary.csv)
//   rtr      rtr.csv
//   attack   attack.csv
//   cost     cost.csv
//   gen-data <table>.csv ... generation_report.csv
//   bench    bench.csv bench_fit.csv
absl::StatusOr<CommandOutput> RunCommand(Command command,
                                         const ExperimentConfig& config);

// Writes every file into `dir` (created if missing). Files are first
// written under temporary names and renamed once all writes succeeded.
absl::Status WriteOutputs(const CommandOutput& output, const std::string& dir);

// Quotes `field` when it contains a comma, quote or newline.
std::string CsvField(const std::string& field);

// Catalog for a materialized run, generated from `seed` or read from CSV.
absl::StatusOr<Catalog> LoadCatalog(const CatalogSource& source, uint64_t seed);

// Base sizes of the catalog without materializing generated tables.
absl::StatusOr<std::map<std::string, uint64_t>> CatalogSizes(
    const CatalogSource& source);

}  // namespace trimsim

#endif  // TRIMSIM_COMMANDS_H_
