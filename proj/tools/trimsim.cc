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

// trimsim: command-line front end.
//
//   trimsim <run|rtr|attack|cost|gen-data|bench> --config exp.json
//           [--seed N] [--out DIR] [--trials N] [--header]
//
// Exit status: 0 success, 2 configuration error, 3 runtime error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "trimsim/commands.h"
#include "trimsim/config.h"

namespace {

constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

int Fail(int code, const std::string& message) {
  std::cerr << "trimsim: " << message << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Oblivious query simulator with intermediate-result resizing"};
  std::string command_name;
  std::string config_path;
  std::optional<uint64_t> seed;
  std::optional<uint64_t> trials;
  std::string out_dir;
  bool header = false;
  app.add_option("command", command_name, "run, rtr, attack, cost, gen-data or bench")
      ->required();
  app.add_option("--config", config_path, "experiment configuration (JSON)")
      ->required();
  app.add_option("--seed", seed, "random seed; mandatory for run, rtr and attack");
  app.add_option("--out", out_dir,
                 "output directory; without it the main table goes to stdout");
  app.add_option("--trials", trials, "attack trials (overrides attack.trials)");
  app.add_flag("--header", header, "include the header row when printing to stdout");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  absl::StatusOr<trimsim::Command> command = trimsim::ParseCommand(command_name);
  if (!command.ok()) return Fail(kConfigError, std::string(command.status().message()));
  const bool seed_required = *command == trimsim::Command::kRun ||
                             *command == trimsim::Command::kRtr ||
                             *command == trimsim::Command::kAttack;
  if (seed_required && !seed) {
    return Fail(kConfigError,
                "--seed is required for " + std::string(trimsim::CommandName(*command)));
  }

  absl::StatusOr<trimsim::ExperimentConfig> config = trimsim::LoadConfig(config_path);
  if (!config.ok()) return Fail(kConfigError, std::string(config.status().message()));
  if (seed) config->seed = *seed;
  if (trials) config->trials = *trials;
  if (absl::Status st = trimsim::ValidateFor(*config, *command); !st.ok()) {
    return Fail(kConfigError, std::string(st.message()));
  }

  absl::StatusOr<trimsim::CommandOutput> output = trimsim::RunCommand(*command, *config);
  if (!output.ok()) return Fail(kRuntimeError, output.status().ToString());

  if (!out_dir.empty()) {
    if (absl::Status st = trimsim::WriteOutputs(*output, out_dir); !st.ok()) {
      return Fail(kRuntimeError, std::string(st.message()));
    }
    for (const trimsim::OutputFile& f : output->files) {
      std::cerr << "wrote " << out_dir << "/" << f.name << "\n";
    }
    return 0;
  }
  const std::string& text = output->files[output->primary].contents;
  if (header) {
    std::cout << text;
  } else {
    const size_t eol = text.find('\n');
    std::cout << (eol == std::string::npos ? "" : text.substr(eol + 1));
  }
  return 0;
}
