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

#ifndef TRIMSIM_ATTACKER_H_
#define TRIMSIM_ATTACKER_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "trimsim/metric.h"
#include "trimsim/relational.h"
#include "trimsim/rng.h"
#include "trimsim/strategy.h"

namespace trimsim {

// One resized operator as the simulation sees it. `t` is secret: only the
// round simulation and the scorer read it.
struct OperatorConfig {
  uint64_t n = 0;
  uint64_t t = 0;
  TrimStrategy strategy;
  OperatorId op = 0;

  absl::Status Validate() const;
};

// Disclosed sizes S_1..S_r of one operator. Empty when the operator has no
// resizer (nothing is disclosed to attack).
struct ObservationSeries {
  OperatorId op = 0;
  std::vector<uint64_t> sizes;
  std::string strategy;
};

enum class ObservationPath {
  // Draw eta directly from the strategy.
  kSampled,
  // Build an N-row padded table and run the full resizer on it.
  kMaterialized,
};

// Round k draws from rng.Fork(k), so rounds are independent and a longer
// series extends a shorter one with the same stream.
absl::StatusOr<ObservationSeries> ObserveRounds(
    const OperatorConfig& config, uint64_t rounds, const Stream& rng,
    ObservationPath path = ObservationPath::kSampled);

// Mean estimator: S-bar minus the public expected filler count.
absl::StatusOr<double> EstimateTrueSize(const ObservationSeries& series,
                                        double mu_eta);

struct AttackOutcome {
  double estimate = 0;
  double abs_error = 0;
  bool success = false;
};

AttackOutcome ScoreAttack(double estimate, uint64_t true_count, double err);

// Expected retained fillers of the configured strategy.
absl::StatusOr<double> PublicFillerMean(const OperatorConfig& config,
                                        uint64_t seed);

struct AttackOptions {
  uint64_t trials = 1000;
  double alpha = 0.999;
  uint64_t ceiling = uint64_t{1} << 20;
  // Upper bound on cached observations (trials * rounds).
  uint64_t max_cached = uint64_t{1} << 28;
};

// Fraction of trials whose estimate from r rounds lands within err.
absl::StatusOr<double> SuccessRate(const OperatorConfig& config,
                                   uint64_t rounds, double err, double mu_eta,
                                   uint64_t trials, const Stream& rng);

struct EmpiricalRtr {
  Rounds rounds = Rounds::Infinite();
  bool exceeded_ceiling = false;
  double success_rate = 0;  // at `rounds`
  double threshold = 0;
};

// Smallest r whose success fraction reaches alpha - 2 binomial standard
// errors, found by doubling then bisection. Trials reuse their streams at
// every r.
absl::StatusOr<EmpiricalRtr> EmpiricalRoundsToRecover(
    const OperatorConfig& config, double err, double mu_eta,
    const AttackOptions& options, const Stream& rng);

}  // namespace trimsim

#endif  // TRIMSIM_ATTACKER_H_
