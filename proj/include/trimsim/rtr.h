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

#ifndef TRIMSIM_RTR_H_
#define TRIMSIM_RTR_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "trimsim/distributions.h"
#include "trimsim/metric.h"
#include "trimsim/plan.h"
#include "trimsim/strategy.h"

namespace trimsim {

enum class ErrPolicy { kAbsolute, kFractionOfN };

struct MetricSettings {
  ErrPolicy err_policy = ErrPolicy::kAbsolute;
  // Absolute tuples, or a fraction of the operator's N.
  double err = 1;
  double alpha = 0.999;
  MomentOptions moments;

  absl::StatusOr<double> ErrFor(uint64_t n) const;
};

struct OperatorRtr {
  OperatorId id = kNoOperator;
  NodeKind kind = NodeKind::kScan;
  uint64_t n = 0;
  uint64_t t = 0;
  std::string strategy;
  double err = 0;
  double mean = 0;
  double variance = 0;
  Rounds rounds = Rounds::Infinite();
};

// RtR of a single resized operator with input size n and true count t.
// kind none gives the infinite sentinel.
absl::StatusOr<OperatorRtr> OperatorRoundsToRecover(
    const TrimStrategy& strategy, uint64_t n, uint64_t t,
    const MetricSettings& settings);

struct RtRReport {
  std::vector<OperatorRtr> operators;
  // Infinite when nothing is disclosed.
  Rounds minimum = Rounds::Infinite();
};

// One row per resizer of the plan, sized from the stats of an execution of
// that same plan.
absl::StatusOr<RtRReport> PlanRoundsToRecover(const Plan& plan,
                                              const ExecStats& stats,
                                              const MetricSettings& settings);

}  // namespace trimsim

#endif  // TRIMSIM_RTR_H_
