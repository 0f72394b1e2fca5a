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

#include "trimsim/rtr.h"

#include <algorithm>
#include <functional>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace trimsim {

absl::StatusOr<double> MetricSettings::ErrFor(uint64_t n) const {
  const double e =
      err_policy == ErrPolicy::kAbsolute ? err : err * static_cast<double>(n);
  if (!(e > 0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("tolerated error must be positive, got ", e));
  }
  return e;
}

absl::StatusOr<OperatorRtr> OperatorRoundsToRecover(
    const TrimStrategy& strategy, uint64_t n, uint64_t t,
    const MetricSettings& settings) {
  OperatorRtr row;
  row.n = n;
  row.t = t;
  row.strategy = strategy.Describe();
  absl::StatusOr<double> err = settings.ErrFor(n);
  if (!err.ok()) return err.status();
  row.err = *err;
  absl::StatusOr<MomentEstimate> m =
      MomentsOfS(strategy, n, t, settings.moments);
  if (!m.ok()) return m.status();
  row.mean = m->mean;
  row.variance = m->variance;
  if (strategy.kind == TrimKind::kNone) return row;
  absl::StatusOr<Rounds> r =
      RoundsToRecover({m->variance, *err, settings.alpha});
  if (!r.ok()) return r.status();
  row.rounds = *r;
  return row;
}

absl::StatusOr<RtRReport> PlanRoundsToRecover(const Plan& plan,
                                              const ExecStats& stats,
                                              const MetricSettings& settings) {
  RtRReport report;
  absl::Status status;
  std::function<void(const PlanNode&)> visit = [&](const PlanNode& node) {
    for (const PlanNode& child : node.children) visit(child);
    if (!status.ok() || node.kind != NodeKind::kResizer) return;
    auto it = std::find_if(
        stats.operators.begin(), stats.operators.end(),
        [&](const OperatorStat& s) { return s.id == node.id; });
    if (it == stats.operators.end() || !it->t.has_value()) {
      status = absl::FailedPreconditionError(absl::StrCat(
          "no true-count statistics for operator ", node.id));
      return;
    }
    absl::StatusOr<OperatorRtr> row =
        OperatorRoundsToRecover(node.strategy, it->n, *it->t, settings);
    if (!row.ok()) {
      status = row.status();
      return;
    }
    row->id = node.id;
    row->kind = node.children[0].kind;
    report.minimum = std::min(report.minimum, row->rounds);
    report.operators.push_back(*std::move(row));
  };
  visit(plan.root());
  if (!status.ok()) return status;
  return report;
}

}  // namespace trimsim
