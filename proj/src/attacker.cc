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

#include "trimsim/attacker.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "trimsim/distributions.h"
#include "trimsim/ledger.h"
#include "trimsim/resizer.h"

namespace trimsim {
namespace {

absl::StatusOr<PaddedTable> SyntheticInput(uint64_t n, uint64_t t) {
  absl::StatusOr<Schema> schema = Schema::Create({"v"});
  if (!schema.ok()) return schema.status();
  std::vector<Value> values(n);
  std::iota(values.begin(), values.end(), Value{0});
  std::vector<uint8_t> valid(n, 0);
  std::fill(valid.begin(), valid.begin() + t, 1);
  return PaddedTable::FromParts(*std::move(schema), std::move(values),
                                std::move(valid), 0);
}

// Running sums of S for each trial, extended on demand. Trial j round k
// always uses rng.Fork(j).Fork(k).
class TrialSums {
 public:
  TrialSums(const OperatorConfig& config, uint64_t trials, const Stream& rng)
      : config_(config), sums_(trials) {
    streams_.reserve(trials);
    for (uint64_t j = 0; j < trials; ++j) streams_.push_back(rng.Fork(j));
  }

  // Sum of the first r observations of trial j.
  absl::StatusOr<uint64_t> Sum(uint64_t j, uint64_t r) {
    std::vector<uint64_t>& s = sums_[j];
    while (s.size() < r) {
      Stream round = streams_[j].Fork(s.size());
      Stream draw = round.Fork(0);
      absl::StatusOr<uint64_t> kept =
          SampleRetainedFillers(config_.strategy, config_.n, config_.t, draw);
      if (!kept.ok()) return kept.status();
      s.push_back((s.empty() ? 0 : s.back()) + config_.t + *kept);
    }
    return s[r - 1];
  }

  void Release() { sums_.clear(); }

 private:
  const OperatorConfig& config_;
  std::vector<Stream> streams_;
  std::vector<std::vector<uint64_t>> sums_;
};

absl::StatusOr<double> RateFromSums(TrialSums& sums, uint64_t trials,
                                    uint64_t r, double err, double mu_eta,
                                    uint64_t true_count) {
  uint64_t hits = 0;
  for (uint64_t j = 0; j < trials; ++j) {
    absl::StatusOr<uint64_t> total = sums.Sum(j, r);
    if (!total.ok()) return total.status();
    const double estimate =
        static_cast<double>(*total) / static_cast<double>(r) - mu_eta;
    if (ScoreAttack(estimate, true_count, err).success) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(trials);
}

}  // namespace

absl::Status OperatorConfig::Validate() const {
  if (t > n) {
    return absl::InvalidArgumentError(
        absl::StrCat("true count ", t, " exceeds N=", n));
  }
  return strategy.Validate();
}

absl::StatusOr<ObservationSeries> ObserveRounds(const OperatorConfig& config,
                                                uint64_t rounds,
                                                const Stream& rng,
                                                ObservationPath path) {
  if (absl::Status st = config.Validate(); !st.ok()) return st;
  if (rounds == 0) return absl::InvalidArgumentError("rounds must be >= 1");
  ObservationSeries series;
  series.op = config.op;
  series.strategy = config.strategy.Describe();
  if (config.strategy.kind == TrimKind::kNone) return series;
  series.sizes.reserve(rounds);

  if (path == ObservationPath::kSampled) {
    for (uint64_t k = 0; k < rounds; ++k) {
      Stream draw = rng.Fork(k).Fork(0);
      absl::StatusOr<uint64_t> kept =
          SampleRetainedFillers(config.strategy, config.n, config.t, draw);
      if (!kept.ok()) return kept.status();
      series.sizes.push_back(config.t + *kept);
    }
    return series;
  }

  absl::StatusOr<PaddedTable> input = SyntheticInput(config.n, config.t);
  if (!input.ok()) return input.status();
  for (uint64_t k = 0; k < rounds; ++k) {
    const Stream round = rng.Fork(k);
    ResizerStreams streams{round.Fork(0), round.Fork(1), round.Fork(2)};
    LeakageLedger ledger;
    absl::StatusOr<PaddedTable> out =
        Resize(*input, config.strategy, streams, ledger);
    if (!out.ok()) return out.status();
    series.sizes.push_back(out->size());
  }
  return series;
}

absl::StatusOr<double> EstimateTrueSize(const ObservationSeries& series,
                                        double mu_eta) {
  if (series.sizes.empty()) {
    return absl::FailedPreconditionError(
        "no disclosed sizes to estimate from");
  }
  long double sum = 0;
  for (uint64_t s : series.sizes) sum += s;
  return static_cast<double>(sum / series.sizes.size()) - mu_eta;
}

AttackOutcome ScoreAttack(double estimate, uint64_t true_count, double err) {
  AttackOutcome out;
  out.estimate = estimate;
  out.abs_error = std::abs(estimate - static_cast<double>(true_count));
  out.success = out.abs_error <= err;
  return out;
}

absl::StatusOr<double> PublicFillerMean(const OperatorConfig& config,
                                        uint64_t seed) {
  MomentOptions options;
  options.seed = seed;
  absl::StatusOr<MomentEstimate> m =
      MomentsOfS(config.strategy, config.n, config.t, options);
  if (!m.ok()) return m.status();
  return m->filler_mean;
}

absl::StatusOr<double> SuccessRate(const OperatorConfig& config,
                                   uint64_t rounds, double err, double mu_eta,
                                   uint64_t trials, const Stream& rng) {
  if (absl::Status st = config.Validate(); !st.ok()) return st;
  if (rounds == 0) return absl::InvalidArgumentError("rounds must be >= 1");
  if (trials == 0) return absl::InvalidArgumentError("trials must be >= 1");
  if (config.strategy.kind == TrimKind::kNone) {
    return absl::FailedPreconditionError("operator discloses no size");
  }
  TrialSums sums(config, trials, rng);
  return RateFromSums(sums, trials, rounds, err, mu_eta, config.t);
}

absl::StatusOr<EmpiricalRtr> EmpiricalRoundsToRecover(
    const OperatorConfig& config, double err, double mu_eta,
    const AttackOptions& options, const Stream& rng) {
  if (absl::Status st = config.Validate(); !st.ok()) return st;
  if (options.trials < 100) {
    return absl::InvalidArgumentError("need at least 100 trials");
  }
  if (!(err > 0)) return absl::InvalidArgumentError("err must be positive");
  if (!(options.alpha > 0 && options.alpha < 1)) {
    return absl::InvalidArgumentError("alpha must lie in (0, 1)");
  }
  if (options.ceiling == 0) {
    return absl::InvalidArgumentError("ceiling must be >= 1");
  }
  EmpiricalRtr result;
  result.threshold =
      options.alpha -
      2 * std::sqrt(options.alpha * (1 - options.alpha) / options.trials);
  if (config.strategy.kind == TrimKind::kNone) return result;

  const uint64_t trials = options.trials;
  TrialSums sums(config, trials, rng);
  auto rate_at = [&](uint64_t r) -> absl::StatusOr<double> {
    if (r > options.max_cached / trials) {
      return absl::ResourceExhaustedError(absl::StrCat(
          "search at r=", r, " would cache more than ", options.max_cached,
          " observations"));
    }
    return RateFromSums(sums, trials, r, err, mu_eta, config.t);
  };

  uint64_t lo = 0;  // largest r known to fail
  uint64_t hi = 1;
  double hi_rate = 0;
  for (;;) {
    absl::StatusOr<double> rate = rate_at(hi);
    if (!rate.ok()) return rate.status();
    if (*rate >= result.threshold) {
      hi_rate = *rate;
      break;
    }
    lo = hi;
    if (hi >= options.ceiling) {
      result.exceeded_ceiling = true;
      result.success_rate = *rate;
      return result;
    }
    hi = std::min(hi * 2, options.ceiling);
  }
  while (hi - lo > 1) {
    const uint64_t mid = lo + (hi - lo) / 2;
    absl::StatusOr<double> rate = rate_at(mid);
    if (!rate.ok()) return rate.status();
    if (*rate >= result.threshold) {
      hi = mid;
      hi_rate = *rate;
    } else {
      lo = mid;
    }
  }
  result.rounds = Rounds::Finite(hi);
  result.success_rate = hi_rate;
  return result;
}

}  // namespace trimsim
