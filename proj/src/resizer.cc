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

#include "trimsim/resizer.h"

#include <algorithm>
#include <numeric>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "trimsim/distributions.h"
#include "trimsim/operators.h"

namespace trimsim {
namespace {

absl::Status CheckKeep(const PaddedTable& in, const KeepColumn& keep) {
  if (keep.size() != in.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("keep column has ", keep.size(), " flags for ", in.size(),
                     " rows"));
  }
  return absl::OkStatus();
}

// Rows order[j] with keep set, in j order; discloses their count.
PaddedTable TrimInOrder(const PaddedTable& in, const KeepColumn& keep,
                        const std::vector<size_t>& order,
                        LeakageLedger& ledger) {
  std::vector<size_t> kept;
  kept.reserve(order.size());
  for (size_t i : order) {
    if (keep[i]) kept.push_back(i);
  }
  ledger.RecordTrimmedSize(in.origin(), kept.size());
  return Gather(in, kept, in.origin());
}

}  // namespace

absl::StatusOr<KeepColumn> MarkCoinToss(const PaddedTable& in, double p,
                                        const Stream& rng) {
  if (!(p >= 0 && p <= 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("keep probability ", p, " outside [0, 1]"));
  }
  KeepColumn keep(in.size());
  for (size_t j = 0; j < in.size(); ++j) {
    keep[j] = (rng.UniformAt(j) < p) | in.valid(j);
  }
  return keep;
}

KeepColumn MarkCounter(const PaddedTable& in, uint64_t eta) {
  KeepColumn keep(in.size());
  uint64_t counter = 0;
  for (size_t j = 0; j < in.size(); ++j) {
    if (in.valid(j)) {
      keep[j] = 1;
    } else if (counter < eta) {
      keep[j] = 1;
      ++counter;
    }
  }
  return keep;
}

std::vector<size_t> UniformPermutation(size_t n, Stream& rng) {
  std::vector<size_t> perm(n);
  std::iota(perm.begin(), perm.end(), size_t{0});
  for (size_t i = n; i > 1; --i) {
    std::swap(perm[i - 1], perm[rng.Below(i)]);
  }
  return perm;
}

absl::StatusOr<ShuffledTable> Shuffle(const PaddedTable& in,
                                      const KeepColumn& keep, Stream& rng) {
  if (absl::Status st = CheckKeep(in, keep); !st.ok()) return st;
  const std::vector<size_t> perm = UniformPermutation(in.size(), rng);
  KeepColumn shuffled_keep(keep.size());
  for (size_t j = 0; j < perm.size(); ++j) shuffled_keep[j] = keep[perm[j]];
  return ShuffledTable{Gather(in, perm, in.origin()), std::move(shuffled_keep)};
}

absl::StatusOr<PaddedTable> Trim(const PaddedTable& in, const KeepColumn& keep,
                                 LeakageLedger& ledger) {
  if (absl::Status st = CheckKeep(in, keep); !st.ok()) return st;
  for (size_t j = 0; j < in.size(); ++j) {
    if (in.valid(j) && !keep[j]) {
      return absl::InternalError(absl::StrCat(
          "trim: genuine row ", j, " of operator ", in.origin(),
          " is not marked for keeping"));
    }
  }
  std::vector<size_t> order(in.size());
  std::iota(order.begin(), order.end(), size_t{0});
  return TrimInOrder(in, keep, order, ledger);
}

absl::StatusOr<PaddedTable> SortAndCut(const PaddedTable& in, uint64_t eta,
                                       LeakageLedger& ledger) {
  std::vector<size_t> order(in.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_partition(order.begin(), order.end(),
                        [&](size_t i) { return in.valid(i); });
  const uint64_t t = in.true_count();
  const uint64_t s = std::min<uint64_t>(in.size(), t + std::min(eta, in.size() - t));
  order.resize(s);
  ledger.RecordTrimmedSize(in.origin(), s);
  return Gather(in, order, in.origin());
}

ResizerStreams ResizerStreams::For(uint64_t seed, OperatorId op) {
  const auto id = static_cast<uint64_t>(static_cast<int64_t>(op));
  return {Stream::Derive(seed, id, "distribution"),
          Stream::Derive(seed, id, "mark"), Stream::Derive(seed, id, "shuffle")};
}

absl::StatusOr<PaddedTable> Resize(const PaddedTable& in,
                                   const TrimStrategy& strategy,
                                   ResizerStreams& streams,
                                   LeakageLedger& ledger) {
  if (absl::Status st = strategy.Validate(); !st.ok()) return st;
  const uint64_t n = in.size();
  const uint64_t t = in.true_count();
  KeepColumn keep;
  switch (strategy.kind) {
    case TrimKind::kNone:
      return in;
    case TrimKind::kSortAndCut: {
      absl::StatusOr<uint64_t> eta = SampleFillerCount(
          *strategy.distribution, n, t, streams.distribution);
      if (!eta.ok()) return eta.status();
      return SortAndCut(in, *eta, ledger);
    }
    case TrimKind::kCoinToss: {
      absl::StatusOr<double> p = SampleKeepProbability(
          *strategy.distribution, n, t, streams.distribution);
      if (!p.ok()) return p.status();
      absl::StatusOr<KeepColumn> marked = MarkCoinToss(in, *p, streams.mark);
      if (!marked.ok()) return marked.status();
      keep = *std::move(marked);
      break;
    }
    case TrimKind::kCounter: {
      absl::StatusOr<uint64_t> eta = SampleFillerCount(
          *strategy.distribution, n, t, streams.distribution);
      if (!eta.ok()) return eta.status();
      keep = MarkCounter(in, *eta);
      break;
    }
  }
  // Shuffle and trim fused: only the kept rows are copied, in shuffled
  // order. Same output as Shuffle followed by Trim.
  const std::vector<size_t> perm = UniformPermutation(n, streams.shuffle);
  return TrimInOrder(in, keep, perm, ledger);
}

}  // namespace trimsim
