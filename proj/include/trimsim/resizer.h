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

#ifndef TRIMSIM_RESIZER_H_
#define TRIMSIM_RESIZER_H_

#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "trimsim/ledger.h"
#include "trimsim/relational.h"
#include "trimsim/rng.h"
#include "trimsim/strategy.h"

namespace trimsim {

// One flag per row, 1 = retain. Genuine rows are always retained.
using KeepColumn = std::vector<uint8_t>;

// k[j] = (u_j < p) OR valid[j], where u_j is draw j of `rng`, addressed by
// row index.
absl::StatusOr<KeepColumn> MarkCoinToss(const PaddedTable& in, double p,
                                        const Stream& rng);

// Sequential marking: walking rows in order, a filler is kept while fewer
// than `eta` fillers have been kept. Genuine rows are always kept, so
// exactly min(eta, N - T) fillers survive.
KeepColumn MarkCounter(const PaddedTable& in, uint64_t eta);

// Uniform permutation of {0..n-1} (Fisher-Yates); element i of the result
// is the input position placed at output position i.
std::vector<size_t> UniformPermutation(size_t n, Stream& rng);

struct ShuffledTable {
  PaddedTable table;
  KeepColumn keep;
};

// Permutes rows, validity and keep flags by one uniform permutation.
absl::StatusOr<ShuffledTable> Shuffle(const PaddedTable& in,
                                      const KeepColumn& keep, Stream& rng);

// Drops rows with k = 0 and discloses the remaining size S. A genuine row
// with k = 0 is an internal error.
absl::StatusOr<PaddedTable> Trim(const PaddedTable& in, const KeepColumn& keep,
                                 LeakageLedger& ledger);

// Shrinkwrap-style baseline: stable sort by validity (genuine first), keep
// the first min(T + eta, N) rows. Fillers stay contiguous at the end.
absl::StatusOr<PaddedTable> SortAndCut(const PaddedTable& in, uint64_t eta,
                                       LeakageLedger& ledger);

// Independent streams of one resizer instance.
struct ResizerStreams {
  Stream distribution;
  Stream mark;
  Stream shuffle;

  static ResizerStreams For(uint64_t seed, OperatorId op);
};

// Mark, shuffle and trim according to `strategy`. kNone returns the input
// unchanged without disclosing anything; every other kind appends exactly
// one trimmed-size entry to `ledger`.
absl::StatusOr<PaddedTable> Resize(const PaddedTable& in,
                                   const TrimStrategy& strategy,
                                   ResizerStreams& streams,
                                   LeakageLedger& ledger);

}  // namespace trimsim

#endif  // TRIMSIM_RESIZER_H_
