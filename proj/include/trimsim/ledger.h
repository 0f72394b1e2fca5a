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

#ifndef TRIMSIM_LEDGER_H_
#define TRIMSIM_LEDGER_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "trimsim/relational.h"

namespace trimsim {

// Everything an observer of the protocol learns: public sizes, in the
// order they are disclosed. Only the three kinds below can be recorded;
// there is no way to append a validity flag, a true count or a sampled
// trimming parameter.
enum class DisclosureKind { kBaseSize, kTrimmedSize, kFinalResultSize };

std::string_view DisclosureKindName(DisclosureKind kind);

struct Disclosure {
  OperatorId op;
  DisclosureKind kind;
  uint64_t value;

  friend bool operator==(const Disclosure&, const Disclosure&) = default;
};

class LeakageLedger {
 public:
  void RecordBaseSize(OperatorId op, uint64_t n) {
    entries_.push_back({op, DisclosureKind::kBaseSize, n});
  }
  void RecordTrimmedSize(OperatorId op, uint64_t s) {
    entries_.push_back({op, DisclosureKind::kTrimmedSize, s});
  }
  void RecordFinalResultSize(OperatorId op, uint64_t t) {
    entries_.push_back({op, DisclosureKind::kFinalResultSize, t});
  }

  const std::vector<Disclosure>& entries() const { return entries_; }
  size_t size() const { return entries_.size(); }
  size_t Count(DisclosureKind kind) const;

  // {"entries":[{"op":..,"kind":"trimmed-size","value":..},...]}
  std::string ToJson() const;

 private:
  std::vector<Disclosure> entries_;
};

}  // namespace trimsim

#endif  // TRIMSIM_LEDGER_H_
