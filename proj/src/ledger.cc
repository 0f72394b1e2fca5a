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

#include "trimsim/ledger.h"

#include <algorithm>

#include "json.hpp"

namespace trimsim {

std::string_view DisclosureKindName(DisclosureKind kind) {
  switch (kind) {
    case DisclosureKind::kBaseSize:
      return "base-size";
    case DisclosureKind::kTrimmedSize:
      return "trimmed-size";
    case DisclosureKind::kFinalResultSize:
      return "final-result-size";
  }
  return "unknown";
}

size_t LeakageLedger::Count(DisclosureKind kind) const {
  return static_cast<size_t>(
      std::count_if(entries_.begin(), entries_.end(),
                    [kind](const Disclosure& d) { return d.kind == kind; }));
}

std::string LeakageLedger::ToJson() const {
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  for (const Disclosure& d : entries_) {
    nlohmann::ordered_json e;
    e["op"] = d.op;
    e["kind"] = std::string(DisclosureKindName(d.kind));
    e["value"] = d.value;
    entries.push_back(std::move(e));
  }
  nlohmann::ordered_json doc;
  doc["entries"] = std::move(entries);
  return doc.dump(2) + "\n";
}

}  // namespace trimsim
