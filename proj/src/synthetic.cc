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

#include "trimsim/synthetic.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <set>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "trimsim/rng.h"

namespace trimsim {
namespace {

enum Col : size_t { kId = 0, kFlt, kKa, kKb, kGrp, kVal, kWidth };

struct Denomination {
  int64_t weight;
  size_t bundle;  // representative left bundle
};

// Fewest unit-repeatable denominations summing to `amount`, using at most
// `budget` of them. Denominations are sorted by decreasing weight.
std::optional<std::vector<int64_t>> MinCoins(
    int64_t amount, const std::vector<Denomination>& denoms, int64_t budget) {
  std::vector<int64_t> counts(denoms.size(), 0);
  int64_t left = amount;
  int64_t used = 0;
  for (size_t i = 0; i < denoms.size() && left > 0; ++i) {
    counts[i] = left / denoms[i].weight;
    left -= counts[i] * denoms[i].weight;
    used += counts[i];
  }
  if (left == 0 && used <= budget) return counts;
  constexpr int64_t kMaxDpAmount = 1 << 18;
  if (amount > kMaxDpAmount || denoms.empty()) return std::nullopt;
  constexpr int64_t kInf = std::numeric_limits<int64_t>::max() / 4;
  std::vector<int64_t> best(amount + 1, kInf);
  std::vector<int> pick(amount + 1, -1);
  best[0] = 0;
  for (int64_t a = 1; a <= amount; ++a) {
    for (size_t i = 0; i < denoms.size(); ++i) {
      const int64_t w = denoms[i].weight;
      if (w <= a && best[a - w] + 1 < best[a]) {
        best[a] = best[a - w] + 1;
        pick[a] = static_cast<int>(i);
      }
    }
  }
  if (best[amount] > budget) return std::nullopt;
  std::fill(counts.begin(), counts.end(), 0);
  for (int64_t a = amount; a > 0; a -= denoms[pick[a]].weight) ++counts[pick[a]];
  return counts;
}

// Draws `count` distinct values from [0, domain) not in `taken`, adding
// them to `taken`.
absl::StatusOr<std::vector<Value>> FreshValues(size_t count, Value domain,
                                               std::set<Value>& taken,
                                               Stream& rng) {
  if (static_cast<uint64_t>(domain) < taken.size() + count) {
    return absl::InvalidArgumentError(
        absl::StrCat("key domain ", domain, " too small for ",
                     taken.size() + count, " distinct keys"));
  }
  std::vector<Value> out;
  out.reserve(count);
  while (out.size() < count) {
    Value v = static_cast<Value>(rng.Below(static_cast<uint64_t>(domain)));
    if (taken.insert(v).second) out.push_back(v);
  }
  return out;
}

}  // namespace

int64_t TargetCount(double s, int64_t count) {
  // Selectivities written with up to nine decimals are applied exactly.
  const double scaled = s * 1e9;
  const double units = std::round(scaled);
  if (std::abs(scaled - units) < 1e-6 * std::max(1.0, units)) {
    const __int128 num = static_cast<__int128>(units) * count;
    return static_cast<int64_t>(num / 1'000'000'000);
  }
  return static_cast<int64_t>(std::floor(s * static_cast<double>(count)));
}

absl::Status SyntheticSpec::Validate() const {
  if (table_sizes.empty()) {
    return absl::InvalidArgumentError("at least one table size required");
  }
  for (int64_t n : table_sizes) {
    if (n < 1) return absl::InvalidArgumentError("table sizes must be >= 1");
  }
  if (!filtered.empty() && filtered.size() != table_sizes.size()) {
    return absl::InvalidArgumentError(
        "filter flags must be empty or one per table");
  }
  if (!(selectivity > 0.0 && selectivity <= 1.0)) {
    return absl::InvalidArgumentError("selectivity must lie in (0, 1]");
  }
  if (key_domain < 2 || group_domain < 1) {
    return absl::InvalidArgumentError("key/group domains too small");
  }
  return absl::OkStatus();
}

absl::StatusOr<PairGroups> SolvePairCount(int64_t target,
                                          std::span<const int64_t> left_weights,
                                          int64_t right_count) {
  PairGroups out;
  out.left_group.assign(left_weights.size(), -1);
  out.right_group.assign(static_cast<size_t>(std::max<int64_t>(right_count, 0)),
                         -1);
  if (target < 0) return absl::InvalidArgumentError("negative target");
  if (target == 0) return out;
  __int128 total = 0;
  for (int64_t w : left_weights) {
    if (w <= 0) return absl::InvalidArgumentError("bundle weights must be > 0");
    total += w;
  }
  if (static_cast<__int128>(target) > total * right_count) {
    return absl::InvalidArgumentError(absl::StrCat(
        "cannot form ", target, " matches from ", left_weights.size(),
        " left rows and ", right_count, " right rows"));
  }

  std::vector<size_t> order(left_weights.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return left_weights[a] > left_weights[b];
  });
  std::vector<int64_t> prefix(order.size() + 1, 0);
  for (size_t i = 0; i < order.size(); ++i) {
    prefix[i + 1] = prefix[i] + left_weights[order[i]];
  }

  // Group 0 takes the k heaviest bundles and c1 right rows; the remainder
  // is paid with single-bundle groups drawn from the rest.
  auto try_split = [&](size_t k, int64_t c1) -> bool {
    const int64_t x1 = prefix[k];
    const int64_t rem = target - c1 * x1;
    const int64_t budget = right_count - c1;
    if (rem < 0 || budget < 0) return false;
    std::vector<Denomination> denoms;
    for (size_t i = k; i < order.size(); ++i) {
      const int64_t w = left_weights[order[i]];
      if (w <= rem && (denoms.empty() || denoms.back().weight != w)) {
        denoms.push_back({w, order[i]});
      }
    }
    std::optional<std::vector<int64_t>> coins =
        rem == 0 ? std::optional<std::vector<int64_t>>(std::vector<int64_t>(
                       denoms.size(), 0))
                 : MinCoins(rem, denoms, budget);
    if (!coins) return false;
    int64_t next_right = 0;
    if (c1 > 0) {
      for (size_t i = 0; i < k; ++i) out.left_group[order[i]] = 0;
      out.group_left_weight.push_back(x1);
      for (; next_right < c1; ++next_right) out.right_group[next_right] = 0;
    }
    for (size_t d = 0; d < denoms.size(); ++d) {
      if ((*coins)[d] == 0) continue;
      const int g = static_cast<int>(out.group_left_weight.size());
      out.left_group[denoms[d].bundle] = g;
      out.group_left_weight.push_back(denoms[d].weight);
      for (int64_t j = 0; j < (*coins)[d]; ++j) out.right_group[next_right++] = g;
    }
    return true;
  };

  // Small instances search every c1; large ones only the top few.
  const bool exhaustive =
      static_cast<__int128>(order.size()) * right_count <= 4096;
  if (try_split(0, 0)) return out;
  for (size_t k = 1; k <= order.size(); ++k) {
    const int64_t x1 = prefix[k];
    if (x1 > target) break;
    const int64_t c1max = std::min(right_count, target / x1);
    const int64_t c1min = exhaustive ? 1 : std::max<int64_t>(1, c1max - 2);
    for (int64_t c1 = c1max; c1 >= c1min; --c1) {
      if (try_split(k, c1)) return out;
    }
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "no key assignment yields exactly ", target, " matches for ",
      left_weights.size(), " left rows and ", right_count, " right rows"));
}

absl::StatusOr<SyntheticCatalog> GenerateSynthetic(const SyntheticSpec& spec,
                                                   uint64_t seed) {
  if (absl::Status st = spec.Validate(); !st.ok()) return st;
  const size_t k = spec.table_sizes.size();
  SyntheticCatalog cat;
  std::vector<std::vector<Value>> data(k);
  std::vector<std::vector<size_t>> genuine(k);  // rows surviving the filter

  absl::StatusOr<Schema> schema = Schema::Create(
      std::vector<std::string>(std::begin(kSyntheticColumns),
                               std::end(kSyntheticColumns)));
  if (!schema.ok()) return schema.status();

  for (size_t t = 0; t < k; ++t) {
    const int64_t n = spec.table_sizes[t];
    Stream rng = Stream::Derive(seed, t, "table");
    std::vector<Value>& rows = data[t];
    rows.resize(static_cast<size_t>(n) * kWidth);
    const auto domain = static_cast<uint64_t>(spec.key_domain);
    for (int64_t i = 0; i < n; ++i) {
      Value* r = &rows[i * kWidth];
      r[kId] = i;
      r[kFlt] = 2 + static_cast<Value>(rng.Below(domain - 2 + 1));
      r[kKa] = static_cast<Value>(rng.Below(domain));
      r[kKb] = static_cast<Value>(rng.Below(domain));
      r[kGrp] = static_cast<Value>(rng.Below(spec.group_domain));
      r[kVal] = static_cast<Value>(rng.Below(domain));
    }
    const bool filtered = !spec.filtered.empty() && spec.filtered[t];
    std::vector<size_t> idx(static_cast<size_t>(n));
    std::iota(idx.begin(), idx.end(), size_t{0});
    if (filtered) {
      const int64_t pass = TargetCount(spec.selectivity, n);
      if (pass < 1) {
        return absl::InvalidArgumentError(absl::StrCat(
            "filter on t", t + 1, ": selectivity ", spec.selectivity,
            " x ", n, " rows is below one row"));
      }
      for (size_t i = idx.size(); i > 1; --i) {
        std::swap(idx[i - 1], idx[rng.Below(i)]);
      }
      idx.resize(static_cast<size_t>(pass));
      std::sort(idx.begin(), idx.end());
      for (size_t i : idx) rows[i * kWidth + kFlt] = kFilterMatch;
      cat.report.push_back({absl::StrCat("filter(t", t + 1, ")"), "filter",
                            {n}, pass, pass,
                            static_cast<double>(pass) / static_cast<double>(n)});
    }
    genuine[t] = std::move(idx);
  }

  // Weight of each genuine row of the current rightmost table: how many
  // genuine rows of the join prefix ending at it contain it.
  std::vector<int64_t> weight(genuine[0].size(), 1);
  std::set<Value> taken;
  Stream key_rng = Stream::Derive(seed, k, "keys");
  for (size_t j = 0; j + 1 < k; ++j) {
    const std::vector<size_t>& left_rows = genuine[j];
    const std::vector<size_t>& right_rows = genuine[j + 1];
    std::vector<size_t> bundles;
    std::vector<int64_t> bundle_weights;
    int64_t left_true = 0;
    for (size_t i = 0; i < left_rows.size(); ++i) {
      left_true += weight[i];
      if (weight[i] > 0) {
        bundles.push_back(i);
        bundle_weights.push_back(weight[i]);
      }
    }
    const auto right_true = static_cast<int64_t>(right_rows.size());
    const double cartesian =
        static_cast<double>(left_true) * static_cast<double>(right_true);
    const int64_t target =
        TargetCount(spec.selectivity, left_true * right_true);
    const std::string name = absl::StrCat("join(", j + 1, ")");
    if (target < 1) {
      return absl::InvalidArgumentError(absl::StrCat(
          name, ": selectivity ", spec.selectivity, " x ", left_true, " x ",
          right_true, " is below one match"));
    }
    absl::StatusOr<PairGroups> groups =
        SolvePairCount(target, bundle_weights, right_true);
    if (!groups.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat(name, ": ", groups.status().message()));
    }
    absl::StatusOr<std::vector<Value>> group_keys = FreshValues(
        groups->group_left_weight.size(), spec.key_domain, taken, key_rng);
    if (!group_keys.ok()) return group_keys.status();

    int64_t unmatched_left = 0;
    for (int g : groups->left_group) unmatched_left += g < 0;
    int64_t unmatched_right = 0;
    for (int g : groups->right_group) unmatched_right += g < 0;
    // Rows of the left table outside every bundle also need keys that
    // match nothing genuine on the right.
    const size_t left_fresh =
        static_cast<size_t>(unmatched_left) + left_rows.size() - bundles.size();
    absl::StatusOr<std::vector<Value>> fresh = FreshValues(
        left_fresh + static_cast<size_t>(unmatched_right), spec.key_domain,
        taken, key_rng);
    if (!fresh.ok()) return fresh.status();
    size_t next_fresh = 0;

    std::vector<Value>& left = data[j];
    std::vector<Value>& right = data[j + 1];
    std::vector<char> keyed(left_rows.size(), 0);
    for (size_t b = 0; b < bundles.size(); ++b) {
      const int g = groups->left_group[b];
      const size_t row = left_rows[bundles[b]];
      left[row * kWidth + kKb] = g >= 0 ? (*group_keys)[g] : (*fresh)[next_fresh++];
      keyed[bundles[b]] = 1;
    }
    for (size_t i = 0; i < left_rows.size(); ++i) {
      if (!keyed[i]) left[left_rows[i] * kWidth + kKb] = (*fresh)[next_fresh++];
    }

    // Right rows receive groups in a random order.
    std::vector<size_t> perm(right_rows.size());
    std::iota(perm.begin(), perm.end(), size_t{0});
    for (size_t i = perm.size(); i > 1; --i) {
      std::swap(perm[i - 1], perm[key_rng.Below(i)]);
    }
    std::vector<int64_t> next_weight(right_rows.size(), 0);
    int64_t achieved = 0;
    for (size_t pos = 0; pos < perm.size(); ++pos) {
      const size_t i = perm[pos];
      const int g = groups->right_group[pos];
      right[right_rows[i] * kWidth + kKa] =
          g >= 0 ? (*group_keys)[g] : (*fresh)[next_fresh++];
      next_weight[i] = g >= 0 ? groups->group_left_weight[g] : 0;
      achieved += next_weight[i];
    }
    weight = std::move(next_weight);
    cat.report.push_back({name, "join", {left_true, right_true}, target,
                          achieved,
                          cartesian > 0 ? static_cast<double>(achieved) / cartesian
                                        : 0.0});
  }

  for (size_t t = 0; t < k; ++t) {
    cat.names.push_back(absl::StrCat("t", t + 1));
    absl::StatusOr<Table> table = Table::FromValues(*schema, std::move(data[t]));
    if (!table.ok()) return table.status();
    cat.tables.push_back(*std::move(table));
  }
  return cat;
}

}  // namespace trimsim
