// Copyright 2026 The locality Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "locality/denning.hpp"

#include <algorithm>
#include <cmath>

namespace locality {

CacheTable denning_table(const RIDistribution& dist) {
  if (dist.first_touches != 0) {
    throw InfiniteRIError(std::to_string(dist.first_touches) + " first touch(es) have no finite reuse interval");
  }
  CacheTable table;
  table.access_count = dist.accesses;
  table.data_size = dist.data_size;
  CacheRow row;
  row.miss_ratio = 1;
  table.rows.push_back(row);
  if (dist.accesses == 0) return table;

  const Rational n = static_cast<long>(dist.accesses);
  for (const auto& [v, count] : dist.entries) {
    const CacheRow& prev = table.rows.back();
    CacheRow next;
    next.ri_value = v;
    next.portion = Rational(static_cast<long>(count.total())) / n;
    next.imaginary_portion = Rational(static_cast<long>(count.imaginary)) / n;
    // m(x) is constant at prev.miss_ratio for x in [prev.v, v), so s grows
    // by that ratio once per step.
    next.cache_size = prev.cache_size + Rational(static_cast<long>(v - prev.ri_value)) * prev.miss_ratio;
    next.miss_ratio = prev.miss_ratio - next.portion;
    next.cold_miss_ratio = prev.cold_miss_ratio + next.imaginary_portion;
    table.rows.push_back(std::move(next));
  }
  return table;
}

CacheTable cold_adjust(CacheTable table) {
  table.cold_adjusted = true;
  return table;
}

CacheQueryResult query_miss_ratio(const CacheTable& table, std::int64_t c, QueryMode mode) {
  if (c < 0) throw std::invalid_argument("cache size must be non-negative");
  const Rational size = static_cast<long>(c);
  // Last row with cache_size <= c.
  auto it = std::upper_bound(table.rows.begin(), table.rows.end(), size,
                             [](const Rational& s, const CacheRow& r) { return s < r.cache_size; });
  const CacheRow& lo = *std::prev(it);
  CacheQueryResult out;
  out.cache_size = c;
  out.miss_ratio = table.effective_miss_ratio(lo);
  out.cold_miss_share = table.cold_adjusted ? lo.cold_miss_ratio : Rational(0);
  if (mode == QueryMode::Interpolate && it != table.rows.end() && lo.cache_size != size) {
    const CacheRow& hi = *it;
    const Rational t = (size - lo.cache_size) / (hi.cache_size - lo.cache_size);
    out.miss_ratio += t * (table.effective_miss_ratio(hi) - out.miss_ratio);
    if (table.cold_adjusted) out.cold_miss_share += t * (hi.cold_miss_ratio - lo.cold_miss_ratio);
  }
  out.miss_count = out.miss_ratio * Rational(static_cast<long>(table.access_count));
  return out;
}

double data_movement_accuracy(double predicted_misses, double simulated_misses, double accesses) {
  if (accesses <= 0) return 1.0;
  return 1.0 - std::abs(predicted_misses - simulated_misses) / accesses;
}

}  // namespace locality
