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

#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "locality/rational.hpp"
#include "locality/ri.hpp"

namespace locality {

/// One row per distinct RI value v, plus a leading row for v = 0.
///   miss_ratio       m(v) = P(ri > v)
///   cold_miss_ratio  imaginary portion with ri <= v
///   cache_size       s(v) = sum_{x < v} m(x)
struct CacheRow {
  std::int64_t ri_value = 0;
  Rational portion;
  Rational imaginary_portion;
  Rational miss_ratio;
  Rational cold_miss_ratio;
  Rational cache_size;
  friend bool operator==(const CacheRow&, const CacheRow&) = default;
};

struct CacheTable {
  std::vector<CacheRow> rows;
  std::int64_t access_count = 0;
  std::int64_t data_size = 0;
  /// When set, queries report miss_ratio + cold_miss_ratio (first-touch
  /// misses of a single execution counted back in).
  bool cold_adjusted = false;

  Rational effective_miss_ratio(const CacheRow& row) const {
    return cold_adjusted ? row.miss_ratio + row.cold_miss_ratio : row.miss_ratio;
  }
  friend bool operator==(const CacheTable&, const CacheTable&) = default;
};

class InfiniteRIError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Denning recursion over an Infinite-Repeat distribution. Throws
/// InfiniteRIError if first touches remain.
CacheTable denning_table(const RIDistribution& dist);

/// Same rows, with queries reporting the single-execution miss ratio.
CacheTable cold_adjust(CacheTable table);

enum class QueryMode { Step, Interpolate };

struct CacheQueryResult {
  std::int64_t cache_size = 0;
  Rational miss_ratio;
  Rational miss_count;
  /// Part of miss_ratio due to first touches (0 unless cold-adjusted).
  Rational cold_miss_share;
};

/// Miss ratio at an integer cache size (in blocks). Step mode uses the last
/// row whose cache size does not exceed c; interpolate mode is linear between
/// the bracketing rows.
CacheQueryResult query_miss_ratio(const CacheTable& table, std::int64_t c, QueryMode mode = QueryMode::Step);

/// 1 - |predicted - simulated| / accesses.
double data_movement_accuracy(double predicted_misses, double simulated_misses, double accesses);

}  // namespace locality
