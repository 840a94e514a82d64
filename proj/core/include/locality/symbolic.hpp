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
#include <string>
#include <vector>

#include "locality/denning.hpp"
#include "locality/dsl.hpp"
#include "locality/poly.hpp"
#include "locality/ri.hpp"

namespace locality {

/// Parameter values for which a symbolic table is exact: n % modulus == 0
/// and n >= min_n.
struct ValidityDomain {
  std::int64_t modulus = 1;
  std::int64_t min_n = 0;
  bool contains(std::int64_t n) const { return n >= min_n && n % modulus == 0; }
  friend bool operator==(const ValidityDomain&, const ValidityDomain&) = default;
};

/// RI value and occurrence counts as polynomials in the parameter.
struct SymbolicRow {
  Poly value;
  Poly real_count;
  Poly imaginary_count;
  /// Counts divided by the access-count polynomial.
  RationalFn real_portion;
  RationalFn imaginary_portion;

  RationalFn portion() const { return real_portion + imaginary_portion; }
  bool imaginary() const { return !imaginary_count.is_zero(); }
};

struct SymbolicRITable {
  std::string param;
  std::int64_t block_size = 1;
  Poly access_count;
  Poly data_size;
  std::vector<SymbolicRow> rows;
  ValidityDomain domain;
  /// Samples used for fitting, and the remaining ones used as checks.
  std::vector<std::int64_t> fit_samples;
  std::vector<std::int64_t> check_samples;

  /// Concrete distribution at n (rows coinciding at n are merged).
  RIDistribution at(std::int64_t n) const;
};

/// Residuals at held-out samples are nonzero: the counts are not a single
/// polynomial over the sampled range.
class PiecewiseDetected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
/// Rows change relative order within the sampled range.
class MatchAmbiguity : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class OrderUnstable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class OutOfDomain : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Loop depth + 4 multiples of b starting at 2b.
std::vector<std::int64_t> default_samples(const dsl::AffineProgram& prog, std::int64_t block_size);

/// Fits the RI table of `prog` as polynomials in `param` from exact
/// distributions at the sample values. All other parameters must be bound in
/// `fixed`. Samples must be multiples of the block size; at least loop
/// depth + 2 of them must show the full set of rows.
SymbolicRITable derive_symbolic_table(const dsl::AffineProgram& prog, const std::string& param, std::int64_t block_size,
                                      std::vector<std::int64_t> samples, const dsl::Bindings& fixed = {});

struct SymbolicCacheRow {
  Poly value;
  RationalFn portion;
  RationalFn imaginary_portion;
  RationalFn miss_ratio;
  RationalFn cold_miss_ratio;
  RationalFn cache_size;

  RationalFn adjusted_miss_ratio() const { return miss_ratio + cold_miss_ratio; }
};

struct SymbolicCacheTable {
  std::string param;
  std::int64_t block_size = 1;
  Poly access_count;
  Poly data_size;
  ValidityDomain domain;
  /// Row 0 is (value 0, miss ratio 1, cache size 0).
  std::vector<SymbolicCacheRow> rows;

  /// Concrete table at n; rows that coincide or vanish at n are merged away
  /// exactly as denning_table would see them.
  CacheTable at(std::int64_t n) const;
};

/// Row-wise Denning recursion. Throws OrderUnstable when the row order by
/// leading term disagrees with the order at a sample.
SymbolicCacheTable symbolic_denning(const SymbolicRITable& table);

struct SymbolicSumCheck {
  bool pass = false;
  RationalFn sum;
  Poly expected;
  /// sum - expected; zero on success.
  RationalFn residual;
};

SymbolicSumCheck ri_sum_check_symbolic(const SymbolicRITable& table);

struct ScalingRow {
  Poly min_cache_size;
  RationalFn max_miss_ratio;
};

struct ScalingTable {
  std::string param;
  ValidityDomain domain;
  std::vector<ScalingRow> rows;
};

/// Minimal cache sizes bounding the single-execution miss ratio. Walks the
/// rows in order, keeping each row whose cold-adjusted miss ratio is
/// strictly below the last kept one. The non-polynomial part of its cache
/// size is replaced by the ceiling of its supremum over the validity domain.
ScalingTable min_max_scaling(const SymbolicCacheTable& table);

/// Predicted single-execution miss ratio at parameter n and cache size c.
/// Throws OutOfDomain when n is outside the table's validity domain.
CacheQueryResult predict(const SymbolicCacheTable& table, std::int64_t n, std::int64_t c,
                         QueryMode mode = QueryMode::Step);

}  // namespace locality
