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
#include <map>
#include <span>
#include <vector>

#include "locality/rational.hpp"
#include "locality/trace.hpp"

namespace locality {

/// Marker for an access with no earlier access to the same block.
inline constexpr std::int64_t kFirstTouch = -1;

/// First and last access positions (0-based) per dense block id.
struct BoundaryRecord {
  std::vector<std::int64_t> first;
  std::vector<std::int64_t> last;
};

struct BackwardRIs {
  /// Per access: t - t' for the latest earlier access t' to the same block,
  /// or kFirstTouch.
  std::vector<std::int64_t> ri;
  BoundaryRecord boundary;
};

/// `blocks` holds dense block ids (0..m-1), as in AccessTrace::blocks.
BackwardRIs backward_ris(std::span<const std::uint32_t> blocks);
inline BackwardRIs backward_ris(const AccessTrace& trace) { return backward_ris(trace.blocks); }

struct RICount {
  std::int64_t real = 0;
  std::int64_t imaginary = 0;
  std::int64_t total() const { return real + imaginary; }
  friend bool operator==(const RICount&, const RICount&) = default;
};

/// Histogram of reuse-interval values over one trace.
struct RIDistribution {
  std::map<std::int64_t, RICount> entries;
  std::int64_t accesses = 0;
  std::int64_t data_size = 0;
  /// First touches not converted to imaginary reuses (zero once Infinite
  /// Repeat has been applied).
  std::int64_t first_touches = 0;

  Rational portion(std::int64_t value) const;
  Rational real_portion(std::int64_t value) const;
  Rational imaginary_portion(std::int64_t value) const;
  /// Sum of all portions (1 under Infinite Repeat).
  Rational total_portion() const;
  void add(std::int64_t value, bool imaginary, std::int64_t count = 1);

  friend bool operator==(const RIDistribution&, const RIDistribution&) = default;
};

/// Replaces each first touch of block d with the imaginary interval
/// n + f_d - l_d, where n is the trace length.
RIDistribution infinite_repeat(const BackwardRIs& ris);
/// Real reuses only; first touches are counted in `first_touches`.
RIDistribution real_distribution(const BackwardRIs& ris);
inline RIDistribution analyze(const AccessTrace& trace) { return infinite_repeat(backward_ris(trace)); }

/// Average number of distinct blocks over all windows of length x, by
/// direct enumeration (x in [0, n]).
Rational footprint_oracle(std::span<const std::uint32_t> blocks, std::int64_t x);

/// m - sum over v > x of (v - x) P(v).
Rational rtfp(const RIDistribution& dist, std::int64_t x);

/// Finite-trace footprint from reuse intervals and boundary terms:
///   fp(x) = m - (sum_{r_i > x} (r_i - x) + sum_{b > x} (b - x)) / (n - x + 1)
/// with two boundary terms per block, b = f_d + 1 and b = n - l_d.
Rational xiang_footprint(const BackwardRIs& ris, std::int64_t x);

struct SumCheck {
  bool pass = false;
  Rational sum;
  Rational expected;
  Rational residual;
};

/// Sum of value * portion against the distinct-block count.
SumCheck ri_sum_check(const RIDistribution& dist);

}  // namespace locality
