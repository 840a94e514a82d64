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
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "locality/trace.hpp"

namespace locality {

/// Cache shape. A fully associative cache has one set whose associativity
/// equals the capacity in blocks.
struct CacheGeometry {
  static constexpr std::int64_t kElementBytes = 8;

  std::int64_t associativity = 1;
  std::int64_t num_sets = 1;
  std::int64_t block_bytes = 64;
  bool fully_associative = false;

  std::int64_t block_elems() const { return block_bytes / kElementBytes; }
  std::int64_t capacity_blocks() const { return associativity * num_sets; }

  static CacheGeometry full(std::int64_t capacity_blocks, std::int64_t block_bytes = 64);
  static CacheGeometry set_associative(std::int64_t ways, std::int64_t sets, std::int64_t block_bytes = 64);

  /// "ways:sets:block_bytes" or "full:capacity_blocks:block_bytes".
  static CacheGeometry parse(const std::string& text);
  std::string to_string() const;
};

class CapacityZero : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SimResult {
  std::int64_t accesses = 0;
  std::int64_t misses = 0;
  std::int64_t cold_misses = 0;
  /// Accesses and misses per set.
  std::vector<std::int64_t> set_accesses;
  std::vector<std::int64_t> set_misses;

  double miss_ratio() const { return accesses == 0 ? 0.0 : static_cast<double>(misses) / static_cast<double>(accesses); }
};

/// LRU over element addresses; block = floor(addr / b), set = block mod sets.
SimResult simulate(std::span<const std::int64_t> addresses, const CacheGeometry& geometry);

/// The two engines behind simulate(). The set-associative engine scans the
/// ways of one set; the fully associative one keeps a hashed LRU list.
SimResult simulate_fully_associative(std::span<const std::int64_t> addresses, const CacheGeometry& geometry);
SimResult simulate_set_associative(std::span<const std::int64_t> addresses, const CacheGeometry& geometry);

/// Fully associative LRU over block ids (e.g. AccessTrace::blocks).
SimResult simulate_blocks(std::span<const std::uint32_t> blocks, std::int64_t capacity_blocks);

/// Convenience: addresses from `layout`, then simulate.
SimResult simulate(const AccessTrace& trace, const PaddedLayout& layout, const CacheGeometry& geometry);

std::vector<SimResult> sweep(std::span<const std::int64_t> addresses, const std::vector<CacheGeometry>& geometries);

}  // namespace locality
