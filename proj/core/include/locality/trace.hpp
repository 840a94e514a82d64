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

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "locality/dsl.hpp"

namespace locality {

/// Array-local cache block: the array plus its indices with the last
/// (contiguous) index divided by the block size.
struct DataBlockId {
  int array = 0;
  std::vector<std::int64_t> indices;
  friend auto operator<=>(const DataBlockId&, const DataBlockId&) = default;
};

struct TraceOptions {
  bool record_timestamps = true;
  bool record_subscripts = true;
};

/// Execution-ordered access records. Per-access columns are stored flat;
/// use the accessors to view one record.
class AccessTrace {
 public:
  std::size_t length() const { return blocks.size(); }
  std::size_t distinct_blocks() const { return block_table.size(); }

  std::span<const std::int64_t> timestamp(std::size_t i) const {
    return {timestamps.data() + i * timestamp_dims, static_cast<std::size_t>(timestamp_dims)};
  }
  std::span<const std::int64_t> subscript(std::size_t i) const {
    return {subscripts.data() + i * max_rank, static_cast<std::size_t>(array_rank[arrays[i]])};
  }

  std::int64_t block_size = 1;
  int timestamp_dims = 0;
  int max_rank = 0;
  std::vector<std::string> array_names;
  std::vector<int> array_rank;

  /// Dense block id per access, indexing block_table.
  std::vector<std::uint32_t> blocks;
  /// Array index per access.
  std::vector<std::int32_t> arrays;
  /// timestamp_dims entries per access (empty when not recorded).
  std::vector<std::int64_t> timestamps;
  /// max_rank raw element subscripts per access (empty when not recorded).
  std::vector<std::int64_t> subscripts;
  /// Block identity in first-touch order.
  std::vector<DataBlockId> block_table;
};

class UnboundSymbolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OutOfBoundsError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Length of the zero-padded timestamp vectors of a program: loops and
/// blocks each contribute one dimension, conditionals none.
int timestamp_depth(const dsl::AffineProgram& prog);

/// Runs the program under `bindings` and records every access. Loops whose
/// upper bound does not exceed the lower bound execute zero times.
AccessTrace generate_trace(const dsl::AffineProgram& prog, const dsl::Bindings& bindings, std::int64_t block_size,
                           TraceOptions options = {});

/// The set of timestamp vectors of a program built bottom-up from the
/// statement structure, returned in lexicographic order. Independent of
/// generate_trace and meant for small instances.
std::vector<std::vector<std::int64_t>> timestamp_space(const dsl::AffineProgram& prog, const dsl::Bindings& bindings);

struct ArrayLayout {
  std::string name;
  std::vector<std::int64_t> declared;
  std::vector<std::int64_t> extents;
  /// Element address of index (0, ..., 0); a multiple of the block size.
  std::int64_t base = 0;
  std::int64_t size() const;
};

struct PaddedLayout {
  std::int64_t block_size = 1;
  std::vector<ArrayLayout> arrays;
  /// One past the last element of the last array.
  std::int64_t end() const;
};

bool is_prime(std::int64_t v);
std::int64_t next_prime(std::int64_t v);
/// Innermost extent: b*p with p the least prime such that b*p >= extent.
std::int64_t pad_innermost(std::int64_t extent, std::int64_t block_size);
/// Middle extents: the least prime >= extent.
std::int64_t pad_middle(std::int64_t extent);

/// Prime-padded layout: innermost extents via pad_innermost, middle extents
/// via pad_middle, outermost unchanged (rank-1 arrays use the innermost
/// rule). Arrays are placed back to back on block boundaries.
PaddedLayout pad_layout(const dsl::AffineProgram& prog, const dsl::Bindings& bindings, std::int64_t block_size);
/// Declared extents without padding, same placement rule.
PaddedLayout natural_layout(const dsl::AffineProgram& prog, const dsl::Bindings& bindings, std::int64_t block_size);

/// Row-major element address. Throws OutOfBoundsError.
std::int64_t linearize(const PaddedLayout& layout, int array, std::span<const std::int64_t> indices);

/// Element addresses for every access of a trace recorded with subscripts.
std::vector<std::int64_t> addresses(const AccessTrace& trace, const PaddedLayout& layout);

/// One line per access: `t=(0,1,0) a=A blk=(3,0)`.
void write_trace_text(std::ostream& os, const AccessTrace& trace);
/// CSV with header `pos,array,block,t0,...,b0,...`.
void write_trace_csv(std::ostream& os, const AccessTrace& trace);

}  // namespace locality
