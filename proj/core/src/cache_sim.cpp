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

#include "locality/cache_sim.hpp"

#include <charconv>
#include <limits>
#include <unordered_map>
#include <unordered_set>

namespace locality {

CacheGeometry CacheGeometry::full(std::int64_t capacity_blocks, std::int64_t block_bytes) {
  CacheGeometry g;
  g.associativity = capacity_blocks;
  g.num_sets = 1;
  g.block_bytes = block_bytes;
  g.fully_associative = true;
  return g;
}

CacheGeometry CacheGeometry::set_associative(std::int64_t ways, std::int64_t sets, std::int64_t block_bytes) {
  CacheGeometry g;
  g.associativity = ways;
  g.num_sets = sets;
  g.block_bytes = block_bytes;
  g.fully_associative = sets == 1;
  return g;
}

namespace {

std::int64_t parse_field(std::string_view s, const std::string& text) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("malformed geometry '" + text + "': expected ways:sets:block_bytes");
  }
  return v;
}

}  // namespace

CacheGeometry CacheGeometry::parse(const std::string& text) {
  std::vector<std::string_view> parts;
  std::string_view rest = text;
  for (;;) {
    auto colon = rest.find(':');
    parts.push_back(rest.substr(0, colon));
    if (colon == std::string_view::npos) break;
    rest.remove_prefix(colon + 1);
  }
  if (parts.size() != 3) throw std::invalid_argument("malformed geometry '" + text + "': expected ways:sets:block_bytes");
  const std::int64_t block_bytes = parse_field(parts[2], text);
  if (block_bytes < kElementBytes || block_bytes % kElementBytes != 0) {
    throw std::invalid_argument("block size must be a positive multiple of " + std::to_string(kElementBytes) + " bytes");
  }
  if (parts[0] == "full") return full(parse_field(parts[1], text), block_bytes);
  return set_associative(parse_field(parts[0], text), parse_field(parts[1], text), block_bytes);
}

std::string CacheGeometry::to_string() const {
  if (fully_associative && num_sets == 1) return "full:" + std::to_string(associativity) + ":" + std::to_string(block_bytes);
  return std::to_string(associativity) + ":" + std::to_string(num_sets) + ":" + std::to_string(block_bytes);
}

namespace {

void check(const CacheGeometry& g) {
  if (g.associativity <= 0 || g.num_sets <= 0) throw CapacityZero("cache capacity must be at least one block");
  if (g.block_elems() <= 0) throw std::invalid_argument("block size smaller than one element");
}

std::int64_t block_of(std::int64_t addr, std::int64_t b) {
  std::int64_t q = addr / b;
  if (addr % b != 0 && addr < 0) --q;
  return q;
}

// Doubly linked LRU list over slots, most recent at head.
class LruList {
 public:
  explicit LruList(std::int64_t capacity) : capacity_(capacity) {}

  // True on hit. On miss inserts the key, evicting the LRU entry when full.
  bool touch(std::int64_t key) {
    auto it = where_.find(key);
    if (it != where_.end()) {
      const std::int32_t s = it->second;
      unlink(s);
      push_front(s);
      return true;
    }
    std::int32_t s;
    if (static_cast<std::int64_t>(nodes_.size()) < capacity_) {
      s = static_cast<std::int32_t>(nodes_.size());
      nodes_.push_back({});
    } else {
      s = tail_;
      unlink(s);
      where_.erase(nodes_[s].key);
    }
    nodes_[s].key = key;
    push_front(s);
    where_.emplace(key, s);
    return false;
  }

 private:
  struct Node {
    std::int64_t key = 0;
    std::int32_t prev = -1;
    std::int32_t next = -1;
  };

  void unlink(std::int32_t s) {
    Node& n = nodes_[s];
    if (n.prev >= 0) {
      nodes_[n.prev].next = n.next;
    } else {
      head_ = n.next;
    }
    if (n.next >= 0) {
      nodes_[n.next].prev = n.prev;
    } else {
      tail_ = n.prev;
    }
    n.prev = n.next = -1;
  }

  void push_front(std::int32_t s) {
    nodes_[s].prev = -1;
    nodes_[s].next = head_;
    if (head_ >= 0) nodes_[head_].prev = s;
    head_ = s;
    if (tail_ < 0) tail_ = s;
  }

  std::int64_t capacity_;
  std::vector<Node> nodes_;
  std::unordered_map<std::int64_t, std::int32_t> where_;
  std::int32_t head_ = -1;
  std::int32_t tail_ = -1;
};

}  // namespace

SimResult simulate_fully_associative(std::span<const std::int64_t> addresses, const CacheGeometry& geometry) {
  check(geometry);
  const std::int64_t capacity = geometry.capacity_blocks();
  if (capacity > std::numeric_limits<std::int32_t>::max()) throw std::invalid_argument("capacity too large");
  const std::int64_t b = geometry.block_elems();
  LruList lru(capacity);
  std::unordered_set<std::int64_t> seen;
  SimResult r;
  r.set_accesses.assign(1, 0);
  r.set_misses.assign(1, 0);
  for (auto addr : addresses) {
    const std::int64_t blk = block_of(addr, b);
    ++r.accesses;
    if (!lru.touch(blk)) {
      ++r.misses;
      if (seen.insert(blk).second) ++r.cold_misses;
    }
  }
  r.set_accesses[0] = r.accesses;
  r.set_misses[0] = r.misses;
  return r;
}

SimResult simulate_set_associative(std::span<const std::int64_t> addresses, const CacheGeometry& geometry) {
  check(geometry);
  const std::int64_t ways = geometry.associativity;
  const std::int64_t sets = geometry.num_sets;
  const std::int64_t b = geometry.block_elems();
  constexpr std::int64_t kEmpty = std::numeric_limits<std::int64_t>::min();
  std::vector<std::int64_t> tags(static_cast<std::size_t>(ways * sets), kEmpty);
  std::vector<std::uint64_t> stamps(tags.size(), 0);
  std::unordered_set<std::int64_t> seen;
  SimResult r;
  r.set_accesses.assign(static_cast<std::size_t>(sets), 0);
  r.set_misses.assign(static_cast<std::size_t>(sets), 0);
  std::uint64_t clock = 0;
  for (auto addr : addresses) {
    const std::int64_t blk = block_of(addr, b);
    std::int64_t set = blk % sets;
    if (set < 0) set += sets;
    const std::size_t base = static_cast<std::size_t>(set * ways);
    ++clock;
    ++r.accesses;
    ++r.set_accesses[set];
    std::size_t victim = base;
    bool hit = false;
    for (std::size_t w = base; w < base + static_cast<std::size_t>(ways); ++w) {
      if (tags[w] == blk) {
        stamps[w] = clock;
        hit = true;
        break;
      }
      if (stamps[w] < stamps[victim]) victim = w;
    }
    if (hit) continue;
    ++r.misses;
    ++r.set_misses[set];
    if (seen.insert(blk).second) ++r.cold_misses;
    tags[victim] = blk;
    stamps[victim] = clock;
  }
  return r;
}

SimResult simulate(std::span<const std::int64_t> addresses, const CacheGeometry& geometry) {
  check(geometry);
  if (geometry.num_sets == 1 && geometry.associativity > 16) return simulate_fully_associative(addresses, geometry);
  return simulate_set_associative(addresses, geometry);
}

SimResult simulate_blocks(std::span<const std::uint32_t> blocks, std::int64_t capacity_blocks) {
  std::vector<std::int64_t> addrs(blocks.begin(), blocks.end());
  return simulate_fully_associative(addrs, CacheGeometry::full(capacity_blocks, CacheGeometry::kElementBytes));
}

SimResult simulate(const AccessTrace& trace, const PaddedLayout& layout, const CacheGeometry& geometry) {
  if (layout.block_size != geometry.block_elems()) {
    throw std::invalid_argument("layout block size differs from the cache block size");
  }
  return simulate(addresses(trace, layout), geometry);
}

std::vector<SimResult> sweep(std::span<const std::int64_t> addresses, const std::vector<CacheGeometry>& geometries) {
  if (geometries.empty()) throw std::invalid_argument("sweep needs at least one geometry");
  std::vector<SimResult> out;
  out.reserve(geometries.size());
  for (const auto& g : geometries) out.push_back(simulate(addresses, g));
  return out;
}

}  // namespace locality
