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

#include "locality/ri.hpp"

#include <algorithm>
#include <stdexcept>

namespace locality {

BackwardRIs backward_ris(std::span<const std::uint32_t> blocks) {
  BackwardRIs out;
  out.ri.reserve(blocks.size());
  auto& first = out.boundary.first;
  auto& last = out.boundary.last;
  for (std::size_t t = 0; t < blocks.size(); ++t) {
    const std::uint32_t d = blocks[t];
    if (d >= first.size()) {
      first.resize(d + 1, kFirstTouch);
      last.resize(d + 1, kFirstTouch);
    }
    const auto pos = static_cast<std::int64_t>(t);
    if (last[d] == kFirstTouch) {
      out.ri.push_back(kFirstTouch);
      first[d] = pos;
    } else {
      out.ri.push_back(pos - last[d]);
    }
    last[d] = pos;
  }
  return out;
}

Rational RIDistribution::portion(std::int64_t value) const {
  auto it = entries.find(value);
  return it == entries.end() ? Rational(0) : make_rational(it->second.total(), accesses);
}

Rational RIDistribution::real_portion(std::int64_t value) const {
  auto it = entries.find(value);
  return it == entries.end() ? Rational(0) : make_rational(it->second.real, accesses);
}

Rational RIDistribution::imaginary_portion(std::int64_t value) const {
  auto it = entries.find(value);
  return it == entries.end() ? Rational(0) : make_rational(it->second.imaginary, accesses);
}

Rational RIDistribution::total_portion() const {
  std::int64_t c = 0;
  for (const auto& [v, n] : entries) c += n.total();
  return accesses == 0 ? Rational(0) : make_rational(c, accesses);
}

void RIDistribution::add(std::int64_t value, bool imaginary, std::int64_t count) {
  auto& e = entries[value];
  (imaginary ? e.imaginary : e.real) += count;
}

namespace {

std::int64_t distinct(const BoundaryRecord& b) {
  std::int64_t m = 0;
  for (auto f : b.first) m += f != kFirstTouch;
  return m;
}

}  // namespace

RIDistribution infinite_repeat(const BackwardRIs& ris) {
  RIDistribution dist;
  const auto n = static_cast<std::int64_t>(ris.ri.size());
  dist.accesses = n;
  dist.data_size = distinct(ris.boundary);
  for (auto r : ris.ri) {
    if (r != kFirstTouch) dist.add(r, false);
  }
  for (std::size_t d = 0; d < ris.boundary.first.size(); ++d) {
    const auto f = ris.boundary.first[d];
    if (f == kFirstTouch) continue;
    dist.add(n + f - ris.boundary.last[d], true);
  }
  return dist;
}

RIDistribution real_distribution(const BackwardRIs& ris) {
  RIDistribution dist;
  dist.accesses = static_cast<std::int64_t>(ris.ri.size());
  dist.data_size = distinct(ris.boundary);
  for (auto r : ris.ri) {
    if (r == kFirstTouch) {
      ++dist.first_touches;
    } else {
      dist.add(r, false);
    }
  }
  return dist;
}

Rational footprint_oracle(std::span<const std::uint32_t> blocks, std::int64_t x) {
  const auto n = static_cast<std::int64_t>(blocks.size());
  if (x < 0 || x > n) throw std::out_of_range("window length outside [0, n]");
  if (x == 0) return 0;
  std::uint32_t m = 0;
  for (auto b : blocks) m = std::max(m, b + 1);
  std::vector<std::int64_t> live(m, 0);
  std::int64_t distinct_now = 0;
  Integer total = 0;
  for (std::int64_t t = 0; t < n; ++t) {
    if (live[blocks[t]]++ == 0) ++distinct_now;
    if (t >= x && --live[blocks[t - x]] == 0) --distinct_now;
    if (t >= x - 1) total += static_cast<long>(distinct_now);
  }
  Rational r(total, Integer(static_cast<long>(n - x + 1)));
  r.canonicalize();
  return r;
}

Rational rtfp(const RIDistribution& dist, std::int64_t x) {
  Integer excess = 0;
  for (auto it = dist.entries.upper_bound(x); it != dist.entries.end(); ++it) {
    excess += Integer(static_cast<long>(it->first - x)) * static_cast<long>(it->second.total());
  }
  Rational r = Rational(static_cast<long>(dist.data_size)) - Rational(excess, Integer(static_cast<long>(dist.accesses)));
  r.canonicalize();
  return r;
}

Rational xiang_footprint(const BackwardRIs& ris, std::int64_t x) {
  const auto n = static_cast<std::int64_t>(ris.ri.size());
  if (x < 0 || x > n) throw std::out_of_range("window length outside [0, n]");
  Integer absent = 0;
  for (auto r : ris.ri) {
    if (r != kFirstTouch && r > x) absent += static_cast<long>(r - x);
  }
  const std::int64_t m = distinct(ris.boundary);
  for (std::size_t d = 0; d < ris.boundary.first.size(); ++d) {
    const auto f = ris.boundary.first[d];
    if (f == kFirstTouch) continue;
    const std::int64_t head = f + 1;
    const std::int64_t tail = n - ris.boundary.last[d];
    if (head > x) absent += static_cast<long>(head - x);
    if (tail > x) absent += static_cast<long>(tail - x);
  }
  Rational r = Rational(static_cast<long>(m)) - Rational(absent, Integer(static_cast<long>(n - x + 1)));
  r.canonicalize();
  return r;
}

SumCheck ri_sum_check(const RIDistribution& dist) {
  SumCheck out;
  Integer weighted = 0;
  for (const auto& [v, c] : dist.entries) weighted += Integer(static_cast<long>(v)) * static_cast<long>(c.total());
  out.sum = Rational(weighted, Integer(static_cast<long>(std::max<std::int64_t>(dist.accesses, 1))));
  out.sum.canonicalize();
  out.expected = static_cast<long>(dist.data_size);
  out.residual = out.sum - out.expected;
  out.pass = out.residual == 0;
  return out;
}

}  // namespace locality
