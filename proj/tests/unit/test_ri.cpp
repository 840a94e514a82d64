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

#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "locality/ri.hpp"
#include "oracles.hpp"

using locality::kFirstTouch;
using locality::make_rational;
using locality::Rational;

namespace {

const std::vector<std::uint32_t> kToy{0, 1, 0, 2, 2};  // A B A C C

locality::dsl::AffineProgram corpus(const std::string& name) {
  std::ifstream in(std::string(LOCALITY_CORPUS_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return locality::dsl::parse_program(ss.str());
}

std::vector<std::uint32_t> replicate(const std::vector<std::uint32_t>& t, int r) {
  std::vector<std::uint32_t> out;
  for (int k = 0; k < r; ++k) out.insert(out.end(), t.begin(), t.end());
  return out;
}

}  // namespace

TEST(BackwardRI, ToyTrace) {
  const auto ris = locality::backward_ris(kToy);
  EXPECT_EQ(ris.ri, (std::vector<std::int64_t>{kFirstTouch, kFirstTouch, 2, kFirstTouch, 1}));
  EXPECT_EQ(ris.boundary.first, (std::vector<std::int64_t>{0, 1, 3}));
  EXPECT_EQ(ris.boundary.last, (std::vector<std::int64_t>{2, 1, 4}));
}

TEST(BackwardRI, MatchesQuadraticScan) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto trace = oracle::random_trace(rng, 1 + rng() % 80, 1 + rng() % 12);
    EXPECT_EQ(locality::backward_ris(trace).ri, oracle::backward_ris(trace));
  }
}

TEST(InfiniteRepeat, ToyImaginaryIntervals) {
  const auto dist = locality::infinite_repeat(locality::backward_ris(kToy));
  // A -> 5 + 0 - 2, B -> 5 + 1 - 1, C -> 5 + 3 - 4.
  ASSERT_EQ(dist.entries.size(), 5u);
  EXPECT_EQ(dist.entries.at(1), (locality::RICount{1, 0}));
  EXPECT_EQ(dist.entries.at(2), (locality::RICount{1, 0}));
  EXPECT_EQ(dist.entries.at(3), (locality::RICount{0, 1}));
  EXPECT_EQ(dist.entries.at(4), (locality::RICount{0, 1}));
  EXPECT_EQ(dist.entries.at(5), (locality::RICount{0, 1}));
  EXPECT_EQ(dist.total_portion(), 1);
  EXPECT_EQ(dist.first_touches, 0);
  EXPECT_EQ(dist.data_size, 3);
}

TEST(InfiniteRepeat, MatchesBoundaryOracle) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const auto trace = oracle::random_trace(rng, 1 + rng() % 60, 1 + rng() % 10);
    const auto dist = locality::infinite_repeat(locality::backward_ris(trace));
    std::map<std::int64_t, std::int64_t> want;
    for (auto r : oracle::backward_ris(trace)) {
      if (r != oracle::kFirst) ++want[r];
    }
    for (auto r : oracle::imaginary_ris(trace)) ++want[r];
    std::map<std::int64_t, std::int64_t> got;
    for (const auto& [v, c] : dist.entries) got[v] = c.total();
    EXPECT_EQ(got, want);
  }
}

TEST(RealDistribution, KeepsFirstTouchesApart) {
  const auto dist = locality::real_distribution(locality::backward_ris(kToy));
  EXPECT_EQ(dist.first_touches, 3);
  EXPECT_EQ(dist.entries.size(), 2u);
}

TEST(Footprint, ToyValues) {
  EXPECT_EQ(locality::footprint_oracle(kToy, 2), make_rational(7, 4));
  EXPECT_EQ(oracle::footprint(kToy, 2), make_rational(7, 4));
  const auto dist = locality::infinite_repeat(locality::backward_ris(kToy));
  EXPECT_EQ(locality::rtfp(dist, 0), 0);
  EXPECT_EQ(locality::rtfp(dist, 2), make_rational(9, 5));
  EXPECT_EQ(locality::rtfp(dist, 5), 3);
  EXPECT_EQ(locality::rtfp(dist, 100), 3);
}

TEST(Footprint, XiangEqualsWindowEnumeration) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 150; ++trial) {
    const auto trace = oracle::random_trace(rng, 1 + rng() % 50, 1 + rng() % 8);
    const auto ris = locality::backward_ris(trace);
    const auto n = static_cast<std::int64_t>(trace.size());
    for (std::int64_t x = 0; x <= n; ++x) {
      ASSERT_EQ(locality::xiang_footprint(ris, x), oracle::footprint(trace, x)) << "trial " << trial << " x " << x;
      ASSERT_EQ(locality::footprint_oracle(trace, x), oracle::footprint(trace, x));
    }
  }
}

TEST(Footprint, ReplicationConvergesToRtfp) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 30; ++trial) {
    const auto trace = oracle::random_trace(rng, 2 + rng() % 30, 1 + rng() % 6);
    const auto dist = locality::infinite_repeat(locality::backward_ris(trace));
    const auto m = static_cast<std::int64_t>(dist.data_size);
    const auto n = static_cast<std::int64_t>(trace.size());
    for (int r = 2; r <= 5; ++r) {
      const auto ris = locality::backward_ris(replicate(trace, r));
      for (std::int64_t x = 0; x <= n; ++x) {
        Rational gap = locality::xiang_footprint(ris, x) - locality::rtfp(dist, x);
        ASSERT_LE(abs(gap), make_rational(m, r)) << "r=" << r << " x=" << x;
      }
    }
  }
}

TEST(SumInvariance, RandomTraces) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 200; ++trial) {
    const auto trace = oracle::random_trace(rng, 1 + rng() % 100, 1 + rng() % 20);
    const auto check = locality::ri_sum_check(locality::infinite_repeat(locality::backward_ris(trace)));
    EXPECT_TRUE(check.pass);
    EXPECT_EQ(check.residual, 0);
  }
}

TEST(SumInvariance, DetectsPerturbation) {
  auto dist = locality::infinite_repeat(locality::backward_ris(kToy));
  dist.entries[4].imaginary -= 1;
  dist.entries[6].imaginary += 1;
  const auto check = locality::ri_sum_check(dist);
  EXPECT_FALSE(check.pass);
  EXPECT_EQ(check.residual, make_rational(2, 5));
}

TEST(SumInvariance, MatmulTraces) {
  for (std::int64_t n : {8, 16, 24}) {
    const auto t = locality::generate_trace(corpus("matmul.aff"), {{"n", n}}, 8);
    const auto check = locality::ri_sum_check(locality::analyze(t));
    EXPECT_TRUE(check.pass);
    EXPECT_EQ(check.expected, make_rational(3 * n * n / 8));
  }
}
