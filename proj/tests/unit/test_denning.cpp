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

#include "locality/denning.hpp"
#include "oracles.hpp"

using locality::make_rational;
using locality::QueryMode;
using locality::Rational;

namespace {

const std::vector<std::uint32_t> kToy{0, 1, 0, 2, 2};

locality::RIDistribution toy_dist() { return locality::infinite_repeat(locality::backward_ris(kToy)); }

std::vector<std::int64_t> all_ris(const std::vector<std::uint32_t>& trace) {
  std::vector<std::int64_t> out;
  for (auto r : oracle::backward_ris(trace)) {
    if (r != oracle::kFirst) out.push_back(r);
  }
  for (auto r : oracle::imaginary_ris(trace)) out.push_back(r);
  return out;
}

}  // namespace

TEST(Denning, ToyRows) {
  const auto table = locality::denning_table(toy_dist());
  ASSERT_EQ(table.rows.size(), 6u);
  const std::vector<Rational> m{1, make_rational(4, 5), make_rational(3, 5), make_rational(2, 5), make_rational(1, 5), 0};
  const std::vector<Rational> c{0, 1, make_rational(9, 5), make_rational(12, 5), make_rational(14, 5), 3};
  const std::vector<Rational> cold{0, 0, 0, make_rational(1, 5), make_rational(2, 5), make_rational(3, 5)};
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    EXPECT_EQ(table.rows[i].ri_value, static_cast<std::int64_t>(i));
    EXPECT_EQ(table.rows[i].miss_ratio, m[i]) << i;
    EXPECT_EQ(table.rows[i].cache_size, c[i]) << i;
    EXPECT_EQ(table.rows[i].cold_miss_ratio, cold[i]) << i;
  }
  const auto adjusted = locality::cold_adjust(table);
  EXPECT_TRUE(adjusted.cold_adjusted);
  EXPECT_EQ(adjusted.effective_miss_ratio(adjusted.rows[3]), make_rational(3, 5));
  EXPECT_EQ(adjusted.effective_miss_ratio(adjusted.rows[5]), make_rational(3, 5));
}

TEST(Denning, RequiresInfiniteRepeat) {
  EXPECT_THROW(locality::denning_table(locality::real_distribution(locality::backward_ris(kToy))),
               locality::InfiniteRIError);
}

TEST(Denning, AgreesWithStepwiseRecursionAndRtfp) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 150; ++trial) {
    const auto trace = oracle::random_trace(rng, 1 + rng() % 60, 1 + rng() % 12);
    const auto dist = locality::infinite_repeat(locality::backward_ris(trace));
    const auto table = locality::denning_table(dist);
    const auto s = oracle::working_set_by_step(all_ris(trace));
    for (const auto& row : table.rows) {
      ASSERT_EQ(row.cache_size, s.at(static_cast<std::size_t>(row.ri_value)));
      ASSERT_EQ(row.cache_size, locality::rtfp(dist, row.ri_value));
    }
    EXPECT_EQ(table.rows.front().cache_size, 0);
    EXPECT_EQ(table.rows.back().cache_size, static_cast<long>(dist.data_size));
    EXPECT_EQ(table.rows.back().miss_ratio, 0);
  }
}

TEST(Denning, AdjustedMissRatioMonotoneAndBounded) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    const auto trace = oracle::random_trace(rng, 1 + rng() % 60, 1 + rng() % 12);
    const auto dist = locality::infinite_repeat(locality::backward_ris(trace));
    const auto table = locality::cold_adjust(locality::denning_table(dist));
    const Rational cold_total = make_rational(dist.data_size, dist.accesses);
    Rational prev = 2;
    for (std::int64_t c = 0; c <= dist.data_size + 2; ++c) {
      const Rational m = locality::query_miss_ratio(table, c).miss_ratio;
      ASSERT_LE(m, prev);
      ASSERT_LE(m, 1);
      ASSERT_GE(m, cold_total);
      prev = m;
    }
    EXPECT_EQ(table.effective_miss_ratio(table.rows.back()), cold_total);
  }
}

TEST(Query, StepAndInterpolate) {
  const auto table = locality::denning_table(toy_dist());
  EXPECT_EQ(locality::query_miss_ratio(table, 0).miss_ratio, 1);
  auto step = locality::query_miss_ratio(table, 2);
  EXPECT_EQ(step.miss_ratio, make_rational(3, 5));
  EXPECT_EQ(step.miss_count, 3);
  EXPECT_EQ(locality::query_miss_ratio(table, 2, QueryMode::Interpolate).miss_ratio, make_rational(8, 15));
  EXPECT_EQ(locality::query_miss_ratio(table, 3).miss_ratio, 0);
  EXPECT_EQ(locality::query_miss_ratio(table, 50).miss_ratio, 0);
}

TEST(Query, ColdOnlyBeyondDataSize) {
  const auto table = locality::cold_adjust(locality::denning_table(toy_dist()));
  const auto q = locality::query_miss_ratio(table, 3);
  EXPECT_EQ(q.miss_ratio, make_rational(3, 5));
  EXPECT_EQ(q.cold_miss_share, make_rational(3, 5));
  EXPECT_EQ(locality::query_miss_ratio(table, 0).miss_ratio, 1);
}

TEST(Accuracy, Examples) {
  EXPECT_DOUBLE_EQ(locality::data_movement_accuracy(120, 120, 1000), 1.0);
  EXPECT_NEAR(locality::data_movement_accuracy(104, 100, 1000), 0.996, 1e-12);
  EXPECT_DOUBLE_EQ(locality::data_movement_accuracy(0, 1000, 1000), 0.0);
}
