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
#include <sstream>

#include "locality/symbolic.hpp"
#include "oracles.hpp"

namespace dsl = locality::dsl;
using locality::make_rational;
using locality::Poly;
using locality::Rational;
using locality::RationalFn;

namespace {

dsl::AffineProgram corpus(const std::string& name) {
  std::ifstream in(std::string(LOCALITY_CORPUS_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return dsl::parse_program(ss.str());
}

const Poly n = Poly::variable();

locality::SymbolicRITable derive(const std::string& name, std::int64_t b = 8) {
  const auto prog = corpus(name);
  return locality::derive_symbolic_table(prog, "n", b, locality::default_samples(prog, b));
}

locality::RIDistribution brute(const std::string& name, std::int64_t value, std::int64_t b = 8) {
  return locality::analyze(locality::generate_trace(corpus(name), {{"n", value}}, b));
}

// Matmul fixture shared by several tests; derivation takes a moment.
const locality::SymbolicRITable& matmul() {
  static const auto table = derive("matmul.aff");
  return table;
}

}  // namespace

TEST(Symbolic, DefaultSamples) {
  EXPECT_EQ(locality::default_samples(corpus("matmul.aff"), 8),
            (std::vector<std::int64_t>{16, 24, 32, 40, 48, 56, 64}));
  EXPECT_THROW(locality::derive_symbolic_table(corpus("traverse1d.aff"), "n", 8, {8, 12, 16}), std::invalid_argument);
}

TEST(Symbolic, TraverseOneDimension) {
  const auto table = derive("traverse1d.aff");
  EXPECT_EQ(table.access_count, n);
  EXPECT_EQ(table.data_size, make_rational(1, 8) * n);
  ASSERT_EQ(table.rows.size(), 2u);
  EXPECT_EQ(table.rows[0].value, Poly(1));
  EXPECT_EQ(table.rows[0].portion(), RationalFn(make_rational(7, 8)));
  EXPECT_FALSE(table.rows[0].imaginary());
  EXPECT_EQ(table.rows[1].value, n - 7);
  EXPECT_TRUE(table.rows[1].imaginary());
  EXPECT_EQ(table.domain.modulus, 8);
  EXPECT_TRUE(locality::ri_sum_check_symbolic(table).pass);
}

TEST(Symbolic, ConstantProgram) {
  const auto table = locality::derive_symbolic_table(corpus("toy.aff"), "n", 1, {4, 5, 6});
  EXPECT_EQ(table.domain, (locality::ValidityDomain{1, 0}));
  EXPECT_EQ(table.rows.size(), 5u);
  EXPECT_EQ(table.access_count, Poly(5));
  EXPECT_EQ(table.at(123), brute("toy.aff", 0, 1));
}

TEST(Symbolic, MatmulReferenceTable) {
  const auto& t = matmul();
  ASSERT_EQ(t.rows.size(), 8u);
  const std::vector<Poly> values{Poly(1),        Poly(3),      Poly(4),          4 * n - 28,
                                 4 * n,          4 * n * n - 28 * n,
                                 4 * n * n * n - 4 * n * n + 4 * n - 28, 4 * n * n * n - 32 * n + 3};
  for (std::size_t i = 0; i < values.size(); ++i) EXPECT_EQ(t.rows[i].value, values[i]) << i;
  EXPECT_EQ(t.rows[0].portion(), RationalFn(make_rational(1, 4)));
  EXPECT_EQ(t.rows[1].portion(), RationalFn(Poly(make_rational(1, 4)) - Poly::monomial(make_rational(1, 32), -1)));
  EXPECT_EQ(t.rows[6].portion(), RationalFn(Poly::monomial(make_rational(1, 32), -1)));
  EXPECT_EQ(t.access_count, 4 * n * n * n);
  EXPECT_EQ(t.data_size, make_rational(3, 8) * n * n);
  const auto sum = locality::ri_sum_check_symbolic(t);
  EXPECT_TRUE(sum.pass);
  EXPECT_EQ(sum.expected, make_rational(3, 8) * n * n);
}

TEST(Symbolic, PortionsSumToOneIdentically) {
  RationalFn total;
  for (const auto& row : matmul().rows) total += row.portion();
  EXPECT_EQ(total, RationalFn(1));
}

TEST(Symbolic, CommutesWithConcreteAtHeldOutSample) {
  const auto& t = matmul();
  const auto cache = locality::symbolic_denning(t);
  for (std::int64_t held_out : {72, 80}) {
    const auto dist = brute("matmul.aff", held_out);
    EXPECT_EQ(t.at(held_out), dist);
    EXPECT_EQ(cache.at(held_out), locality::denning_table(dist));
  }
  const auto c = cache.rows.back().cache_size;
  EXPECT_EQ(c, RationalFn(make_rational(3, 8) * n * n));
}

TEST(Symbolic, PerturbedCoefficientIsCaught) {
  auto t = matmul();
  t.rows[3].real_count += Poly(1);
  EXPECT_NE(t.at(72), brute("matmul.aff", 72));
  auto u = matmul();
  u.rows[3].value += Poly(1);
  EXPECT_NE(u.at(72), brute("matmul.aff", 72));
}

TEST(Symbolic, PiecewiseDetected) {
  EXPECT_THROW(derive("triangular.aff"), locality::PiecewiseDetected);
}

TEST(Symbolic, CrossingRowsAreAmbiguous) {
  // Real RIs n + 1 (A) and 41 (C) trade places between n = 30 and n = 50.
  const auto prog = dsl::parse_program(
      "params n; array A[1]; array B[n]; array C[1]; array D[40];\n"
      "access A[0]; for i = 0 to n { access B[i]; } access A[0];\n"
      "access C[0]; for j = 0 to 40 { access D[j]; } access C[0];");
  EXPECT_THROW(locality::derive_symbolic_table(prog, "n", 1, {10, 20, 30, 50}), locality::MatchAmbiguity);
  EXPECT_NO_THROW(locality::derive_symbolic_table(prog, "n", 1, {50, 60, 70, 80}));
}

TEST(Symbolic, NonGenericSampleAccepted) {
  const auto prog = dsl::parse_program(
      "params n; array A[1]; array B[n]; array C[1]; array D[40];\n"
      "access A[0]; for i = 0 to n { access B[i]; } access A[0];\n"
      "access C[0]; for j = 0 to 40 { access D[j]; } access C[0];");
  // n = 40 merges n + 1 with 41 and 43 with n + 3.
  const auto t = locality::derive_symbolic_table(prog, "n", 1, {10, 20, 30, 40});
  EXPECT_EQ(t.rows.size(), 5u);
  EXPECT_EQ(t.check_samples, (std::vector<std::int64_t>{30, 40}));
}

TEST(Scaling, Traverse) {
  const auto scaling = locality::min_max_scaling(locality::symbolic_denning(derive("traverse1d.aff")));
  ASSERT_EQ(scaling.rows.size(), 2u);
  EXPECT_EQ(scaling.rows[0].min_cache_size, Poly());
  EXPECT_EQ(scaling.rows[0].max_miss_ratio, RationalFn(1));
  EXPECT_EQ(scaling.rows[1].min_cache_size, Poly(1));
  EXPECT_EQ(scaling.rows[1].max_miss_ratio, RationalFn(make_rational(1, 8)));
}

TEST(Scaling, MatmulRowsMonotone) {
  const auto scaling = locality::min_max_scaling(locality::symbolic_denning(matmul()));
  ASSERT_EQ(scaling.rows.size(), 7u);
  EXPECT_EQ(scaling.rows[1].min_cache_size, Poly(1));
  EXPECT_EQ(scaling.rows[1].max_miss_ratio, RationalFn(make_rational(3, 4)));
  EXPECT_EQ(scaling.rows[2].min_cache_size, Poly(3));
  EXPECT_EQ(scaling.rows[6].min_cache_size, make_rational(1, 8) * n * n + make_rational(3, 8) * n);
  for (std::int64_t v = 16; v <= 512; v += 8) {
    for (std::size_t i = 1; i < scaling.rows.size(); ++i) {
      ASSERT_LT(scaling.rows[i - 1].min_cache_size.eval(v), scaling.rows[i].min_cache_size.eval(v)) << v;
      ASSERT_GT(scaling.rows[i - 1].max_miss_ratio.eval(v), scaling.rows[i].max_miss_ratio.eval(v)) << v;
    }
  }
}

TEST(Predict, Examples) {
  const auto cache = locality::symbolic_denning(matmul());
  const auto full = locality::predict(cache, 32, 384);
  EXPECT_EQ(full.miss_ratio, make_rational(3, 1024));
  EXPECT_EQ(full.cold_miss_share, make_rational(3, 1024));
  EXPECT_EQ(locality::predict(cache, 32, 0).miss_ratio, 1);
  EXPECT_EQ(locality::predict(cache, 40, 1).miss_ratio, make_rational(3, 4));
  EXPECT_THROW(locality::predict(cache, 36, 1), locality::OutOfDomain);
  EXPECT_THROW(locality::predict(cache, 8, 1), locality::OutOfDomain);
}

TEST(Predict, BracketedBetweenRowsFourAndFive) {
  const auto cache = locality::symbolic_denning(matmul());
  const auto table = locality::cold_adjust(cache.at(32));
  // Row 4 (4n - 28) and row 5 (4n) cache sizes at n = 32.
  const auto lo = table.rows[4].cache_size, hi = table.rows[5].cache_size;
  const std::int64_t c = locality::to_int64(locality::ceil(lo)) + 1;
  ASSERT_LT(Rational(c), hi);
  const auto step = locality::predict(cache, 32, c);
  const auto interp = locality::predict(cache, 32, c, locality::QueryMode::Interpolate);
  const Rational upper = make_rational(1, 4) + make_rational(1, 16 * 32);
  const Rational lower = make_rational(1, 32) + make_rational(1, 16 * 32);
  EXPECT_EQ(step.miss_ratio, upper);
  EXPECT_LT(interp.miss_ratio, upper);
  EXPECT_GT(interp.miss_ratio, lower);
}
