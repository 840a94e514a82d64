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

#include <random>

#include "locality/poly.hpp"

using locality::make_rational;
using locality::Poly;
using locality::Rational;
using locality::RationalFn;

namespace {

const Poly n = Poly::variable();

Poly inv_n(const Rational& c) { return Poly::monomial(c, -1); }

}  // namespace

TEST(Rational, ParseAndRender) {
  EXPECT_EQ(locality::parse_rational("-6/8"), make_rational(-3, 4));
  EXPECT_EQ(locality::to_string(make_rational(10, 5)), "2");
  EXPECT_EQ(locality::to_string(make_rational(-1, 32)), "-1/32");
  EXPECT_THROW(locality::parse_rational("1/"), std::invalid_argument);
  EXPECT_THROW(locality::parse_rational("x"), std::invalid_argument);
  EXPECT_EQ(locality::floor(make_rational(-7, 2)), -4);
  EXPECT_EQ(locality::ceil(make_rational(-7, 2)), -3);
}

TEST(Poly, RenderMixedTerms) {
  const Poly p = make_rational(9, 8) * n - make_rational(47, 8) - inv_n(make_rational(31, 32));
  EXPECT_EQ(p.render(), "9n/8 - 47/8 - 31/(32n)");
  EXPECT_EQ((4 * n * n * n - 32 * n + 3).render(), "4n^3 - 32n + 3");
  EXPECT_EQ(Poly().render(), "0");
  EXPECT_EQ(inv_n(1).render(), "1/n");
}

TEST(Poly, PartsAndDegrees) {
  const Poly p = 3 * n * n + 2 - inv_n(5);
  EXPECT_EQ(p.degree(), 2);
  EXPECT_EQ(p.low_degree(), -1);
  EXPECT_EQ(p.positive_part(), 3 * n * n);
  EXPECT_EQ(p.constant_term(), 2);
  EXPECT_EQ(p.negative_part(), -inv_n(5));
  EXPECT_FALSE(p.is_polynomial());
  EXPECT_EQ(p.eval(2), Rational(12 + 2) - make_rational(5, 2));
}

TEST(Poly, ArithmeticMatchesEvaluation) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> coef(-9, 9), expo(-2, 3);
  for (int trial = 0; trial < 200; ++trial) {
    Poly a, b;
    for (int k = 0; k < 3; ++k) {
      a += Poly::monomial(make_rational(coef(rng), 1 + std::abs(coef(rng))), expo(rng));
      b += Poly::monomial(make_rational(coef(rng), 1 + std::abs(coef(rng))), expo(rng));
    }
    for (int x : {1, 3, 7}) {
      EXPECT_EQ((a + b).eval(x), a.eval(x) + b.eval(x));
      EXPECT_EQ((a - b).eval(x), a.eval(x) - b.eval(x));
      EXPECT_EQ((a * b).eval(x), a.eval(x) * b.eval(x));
    }
  }
}

TEST(Poly, DivmodAndGcd) {
  const Poly a = (n + 1) * (n - 2) * (n + 3);
  const Poly b = (n + 1) * (n + 5);
  auto [q, r] = locality::divmod(a, b);
  EXPECT_EQ(q * b + r, a);
  EXPECT_LT(r.degree(), b.degree());
  EXPECT_EQ(locality::gcd(a, b), n + 1);
  EXPECT_THROW(locality::divmod(a, Poly()), std::domain_error);
}

TEST(Poly, InterpolationRecoversCubic) {
  const Poly target = 4 * n * n * n - 4 * n * n + 4 * n - 28;
  std::vector<Rational> xs, ys;
  for (int x : {8, 16, 24, 32}) {
    xs.emplace_back(x);
    ys.push_back(target.eval(x));
  }
  EXPECT_EQ(locality::interpolate(xs, ys), target);
}

TEST(RationalFn, NormalizesAndDetectsLaurent) {
  const RationalFn f(n * n - 1, n * n - n);  // (n + 1) / n
  EXPECT_EQ(f.denominator(), n);
  ASSERT_TRUE(f.as_laurent().has_value());
  EXPECT_EQ(*f.as_laurent(), Poly(1) + inv_n(1));

  const RationalFn g(Poly(1), n + 1);
  EXPECT_FALSE(g.as_laurent().has_value());
  EXPECT_EQ(g.eval(3), make_rational(1, 4));
  EXPECT_EQ(g.render(), "(1)/(n + 1)");
}

TEST(RationalFn, AsymptoticSign) {
  EXPECT_EQ(RationalFn(Poly(make_rational(1, 32)) - inv_n(1)).asymptotic_sign(), 1);
  EXPECT_EQ(RationalFn(inv_n(-1)).asymptotic_sign(), -1);
  EXPECT_EQ(RationalFn().asymptotic_sign(), 0);
  EXPECT_EQ(RationalFn(Poly(1) - n, n * n + 1).asymptotic_sign(), -1);
}

TEST(RationalFn, SplitReassembles) {
  const RationalFn f(n * n * n + 2, n + 1);
  auto [q, rem] = f.split();
  EXPECT_EQ(RationalFn(q) + rem, f);
  EXPECT_LT(rem.numerator().degree(), rem.denominator().degree());
}
