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

#include <climits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "locality/rational.hpp"

namespace locality {

/// Univariate Laurent polynomial with exact rational coefficients, e.g.
/// 9n/8 - 47/8 - 31/(32n). Zero coefficients are never stored.
class Poly {
 public:
  Poly() = default;
  Poly(const Rational& c);  // NOLINT: constants convert implicitly
  Poly(long c) : Poly(Rational(c)) {}

  static Poly monomial(const Rational& coeff, int exponent);
  /// The parameter itself, n.
  static Poly variable() { return monomial(1, 1); }

  const std::map<int, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  bool is_monomial() const { return terms_.size() == 1; }
  /// True when no negative exponent is present.
  bool is_polynomial() const;

  /// Highest exponent; INT_MIN for the zero polynomial.
  int degree() const { return terms_.empty() ? INT_MIN : terms_.rbegin()->first; }
  /// Lowest exponent; INT_MAX for the zero polynomial.
  int low_degree() const { return terms_.empty() ? INT_MAX : terms_.begin()->first; }
  Rational coeff(int exponent) const;
  Rational leading_coeff() const;

  Rational eval(const Rational& x) const;

  /// Multiply by n^k (k may be negative).
  Poly shifted(int k) const;
  /// Terms with positive exponent / the constant / terms with negative exponent.
  Poly positive_part() const;
  Rational constant_term() const { return coeff(0); }
  Poly negative_part() const;

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o);
  Poly& operator*=(const Rational& c);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, const Poly& b) { return a *= b; }
  friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
  friend Poly operator*(const Rational& c, Poly a) { return a *= c; }
  friend Poly operator*(long c, Poly a) { return a *= Rational(c); }
  friend Poly operator*(Poly a, long c) { return a *= Rational(c); }
  friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }

  /// Human-readable rendering in the given variable, e.g. "n^2/8 + 3n/8 - 7/8 + 25/(32n)".
  std::string render(std::string_view var = "n") const;

 private:
  void set(int exponent, const Rational& c);
  std::map<int, Rational> terms_;
};

/// Quotient and remainder of ordinary (non-Laurent) polynomials.
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
/// Monic greatest common divisor of ordinary polynomials.
Poly gcd(Poly a, Poly b);

/// Minimal-degree interpolating polynomial through (xs[i], ys[i]) (Newton
/// divided differences, exact). The xs must be distinct.
Poly interpolate(std::span<const Rational> xs, std::span<const Rational> ys);

/// Ratio of two polynomials, kept reduced: no common factor, monic
/// denominator, no negative exponents internally.
class RationalFn {
 public:
  RationalFn() : den_(1) {}
  RationalFn(const Poly& p);  // NOLINT: polynomials are rational functions
  RationalFn(const Rational& c) : RationalFn(Poly(c)) {}  // NOLINT
  RationalFn(long c) : RationalFn(Poly(c)) {}             // NOLINT
  RationalFn(Poly num, Poly den);

  const Poly& numerator() const { return num_; }
  const Poly& denominator() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  Rational eval(const Rational& x) const;

  /// Laurent form when the denominator is a monomial (e.g. 1/4 - 1/(32n)).
  std::optional<Poly> as_laurent() const;
  /// Polynomial part plus a proper remainder: this = quotient + rem/den.
  std::pair<Poly, RationalFn> split() const;

  /// Sign of the function as n -> +infinity (-1, 0, +1).
  int asymptotic_sign() const;

  RationalFn operator-() const;
  friend RationalFn operator+(const RationalFn& a, const RationalFn& b);
  friend RationalFn operator-(const RationalFn& a, const RationalFn& b);
  friend RationalFn operator*(const RationalFn& a, const RationalFn& b);
  friend RationalFn operator/(const RationalFn& a, const RationalFn& b);
  RationalFn& operator+=(const RationalFn& o) { return *this = *this + o; }
  RationalFn& operator-=(const RationalFn& o) { return *this = *this - o; }
  friend bool operator==(const RationalFn& a, const RationalFn& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  std::string render(std::string_view var = "n") const;

 private:
  void normalize();
  Poly num_;
  Poly den_;
};

}  // namespace locality
