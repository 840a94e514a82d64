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

#include "locality/poly.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace locality {

Poly::Poly(const Rational& c) { set(0, c); }

Poly Poly::monomial(const Rational& coeff, int exponent) {
  Poly p;
  p.set(exponent, coeff);
  return p;
}

void Poly::set(int exponent, const Rational& c) {
  if (c == 0) {
    terms_.erase(exponent);
  } else {
    terms_[exponent] = c;
  }
}

bool Poly::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0); }

bool Poly::is_polynomial() const { return terms_.empty() || terms_.begin()->first >= 0; }

Rational Poly::coeff(int exponent) const {
  auto it = terms_.find(exponent);
  return it == terms_.end() ? Rational(0) : it->second;
}

Rational Poly::leading_coeff() const { return terms_.empty() ? Rational(0) : terms_.rbegin()->second; }

Rational Poly::eval(const Rational& x) const {
  if (terms_.empty()) return 0;
  if (x == 0 && terms_.begin()->first < 0) throw std::domain_error("Laurent polynomial evaluated at 0");
  // Horner over the exponent range, then shift back by the lowest exponent.
  const int lo = terms_.begin()->first;
  const int hi = terms_.rbegin()->first;
  Rational acc = 0;
  auto it = terms_.rbegin();
  for (int e = hi; e >= lo; --e) {
    acc *= x;
    if (it != terms_.rend() && it->first == e) {
      acc += it->second;
      ++it;
    }
  }
  if (lo > 0) {
    Rational p = 1;
    for (int i = 0; i < lo; ++i) p *= x;
    acc *= p;
  } else if (lo < 0) {
    Rational p = 1;
    for (int i = 0; i < -lo; ++i) p *= x;
    acc /= p;
  }
  return acc;
}

Poly Poly::shifted(int k) const {
  Poly out;
  for (const auto& [e, c] : terms_) out.terms_[e + k] = c;
  return out;
}

Poly Poly::positive_part() const {
  Poly out;
  for (const auto& [e, c] : terms_) {
    if (e > 0) out.terms_[e] = c;
  }
  return out;
}

Poly Poly::negative_part() const {
  Poly out;
  for (const auto& [e, c] : terms_) {
    if (e < 0) out.terms_[e] = c;
  }
  return out;
}

Poly Poly::operator-() const {
  Poly out = *this;
  for (auto& [e, c] : out.terms_) c = -c;
  return out;
}

Poly& Poly::operator+=(const Poly& o) {
  for (const auto& [e, c] : o.terms_) set(e, coeff(e) + c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  for (const auto& [e, c] : o.terms_) set(e, coeff(e) - c);
  return *this;
}

Poly& Poly::operator*=(const Poly& o) {
  Poly out;
  for (const auto& [e1, c1] : terms_) {
    for (const auto& [e2, c2] : o.terms_) out.set(e1 + e2, out.coeff(e1 + e2) + c1 * c2);
  }
  *this = std::move(out);
  return *this;
}

Poly& Poly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

namespace {

std::string render_term(const Rational& coeff, int exponent, std::string_view var) {
  Rational a = abs(coeff);
  const std::string p = a.get_num().get_str();
  const std::string q = a.get_den().get_str();
  const bool unit_den = a.get_den() == 1;
  std::string power(var);
  const int k = exponent < 0 ? -exponent : exponent;
  if (k > 1) power += "^" + std::to_string(k);
  if (exponent == 0) return to_string(a);
  if (exponent > 0) {
    std::string s = (a.get_num() == 1 ? "" : p) + power;
    if (!unit_den) s += "/" + q;
    return s;
  }
  if (unit_den) return p + "/" + power;
  return p + "/(" + q + power + ")";
}

}  // namespace

std::string Poly::render(std::string_view var) const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const bool negative = it->second < 0;
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    out += render_term(it->second, it->first, var);
    first = false;
  }
  return out;
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  if (!a.is_polynomial() || !b.is_polynomial()) {
    throw std::invalid_argument("divmod requires ordinary polynomials");
  }
  Poly q;
  Poly r = a;
  const int db = b.degree();
  const Rational lb = b.leading_coeff();
  while (!r.is_zero() && r.degree() >= db) {
    Poly t = Poly::monomial(r.leading_coeff() / lb, r.degree() - db);
    q += t;
    r -= t * b;
  }
  return {q, r};
}

Poly gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  return a * (Rational(1) / a.leading_coeff());
}

Poly interpolate(std::span<const Rational> xs, std::span<const Rational> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("interpolate: size mismatch");
  const std::size_t k = xs.size();
  if (k == 0) return Poly();
  std::vector<Rational> dd(ys.begin(), ys.end());
  for (std::size_t level = 1; level < k; ++level) {
    for (std::size_t i = k - 1; i >= level; --i) {
      const Rational span = xs[i] - xs[i - level];
      if (span == 0) throw std::invalid_argument("interpolate: repeated abscissa");
      dd[i] = (dd[i] - dd[i - 1]) / span;
    }
  }
  Poly p(dd[k - 1]);
  for (std::size_t i = k - 1; i-- > 0;) {
    p *= Poly::variable() - Poly(xs[i]);
    p += Poly(dd[i]);
  }
  return p;
}

RationalFn::RationalFn(const Poly& p) : num_(p), den_(1) { normalize(); }

RationalFn::RationalFn(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

void RationalFn::normalize() {
  if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
  if (num_.is_zero()) {
    den_ = Poly(1);
    return;
  }
  const int lo = std::min(num_.low_degree(), den_.low_degree());
  if (lo < 0) {
    num_ = num_.shifted(-lo);
    den_ = den_.shifted(-lo);
  }
  if (!den_.is_constant()) {
    Poly g = gcd(num_, den_);
    if (!g.is_constant()) {
      num_ = divmod(num_, g).first;
      den_ = divmod(den_, g).first;
    }
  }
  const Rational lc = den_.leading_coeff();
  if (lc != 1) {
    num_ *= Rational(1) / lc;
    den_ *= Rational(1) / lc;
  }
}

Rational RationalFn::eval(const Rational& x) const {
  if (den_.is_constant()) return num_.eval(x);
  const Rational d = den_.eval(x);
  if (d == 0) throw std::domain_error("rational function pole");
  return num_.eval(x) / d;
}

std::optional<Poly> RationalFn::as_laurent() const {
  if (!den_.is_monomial()) return std::nullopt;
  const auto& [e, c] = *den_.terms().begin();
  return num_.shifted(-e) * (Rational(1) / c);
}

std::pair<Poly, RationalFn> RationalFn::split() const {
  if (auto laurent = as_laurent()) {
    Poly head = laurent->positive_part() + Poly(laurent->constant_term());
    return {head, RationalFn(laurent->negative_part())};
  }
  auto [q, r] = divmod(num_, den_);
  return {q, RationalFn(r, den_)};
}

int RationalFn::asymptotic_sign() const {
  if (num_.is_zero()) return 0;
  return num_.leading_coeff() > 0 ? 1 : -1;
}

RationalFn RationalFn::operator-() const {
  RationalFn out = *this;
  out.num_ = -out.num_;
  return out;
}

RationalFn operator+(const RationalFn& a, const RationalFn& b) {
  if (a.den_ == b.den_) return RationalFn(a.num_ + b.num_, a.den_);
  return RationalFn(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalFn operator-(const RationalFn& a, const RationalFn& b) { return a + (-b); }

RationalFn operator*(const RationalFn& a, const RationalFn& b) {
  return RationalFn(a.num_ * b.num_, a.den_ * b.den_);
}

RationalFn operator/(const RationalFn& a, const RationalFn& b) {
  if (b.is_zero()) throw std::domain_error("rational function division by zero");
  return RationalFn(a.num_ * b.den_, a.den_ * b.num_);
}

std::string RationalFn::render(std::string_view var) const {
  if (auto laurent = as_laurent()) return laurent->render(var);
  // Scale to an integer-coefficient denominator for display.
  Integer scale = 1;
  for (const auto& [e, c] : den_.terms()) {
    mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), c.get_den().get_mpz_t());
  }
  const Rational s(scale);
  return "(" + (num_ * s).render(var) + ")/(" + (den_ * s).render(var) + ")";
}

}  // namespace locality
