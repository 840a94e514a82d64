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

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace locality {

/// Arbitrary-precision integers and rationals. All portions, miss ratios and
/// cache sizes are carried exactly; doubles appear only when rendering.
using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  Rational r(Integer(static_cast<long>(num)), Integer(static_cast<long>(den)));
  r.canonicalize();
  return r;
}

inline Integer make_integer(std::int64_t v) { return Integer(static_cast<long>(v)); }

/// Canonical "p/q" rendering ("p" when q == 1).
std::string to_string(const Rational& r);

/// Parses "p", "-p" or "p/q". Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

Integer floor(const Rational& r);
Integer ceil(const Rational& r);
double to_double(const Rational& r);

/// Throws std::overflow_error if the value does not fit.
std::int64_t to_int64(const Integer& v);

}  // namespace locality
