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

#include <iosfwd>
#include <nlohmann/json.hpp>

#include "locality/cache_sim.hpp"
#include "locality/denning.hpp"
#include "locality/ri.hpp"
#include "locality/symbolic.hpp"

namespace locality::report {

using Json = nlohmann::json;

/// {"terms": {"<exponent>": "p/q", ...}, "text": "..."}
Json to_json(const Poly& p, std::string_view var = "n");
/// Laurent functions as Poly; otherwise {"numerator", "denominator", "text"}.
Json to_json(const RationalFn& f, std::string_view var = "n");

/// [{"value", "real_portion", "imaginary_portion"}] with "p/q" strings.
Json to_json(const RIDistribution& dist);
Json to_json(const CacheTable& table);
Json to_json(const SymbolicRITable& table);
Json to_json(const SymbolicCacheTable& table);
Json to_json(const ScalingTable& table);
Json to_json(const SimResult& result);
Json to_json(const ValidityDomain& domain);

/// Columns ri, portion, m, cold, c as exact rationals, then m and c as decimals.
void write_csv(std::ostream& os, const CacheTable& table);
/// Columns set, accesses, misses.
void write_set_histogram_csv(std::ostream& os, const SimResult& result);

/// Aligned plain-text rendering of a symbolic cache table.
void write_text(std::ostream& os, const SymbolicCacheTable& table);
void write_text(std::ostream& os, const ScalingTable& table);

}  // namespace locality::report
