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

#include "locality/report.hpp"

#include <iomanip>
#include <ostream>
#include <sstream>

namespace locality::report {

Json to_json(const Poly& p, std::string_view var) {
  Json terms = Json::object();
  for (const auto& [e, c] : p.terms()) terms[std::to_string(e)] = to_string(c);
  return {{"terms", terms}, {"text", p.render(var)}};
}

Json to_json(const RationalFn& f, std::string_view var) {
  if (auto laurent = f.as_laurent()) return to_json(*laurent, var);
  return {{"numerator", to_json(f.numerator(), var)},
          {"denominator", to_json(f.denominator(), var)},
          {"text", f.render(var)}};
}

Json to_json(const RIDistribution& dist) {
  Json out = Json::array();
  for (const auto& [v, c] : dist.entries) {
    out.push_back({{"value", v},
                   {"real_portion", to_string(dist.real_portion(v))},
                   {"imaginary_portion", to_string(dist.imaginary_portion(v))}});
  }
  return out;
}

Json to_json(const CacheTable& table) {
  Json rows = Json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"ri", r.ri_value},
                    {"portion", to_string(r.portion)},
                    {"imaginary_portion", to_string(r.imaginary_portion)},
                    {"m", to_string(table.effective_miss_ratio(r))},
                    {"cold", to_string(r.cold_miss_ratio)},
                    {"c", to_string(r.cache_size)}});
  }
  return {{"accesses", table.access_count},
          {"data_size", table.data_size},
          {"cold_adjusted", table.cold_adjusted},
          {"rows", rows}};
}

Json to_json(const ValidityDomain& domain) { return {{"modulus", domain.modulus}, {"min_n", domain.min_n}}; }

Json to_json(const SymbolicRITable& table) {
  const std::string& v = table.param;
  Json rows = Json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"value", to_json(r.value, v)},
                    {"portion", to_json(r.portion(), v)},
                    {"real_portion", to_json(r.real_portion, v)},
                    {"imaginary_portion", to_json(r.imaginary_portion, v)},
                    {"imaginary", r.imaginary()}});
  }
  return {{"param", table.param},
          {"block_size", table.block_size},
          {"accesses", to_json(table.access_count, v)},
          {"data_size", to_json(table.data_size, v)},
          {"validity", to_json(table.domain)},
          {"fit_samples", table.fit_samples},
          {"check_samples", table.check_samples},
          {"rows", rows}};
}

Json to_json(const SymbolicCacheTable& table) {
  const std::string& v = table.param;
  Json rows = Json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"ri", to_json(r.value, v)},
                    {"portion", to_json(r.portion, v)},
                    {"m", to_json(r.adjusted_miss_ratio(), v)},
                    {"m_warm", to_json(r.miss_ratio, v)},
                    {"cold", to_json(r.cold_miss_ratio, v)},
                    {"c", to_json(r.cache_size, v)}});
  }
  return {{"param", table.param},
          {"block_size", table.block_size},
          {"accesses", to_json(table.access_count, v)},
          {"data_size", to_json(table.data_size, v)},
          {"validity", to_json(table.domain)},
          {"rows", rows}};
}

Json to_json(const ScalingTable& table) {
  Json rows = Json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"min_cache_size", to_json(r.min_cache_size, table.param)},
                    {"max_miss_ratio", to_json(r.max_miss_ratio, table.param)}});
  }
  return {{"param", table.param}, {"validity", to_json(table.domain)}, {"rows", rows}};
}

Json to_json(const SimResult& result) {
  return {{"accesses", result.accesses},
          {"misses", result.misses},
          {"cold", result.cold_misses},
          {"miss_ratio", result.miss_ratio()}};
}

void write_csv(std::ostream& os, const CacheTable& table) {
  os << "ri,portion,m,cold,c,m_decimal,c_decimal\n";
  for (const auto& r : table.rows) {
    const Rational m = table.effective_miss_ratio(r);
    std::ostringstream dec;
    dec << std::setprecision(10) << to_double(m) << ',' << to_double(r.cache_size);
    os << r.ri_value << ',' << to_string(r.portion) << ',' << to_string(m) << ',' << to_string(r.cold_miss_ratio) << ','
       << to_string(r.cache_size) << ',' << dec.str() << '\n';
  }
}

void write_set_histogram_csv(std::ostream& os, const SimResult& result) {
  os << "set,accesses,misses\n";
  for (std::size_t s = 0; s < result.set_accesses.size(); ++s) {
    os << s << ',' << result.set_accesses[s] << ',' << result.set_misses[s] << '\n';
  }
}

namespace {

void write_grid(std::ostream& os, const std::vector<std::vector<std::string>>& cells) {
  std::vector<std::size_t> width;
  for (const auto& row : cells) {
    width.resize(std::max(width.size(), row.size()), 0);
    for (std::size_t k = 0; k < row.size(); ++k) width[k] = std::max(width[k], row[k].size());
  }
  for (const auto& row : cells) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      os << (k ? "  " : "") << row[k];
      if (k + 1 < row.size()) os << std::string(width[k] - row[k].size(), ' ');
    }
    os << '\n';
  }
}

}  // namespace

void write_text(std::ostream& os, const SymbolicCacheTable& table) {
  const std::string& v = table.param;
  std::vector<std::vector<std::string>> cells{{"#", "ri", "P(ri)", "m", "cold", "c"}};
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    cells.push_back({std::to_string(i), r.value.render(v), r.portion.render(v), r.adjusted_miss_ratio().render(v),
                     r.cold_miss_ratio.render(v), r.cache_size.render(v)});
  }
  write_grid(os, cells);
}

void write_text(std::ostream& os, const ScalingTable& table) {
  std::vector<std::vector<std::string>> cells{{"#", "min cache size", "max miss ratio"}};
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    cells.push_back({std::to_string(i), table.rows[i].min_cache_size.render(table.param),
                     table.rows[i].max_miss_ratio.render(table.param)});
  }
  write_grid(os, cells);
}

}  // namespace locality::report
