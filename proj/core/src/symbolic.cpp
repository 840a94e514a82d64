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

#include "locality/symbolic.hpp"

#include <algorithm>
#include <tuple>

#include "locality/trace.hpp"

namespace locality {

namespace {

struct ObservedRow {
  Rational value;
  Rational real;
  Rational imaginary;
  friend bool operator==(const ObservedRow&, const ObservedRow&) = default;
};

struct Observation {
  std::int64_t n = 0;
  std::int64_t accesses = 0;
  std::int64_t data_size = 0;
  std::vector<ObservedRow> rows;
};

Observation observe(const dsl::AffineProgram& prog, const std::string& param, std::int64_t n, std::int64_t b,
                    const dsl::Bindings& fixed) {
  dsl::Bindings bindings = fixed;
  bindings[param] = n;
  const AccessTrace trace = generate_trace(prog, bindings, b, {false, false});
  const RIDistribution dist = analyze(trace);
  Observation obs;
  obs.n = n;
  obs.accesses = dist.accesses;
  obs.data_size = dist.data_size;
  for (const auto& [v, c] : dist.entries) {
    obs.rows.push_back({static_cast<long>(v), static_cast<long>(c.real), static_cast<long>(c.imaginary)});
  }
  return obs;
}

// Sorts by value, merges equal values and drops empty rows.
std::vector<ObservedRow> canonical(std::vector<ObservedRow> rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.value < b.value; });
  std::vector<ObservedRow> out;
  for (auto& r : rows) {
    if (r.real == 0 && r.imaginary == 0) continue;
    if (!out.empty() && out.back().value == r.value) {
      out.back().real += r.real;
      out.back().imaginary += r.imaginary;
    } else {
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<ObservedRow> predicted_rows(const std::vector<SymbolicRow>& rows, std::int64_t n) {
  const Rational x = static_cast<long>(n);
  std::vector<ObservedRow> out;
  for (const auto& r : rows) out.push_back({r.value.eval(x), r.real_count.eval(x), r.imaginary_count.eval(x)});
  return out;
}

Poly fit(const std::vector<Rational>& xs, const std::vector<Rational>& ys) { return interpolate(xs, ys); }

std::int64_t exact_int(const Rational& r, const char* what) {
  if (r.get_den() != 1) throw OutOfDomain(std::string(what) + " is not an integer at this parameter value");
  return to_int64(r.get_num());
}

}  // namespace

std::vector<std::int64_t> default_samples(const dsl::AffineProgram& prog, std::int64_t block_size) {
  const int depth = dsl::loop_depth(prog);
  std::vector<std::int64_t> out;
  for (int k = 0; k < depth + 4; ++k) out.push_back(block_size * (2 + k));
  return out;
}

SymbolicRITable derive_symbolic_table(const dsl::AffineProgram& prog, const std::string& param, std::int64_t block_size,
                                      std::vector<std::int64_t> samples, const dsl::Bindings& fixed) {
  if (block_size < 1) throw std::invalid_argument("block size must be positive");
  SymbolicRITable table;
  table.param = param;
  table.block_size = block_size;

  if (!dsl::references_symbol(prog, param)) {
    // Nothing depends on the parameter: a single run gives the whole table.
    const std::int64_t n = samples.empty() ? 0 : samples.front();
    const Observation obs = observe(prog, param, n, block_size, fixed);
    table.access_count = Poly(Rational(static_cast<long>(obs.accesses)));
    table.data_size = Poly(Rational(static_cast<long>(obs.data_size)));
    for (const auto& r : obs.rows) {
      SymbolicRow row{Poly(r.value), Poly(r.real), Poly(r.imaginary), {}, {}};
      row.real_portion = RationalFn(row.real_count, table.access_count);
      row.imaginary_portion = RationalFn(row.imaginary_count, table.access_count);
      table.rows.push_back(std::move(row));
    }
    table.domain = {1, 0};
    if (!samples.empty()) table.fit_samples = {n};
    return table;
  }

  std::sort(samples.begin(), samples.end());
  samples.erase(std::unique(samples.begin(), samples.end()), samples.end());
  for (auto n : samples) {
    if (n <= 0 || n % block_size != 0) {
      throw std::invalid_argument("sample " + std::to_string(n) + " is not a positive multiple of the block size " +
                                  std::to_string(block_size));
    }
  }

  std::vector<Observation> obs;
  for (auto n : samples) obs.push_back(observe(prog, param, n, block_size, fixed));

  std::size_t width = 0;
  for (const auto& o : obs) width = std::max(width, o.rows.size());
  std::vector<const Observation*> generic;
  for (const auto& o : obs) {
    if (o.rows.size() == width) generic.push_back(&o);
  }
  const std::size_t need = static_cast<std::size_t>(dsl::loop_depth(prog)) + 2;
  if (generic.size() < need) {
    throw PiecewiseDetected("only " + std::to_string(generic.size()) + " sample(s) show all " + std::to_string(width) +
                            " RI values; at least " + std::to_string(need) + " are needed");
  }

  const std::size_t k = need - 1;
  std::vector<Rational> xs;
  for (std::size_t i = 0; i < k; ++i) xs.push_back(static_cast<long>(generic[i]->n));
  auto column = [&](auto get) {
    std::vector<Rational> ys;
    for (std::size_t i = 0; i < k; ++i) ys.push_back(get(*generic[i]));
    return fit(xs, ys);
  };

  table.access_count = column([](const Observation& o) { return Rational(static_cast<long>(o.accesses)); });
  table.data_size = column([](const Observation& o) { return Rational(static_cast<long>(o.data_size)); });
  for (std::size_t r = 0; r < width; ++r) {
    SymbolicRow row;
    row.value = column([&](const Observation& o) { return o.rows[r].value; });
    row.real_count = column([&](const Observation& o) { return o.rows[r].real; });
    row.imaginary_count = column([&](const Observation& o) { return o.rows[r].imaginary; });
    row.real_portion = RationalFn(row.real_count, table.access_count);
    row.imaginary_portion = RationalFn(row.imaginary_count, table.access_count);
    table.rows.push_back(std::move(row));
  }
  for (std::size_t i = 0; i < k; ++i) table.fit_samples.push_back(generic[i]->n);

  for (const auto& o : obs) {
    if (std::find(table.fit_samples.begin(), table.fit_samples.end(), o.n) != table.fit_samples.end()) continue;
    table.check_samples.push_back(o.n);
    const Rational x = static_cast<long>(o.n);
    const std::string at = " at " + param + "=" + std::to_string(o.n);
    if (table.access_count.eval(x) != static_cast<long>(o.accesses)) {
      throw PiecewiseDetected("access count is not polynomial" + at);
    }
    if (table.data_size.eval(x) != static_cast<long>(o.data_size)) {
      throw PiecewiseDetected("data size is not polynomial" + at);
    }
    const auto predicted = predicted_rows(table.rows, o.n);
    if (predicted == o.rows) continue;
    if (canonical(predicted) == o.rows) {
      if (o.rows.size() == width) {
        throw MatchAmbiguity("RI values change order" + at + "; rows cannot be matched by rank");
      }
      continue;  // rows coincide at this sample
    }
    throw PiecewiseDetected("held-out residual is nonzero" + at);
  }
  table.domain = {block_size, samples.front()};
  return table;
}

RIDistribution SymbolicRITable::at(std::int64_t n) const {
  const Rational x = static_cast<long>(n);
  RIDistribution dist;
  dist.accesses = exact_int(access_count.eval(x), "access count");
  dist.data_size = exact_int(data_size.eval(x), "data size");
  for (const auto& r : canonical(predicted_rows(rows, n))) {
    const std::int64_t v = exact_int(r.value, "RI value");
    dist.add(v, false, exact_int(r.real, "RI count"));
    dist.add(v, true, exact_int(r.imaginary, "RI count"));
    auto it = dist.entries.find(v);
    if (it->second.real < 0 || it->second.imaginary < 0) throw OutOfDomain("negative RI count");
  }
  return dist;
}

SymbolicCacheTable symbolic_denning(const SymbolicRITable& table) {
  SymbolicCacheTable out;
  out.param = table.param;
  out.block_size = table.block_size;
  out.access_count = table.access_count;
  out.data_size = table.data_size;
  out.domain = table.domain;
  SymbolicCacheRow row0;
  row0.miss_ratio = RationalFn(1);
  out.rows.push_back(row0);
  for (const auto& r : table.rows) {
    const SymbolicCacheRow& prev = out.rows.back();
    const Poly step = r.value - prev.value;
    if (step.is_zero() || step.leading_coeff() < 0) {
      throw OrderUnstable("row " + r.value.render(table.param) + " does not follow " + prev.value.render(table.param) +
                          " for large " + table.param);
    }
    SymbolicCacheRow next;
    next.value = r.value;
    next.portion = r.portion();
    next.imaginary_portion = r.imaginary_portion;
    next.cache_size = prev.cache_size + RationalFn(step) * prev.miss_ratio;
    next.miss_ratio = prev.miss_ratio - next.portion;
    next.cold_miss_ratio = prev.cold_miss_ratio + next.imaginary_portion;
    out.rows.push_back(std::move(next));
  }
  return out;
}

CacheTable SymbolicCacheTable::at(std::int64_t n) const {
  const Rational x = static_cast<long>(n);
  CacheTable t;
  t.access_count = exact_int(access_count.eval(x), "access count");
  t.data_size = exact_int(data_size.eval(x), "data size");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    CacheRow c;
    c.ri_value = exact_int(r.value.eval(x), "RI value");
    c.portion = r.portion.eval(x);
    c.imaginary_portion = r.imaginary_portion.eval(x);
    c.miss_ratio = r.miss_ratio.eval(x);
    c.cold_miss_ratio = r.cold_miss_ratio.eval(x);
    c.cache_size = r.cache_size.eval(x);
    if (i == 0) {
      t.rows.push_back(std::move(c));
      continue;
    }
    if (c.portion == 0) continue;
    CacheRow& last = t.rows.back();
    if (c.ri_value < last.ri_value) {
      throw OrderUnstable("RI values are out of order at " + param + "=" + std::to_string(n));
    }
    if (t.rows.size() > 1 && c.ri_value == last.ri_value) {
      last.portion += c.portion;
      last.imaginary_portion += c.imaginary_portion;
      last.miss_ratio = c.miss_ratio;
      last.cold_miss_ratio = c.cold_miss_ratio;
    } else {
      t.rows.push_back(std::move(c));
    }
  }
  return t;
}

SymbolicSumCheck ri_sum_check_symbolic(const SymbolicRITable& table) {
  SymbolicSumCheck out;
  for (const auto& r : table.rows) out.sum += RationalFn(r.value) * r.portion();
  out.expected = table.data_size;
  out.residual = out.sum - RationalFn(out.expected);
  out.pass = out.residual.is_zero();
  return out;
}

ScalingTable min_max_scaling(const SymbolicCacheTable& table) {
  ScalingTable out;
  out.param = table.param;
  out.domain = table.domain;
  out.rows.push_back({Poly(), RationalFn(1)});
  RationalFn bound(1);
  const std::int64_t first = std::max({table.domain.min_n, table.domain.modulus, std::int64_t{1}});
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    const RationalFn ratio = table.rows[i].adjusted_miss_ratio();
    if ((bound - ratio).asymptotic_sign() <= 0) continue;
    bound = ratio;
    const auto [head, tail] = table.rows[i].cache_size.split();
    const Poly growth = head.positive_part();
    // Everything but the growing terms: constant plus decaying remainder.
    const RationalFn rest = RationalFn(Poly(head.constant_term())) + tail;
    Rational sup = head.constant_term();
    for (std::int64_t j = 0; j <= 64; ++j) {
      const Rational v = rest.eval(static_cast<long>(first + j * table.domain.modulus));
      if (v > sup) sup = v;
    }
    out.rows.push_back({growth + Poly(Rational(ceil(sup))), ratio});
  }
  return out;
}

CacheQueryResult predict(const SymbolicCacheTable& table, std::int64_t n, std::int64_t c, QueryMode mode) {
  if (!table.domain.contains(n)) {
    throw OutOfDomain(table.param + "=" + std::to_string(n) + " is outside the validity domain (multiple of " +
                      std::to_string(table.domain.modulus) + ", at least " + std::to_string(table.domain.min_n) + ")");
  }
  return query_miss_ratio(cold_adjust(table.at(n)), c, mode);
}

}  // namespace locality
