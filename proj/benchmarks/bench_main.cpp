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

#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "locality/locality.hpp"

namespace {

locality::dsl::AffineProgram corpus(const std::string& name) {
  std::ifstream in(std::string(LOCALITY_CORPUS_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return locality::dsl::parse_program(ss.str());
}

const locality::SymbolicCacheTable& matmul_table() {
  static const auto table = [] {
    const auto prog = corpus("matmul.aff");
    return locality::symbolic_denning(
        locality::derive_symbolic_table(prog, "n", 8, locality::default_samples(prog, 8)));
  }();
  return table;
}

void BM_Predict(benchmark::State& state) {
  const auto& table = matmul_table();
  const std::int64_t n = state.range(0);
  std::int64_t c = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(locality::predict(table, n, c));
    c = (c + 37) % (3 * n * n / 8);
  }
}
BENCHMARK(BM_Predict)->Arg(64)->Arg(1024)->Arg(8192);

void BM_GenerateTrace(benchmark::State& state) {
  const auto prog = corpus("matmul.aff");
  const locality::dsl::Bindings binds{{"n", state.range(0)}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(locality::generate_trace(prog, binds, 8, {false, true}));
  }
  state.SetItemsProcessed(state.iterations() * 4 * state.range(0) * state.range(0) * state.range(0));
}
BENCHMARK(BM_GenerateTrace)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_AnalyzeRIs(benchmark::State& state) {
  const auto trace = locality::generate_trace(corpus("matmul.aff"), {{"n", state.range(0)}}, 8, {false, false});
  for (auto _ : state) benchmark::DoNotOptimize(locality::analyze(trace));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(trace.length()));
}
BENCHMARK(BM_AnalyzeRIs)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Simulate(benchmark::State& state) {
  const auto prog = corpus("matmul.aff");
  const locality::dsl::Bindings binds{{"n", 64}};
  const auto trace = locality::generate_trace(prog, binds, 8);
  const auto addrs = locality::addresses(trace, locality::pad_layout(prog, binds, 8));
  const auto geometry = state.range(0) == 0 ? locality::CacheGeometry::full(768)
                                            : locality::CacheGeometry::set_associative(12, 64);
  for (auto _ : state) benchmark::DoNotOptimize(locality::simulate(addrs, geometry));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(addrs.size()));
  state.SetLabel(geometry.to_string());
}
BENCHMARK(BM_Simulate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_DeriveSymbolic(benchmark::State& state) {
  const auto prog = corpus("matmul.aff");
  for (auto _ : state) {
    benchmark::DoNotOptimize(locality::derive_symbolic_table(prog, "n", 8, locality::default_samples(prog, 8)));
  }
}
BENCHMARK(BM_DeriveSymbolic)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
