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

#include <algorithm>

#include "locality/trace.hpp"

namespace locality {

using namespace dsl;

namespace {

using Vec = std::vector<std::int64_t>;
using Space = std::vector<Vec>;

// Set of timestamp suffixes contributed by `s` at the current environment.
// Each suffix starts at the statement's own dimension; an access contributes
// the empty suffix.
Space build(const Stmt& s, std::vector<std::int64_t>& env, const Bindings& symbols) {
  Space out;
  if (const auto* loop = std::get_if<Loop>(&s.node)) {
    const std::int64_t lo = evaluate(loop->lower, env, symbols);
    const std::int64_t hi = evaluate(loop->upper, env, symbols);
    env.push_back(0);
    // Counter k is admitted while lo + k*step < hi.
    for (std::int64_t k = 0; lo + k * loop->step < hi; ++k) {
      env.back() = lo + k * loop->step;
      for (Vec& suffix : build(*loop->body, env, symbols)) {
        suffix.insert(suffix.begin(), k);
        out.push_back(std::move(suffix));
      }
    }
    env.pop_back();
  } else if (const auto* block = std::get_if<Block>(&s.node)) {
    for (std::size_t idx = 0; idx < block->stmts.size(); ++idx) {
      for (Vec& suffix : build(block->stmts[idx], env, symbols)) {
        suffix.insert(suffix.begin(), static_cast<std::int64_t>(idx));
        out.push_back(std::move(suffix));
      }
    }
  } else if (const auto* cond = std::get_if<If>(&s.node)) {
    if (evaluate(cond->condition, env, symbols)) {
      out = build(*cond->then_branch, env, symbols);
    } else if (cond->else_branch) {
      out = build(**cond->else_branch, env, symbols);
    }
  } else {
    out.emplace_back();
  }
  return out;
}

}  // namespace

std::vector<std::vector<std::int64_t>> timestamp_space(const AffineProgram& prog, const Bindings& bindings) {
  for (const auto& s : prog.symbols) {
    if (!bindings.contains(s) && references_symbol(prog, s)) {
      throw UnboundSymbolError("parameter '" + s + "' is not bound");
    }
  }
  const std::size_t depth = static_cast<std::size_t>(timestamp_depth(prog));
  std::vector<std::int64_t> env;
  Space space = build(prog.body, env, bindings);
  for (Vec& v : space) v.resize(depth, 0);
  std::sort(space.begin(), space.end());
  space.erase(std::unique(space.begin(), space.end()), space.end());
  return space;
}

}  // namespace locality
