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

#include "locality/trace.hpp"

#include <algorithm>
#include <array>
#include <ostream>
#include <unordered_map>

namespace locality {

using namespace dsl;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::int64_t floor_div(std::int64_t a, std::int64_t d) {
  std::int64_t q = a / d;
  if ((a % d != 0) && ((a < 0) != (d < 0))) --q;
  return q;
}

// Affine expression with symbols substituted: constant + sum of
// coefficient * ivar + sum of factor * floor/ceil(inner / divisor).
struct Linear {
  struct Div {
    std::int64_t factor;
    Box<Linear> inner;
    std::int64_t divisor;
    bool ceil;
  };
  std::int64_t constant = 0;
  std::vector<std::pair<int, std::int64_t>> terms;
  std::vector<Div> divs;

  std::int64_t eval(const std::int64_t* iv) const {
    std::int64_t v = constant;
    for (const auto& [level, c] : terms) v += c * iv[level];
    for (const auto& d : divs) {
      const std::int64_t x = d.inner->eval(iv);
      v += d.factor * (d.ceil ? -floor_div(-x, d.divisor) : floor_div(x, d.divisor));
    }
    return v;
  }

  void scale(std::int64_t f) {
    constant *= f;
    for (auto& t : terms) t.second *= f;
    for (auto& d : divs) d.factor *= f;
  }

  void add(const Linear& o, std::int64_t f) {
    constant += f * o.constant;
    for (const auto& [level, c] : o.terms) {
      auto it = std::find_if(terms.begin(), terms.end(), [&](const auto& t) { return t.first == level; });
      if (it == terms.end()) {
        terms.emplace_back(level, f * c);
      } else {
        it->second += f * c;
      }
    }
    for (auto d : o.divs) {
      d.factor *= f;
      divs.push_back(std::move(d));
    }
  }
};

Linear compile(const AffineExpr& e, const Bindings& symbols) {
  return std::visit(Overloaded{
                        [](const Constant& c) { return Linear{c.value, {}, {}}; },
                        [](const IndexVar& v) { return Linear{0, {{v.level, 1}}, {}}; },
                        [&](const SymbolRef& s) {
                          auto it = symbols.find(s.name);
                          if (it == symbols.end()) throw UnboundSymbolError("parameter '" + s.name + "' is not bound");
                          return Linear{it->second, {}, {}};
                        },
                        [&](const Sum& s) {
                          Linear l = compile(*s.lhs, symbols);
                          l.add(compile(*s.rhs, symbols), 1);
                          return l;
                        },
                        [&](const Difference& d) {
                          Linear l = compile(*d.lhs, symbols);
                          l.add(compile(*d.rhs, symbols), -1);
                          return l;
                        },
                        [&](const Scale& s) {
                          Linear l = compile(*s.operand, symbols);
                          l.scale(s.factor);
                          return l;
                        },
                        [&](const FloorDiv& f) {
                          Linear inner = compile(*f.operand, symbols);
                          Linear l;
                          if (inner.terms.empty() && inner.divs.empty()) {
                            l.constant = floor_div(inner.constant, f.divisor);
                          } else {
                            l.divs.push_back({1, std::move(inner), f.divisor, false});
                          }
                          return l;
                        },
                        [&](const CeilDiv& c) {
                          Linear inner = compile(*c.operand, symbols);
                          Linear l;
                          if (inner.terms.empty() && inner.divs.empty()) {
                            l.constant = -floor_div(-inner.constant, c.divisor);
                          } else {
                            l.divs.push_back({1, std::move(inner), c.divisor, true});
                          }
                          return l;
                        },
                    },
                    e.node);
}

struct CompiledStmt;

struct CLoop {
  int level;
  Linear lower, upper;
  std::int64_t step;
  Box<CompiledStmt> body;
};
struct CBlock {
  std::vector<CompiledStmt> stmts;
};
struct CIf {
  std::vector<std::vector<std::pair<Linear, Relation>>> disjuncts;
  Box<CompiledStmt> then_branch;
  std::optional<Box<CompiledStmt>> else_branch;
};
struct CAccess {
  int array;
  std::vector<Linear> subscripts;
};
struct CompiledStmt {
  std::variant<CBlock, CLoop, CIf, CAccess> node;
};

CompiledStmt compile(const Stmt& s, const AffineProgram& prog, const Bindings& symbols, int level) {
  return std::visit(Overloaded{
                        [&](const Loop& l) {
                          return CompiledStmt{CLoop{level, compile(l.lower, symbols), compile(l.upper, symbols), l.step,
                                                    compile(*l.body, prog, symbols, level + 1)}};
                        },
                        [&](const Block& b) {
                          CBlock out;
                          for (const auto& c : b.stmts) out.stmts.push_back(compile(c, prog, symbols, level));
                          return CompiledStmt{std::move(out)};
                        },
                        [&](const If& i) {
                          CIf out{{}, compile(*i.then_branch, prog, symbols, level), std::nullopt};
                          for (const auto& conj : i.condition.disjuncts) {
                            std::vector<std::pair<Linear, Relation>> cs;
                            for (const auto& c : conj) cs.emplace_back(compile(c.expr, symbols), c.relation);
                            out.disjuncts.push_back(std::move(cs));
                          }
                          if (i.else_branch) out.else_branch = compile(**i.else_branch, prog, symbols, level);
                          return CompiledStmt{std::move(out)};
                        },
                        [&](const Access& a) {
                          CAccess out{prog.array_index(a.array), {}};
                          for (const auto& e : a.subscripts) out.subscripts.push_back(compile(e, symbols));
                          return CompiledStmt{std::move(out)};
                        },
                    },
                    s.node);
}

constexpr int kMaxRank = 7;

struct BlockKey {
  std::array<std::int64_t, kMaxRank + 1> v{};
  friend bool operator==(const BlockKey&, const BlockKey&) = default;
};

struct BlockKeyHash {
  std::size_t operator()(const BlockKey& k) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (auto x : k.v) {
      h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

class Interpreter {
 public:
  Interpreter(AccessTrace& out, TraceOptions opts, int depth, int loops)
      : out_(out), opts_(opts), ts_(static_cast<std::size_t>(depth) + 1, 0), iv_(static_cast<std::size_t>(loops) + 1, 0) {}

  void run(const CompiledStmt& s, int dim) {
    std::visit(Overloaded{
                   [&](const CLoop& l) {
                     const std::int64_t lo = l.lower.eval(iv_.data());
                     const std::int64_t hi = l.upper.eval(iv_.data());
                     if (hi <= lo) return;
                     const std::int64_t trip = (hi - lo + l.step - 1) / l.step;
                     for (std::int64_t k = 0; k < trip; ++k) {
                       iv_[l.level] = lo + k * l.step;
                       ts_[dim] = k;
                       run(*l.body, dim + 1);
                     }
                   },
                   [&](const CBlock& b) {
                     for (std::size_t k = 0; k < b.stmts.size(); ++k) {
                       ts_[dim] = static_cast<std::int64_t>(k);
                       run(b.stmts[k], dim + 1);
                     }
                   },
                   [&](const CIf& i) {
                     if (holds(i)) {
                       run(*i.then_branch, dim);
                     } else if (i.else_branch) {
                       run(**i.else_branch, dim);
                     }
                   },
                   [&](const CAccess& a) { emit(a, dim); },
               },
               s.node);
  }

 private:
  bool holds(const CIf& i) const {
    for (const auto& conj : i.disjuncts) {
      bool all = true;
      for (const auto& [e, rel] : conj) {
        const std::int64_t v = e.eval(iv_.data());
        if (rel == Relation::EqualZero ? v != 0 : v >= 0) {
          all = false;
          break;
        }
      }
      if (all) return true;
    }
    return false;
  }

  void emit(const CAccess& a, int dim) {
    BlockKey key;
    key.v[0] = a.array;
    const std::size_t rank = a.subscripts.size();
    std::int64_t raw[kMaxRank];
    for (std::size_t k = 0; k < rank; ++k) {
      raw[k] = a.subscripts[k].eval(iv_.data());
      key.v[k + 1] = k + 1 == rank ? floor_div(raw[k], out_.block_size) : raw[k];
    }
    auto [it, fresh] = index_.try_emplace(key, static_cast<std::uint32_t>(out_.block_table.size()));
    if (fresh) {
      DataBlockId id{a.array, std::vector<std::int64_t>(key.v.begin() + 1, key.v.begin() + 1 + rank)};
      out_.block_table.push_back(std::move(id));
    }
    out_.blocks.push_back(it->second);
    out_.arrays.push_back(a.array);
    if (opts_.record_timestamps) {
      for (int d = 0; d < out_.timestamp_dims; ++d) out_.timestamps.push_back(d < dim ? ts_[d] : 0);
    }
    if (opts_.record_subscripts) {
      for (int k = 0; k < out_.max_rank; ++k) out_.subscripts.push_back(static_cast<std::size_t>(k) < rank ? raw[k] : 0);
    }
  }

  AccessTrace& out_;
  TraceOptions opts_;
  std::vector<std::int64_t> ts_;
  std::vector<std::int64_t> iv_;
  std::unordered_map<BlockKey, std::uint32_t, BlockKeyHash> index_;
};

int stmt_timestamp_depth(const Stmt& s) {
  return std::visit(Overloaded{
                        [](const Loop& l) { return 1 + stmt_timestamp_depth(*l.body); },
                        [](const Block& b) {
                          int d = 0;
                          for (const auto& c : b.stmts) d = std::max(d, stmt_timestamp_depth(c));
                          return 1 + d;
                        },
                        [](const If& i) {
                          return std::max(stmt_timestamp_depth(*i.then_branch),
                                          i.else_branch ? stmt_timestamp_depth(**i.else_branch) : 0);
                        },
                        [](const Access&) { return 0; },
                    },
                    s.node);
}

}  // namespace

int timestamp_depth(const AffineProgram& prog) { return stmt_timestamp_depth(prog.body); }

AccessTrace generate_trace(const AffineProgram& prog, const Bindings& bindings, std::int64_t block_size,
                           TraceOptions options) {
  if (block_size < 1) throw std::invalid_argument("block size must be positive");
  for (const auto& s : prog.symbols) {
    if (!bindings.contains(s) && references_symbol(prog, s)) {
      throw UnboundSymbolError("parameter '" + s + "' is not bound");
    }
  }
  AccessTrace trace;
  trace.block_size = block_size;
  trace.timestamp_dims = timestamp_depth(prog);
  for (const auto& a : prog.arrays) {
    if (a.rank() > static_cast<std::size_t>(kMaxRank)) {
      throw std::invalid_argument("array '" + a.name + "' exceeds the supported rank of 7");
    }
    trace.array_names.push_back(a.name);
    trace.array_rank.push_back(static_cast<int>(a.rank()));
    trace.max_rank = std::max(trace.max_rank, static_cast<int>(a.rank()));
  }
  const CompiledStmt body = compile(prog.body, prog, bindings, 0);
  Interpreter interp(trace, options, trace.timestamp_dims, loop_depth(prog));
  interp.run(body, 0);
  return trace;
}

// ---------------------------------------------------------------------------
// Layouts

std::int64_t ArrayLayout::size() const {
  std::int64_t s = 1;
  for (auto e : extents) s *= e;
  return s;
}

std::int64_t PaddedLayout::end() const {
  return arrays.empty() ? 0 : arrays.back().base + arrays.back().size();
}

bool is_prime(std::int64_t v) {
  if (v < 2) return false;
  if (v % 2 == 0) return v == 2;
  for (std::int64_t d = 3; d * d <= v; d += 2) {
    if (v % d == 0) return false;
  }
  return true;
}

std::int64_t next_prime(std::int64_t v) {
  std::int64_t p = std::max<std::int64_t>(v, 2);
  while (!is_prime(p)) ++p;
  return p;
}

std::int64_t pad_innermost(std::int64_t extent, std::int64_t block_size) {
  return block_size * next_prime((extent + block_size - 1) / block_size);
}

std::int64_t pad_middle(std::int64_t extent) { return next_prime(extent); }

namespace {

PaddedLayout make_layout(const AffineProgram& prog, const Bindings& bindings, std::int64_t block_size, bool pad) {
  PaddedLayout layout;
  layout.block_size = block_size;
  std::int64_t next = 0;
  for (const auto& a : prog.arrays) {
    ArrayLayout al;
    al.name = a.name;
    for (const auto& d : a.dims) {
      const std::int64_t v = compile(d, bindings).constant;
      if (v <= 0) throw std::invalid_argument("array '" + a.name + "' has non-positive extent " + std::to_string(v));
      al.declared.push_back(v);
    }
    al.extents = al.declared;
    if (pad) {
      const std::size_t r = al.extents.size();
      al.extents[r - 1] = pad_innermost(al.extents[r - 1], block_size);
      for (std::size_t k = 1; k + 1 < r; ++k) al.extents[k] = pad_middle(al.extents[k]);
    }
    al.base = next;
    next += (al.size() + block_size - 1) / block_size * block_size;
    layout.arrays.push_back(std::move(al));
  }
  return layout;
}

}  // namespace

PaddedLayout pad_layout(const AffineProgram& prog, const Bindings& bindings, std::int64_t block_size) {
  return make_layout(prog, bindings, block_size, true);
}

PaddedLayout natural_layout(const AffineProgram& prog, const Bindings& bindings, std::int64_t block_size) {
  return make_layout(prog, bindings, block_size, false);
}

std::int64_t linearize(const PaddedLayout& layout, int array, std::span<const std::int64_t> indices) {
  if (array < 0 || static_cast<std::size_t>(array) >= layout.arrays.size()) throw OutOfBoundsError("unknown array");
  const ArrayLayout& a = layout.arrays[array];
  if (indices.size() != a.extents.size()) throw OutOfBoundsError("rank mismatch for array '" + a.name + "'");
  std::int64_t off = 0;
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] < 0 || indices[k] >= a.extents[k]) {
      throw OutOfBoundsError("index " + std::to_string(indices[k]) + " out of bounds for dimension " + std::to_string(k) +
                             " of '" + a.name + "' (extent " + std::to_string(a.extents[k]) + ")");
    }
    off = off * a.extents[k] + indices[k];
  }
  return a.base + off;
}

std::vector<std::int64_t> addresses(const AccessTrace& trace, const PaddedLayout& layout) {
  if (trace.subscripts.size() != trace.length() * static_cast<std::size_t>(trace.max_rank)) {
    throw std::invalid_argument("trace was generated without subscripts");
  }
  std::vector<std::int64_t> out;
  out.reserve(trace.length());
  for (std::size_t i = 0; i < trace.length(); ++i) out.push_back(linearize(layout, trace.arrays[i], trace.subscript(i)));
  return out;
}

namespace {
void write_tuple(std::ostream& os, std::span<const std::int64_t> v) {
  os << '(';
  for (std::size_t k = 0; k < v.size(); ++k) os << (k ? "," : "") << v[k];
  os << ')';
}
}  // namespace

void write_trace_text(std::ostream& os, const AccessTrace& trace) {
  const bool ts = !trace.timestamps.empty();
  for (std::size_t i = 0; i < trace.length(); ++i) {
    if (ts) {
      os << "t=";
      write_tuple(os, trace.timestamp(i));
      os << ' ';
    }
    os << "a=" << trace.array_names[trace.arrays[i]] << " blk=";
    write_tuple(os, trace.block_table[trace.blocks[i]].indices);
    os << '\n';
  }
}

void write_trace_csv(std::ostream& os, const AccessTrace& trace) {
  const bool ts = !trace.timestamps.empty();
  os << "pos,array,block";
  if (ts) {
    for (int d = 0; d < trace.timestamp_dims; ++d) os << ",t" << d;
  }
  for (int k = 0; k < trace.max_rank; ++k) os << ",k" << k;
  os << '\n';
  for (std::size_t i = 0; i < trace.length(); ++i) {
    os << i << ',' << trace.array_names[trace.arrays[i]] << ',' << trace.blocks[i];
    if (ts) {
      for (auto v : trace.timestamp(i)) os << ',' << v;
    }
    const auto& idx = trace.block_table[trace.blocks[i]].indices;
    for (int k = 0; k < trace.max_rank; ++k) {
      os << ',';
      if (static_cast<std::size_t>(k) < idx.size()) os << idx[k];
    }
    os << '\n';
  }
}

}  // namespace locality
