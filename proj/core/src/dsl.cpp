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
#include <set>
#include <sstream>

#include "locality/dsl.hpp"

namespace locality::dsl {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::int64_t floor_div_int(std::int64_t a, std::int64_t d) {
  std::int64_t q = a / d;
  if ((a % d != 0) && ((a < 0) != (d < 0))) --q;
  return q;
}

std::int64_t ceil_div_int(std::int64_t a, std::int64_t d) { return -floor_div_int(-a, d); }

}  // namespace

DslError::DslError(const std::string& what, Location loc)
    : std::runtime_error(loc.line > 0 ? std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " + what
                                      : what),
      loc_(loc) {}

namespace {
std::string join_diagnostics(const std::vector<Diagnostic>& diags) {
  std::string out = "invalid program:";
  for (const auto& d : diags) out += "\n  " + std::string(to_string(d.kind)) + ": " + d.message;
  return out;
}
}  // namespace

ValidationError::ValidationError(std::vector<Diagnostic> diagnostics)
    : DslError(join_diagnostics(diagnostics), Location{}), diagnostics_(std::move(diagnostics)) {}

AffineExpr constant(std::int64_t v) { return AffineExpr{Constant{v}}; }
AffineExpr index_var(int level, std::string name) { return AffineExpr{IndexVar{level, std::move(name)}}; }
AffineExpr symbol(std::string name) { return AffineExpr{SymbolRef{std::move(name)}}; }
AffineExpr operator+(AffineExpr a, AffineExpr b) { return AffineExpr{Sum{std::move(a), std::move(b)}}; }
AffineExpr operator-(AffineExpr a, AffineExpr b) { return AffineExpr{Difference{std::move(a), std::move(b)}}; }
AffineExpr operator*(std::int64_t factor, AffineExpr e) { return AffineExpr{Scale{factor, std::move(e)}}; }
AffineExpr floor_div(AffineExpr e, std::int64_t divisor) { return AffineExpr{FloorDiv{std::move(e), divisor}}; }
AffineExpr ceil_div(AffineExpr e, std::int64_t divisor) { return AffineExpr{CeilDiv{std::move(e), divisor}}; }

int AffineProgram::array_index(std::string_view name) const {
  for (std::size_t i = 0; i < arrays.size(); ++i) {
    if (arrays[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

std::string_view to_string(DiagnosticKind kind) {
  switch (kind) {
    case DiagnosticKind::RankMismatch: return "RankMismatch";
    case DiagnosticKind::EmptyConstraint: return "EmptyConstraint";
    case DiagnosticKind::UnboundIndex: return "UnboundIndex";
    case DiagnosticKind::UnknownSymbol: return "UnknownSymbol";
    case DiagnosticKind::UnknownArray: return "UnknownArray";
    case DiagnosticKind::DuplicateName: return "DuplicateName";
    case DiagnosticKind::NonPositiveStep: return "NonPositiveStep";
    case DiagnosticKind::NonPositiveDivisor: return "NonPositiveDivisor";
    case DiagnosticKind::SingletonBlock: return "SingletonBlock";
    case DiagnosticKind::SymbolicExtent: return "SymbolicExtent";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// Evaluation

std::int64_t evaluate(const AffineExpr& expr, const std::vector<std::int64_t>& ivars, const Bindings& symbols) {
  return std::visit(
      Overloaded{
          [](const Constant& c) { return c.value; },
          [&](const IndexVar& v) {
            if (v.level < 0 || static_cast<std::size_t>(v.level) >= ivars.size()) {
              throw std::out_of_range("index variable '" + v.name + "' is not bound");
            }
            return ivars[v.level];
          },
          [&](const SymbolRef& s) {
            auto it = symbols.find(s.name);
            if (it == symbols.end()) throw std::out_of_range("symbol '" + s.name + "' is not bound");
            return it->second;
          },
          [&](const Sum& s) { return evaluate(*s.lhs, ivars, symbols) + evaluate(*s.rhs, ivars, symbols); },
          [&](const Difference& d) { return evaluate(*d.lhs, ivars, symbols) - evaluate(*d.rhs, ivars, symbols); },
          [&](const Scale& s) { return s.factor * evaluate(*s.operand, ivars, symbols); },
          [&](const FloorDiv& f) { return floor_div_int(evaluate(*f.operand, ivars, symbols), f.divisor); },
          [&](const CeilDiv& c) { return ceil_div_int(evaluate(*c.operand, ivars, symbols), c.divisor); },
      },
      expr.node);
}

bool evaluate(const ConstraintSet& set, const std::vector<std::int64_t>& ivars, const Bindings& symbols) {
  for (const auto& conj : set.disjuncts) {
    bool all = true;
    for (const auto& c : conj) {
      const std::int64_t v = evaluate(c.expr, ivars, symbols);
      const bool holds = c.relation == Relation::EqualZero ? v == 0 : v < 0;
      if (!holds) {
        all = false;
        break;
      }
    }
    if (all && !conj.empty()) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

struct Validator {
  const AffineProgram& prog;
  std::vector<Diagnostic> out;
  std::set<std::string, std::less<>> symbols;
  std::vector<std::string> scope;

  void report(DiagnosticKind kind, std::string message) { out.push_back({kind, std::move(message)}); }

  void expr(const AffineExpr& e, bool allow_ivars, std::string_view where) {
    std::visit(Overloaded{
                   [](const Constant&) {},
                   [&](const IndexVar& v) {
                     if (!allow_ivars) {
                       report(DiagnosticKind::SymbolicExtent,
                              std::string(where) + ": index variable '" + v.name + "' not allowed here");
                     } else if (v.level < 0 || static_cast<std::size_t>(v.level) >= scope.size()) {
                       report(DiagnosticKind::UnboundIndex,
                              std::string(where) + ": index variable '" + v.name + "' is not bound by an enclosing loop");
                     }
                   },
                   [&](const SymbolRef& s) {
                     if (!symbols.contains(s.name)) {
                       report(DiagnosticKind::UnknownSymbol, std::string(where) + ": undeclared parameter '" + s.name + "'");
                     }
                   },
                   [&](const Sum& s) {
                     expr(*s.lhs, allow_ivars, where);
                     expr(*s.rhs, allow_ivars, where);
                   },
                   [&](const Difference& d) {
                     expr(*d.lhs, allow_ivars, where);
                     expr(*d.rhs, allow_ivars, where);
                   },
                   [&](const Scale& s) { expr(*s.operand, allow_ivars, where); },
                   [&](const FloorDiv& f) {
                     if (f.divisor <= 0) report(DiagnosticKind::NonPositiveDivisor, std::string(where) + ": floor divisor must be positive");
                     expr(*f.operand, allow_ivars, where);
                   },
                   [&](const CeilDiv& c) {
                     if (c.divisor <= 0) report(DiagnosticKind::NonPositiveDivisor, std::string(where) + ": ceil divisor must be positive");
                     expr(*c.operand, allow_ivars, where);
                   },
               },
               e.node);
  }

  void stmt(const Stmt& s) {
    std::visit(Overloaded{
                   [&](const Loop& l) {
                     expr(l.lower, true, "loop '" + l.index + "' lower bound");
                     expr(l.upper, true, "loop '" + l.index + "' upper bound");
                     if (l.step <= 0) report(DiagnosticKind::NonPositiveStep, "loop '" + l.index + "' has non-positive step");
                     scope.push_back(l.index);
                     stmt(*l.body);
                     scope.pop_back();
                   },
                   [&](const Block& b) {
                     if (b.stmts.size() < 2) report(DiagnosticKind::SingletonBlock, "block with fewer than two statements");
                     for (const auto& child : b.stmts) stmt(child);
                   },
                   [&](const If& i) {
                     if (i.condition.disjuncts.empty()) report(DiagnosticKind::EmptyConstraint, "if condition has no disjuncts");
                     for (const auto& conj : i.condition.disjuncts) {
                       if (conj.empty()) report(DiagnosticKind::EmptyConstraint, "if condition has an empty conjunction");
                       for (const auto& c : conj) expr(c.expr, true, "if condition");
                     }
                     stmt(*i.then_branch);
                     if (i.else_branch) stmt(**i.else_branch);
                   },
                   [&](const Access& a) {
                     const int idx = prog.array_index(a.array);
                     if (idx < 0) {
                       report(DiagnosticKind::UnknownArray, "access to undeclared array '" + a.array + "'");
                     } else if (prog.arrays[idx].rank() != a.subscripts.size()) {
                       report(DiagnosticKind::RankMismatch,
                              "array '" + a.array + "' has rank " + std::to_string(prog.arrays[idx].rank()) + " but is accessed with " +
                                  std::to_string(a.subscripts.size()) + " subscript(s)");
                     }
                     for (const auto& e : a.subscripts) expr(e, true, "subscript of '" + a.array + "'");
                   },
               },
               s.node);
  }

  void run() {
    std::set<std::string, std::less<>> names;
    for (const auto& s : prog.symbols) {
      if (!names.insert(s).second) report(DiagnosticKind::DuplicateName, "parameter '" + s + "' declared twice");
      symbols.insert(s);
    }
    for (const auto& a : prog.arrays) {
      if (!names.insert(a.name).second) report(DiagnosticKind::DuplicateName, "name '" + a.name + "' declared twice");
      if (a.dims.empty()) report(DiagnosticKind::RankMismatch, "array '" + a.name + "' has rank 0");
      for (const auto& d : a.dims) expr(d, false, "extent of '" + a.name + "'");
    }
    stmt(prog.body);
  }
};

}  // namespace

std::vector<Diagnostic> validate(const AffineProgram& prog) {
  Validator v{prog, {}, {}, {}};
  v.run();
  return std::move(v.out);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

bool is_additive(const AffineExpr& e) {
  return std::holds_alternative<Sum>(e.node) || std::holds_alternative<Difference>(e.node);
}

void print_expr(std::ostream& os, const AffineExpr& e) {
  std::visit(Overloaded{
                 [&](const Constant& c) { os << c.value; },
                 [&](const IndexVar& v) { os << v.name; },
                 [&](const SymbolRef& s) { os << s.name; },
                 [&](const Sum& s) {
                   print_expr(os, *s.lhs);
                   os << " + ";
                   if (is_additive(*s.rhs)) os << '(';
                   print_expr(os, *s.rhs);
                   if (is_additive(*s.rhs)) os << ')';
                 },
                 [&](const Difference& d) {
                   print_expr(os, *d.lhs);
                   os << " - ";
                   if (is_additive(*d.rhs)) os << '(';
                   print_expr(os, *d.rhs);
                   if (is_additive(*d.rhs)) os << ')';
                 },
                 [&](const Scale& s) {
                   // The factor is printed in parentheses so that a negative
                   // factor survives re-parsing as a single constant.
                   os << '(' << s.factor << ") * ";
                   const bool wrap = !std::holds_alternative<Constant>(s.operand->node) &&
                                     !std::holds_alternative<IndexVar>(s.operand->node) &&
                                     !std::holds_alternative<SymbolRef>(s.operand->node);
                   if (wrap) os << '(';
                   print_expr(os, *s.operand);
                   if (wrap) os << ')';
                 },
                 [&](const FloorDiv& f) {
                   os << "floor(";
                   print_expr(os, *f.operand);
                   os << " / " << f.divisor << ')';
                 },
                 [&](const CeilDiv& c) {
                   os << "ceil(";
                   print_expr(os, *c.operand);
                   os << " / " << c.divisor << ')';
                 },
             },
             e.node);
}

void indent(std::ostream& os, int depth) {
  for (int i = 0; i < depth; ++i) os << "  ";
}

void print_stmt(std::ostream& os, const Stmt& s, int depth);

void print_body(std::ostream& os, const Stmt& s, int depth) {
  if (const auto* b = std::get_if<Block>(&s.node)) {
    for (const auto& child : b->stmts) print_stmt(os, child, depth);
  } else {
    print_stmt(os, s, depth);
  }
}

void print_stmt(std::ostream& os, const Stmt& s, int depth) {
  std::visit(Overloaded{
                 [&](const Loop& l) {
                   indent(os, depth);
                   os << "for " << l.index << " = ";
                   print_expr(os, l.lower);
                   os << " to ";
                   print_expr(os, l.upper);
                   os << " step " << l.step << " {\n";
                   print_body(os, *l.body, depth + 1);
                   indent(os, depth);
                   os << "}\n";
                 },
                 [&](const Block& b) {
                   for (const auto& child : b.stmts) print_stmt(os, child, depth);
                 },
                 [&](const If& i) {
                   indent(os, depth);
                   os << "if (";
                   for (std::size_t d = 0; d < i.condition.disjuncts.size(); ++d) {
                     if (d) os << " || ";
                     const auto& conj = i.condition.disjuncts[d];
                     for (std::size_t k = 0; k < conj.size(); ++k) {
                       if (k) os << " && ";
                       print_expr(os, conj[k].expr);
                       os << (conj[k].relation == Relation::EqualZero ? " == 0" : " < 0");
                     }
                   }
                   os << ") {\n";
                   print_body(os, *i.then_branch, depth + 1);
                   indent(os, depth);
                   os << "}";
                   if (i.else_branch) {
                     os << " else {\n";
                     print_body(os, **i.else_branch, depth + 1);
                     indent(os, depth);
                     os << "}";
                   }
                   os << "\n";
                 },
                 [&](const Access& a) {
                   indent(os, depth);
                   os << "access " << a.array << '[';
                   for (std::size_t k = 0; k < a.subscripts.size(); ++k) {
                     if (k) os << ", ";
                     print_expr(os, a.subscripts[k]);
                   }
                   os << "];\n";
                 },
             },
             s.node);
}

}  // namespace

std::string to_source(const AffineExpr& expr) {
  std::ostringstream os;
  print_expr(os, expr);
  return os.str();
}

std::string to_source(const AffineProgram& prog) {
  std::ostringstream os;
  if (!prog.symbols.empty()) {
    os << "params ";
    for (std::size_t i = 0; i < prog.symbols.size(); ++i) os << (i ? ", " : "") << prog.symbols[i];
    os << ";\n";
  }
  for (const auto& a : prog.arrays) {
    os << "array " << a.name << '[';
    for (std::size_t i = 0; i < a.dims.size(); ++i) {
      if (i) os << ", ";
      print_expr(os, a.dims[i]);
    }
    os << "];\n";
  }
  print_stmt(os, prog.body, 0);
  return os.str();
}

// ---------------------------------------------------------------------------
// Structural queries

namespace {

int depth_of(const Stmt& s) {
  return std::visit(Overloaded{
                        [](const Loop& l) { return 1 + depth_of(*l.body); },
                        [](const Block& b) {
                          int d = 0;
                          for (const auto& c : b.stmts) d = std::max(d, depth_of(c));
                          return d;
                        },
                        [](const If& i) { return std::max(depth_of(*i.then_branch), i.else_branch ? depth_of(**i.else_branch) : 0); },
                        [](const Access&) { return 0; },
                    },
                    s.node);
}

bool expr_mentions(const AffineExpr& e, std::string_view name) {
  return std::visit(Overloaded{
                        [](const Constant&) { return false; },
                        [](const IndexVar&) { return false; },
                        [&](const SymbolRef& s) { return s.name == name; },
                        [&](const Sum& s) { return expr_mentions(*s.lhs, name) || expr_mentions(*s.rhs, name); },
                        [&](const Difference& d) { return expr_mentions(*d.lhs, name) || expr_mentions(*d.rhs, name); },
                        [&](const Scale& s) { return expr_mentions(*s.operand, name); },
                        [&](const FloorDiv& f) { return expr_mentions(*f.operand, name); },
                        [&](const CeilDiv& c) { return expr_mentions(*c.operand, name); },
                    },
                    e.node);
}

bool stmt_mentions(const Stmt& s, std::string_view name) {
  return std::visit(Overloaded{
                        [&](const Loop& l) {
                          return expr_mentions(l.lower, name) || expr_mentions(l.upper, name) || stmt_mentions(*l.body, name);
                        },
                        [&](const Block& b) {
                          return std::any_of(b.stmts.begin(), b.stmts.end(), [&](const Stmt& c) { return stmt_mentions(c, name); });
                        },
                        [&](const If& i) {
                          for (const auto& conj : i.condition.disjuncts) {
                            for (const auto& c : conj) {
                              if (expr_mentions(c.expr, name)) return true;
                            }
                          }
                          return stmt_mentions(*i.then_branch, name) || (i.else_branch && stmt_mentions(**i.else_branch, name));
                        },
                        [&](const Access& a) {
                          return std::any_of(a.subscripts.begin(), a.subscripts.end(),
                                             [&](const AffineExpr& e) { return expr_mentions(e, name); });
                        },
                    },
                    s.node);
}

}  // namespace

int loop_depth(const AffineProgram& prog) { return depth_of(prog.body); }

int top_level_nest_count(const AffineProgram& prog) {
  if (std::holds_alternative<Loop>(prog.body.node)) return 1;
  if (const auto* b = std::get_if<Block>(&prog.body.node)) {
    return static_cast<int>(
        std::count_if(b->stmts.begin(), b->stmts.end(), [](const Stmt& s) { return std::holds_alternative<Loop>(s.node); }));
  }
  return 0;
}

bool references_symbol(const AffineProgram& prog, std::string_view name) {
  for (const auto& a : prog.arrays) {
    for (const auto& d : a.dims) {
      if (expr_mentions(d, name)) return true;
    }
  }
  return stmt_mentions(prog.body, name);
}

}  // namespace locality::dsl
