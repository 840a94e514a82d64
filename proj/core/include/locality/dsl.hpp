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

// Affine loop-nest programs: a parameterized loop/block/if/access language.
//
//   params n;
//   array A[n, n];
//   array x[n];
//   for i = 0 to n step 1 {
//     for j = 0 to i + 1 {
//       access A[i, j];
//       access x[j];
//     }
//   }
//
// Loops are half-open: `for v = l to u step c` runs ceil((u - l) / c)
// iterations (none when u <= l). Expressions are affine in the index
// variables and the declared parameters; multiplication requires a constant
// factor and floor()/ceil() divide by a positive constant.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace locality::dsl {

/// Copyable owning pointer for recursive value types.
template <typename T>
class Box {
 public:
  Box() : ptr_(std::make_unique<T>()) {}
  Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}  // NOLINT
  Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& other) {
    if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;
  ~Box() = default;

  T& operator*() { return *ptr_; }
  const T& operator*() const { return *ptr_; }
  T* operator->() { return ptr_.get(); }
  const T* operator->() const { return ptr_.get(); }

  friend bool operator==(const Box& a, const Box& b) { return *a == *b; }

 private:
  std::unique_ptr<T> ptr_;
};

struct AffineExpr;

struct Constant {
  std::int64_t value = 0;
  friend bool operator==(const Constant&, const Constant&) = default;
};
/// Loop index variable, identified by nesting level (0 = outermost loop).
struct IndexVar {
  int level = 0;
  std::string name;
  friend bool operator==(const IndexVar&, const IndexVar&) = default;
};
struct SymbolRef {
  std::string name;
  friend bool operator==(const SymbolRef&, const SymbolRef&) = default;
};
struct Sum {
  Box<AffineExpr> lhs, rhs;
  friend bool operator==(const Sum&, const Sum&) = default;
};
struct Difference {
  Box<AffineExpr> lhs, rhs;
  friend bool operator==(const Difference&, const Difference&) = default;
};
struct Scale {
  std::int64_t factor = 1;
  Box<AffineExpr> operand;
  friend bool operator==(const Scale&, const Scale&) = default;
};
struct FloorDiv {
  Box<AffineExpr> operand;
  std::int64_t divisor = 1;
  friend bool operator==(const FloorDiv&, const FloorDiv&) = default;
};
struct CeilDiv {
  Box<AffineExpr> operand;
  std::int64_t divisor = 1;
  friend bool operator==(const CeilDiv&, const CeilDiv&) = default;
};

struct AffineExpr {
  std::variant<Constant, IndexVar, SymbolRef, Sum, Difference, Scale, FloorDiv, CeilDiv> node;
  friend bool operator==(const AffineExpr&, const AffineExpr&) = default;
};

AffineExpr constant(std::int64_t v);
AffineExpr index_var(int level, std::string name);
AffineExpr symbol(std::string name);
AffineExpr operator+(AffineExpr a, AffineExpr b);
AffineExpr operator-(AffineExpr a, AffineExpr b);
AffineExpr operator*(std::int64_t factor, AffineExpr e);
AffineExpr floor_div(AffineExpr e, std::int64_t divisor);
AffineExpr ceil_div(AffineExpr e, std::int64_t divisor);

enum class Relation { EqualZero, LessThanZero };

struct Constraint {
  AffineExpr expr;
  Relation relation = Relation::LessThanZero;
  friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// Disjunction of conjunctions.
struct ConstraintSet {
  std::vector<std::vector<Constraint>> disjuncts;
  friend bool operator==(const ConstraintSet&, const ConstraintSet&) = default;
};

struct Stmt;

struct Loop {
  std::string index;
  AffineExpr lower;
  AffineExpr upper;
  std::int64_t step = 1;
  Box<Stmt> body;
  friend bool operator==(const Loop&, const Loop&) = default;
};

struct Block {
  std::vector<Stmt> stmts;
  friend bool operator==(const Block&, const Block&) = default;
};

struct If {
  ConstraintSet condition;
  Box<Stmt> then_branch;
  std::optional<Box<Stmt>> else_branch;
  friend bool operator==(const If&, const If&) = default;
};

struct Access {
  std::string array;
  std::vector<AffineExpr> subscripts;
  friend bool operator==(const Access&, const Access&) = default;
};

struct Stmt {
  std::variant<Loop, Block, If, Access> node{Block{}};
  friend bool operator==(const Stmt&, const Stmt&) = default;
};

struct ArrayDecl {
  std::string name;
  /// Extent per dimension; may reference parameters only.
  std::vector<AffineExpr> dims;
  std::size_t rank() const { return dims.size(); }
  friend bool operator==(const ArrayDecl&, const ArrayDecl&) = default;
};

struct AffineProgram {
  std::vector<std::string> symbols;
  std::vector<ArrayDecl> arrays;
  Stmt body;

  /// Index into `arrays`, or -1.
  int array_index(std::string_view name) const;
  friend bool operator==(const AffineProgram&, const AffineProgram&) = default;
};

/// Source position (1-based).
struct Location {
  int line = 0;
  int column = 0;
};

class DslError : public std::runtime_error {
 public:
  DslError(const std::string& what, Location loc);
  Location location() const { return loc_; }

 private:
  Location loc_;
};

class SyntaxError : public DslError {
 public:
  using DslError::DslError;
};
/// Reference to an unbound index variable, undeclared parameter or array.
class ScopeError : public DslError {
 public:
  using DslError::DslError;
};
/// Symbolic coefficient, product of two variables, or variable denominator.
class NonAffineError : public DslError {
 public:
  using DslError::DslError;
};

enum class DiagnosticKind {
  RankMismatch,
  EmptyConstraint,
  UnboundIndex,
  UnknownSymbol,
  UnknownArray,
  DuplicateName,
  NonPositiveStep,
  NonPositiveDivisor,
  SingletonBlock,
  SymbolicExtent,
};

std::string_view to_string(DiagnosticKind kind);

struct Diagnostic {
  DiagnosticKind kind;
  std::string message;
};

/// Raised by parse_program when the parsed AST violates a structural
/// invariant (e.g. wrong subscript count).
class ValidationError : public DslError {
 public:
  ValidationError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

AffineProgram parse_program(std::string_view source);
std::vector<Diagnostic> validate(const AffineProgram& prog);

/// Renders the program back to DSL text; parse_program(to_source(p)) == p.
std::string to_source(const AffineProgram& prog);
std::string to_source(const AffineExpr& expr);

using Bindings = std::map<std::string, std::int64_t, std::less<>>;

/// Direct tree-walking evaluation. `ivars[level]` holds index values.
/// Throws std::out_of_range for unbound symbols or levels.
std::int64_t evaluate(const AffineExpr& expr, const std::vector<std::int64_t>& ivars, const Bindings& symbols);
bool evaluate(const ConstraintSet& set, const std::vector<std::int64_t>& ivars, const Bindings& symbols);

/// Deepest loop nesting.
int loop_depth(const AffineProgram& prog);
/// Number of loop nests at the top level of the program body.
int top_level_nest_count(const AffineProgram& prog);
/// Whether `name` occurs anywhere in the program (bounds, subscripts, extents).
bool references_symbol(const AffineProgram& prog, std::string_view name);

}  // namespace locality::dsl
