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

#include <cctype>
#include <charconv>
#include <optional>

#include "locality/dsl.hpp"

namespace locality::dsl {

namespace {

enum class Tok {
  Ident,
  Int,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  LParen,
  RParen,
  Comma,
  Semi,
  Assign,
  Plus,
  Minus,
  Star,
  Slash,
  Less,
  LessEq,
  Greater,
  GreaterEq,
  EqEq,
  AndAnd,
  OrOr,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::int64_t value = 0;
  Location loc;
};

std::string describe(const Token& t) {
  if (t.kind == Tok::End) return "end of input";
  return "'" + t.text + "'";
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.loc = {line_, col_};
      if (pos_ >= src_.size()) {
        t.kind = Tok::End;
        out.push_back(t);
        return out;
      }
      const char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) advance();
        t.kind = Tok::Ident;
        t.text = std::string(src_.substr(start, pos_ - start));
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
        t.kind = Tok::Int;
        t.text = std::string(src_.substr(start, pos_ - start));
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.value);
        if (ec != std::errc()) throw SyntaxError("integer literal out of range: " + t.text, t.loc);
      } else {
        t.kind = punct(t.text);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  Tok punct(std::string& text) {
    const Location loc{line_, col_};
    const char c = src_[pos_];
    const char next = pos_ + 1 < src_.size() ? src_[pos_ + 1] : '\0';
    auto two = [&](Tok k) {
      text = std::string(src_.substr(pos_, 2));
      advance();
      advance();
      return k;
    };
    auto one = [&](Tok k) {
      text = std::string(1, c);
      advance();
      return k;
    };
    switch (c) {
      case '{': return one(Tok::LBrace);
      case '}': return one(Tok::RBrace);
      case '[': return one(Tok::LBracket);
      case ']': return one(Tok::RBracket);
      case '(': return one(Tok::LParen);
      case ')': return one(Tok::RParen);
      case ',': return one(Tok::Comma);
      case ';': return one(Tok::Semi);
      case '+': return one(Tok::Plus);
      case '-': return one(Tok::Minus);
      case '*': return one(Tok::Star);
      case '/': return one(Tok::Slash);
      case '<': return next == '=' ? two(Tok::LessEq) : one(Tok::Less);
      case '>': return next == '=' ? two(Tok::GreaterEq) : one(Tok::Greater);
      case '=': return next == '=' ? two(Tok::EqEq) : one(Tok::Assign);
      case '&':
        if (next == '&') return two(Tok::AndAnd);
        break;
      case '|':
        if (next == '|') return two(Tok::OrOr);
        break;
      default: break;
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", loc);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

bool is_keyword(std::string_view s) {
  return s == "params" || s == "array" || s == "for" || s == "to" || s == "step" || s == "if" || s == "else" ||
         s == "access" || s == "floor" || s == "ceil";
}

bool mentions_variable(const AffineExpr& e) {
  if (std::holds_alternative<Constant>(e.node)) return false;
  if (std::holds_alternative<IndexVar>(e.node) || std::holds_alternative<SymbolRef>(e.node)) return true;
  if (const auto* s = std::get_if<Sum>(&e.node)) return mentions_variable(*s->lhs) || mentions_variable(*s->rhs);
  if (const auto* d = std::get_if<Difference>(&e.node)) return mentions_variable(*d->lhs) || mentions_variable(*d->rhs);
  if (const auto* s = std::get_if<Scale>(&e.node)) return mentions_variable(*s->operand);
  if (const auto* f = std::get_if<FloorDiv>(&e.node)) return mentions_variable(*f->operand);
  if (const auto* c = std::get_if<CeilDiv>(&e.node)) return mentions_variable(*c->operand);
  return false;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  AffineProgram program() {
    AffineProgram prog;
    if (at_keyword("params")) {
      next();
      do {
        const Token& name = expect(Tok::Ident, "parameter name");
        check_fresh(name);
        prog.symbols.push_back(name.text);
        symbols_.push_back(name.text);
      } while (accept(Tok::Comma));
      expect(Tok::Semi, "';'");
    }
    while (at_keyword("array")) {
      next();
      ArrayDecl decl;
      const Token& name = expect(Tok::Ident, "array name");
      check_fresh(name);
      decl.name = name.text;
      expect(Tok::LBracket, "'['");
      do {
        decl.dims.push_back(expr());
      } while (accept(Tok::Comma));
      expect(Tok::RBracket, "']'");
      expect(Tok::Semi, "';'");
      arrays_.push_back(decl.name);
      prog.arrays.push_back(std::move(decl));
    }
    std::vector<Stmt> stmts;
    while (peek().kind != Tok::End) stmts.push_back(stmt());
    if (stmts.empty()) throw SyntaxError("program has no statements", peek().loc);
    prog.body = wrap(std::move(stmts));
    return prog;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  bool accept(Tok k) {
    if (peek().kind != k) return false;
    next();
    return true;
  }

  const Token& expect(Tok k, std::string_view what) {
    if (peek().kind == Tok::Slash && k != Tok::Slash) {
      throw SyntaxError("division is only allowed as floor(e / c) or ceil(e / c)", peek().loc);
    }
    if (peek().kind != k) {
      throw SyntaxError("expected " + std::string(what) + " but found " + describe(peek()), peek().loc);
    }
    return next();
  }

  bool at_keyword(std::string_view kw) const { return peek().kind == Tok::Ident && peek().text == kw; }

  void expect_keyword(std::string_view kw) {
    if (!at_keyword(kw)) {
      throw SyntaxError("expected '" + std::string(kw) + "' but found " + describe(peek()), peek().loc);
    }
    next();
  }

  void check_fresh(const Token& name) {
    if (is_keyword(name.text)) throw SyntaxError("'" + name.text + "' is a reserved word", name.loc);
    auto clash = [&](const std::vector<std::string>& v) { return std::find(v.begin(), v.end(), name.text) != v.end(); };
    if (clash(symbols_) || clash(arrays_) || clash(scope_)) {
      throw ScopeError("name '" + name.text + "' is already in use", name.loc);
    }
  }

  static Stmt wrap(std::vector<Stmt> stmts) {
    if (stmts.size() == 1) return std::move(stmts.front());
    return Stmt{Block{std::move(stmts)}};
  }

  Stmt body() {
    const Location open = expect(Tok::LBrace, "'{'").loc;
    std::vector<Stmt> stmts;
    while (peek().kind != Tok::RBrace) {
      if (peek().kind == Tok::End) throw SyntaxError("unterminated '{'", open);
      stmts.push_back(stmt());
    }
    next();
    if (stmts.empty()) throw SyntaxError("empty statement body", open);
    return wrap(std::move(stmts));
  }

  Stmt stmt() {
    if (at_keyword("for")) return loop();
    if (at_keyword("if")) return conditional();
    if (at_keyword("access")) return access();
    throw SyntaxError("expected 'for', 'if' or 'access' but found " + describe(peek()), peek().loc);
  }

  Stmt loop() {
    next();
    const Token& name = expect(Tok::Ident, "loop index");
    check_fresh(name);
    Loop l;
    l.index = name.text;
    expect(Tok::Assign, "'='");
    l.lower = expr();
    expect_keyword("to");
    l.upper = expr();
    if (at_keyword("step")) {
      next();
      l.step = signed_int("loop step");
    }
    scope_.push_back(l.index);
    l.body = body();
    scope_.pop_back();
    return Stmt{std::move(l)};
  }

  Stmt conditional() {
    next();
    expect(Tok::LParen, "'('");
    ConstraintSet set;
    do {
      std::vector<Constraint> conj;
      do {
        conj.push_back(comparison());
      } while (accept(Tok::AndAnd));
      set.disjuncts.push_back(std::move(conj));
    } while (accept(Tok::OrOr));
    expect(Tok::RParen, "')'");
    Stmt then_branch = body();
    std::optional<Box<Stmt>> else_branch;
    if (at_keyword("else")) {
      next();
      else_branch = body();
    }
    return Stmt{If{std::move(set), std::move(then_branch), std::move(else_branch)}};
  }

  static bool is_zero_literal(const AffineExpr& e) {
    const auto* c = std::get_if<Constant>(&e.node);
    return c && c->value == 0;
  }

  Constraint comparison() {
    AffineExpr lhs = expr();
    const Token op = next();
    AffineExpr rhs = expr();
    switch (op.kind) {
      case Tok::Less:
        if (is_zero_literal(rhs)) return {std::move(lhs), Relation::LessThanZero};
        return {std::move(lhs) - std::move(rhs), Relation::LessThanZero};
      case Tok::EqEq:
        if (is_zero_literal(rhs)) return {std::move(lhs), Relation::EqualZero};
        return {std::move(lhs) - std::move(rhs), Relation::EqualZero};
      case Tok::LessEq: return {(std::move(lhs) - std::move(rhs)) - constant(1), Relation::LessThanZero};
      case Tok::Greater: return {std::move(rhs) - std::move(lhs), Relation::LessThanZero};
      case Tok::GreaterEq: return {(std::move(rhs) - std::move(lhs)) - constant(1), Relation::LessThanZero};
      default:
        throw SyntaxError("expected comparison operator (<, <=, >, >=, ==) but found " + describe(op), op.loc);
    }
  }

  Stmt access() {
    next();
    const Token& name = expect(Tok::Ident, "array name");
    if (std::find(arrays_.begin(), arrays_.end(), name.text) == arrays_.end()) {
      throw ScopeError("undeclared array '" + name.text + "'", name.loc);
    }
    Access a;
    a.array = name.text;
    expect(Tok::LBracket, "'['");
    do {
      a.subscripts.push_back(expr());
    } while (accept(Tok::Comma));
    expect(Tok::RBracket, "']'");
    expect(Tok::Semi, "';'");
    return Stmt{std::move(a)};
  }

  std::int64_t signed_int(std::string_view what) {
    const bool neg = accept(Tok::Minus);
    const Token& t = expect(Tok::Int, std::string(what) + " (integer literal)");
    return neg ? -t.value : t.value;
  }

  // expr := term (('+' | '-') term)*
  AffineExpr expr() {
    AffineExpr e = term();
    for (;;) {
      if (accept(Tok::Plus)) {
        e = std::move(e) + term();
      } else if (accept(Tok::Minus)) {
        e = std::move(e) - term();
      } else {
        return e;
      }
    }
  }

  // term := unary ('*' unary)*
  AffineExpr term() {
    AffineExpr e = unary();
    while (peek().kind == Tok::Star) {
      const Location loc = next().loc;
      AffineExpr rhs = unary();
      if (!mentions_variable(e)) {
        e = evaluate(e, {}, {}) * std::move(rhs);
      } else if (!mentions_variable(rhs)) {
        e = evaluate(rhs, {}, {}) * std::move(e);
      } else {
        throw NonAffineError("product of two non-constant expressions", loc);
      }
    }
    return e;
  }

  AffineExpr unary() {
    if (peek().kind == Tok::Minus) {
      next();
      if (peek().kind == Tok::Int) return constant(-next().value);
      return -1 * unary();
    }
    return primary();
  }

  AffineExpr primary() {
    const Token& t = peek();
    if (t.kind == Tok::Int) return constant(next().value);
    if (t.kind == Tok::LParen) {
      next();
      AffineExpr e = expr();
      expect(Tok::RParen, "')'");
      return e;
    }
    if (t.kind != Tok::Ident) throw SyntaxError("expected expression but found " + describe(t), t.loc);
    if (t.text == "floor" || t.text == "ceil") return division();
    next();
    for (std::size_t level = scope_.size(); level-- > 0;) {
      if (scope_[level] == t.text) return index_var(static_cast<int>(level), t.text);
    }
    if (std::find(symbols_.begin(), symbols_.end(), t.text) != symbols_.end()) return symbol(t.text);
    if (is_keyword(t.text)) throw SyntaxError("unexpected keyword '" + t.text + "'", t.loc);
    throw ScopeError("'" + t.text + "' is neither a bound index variable nor a declared parameter", t.loc);
  }

  AffineExpr division() {
    const bool is_floor = next().text == "floor";
    expect(Tok::LParen, "'('");
    AffineExpr operand = expr();
    const Location slash = expect(Tok::Slash, "'/'").loc;
    AffineExpr den = expr();
    expect(Tok::RParen, "')'");
    if (mentions_variable(den)) throw NonAffineError("denominator must be an integer constant", slash);
    const std::int64_t d = evaluate(den, {}, {});
    return is_floor ? floor_div(std::move(operand), d) : ceil_div(std::move(operand), d);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<std::string> symbols_;
  std::vector<std::string> arrays_;
  std::vector<std::string> scope_;
};

}  // namespace

AffineProgram parse_program(std::string_view source) {
  Parser parser(Lexer(source).run());
  AffineProgram prog = parser.program();
  auto diags = validate(prog);
  if (!diags.empty()) throw ValidationError(std::move(diags));
  return prog;
}

}  // namespace locality::dsl
