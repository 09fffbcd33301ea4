#pragma once

#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ast.hpp"
#include "errors.hpp"

namespace faultloc {

namespace detail {

enum class Tok { Ident, Number, String, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int column = 1;
};

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  bool line_start = true;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
        line_start = true;
      } else {
        ++col;
      }
    }
  };
  static const char* const puncts[] = {"&&", "||", "==", "!=", "<=", ">=", "++", "--", "+=",
                                        "-=", "*=", "/=", "%=", "->", "<<", ">>"};
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n' || std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    // preprocessor lines are ignored
    if (c == '#' && line_start) {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    line_start = false;
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
      int l = line, cl = col;
      advance(2);
      while (i + 1 < src.size() && !(src[i] == '*' && src[i + 1] == '/')) advance(1);
      if (i + 1 >= src.size()) throw ParseError(l, cl, "unterminated comment");
      advance(2);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.kind = Tok::Ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isalnum(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Tok::Number;
      t.text = std::string(src.substr(i, j - i));
      if (t.text.find('.') != std::string::npos) throw SemanticError(line, "unsupported construct: float");
      advance(j - i);
      if (i < src.size() && src[i] == '.') throw SemanticError(t.line, "unsupported construct: float");
    } else if (c == '"') {
      std::size_t j = i + 1;
      while (j < src.size() && src[j] != '"') {
        if (src[j] == '\\') ++j;
        ++j;
      }
      if (j >= src.size()) throw ParseError(line, col, "unterminated string literal");
      t.kind = Tok::String;
      t.text = std::string(src.substr(i + 1, j - i - 1));
      advance(j + 1 - i);
    } else if (c == '\'') {
      throw SemanticError(line, "unsupported construct: char");
    } else {
      t.kind = Tok::Punct;
      t.text = std::string(1, c);
      for (const char* p : puncts) {
        if (src.substr(i, 2) == p) {
          t.text = p;
          break;
        }
      }
      advance(t.text.size());
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

inline int count_conversions(const std::string& fmt, int line) {
  int n = 0;
  for (std::size_t i = 0; i < fmt.size(); ++i) {
    if (fmt[i] != '%') continue;
    if (i + 1 >= fmt.size()) throw SemanticError(line, "malformed format string");
    char c = fmt[i + 1];
    ++i;
    if (c == '%') continue;
    if (c == 'd' || c == 'i') {
      ++n;
      continue;
    }
    throw SemanticError(line, std::string("unsupported format conversion %") + c);
  }
  return n;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Program parse_program() {
    Program p;
    while (peek().kind != Tok::End) p.functions.push_back(parse_function());
    return p;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  bool is(std::string_view s, std::size_t k = 0) const {
    const auto& t = peek(k);
    return (t.kind == Tok::Punct || t.kind == Tok::Ident) && t.text == s;
  }
  bool accept(std::string_view s) {
    if (is(s)) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const auto& t = peek();
    std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(t.line, t.column, msg + ", got " + got);
  }
  void expect(std::string_view s) {
    if (!accept(s)) fail("expected '" + std::string(s) + "'");
  }
  std::string expect_ident() {
    if (peek().kind != Tok::Ident) fail("expected identifier");
    return next().text;
  }

  static bool unsupported_type(const std::string& s) {
    return s == "float" || s == "double" || s == "char" || s == "long" || s == "short" ||
           s == "unsigned" || s == "signed" || s == "struct" || s == "union" || s == "enum";
  }

  void check_type_word() const {
    const auto& t = peek();
    if (t.kind != Tok::Ident) return;
    if (t.text == "float" || t.text == "double") throw SemanticError(t.line, "unsupported construct: float");
    if (t.text == "struct" || t.text == "union") throw SemanticError(t.line, "unsupported construct: struct");
    if (unsupported_type(t.text)) throw SemanticError(t.line, "unsupported construct: type '" + t.text + "'");
  }

  bool at_type() const {
    check_type_word();
    return is("int") || is("bool") || is("void") || is("_Bool");
  }

  Type parse_type() {
    check_type_word();
    const auto& t = next();
    if (t.text == "int") return Type::Int;
    if (t.text == "bool" || t.text == "_Bool") return Type::Bool;
    if (t.text == "void") return Type::Void;
    throw ParseError(t.line, t.column, "expected type");
  }

  void reject_pointer() {
    if (is("*")) throw SemanticError(peek().line, "unsupported construct: pointer");
  }

  FunctionDef parse_function() {
    FunctionDef f;
    f.line = peek().line;
    if (!at_type()) fail("expected function definition");
    f.return_type = parse_type();
    reject_pointer();
    f.name = expect_ident();
    expect("(");
    if (is("void") && is(")", 1)) {
      ++pos_;
    } else if (!is(")")) {
      do {
        Param p;
        p.type = parse_type();
        if (p.type == Type::Void) fail("parameter of type void");
        reject_pointer();
        p.name = expect_ident();
        if (is("[")) throw SemanticError(peek().line, "unsupported construct: array parameter");
        f.params.push_back(std::move(p));
      } while (accept(","));
    }
    expect(")");
    if (is(";")) throw SemanticError(peek().line, "unsupported construct: function prototype");
    f.body = parse_block();
    return f;
  }

  std::vector<Stmt> parse_block() {
    expect("{");
    std::vector<Stmt> out;
    while (!is("}")) {
      if (peek().kind == Tok::End) fail("expected '}'");
      parse_stmt(out);
    }
    expect("}");
    return out;
  }

  // A branch or loop body: either a braced block or a single statement.
  std::vector<Stmt> parse_body() {
    if (is("{")) return parse_block();
    std::vector<Stmt> out;
    parse_stmt(out);
    return out;
  }

  void parse_stmt(std::vector<Stmt>& out) {
    const Token& t = peek();
    if (accept(";")) return;
    if (is("{")) {
      Stmt s;
      s.kind = StmtKind::Block;
      s.line = t.line;
      s.body = parse_block();
      out.push_back(std::move(s));
      return;
    }
    if (t.kind == Tok::Ident) {
      if (t.text == "break" || t.text == "continue" || t.text == "goto" || t.text == "switch" ||
          t.text == "do")
        throw SemanticError(t.line, "unsupported construct: " + t.text);
      if (at_type()) {
        parse_decl(out, true);
        expect(";");
        return;
      }
      if (t.text == "if") return out.push_back(parse_if());
      if (t.text == "while") return out.push_back(parse_while());
      if (t.text == "for") return out.push_back(parse_for());
      if (t.text == "return") {
        Stmt s;
        s.kind = StmtKind::Return;
        s.line = t.line;
        ++pos_;
        if (!is(";")) s.value = parse_expr();
        expect(";");
        out.push_back(std::move(s));
        return;
      }
      if (t.text == "scanf") return parse_scanf(out);
      if (t.text == "printf") return parse_printf(out);
    }
    out.push_back(parse_simple());
    expect(";");
  }

  void parse_decl(std::vector<Stmt>& out, bool allow_many) {
    int line = peek().line;
    Type ty = parse_type();
    if (ty == Type::Void) throw SemanticError(line, "variable of type void");
    do {
      reject_pointer();
      Stmt s;
      s.kind = StmtKind::Decl;
      s.line = peek().line;
      s.type = ty;
      s.name = expect_ident();
      if (accept("[")) {
        if (peek().kind != Tok::Number) fail("expected constant array size");
        s.array_size = std::stoi(next().text);
        if (*s.array_size <= 0) throw SemanticError(s.line, "array size must be positive");
        expect("]");
        if (is("[")) throw SemanticError(s.line, "unsupported construct: multi-dimensional array");
      }
      if (accept("=")) {
        if (s.array_size) {
          expect("{");
          if (!is("}")) {
            do s.init.push_back(parse_expr());
            while (accept(","));
          }
          expect("}");
          if (static_cast<int>(s.init.size()) > *s.array_size)
            throw SemanticError(s.line, "too many array initializers");
        } else {
          s.init.push_back(parse_expr());
        }
      }
      out.push_back(std::move(s));
    } while (allow_many && accept(","));
  }

  Stmt parse_if() {
    Stmt s;
    s.kind = StmtKind::If;
    s.line = peek().line;
    expect("if");
    expect("(");
    s.value = parse_expr();
    expect(")");
    s.body = parse_body();
    if (accept("else")) {
      s.has_else = true;
      s.else_body = parse_body();
    }
    return s;
  }

  Stmt parse_while() {
    Stmt s;
    s.kind = StmtKind::While;
    s.line = peek().line;
    expect("while");
    expect("(");
    s.value = parse_expr();
    expect(")");
    s.body = parse_body();
    return s;
  }

  Stmt parse_for() {
    Stmt s;
    s.kind = StmtKind::For;
    s.line = peek().line;
    expect("for");
    expect("(");
    if (!is(";")) {
      if (at_type()) {
        parse_decl(s.for_init, true);
      } else {
        do s.for_init.push_back(parse_simple());
        while (accept(","));
      }
    }
    expect(";");
    if (!is(";")) s.value = parse_expr();
    expect(";");
    if (!is(")")) {
      do s.for_update.push_back(parse_simple());
      while (accept(","));
    }
    expect(")");
    s.body = parse_body();
    return s;
  }

  void parse_scanf(std::vector<Stmt>& out) {
    int line = peek().line;
    expect("scanf");
    expect("(");
    if (peek().kind != Tok::String) fail("expected format string");
    int n = count_conversions(next().text, line);
    std::vector<Expr> targets;
    while (accept(",")) {
      if (!accept("&")) throw SemanticError(peek().line, "scanf argument must be '&lvalue'");
      targets.push_back(parse_lvalue());
    }
    expect(")");
    expect(";");
    if (static_cast<int>(targets.size()) != n)
      throw SemanticError(line, "scanf conversion count does not match arguments");
    for (auto& e : targets) {
      Stmt s;
      s.kind = StmtKind::Input;
      s.line = line;
      s.target = std::move(e);
      out.push_back(std::move(s));
    }
  }

  void parse_printf(std::vector<Stmt>& out) {
    int line = peek().line;
    expect("printf");
    expect("(");
    if (peek().kind != Tok::String) fail("expected format string");
    int n = count_conversions(next().text, line);
    std::vector<Expr> values;
    while (accept(",")) values.push_back(parse_expr());
    expect(")");
    expect(";");
    if (static_cast<int>(values.size()) != n)
      throw SemanticError(line, "printf conversion count does not match arguments");
    for (auto& e : values) {
      Stmt s;
      s.kind = StmtKind::Output;
      s.line = line;
      s.value = std::move(e);
      out.push_back(std::move(s));
    }
  }

  Expr parse_lvalue() {
    Expr e;
    e.line = peek().line;
    e.name = expect_ident();
    if (accept("[")) {
      e.kind = ExprKind::Index;
      e.args.push_back(parse_expr());
      expect("]");
    } else {
      e.kind = ExprKind::Var;
    }
    return e;
  }

  // assignment, increment, or call used as a statement / for-header item
  Stmt parse_simple() {
    Stmt s;
    s.line = peek().line;
    if (is("++") || is("--")) {
      s.kind = StmtKind::Assign;
      s.op = next().text == "++" ? AssignOp::Inc : AssignOp::Dec;
      s.target = parse_lvalue();
      return s;
    }
    if (peek().kind == Tok::Ident && is("(", 1)) {
      s.kind = StmtKind::Call;
      s.value = parse_postfix();
      return s;
    }
    if (is("*")) throw SemanticError(s.line, "unsupported construct: pointer");
    if (peek().kind != Tok::Ident) fail("expected statement");
    s.kind = StmtKind::Assign;
    s.target = parse_lvalue();
    static const std::map<std::string, AssignOp> ops = {
        {"=", AssignOp::Set},  {"+=", AssignOp::Add}, {"-=", AssignOp::Sub}, {"*=", AssignOp::Mul},
        {"/=", AssignOp::Div}, {"%=", AssignOp::Mod}, {"++", AssignOp::Inc}, {"--", AssignOp::Dec}};
    if (is(".") || is("->")) throw SemanticError(s.line, "unsupported construct: struct");
    auto it = ops.find(peek().text);
    if (peek().kind != Tok::Punct || it == ops.end()) fail("expected assignment operator");
    ++pos_;
    s.op = it->second;
    if (s.op != AssignOp::Inc && s.op != AssignOp::Dec) s.value = parse_expr();
    return s;
  }

  Expr binary(BinaryOp op, Expr l, Expr r, int line) {
    Expr e;
    e.kind = ExprKind::Binary;
    e.bop = op;
    e.line = line;
    e.args.push_back(std::move(l));
    e.args.push_back(std::move(r));
    return e;
  }

  Expr parse_expr() { return parse_or(); }

  Expr parse_or() {
    Expr l = parse_and();
    while (is("||")) {
      int line = next().line;
      l = binary(BinaryOp::Or, std::move(l), parse_and(), line);
    }
    return l;
  }
  Expr parse_and() {
    Expr l = parse_eq();
    while (is("&&")) {
      int line = next().line;
      l = binary(BinaryOp::And, std::move(l), parse_eq(), line);
    }
    return l;
  }
  Expr parse_eq() {
    Expr l = parse_rel();
    while (is("==") || is("!=")) {
      const auto& t = next();
      BinaryOp op = t.text == "==" ? BinaryOp::Eq : BinaryOp::Ne;
      l = binary(op, std::move(l), parse_rel(), t.line);
    }
    return l;
  }
  Expr parse_rel() {
    Expr l = parse_add();
    while (is("<") || is("<=") || is(">") || is(">=")) {
      const auto& t = next();
      BinaryOp op = t.text == "<"    ? BinaryOp::Lt
                    : t.text == "<=" ? BinaryOp::Le
                    : t.text == ">"  ? BinaryOp::Gt
                                     : BinaryOp::Ge;
      l = binary(op, std::move(l), parse_add(), t.line);
    }
    return l;
  }
  Expr parse_add() {
    Expr l = parse_mul();
    while (is("+") || is("-")) {
      const auto& t = next();
      l = binary(t.text == "+" ? BinaryOp::Add : BinaryOp::Sub, std::move(l), parse_mul(), t.line);
    }
    return l;
  }
  Expr parse_mul() {
    Expr l = parse_unary();
    while (is("*") || is("/") || is("%")) {
      const auto& t = next();
      BinaryOp op = t.text == "*" ? BinaryOp::Mul : t.text == "/" ? BinaryOp::Div : BinaryOp::Mod;
      l = binary(op, std::move(l), parse_unary(), t.line);
    }
    return l;
  }
  Expr parse_unary() {
    if (is("-") || is("!") || is("+")) {
      const auto& t = next();
      Expr e;
      e.kind = ExprKind::Unary;
      e.line = t.line;
      e.uop = t.text == "-" ? UnaryOp::Neg : t.text == "!" ? UnaryOp::Not : UnaryOp::Plus;
      e.args.push_back(parse_unary());
      return e;
    }
    if (is("&") || is("*")) throw SemanticError(peek().line, "unsupported construct: pointer");
    if (is("++") || is("--"))
      throw SemanticError(peek().line, "unsupported construct: increment inside expression");
    return parse_postfix();
  }
  Expr parse_postfix() {
    const Token& t = peek();
    Expr e;
    e.line = t.line;
    if (accept("(")) {
      e = parse_expr();
      expect(")");
      return e;
    }
    if (t.kind == Tok::Number) {
      ++pos_;
      e.kind = ExprKind::IntLit;
      for (char c : t.text)
        if (!std::isdigit(static_cast<unsigned char>(c)))
          throw ParseError(t.line, t.column, "malformed integer literal '" + t.text + "'");
      try {
        e.value = std::stoll(t.text);
      } catch (const std::exception&) {
        throw ParseError(t.line, t.column, "integer literal out of range");
      }
      return e;
    }
    if (t.kind == Tok::String) throw SemanticError(t.line, "unsupported construct: string");
    if (t.kind != Tok::Ident) fail("expected expression");
    if (t.text == "true" || t.text == "false") {
      ++pos_;
      e.kind = ExprKind::BoolLit;
      e.value = t.text == "true" ? 1 : 0;
      return e;
    }
    if (t.text == "sizeof") throw SemanticError(t.line, "unsupported construct: sizeof");
    ++pos_;
    e.name = t.text;
    if (accept("(")) {
      e.kind = ExprKind::Call;
      if (!is(")")) {
        do e.args.push_back(parse_expr());
        while (accept(","));
      }
      expect(")");
      return e;
    }
    if (accept("[")) {
      e.kind = ExprKind::Index;
      e.args.push_back(parse_expr());
      expect("]");
      return e;
    }
    if (is(".") || is("->")) throw SemanticError(t.line, "unsupported construct: struct");
    e.kind = ExprKind::Var;
    return e;
  }
};

inline void number_expr(Expr& e, int& next) {
  e.node_id = next++;
  for (auto& a : e.args) number_expr(a, next);
}

inline void number_stmts(std::vector<Stmt>& stmts, int& next);

inline void number_stmt(Stmt& s, int& next) {
  s.node_id = next++;
  if (s.target) number_expr(*s.target, next);
  for (auto& e : s.init) number_expr(e, next);
  number_stmts(s.for_init, next);
  if (s.value) number_expr(*s.value, next);
  number_stmts(s.for_update, next);
  number_stmts(s.body, next);
  number_stmts(s.else_body, next);
}

inline void number_stmts(std::vector<Stmt>& stmts, int& next) {
  for (auto& s : stmts) number_stmt(s, next);
}

struct VarInfo {
  Type type;
  bool array;
};

class Checker {
 public:
  explicit Checker(const Program& p) : prog_(p) {}

  void run() {
    std::set<std::string> names;
    int mains = 0;
    for (const auto& f : prog_.functions) {
      if (!names.insert(f.name).second) throw SemanticError(f.line, "duplicate function '" + f.name + "'");
      if (f.name == "main") ++mains;
    }
    if (mains != 1) throw SemanticError(1, "program must define exactly one function named main");
    for (const auto& f : prog_.functions) check_function(f);
    check_acyclic();
  }

 private:
  const Program& prog_;
  std::vector<std::map<std::string, VarInfo>> scopes_;
  std::map<std::string, std::set<std::string>> calls_;
  const FunctionDef* current_ = nullptr;

  const VarInfo* lookup(const std::string& n) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->find(n);
      if (f != it->end()) return &f->second;
    }
    return nullptr;
  }

  void check_function(const FunctionDef& f) {
    current_ = &f;
    scopes_.clear();
    scopes_.emplace_back();
    for (const auto& p : f.params) {
      if (!scopes_.back().emplace(p.name, VarInfo{p.type, false}).second)
        throw SemanticError(f.line, "duplicate parameter '" + p.name + "'");
    }
    check_block(f.body);
  }

  void check_block(const std::vector<Stmt>& stmts) {
    scopes_.emplace_back();
    for (const auto& s : stmts) check_stmt(s);
    scopes_.pop_back();
  }

  void check_lvalue(const Expr& e) {
    const VarInfo* v = lookup(e.name);
    if (!v) throw SemanticError(e.line, "undeclared variable '" + e.name + "'");
    if (e.kind == ExprKind::Index) {
      if (!v->array) throw SemanticError(e.line, "'" + e.name + "' is not an array");
      check_expr(e.args[0]);
    } else if (v->array) {
      throw SemanticError(e.line, "array '" + e.name + "' used as scalar");
    }
  }

  void check_expr(const Expr& e) {
    switch (e.kind) {
      case ExprKind::IntLit:
      case ExprKind::BoolLit:
        return;
      case ExprKind::Var:
      case ExprKind::Index:
        check_lvalue(e);
        return;
      case ExprKind::Call: {
        const FunctionDef* callee = prog_.find(e.name);
        if (!callee) throw SemanticError(e.line, "call to undefined function '" + e.name + "'");
        if (callee->name == "main") throw SemanticError(e.line, "unsupported construct: call to main");
        if (callee->params.size() != e.args.size())
          throw SemanticError(e.line, "wrong number of arguments to '" + e.name + "'");
        calls_[current_->name].insert(e.name);
        for (const auto& a : e.args) check_expr(a);
        return;
      }
      default:
        for (const auto& a : e.args) check_expr(a);
    }
  }

  void check_value_call(const Expr& e) {
    if (e.kind == ExprKind::Call) {
      const FunctionDef* callee = prog_.find(e.name);
      if (callee && callee->return_type == Type::Void)
        throw SemanticError(e.line, "void function '" + e.name + "' used as a value");
    }
    for (const auto& a : e.args) check_value_call(a);
  }

  void check_stmt(const Stmt& s) {
    switch (s.kind) {
      case StmtKind::Decl:
        for (const auto& e : s.init) {
          check_expr(e);
          check_value_call(e);
        }
        if (!scopes_.back().emplace(s.name, VarInfo{s.type, s.array_size.has_value()}).second)
          throw SemanticError(s.line, "redeclaration of '" + s.name + "'");
        return;
      case StmtKind::Assign:
        check_lvalue(*s.target);
        if (s.value) {
          check_expr(*s.value);
          check_value_call(*s.value);
        }
        return;
      case StmtKind::Input:
        check_lvalue(*s.target);
        return;
      case StmtKind::Call:
        check_expr(*s.value);
        for (const auto& a : s.value->args) check_value_call(a);
        return;
      case StmtKind::Output:
        check_expr(*s.value);
        check_value_call(*s.value);
        return;
      case StmtKind::Return:
        if (s.value) {
          if (current_->return_type == Type::Void)
            throw SemanticError(s.line, "return with a value in void function");
          check_expr(*s.value);
          check_value_call(*s.value);
        }
        return;
      case StmtKind::If:
        check_expr(*s.value);
        check_value_call(*s.value);
        check_block(s.body);
        check_block(s.else_body);
        return;
      case StmtKind::While:
        check_expr(*s.value);
        check_value_call(*s.value);
        check_block(s.body);
        return;
      case StmtKind::For:
        scopes_.emplace_back();
        for (const auto& i : s.for_init) check_stmt(i);
        if (s.value) {
          check_expr(*s.value);
          check_value_call(*s.value);
        }
        for (const auto& u : s.for_update) check_stmt(u);
        check_block(s.body);
        scopes_.pop_back();
        return;
      case StmtKind::Block:
        check_block(s.body);
        return;
      case StmtKind::Goto:
        return;
    }
  }

  void check_acyclic() const {
    std::map<std::string, int> state;
    std::function<void(const std::string&)> dfs = [&](const std::string& f) {
      state[f] = 1;
      auto it = calls_.find(f);
      if (it != calls_.end()) {
        for (const auto& g : it->second) {
          if (state[g] == 1) {
            const FunctionDef* fd = prog_.find(g);
            throw SemanticError(fd ? fd->line : 1, "unsupported construct: recursion through '" + g + "'");
          }
          if (state[g] == 0) dfs(g);
        }
      }
      state[f] = 2;
    };
    for (const auto& f : prog_.functions)
      if (state[f.name] == 0) dfs(f.name);
  }
};

}  // namespace detail

/// Parses and validates MiniC source. Node ids are assigned in pre-order starting at 1.
inline Program parse_program(std::string_view source) {
  detail::Parser parser(detail::tokenize(source));
  Program p = parser.parse_program();
  detail::Checker(p).run();
  int next = 1;
  for (auto& f : p.functions) {
    f.node_id = next++;
    detail::number_stmts(f.body, next);
  }
  return p;
}

}  // namespace faultloc
