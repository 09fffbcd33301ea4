#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace faultloc {

enum class Type { Int, Bool, Void };

enum class UnaryOp { Neg, Not, Plus };

enum class BinaryOp { Add, Sub, Mul, Div, Mod, Lt, Le, Gt, Ge, Eq, Ne, And, Or };

enum class AssignOp { Set, Add, Sub, Mul, Div, Mod, Inc, Dec };

/// What a relaxed expression falls back to when its healthy variable is false.
enum class Fallback {
  ElseVar,      // `_rv ? c : _ev`
  NondetBool,   // `_rv ? c : nondet_bool()`
  NondetInt,    // `_rv ? e : nondet_int()`
  LoopImplies,  // `!_rv[_los] || c`
};

enum class ExprKind { IntLit, BoolLit, Var, Unary, Binary, Index, Call, Relaxed };

struct Expr {
  ExprKind kind = ExprKind::IntLit;
  int node_id = 0;
  int line = 0;
  std::int64_t value = 0;  // IntLit / BoolLit
  std::string name;        // Var / Index (array) / Call (callee)
  UnaryOp uop = UnaryOp::Neg;
  BinaryOp bop = BinaryOp::Add;
  std::vector<Expr> args;  // operands, index, call arguments, relaxed inner
  // Relaxed only
  int component = -1;
  Fallback fallback = Fallback::ElseVar;
};

enum class StmtKind {
  Decl,
  Assign,
  Call,
  If,
  While,
  For,
  Input,
  Output,
  Return,
  Block,
  Goto,
};

/// Relaxation applied to a whole statement.
enum class Guard {
  None,
  Statement,  // `if (_rv) S;`
  ListItem,   // `_rv ? e : 1` inside a for-loop header
};

struct Stmt {
  StmtKind kind = StmtKind::Block;
  int node_id = 0;
  int line = 0;

  // Decl
  Type type = Type::Int;
  std::string name;
  std::optional<int> array_size;
  std::vector<Expr> init;  // scalar: 0 or 1 entries; array: initializer list

  // Assign / Input: target is Var or Index
  std::optional<Expr> target;
  AssignOp op = AssignOp::Set;
  // Assign rhs, Output value, Return value, If/While/For condition, Call expr
  std::optional<Expr> value;

  std::vector<Stmt> body;       // If-then, loop body, Block
  std::vector<Stmt> else_body;  // If-else
  bool has_else = false;
  std::vector<Stmt> for_init;
  std::vector<Stmt> for_update;

  // Goto
  std::string label;

  // instrumentation
  Guard guard = Guard::None;
  int component = -1;
};

struct Param {
  Type type = Type::Int;
  std::string name;
};

struct FunctionDef {
  Type return_type = Type::Int;
  std::string name;
  std::vector<Param> params;
  std::vector<Stmt> body;
  int node_id = 0;
  int line = 0;
};

struct Program {
  std::vector<FunctionDef> functions;

  const FunctionDef* find(const std::string& fname) const {
    for (const auto& f : functions)
      if (f.name == fname) return &f;
    return nullptr;
  }
};

inline const char* to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Mod: return "%";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::And: return "&&";
    case BinaryOp::Or: return "||";
  }
  return "?";
}

inline const char* to_string(Type t) {
  switch (t) {
    case Type::Int: return "int";
    case Type::Bool: return "bool";
    case Type::Void: return "void";
  }
  return "?";
}

inline const char* to_string(AssignOp op) {
  switch (op) {
    case AssignOp::Set: return "=";
    case AssignOp::Add: return "+=";
    case AssignOp::Sub: return "-=";
    case AssignOp::Mul: return "*=";
    case AssignOp::Div: return "/=";
    case AssignOp::Mod: return "%=";
    case AssignOp::Inc: return "++";
    case AssignOp::Dec: return "--";
  }
  return "?";
}

inline bool is_comparison(BinaryOp op) {
  switch (op) {
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge:
    case BinaryOp::Eq:
    case BinaryOp::Ne:
      return true;
    default:
      return false;
  }
}

inline bool is_logical(BinaryOp op) { return op == BinaryOp::And || op == BinaryOp::Or; }

// Pre-order visitation helpers shared by the transforms and tests.

template <typename F>
void visit_exprs(const Expr& e, F&& f) {
  f(e);
  for (const auto& a : e.args) visit_exprs(a, f);
}

template <typename F>
void visit_stmts(const std::vector<Stmt>& stmts, F&& f);

template <typename F>
void visit_stmt(const Stmt& s, F&& f) {
  f(s);
  visit_stmts(s.for_init, f);
  visit_stmts(s.for_update, f);
  visit_stmts(s.body, f);
  visit_stmts(s.else_body, f);
}

template <typename F>
void visit_stmts(const std::vector<Stmt>& stmts, F&& f) {
  for (const auto& s : stmts) visit_stmt(s, f);
}

}  // namespace faultloc
