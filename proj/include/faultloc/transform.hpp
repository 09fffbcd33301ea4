#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ast.hpp"
#include "errors.hpp"
#include "test_suite.hpp"

namespace faultloc {

// ---------------------------------------------------------------------------
// Unrolling: one renamed copy of the program per failing test.

struct UnrolledScope {
  std::size_t index = 0;
  std::string label;  // scope_i
  std::string next_label;  // scope_{i+1} or final_step
  TestCase test;
  Program program;  // identifiers suffixed with _i; main's exits become gotos
};

struct UnrolledProgram {
  Program original;
  std::vector<UnrolledScope> scopes;

  static std::string input_array(std::size_t i) { return "_input_f" + std::to_string(i); }
  static std::string input_offset(std::size_t i) { return "_ioff_f" + std::to_string(i); }
  static std::string output_buffer(std::size_t i) { return "_out_" + std::to_string(i); }
  static std::string output_offset(std::size_t i) { return "_ooff_" + std::to_string(i); }
};

namespace detail {

inline void rename_expr(Expr& e, const std::string& suffix) {
  if (e.kind == ExprKind::Var || e.kind == ExprKind::Index || e.kind == ExprKind::Call) e.name += suffix;
  for (auto& a : e.args) rename_expr(a, suffix);
}

inline void rename_stmts(std::vector<Stmt>& stmts, const std::string& suffix, bool in_main,
                         const std::string& exit_label);

inline void rename_stmt(Stmt& s, const std::string& suffix, bool in_main, const std::string& exit_label) {
  if (s.kind == StmtKind::Decl) s.name += suffix;
  if (s.target) rename_expr(*s.target, suffix);
  if (s.value) rename_expr(*s.value, suffix);
  for (auto& e : s.init) rename_expr(e, suffix);
  rename_stmts(s.for_init, suffix, in_main, exit_label);
  rename_stmts(s.for_update, suffix, in_main, exit_label);
  rename_stmts(s.body, suffix, in_main, exit_label);
  rename_stmts(s.else_body, suffix, in_main, exit_label);
  if (in_main && s.kind == StmtKind::Return) {
    s.kind = StmtKind::Goto;
    s.value.reset();
    s.label = exit_label;
  }
}

inline void rename_stmts(std::vector<Stmt>& stmts, const std::string& suffix, bool in_main,
                         const std::string& exit_label) {
  for (auto& s : stmts) rename_stmt(s, suffix, in_main, exit_label);
}

// Number of reads that every execution of main performs before anything can branch.
inline std::size_t guaranteed_reads(const std::vector<Stmt>& stmts, bool& stop) {
  std::size_t n = 0;
  for (const auto& s : stmts) {
    if (stop) break;
    switch (s.kind) {
      case StmtKind::Input: ++n; break;
      case StmtKind::Block: n += guaranteed_reads(s.body, stop); break;
      case StmtKind::Return:
      case StmtKind::Goto:
      case StmtKind::If:
      case StmtKind::While:
      case StmtKind::For:
      case StmtKind::Call:
        stop = true;
        break;
      default:
        if (s.value) {
          bool has_call = false;
          visit_exprs(*s.value, [&](const Expr& e) { has_call |= e.kind == ExprKind::Call; });
          if (has_call) stop = true;
        }
        break;
    }
  }
  return n;
}

}  // namespace detail

/// Replicates `ast` once per failing test with renamed identifiers and chained exits.
inline UnrolledProgram unroll(const Program& ast, std::span<const TestCase> failing) {
  if (failing.empty()) throw UnrollError("unroll requires at least one failing test");
  const FunctionDef* main = ast.find("main");
  bool stop = false;
  std::size_t min_reads = detail::guaranteed_reads(main->body, stop);
  UnrolledProgram u;
  u.original = ast;
  for (std::size_t i = 0; i < failing.size(); ++i) {
    if (failing[i].inputs.size() < min_reads)
      throw UnrollError("test " + failing[i].id + " provides " + std::to_string(failing[i].inputs.size()) +
                        " inputs but the program always reads " + std::to_string(min_reads));
    UnrolledScope sc;
    sc.index = i;
    sc.label = "scope_" + std::to_string(i);
    sc.next_label = i + 1 < failing.size() ? "scope_" + std::to_string(i + 1) : "final_step";
    sc.test = failing[i];
    sc.program = ast;
    std::string suffix = "_" + std::to_string(i);
    for (auto& f : sc.program.functions) {
      bool is_main = f.name == "main";
      if (!is_main) f.name += suffix;
      for (auto& p : f.params) p.name += suffix;
      detail::rename_stmts(f.body, suffix, is_main, sc.next_label);
    }
    u.scopes.push_back(std::move(sc));
  }
  return u;
}

// ---------------------------------------------------------------------------
// Components and instrumentation.

enum class ComponentKind { Statement, IfCondition, LoopCondition, ExprListItem, InputStmt, OutputStmt };

inline const char* to_string(ComponentKind k) {
  switch (k) {
    case ComponentKind::Statement: return "statement";
    case ComponentKind::IfCondition: return "if-condition";
    case ComponentKind::LoopCondition: return "loop-condition";
    case ComponentKind::ExprListItem: return "expr-list-item";
    case ComponentKind::InputStmt: return "input";
    case ComponentKind::OutputStmt: return "output";
  }
  return "?";
}

inline bool is_io(ComponentKind k) { return k == ComponentKind::InputStmt || k == ComponentKind::OutputStmt; }

struct Component {
  int id = 0;       // index into ComponentTable::components
  int node_id = 0;  // node in the original program
  int line = 0;
  ComponentKind kind = ComponentKind::Statement;
  int rv_number = 0;   // _rv<n>
  int ev_number = -1;  // _ev<n>, if-conditions only
  bool in_loop = false;
  int loop_depth = 0;
  std::uint64_t weight = 0;
  /// Statement node this component was split from during refinement, else -1.
  int refined_from = -1;

  std::string healthy_var() const { return "_rv" + std::to_string(rv_number); }
  std::string else_var() const { return ev_number < 0 ? std::string{} : "_ev" + std::to_string(ev_number); }
};

struct ComponentTable {
  std::vector<Component> components;

  std::size_t size() const { return components.size(); }
  const Component& operator[](std::size_t i) const { return components[i]; }

  std::optional<int> find_node(int node_id) const {
    for (const auto& c : components)
      if (c.node_id == node_id) return c.id;
    return std::nullopt;
  }
};

struct InstrumentedProgram {
  UnrolledProgram unrolled;
  ComponentTable table;
  int unwind = 1;
  bool refined = false;
};

struct InstrumentOptions {
  int unwind = 8;
  /// Upper bound on the flattened length of iteration-indexed relaxation vectors.
  std::uint64_t vector_cap = 1u << 16;
};

namespace detail {

inline std::uint64_t saturating_pow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > (std::uint64_t{1} << 62) / std::max<std::uint64_t>(base, 1)) return ~std::uint64_t{0};
    r *= base;
  }
  return r;
}

// Deepest loop nesting reachable from `f`, following calls.
inline int loop_depth_of(const Program& p, const FunctionDef& f, std::map<std::string, int>& memo);

inline int loop_depth_stmts(const Program& p, const std::vector<Stmt>& stmts, std::map<std::string, int>& memo);

inline int loop_depth_expr(const Program& p, const Expr& e, std::map<std::string, int>& memo) {
  int d = 0;
  visit_exprs(e, [&](const Expr& x) {
    if (x.kind == ExprKind::Call)
      if (const FunctionDef* g = p.find(x.name)) d = std::max(d, loop_depth_of(p, *g, memo));
  });
  return d;
}

inline int loop_depth_stmts(const Program& p, const std::vector<Stmt>& stmts, std::map<std::string, int>& memo) {
  int d = 0;
  for (const auto& s : stmts) {
    int here = 0;
    if (s.value) here = loop_depth_expr(p, *s.value, memo);
    for (const auto& e : s.init) here = std::max(here, loop_depth_expr(p, e, memo));
    here = std::max(here, loop_depth_stmts(p, s.for_init, memo));
    int inner = std::max(loop_depth_stmts(p, s.body, memo), loop_depth_stmts(p, s.for_update, memo));
    if (s.kind == StmtKind::While || s.kind == StmtKind::For) inner += 1;
    here = std::max({here, inner, loop_depth_stmts(p, s.else_body, memo)});
    d = std::max(d, here);
  }
  return d;
}

inline int loop_depth_of(const Program& p, const FunctionDef& f, std::map<std::string, int>& memo) {
  auto it = memo.find(f.name);
  if (it != memo.end()) return it->second;
  int d = loop_depth_stmts(p, f.body, memo);
  memo[f.name] = d;
  return d;
}

class Instrumenter {
 public:
  explicit Instrumenter(ComponentTable& table) : table_(table) {}

  void run(Program& p) {
    // main first so numbering follows reading order of the entry point
    for (auto& f : p.functions)
      if (f.name == "main") relax_block(f.body, 0, true);
    for (auto& f : p.functions)
      if (f.name != "main") relax_block(f.body, 0, false);
  }

 private:
  ComponentTable& table_;
  std::map<int, int> by_node_;
  int counter_ = 0;

  int component(int node_id, int line, ComponentKind kind, int depth) {
    auto it = by_node_.find(node_id);
    if (it != by_node_.end()) return it->second;
    Component c;
    c.id = static_cast<int>(table_.components.size());
    c.node_id = node_id;
    c.line = line;
    c.kind = kind;
    c.rv_number = ++counter_;
    if (kind == ComponentKind::IfCondition) c.ev_number = ++counter_;
    c.in_loop = depth > 0;
    c.loop_depth = depth;
    table_.components.push_back(c);
    by_node_[node_id] = c.id;
    return c.id;
  }

  static Expr wrap(Expr inner, int comp, Fallback fb) {
    Expr r;
    r.kind = ExprKind::Relaxed;
    r.node_id = inner.node_id;
    r.line = inner.line;
    r.component = comp;
    r.fallback = fb;
    r.args.push_back(std::move(inner));
    return r;
  }

  void guard(Stmt& s, Guard g, ComponentKind kind, int depth) {
    s.guard = g;
    s.component = component(s.node_id, s.line, kind, depth);
  }

  void relax_item(Stmt& s, int depth) {
    if (s.kind == StmtKind::Decl && s.init.empty()) return;
    guard(s, Guard::ListItem, ComponentKind::ExprListItem, depth);
  }

  void relax_block(std::vector<Stmt>& stmts, int depth, bool in_main) {
    for (auto& s : stmts) relax(s, depth, in_main);
  }

  void relax(Stmt& s, int depth, bool in_main) {
    switch (s.kind) {
      case StmtKind::Decl:
        if (!s.init.empty()) guard(s, Guard::Statement, ComponentKind::Statement, depth);
        return;
      case StmtKind::Assign:
      case StmtKind::Call:
        guard(s, Guard::Statement, ComponentKind::Statement, depth);
        return;
      case StmtKind::Input:
        guard(s, Guard::Statement, ComponentKind::InputStmt, depth);
        return;
      case StmtKind::Output:
        guard(s, Guard::Statement, ComponentKind::OutputStmt, depth);
        return;
      case StmtKind::Return:
        if (!in_main && s.value) guard(s, Guard::Statement, ComponentKind::Statement, depth);
        return;
      case StmtKind::Goto:
        return;
      case StmtKind::Block:
        relax_block(s.body, depth, in_main);
        return;
      case StmtKind::If: {
        int c = component(s.node_id, s.line, ComponentKind::IfCondition, depth);
        s.value = wrap(std::move(*s.value), c, Fallback::ElseVar);
        relax_block(s.body, depth, in_main);
        relax_block(s.else_body, depth, in_main);
        return;
      }
      case StmtKind::While:
      case StmtKind::For: {
        for (auto& i : s.for_init) relax_item(i, depth);
        if (s.value) {
          int c = component(s.node_id, s.line, ComponentKind::LoopCondition, depth + 1);
          s.value = wrap(std::move(*s.value), c, Fallback::LoopImplies);
        }
        relax_block(s.body, depth + 1, in_main);
        for (auto& u : s.for_update) relax_item(u, depth + 1);
        return;
      }
    }
  }
};

inline void check_capacity(const Program& p, const InstrumentOptions& opts) {
  std::map<std::string, int> memo;
  int depth = 0;
  for (const auto& f : p.functions) depth = std::max(depth, loop_depth_of(p, f, memo));
  // loop conditions are checked once more than the body runs
  std::uint64_t len = saturating_pow(static_cast<std::uint64_t>(opts.unwind) + 1, depth);
  if (len > opts.vector_cap)
    throw CapacityError("relaxation vectors need " + std::to_string(len) + " entries (loop depth " +
                        std::to_string(depth) + ", unwind " + std::to_string(opts.unwind) +
                        "), cap is " + std::to_string(opts.vector_cap));
}

}  // namespace detail

/// Adds relaxation variables to every statement, condition and for-header item of
/// each scope. A node gets the same component in every scope.
inline InstrumentedProgram instrument(UnrolledProgram u, const InstrumentOptions& opts = {}) {
  if (opts.unwind < 1) throw std::invalid_argument("unwind must be >= 1");
  detail::check_capacity(u.original, opts);
  InstrumentedProgram ip;
  detail::Instrumenter ins(ip.table);
  for (auto& sc : u.scopes) ins.run(sc.program);
  ip.unrolled = std::move(u);
  ip.unwind = opts.unwind;
  return ip;
}

// ---------------------------------------------------------------------------
// Refinement: split diagnosed statements into sub-expression components with
// nondeterministic fallbacks. Everything else runs unrelaxed.

namespace detail {

inline void flatten_chain(const Expr& e, BinaryOp op, std::vector<const Expr*>& out) {
  if (e.kind == ExprKind::Binary && e.bop == op) {
    flatten_chain(e.args[0], op, out);
    flatten_chain(e.args[1], op, out);
  } else {
    out.push_back(&e);
  }
}

class Refiner {
 public:
  Refiner(ComponentTable& table, const std::map<int, Component>& diagnosed)
      : table_(table), diagnosed_(diagnosed) {}

  void run(Program& p) {
    for (auto& f : p.functions)
      if (f.name == "main") refine_block(f.body, 0, true);
    for (auto& f : p.functions)
      if (f.name != "main") refine_block(f.body, 0, false);
  }

 private:
  ComponentTable& table_;
  const std::map<int, Component>& diagnosed_;
  std::map<std::pair<int, int>, int> by_key_;  // (node, role) -> component
  int counter_ = 0;

  int component(int node_id, int role, int line, ComponentKind kind, int depth, std::uint64_t weight,
                int refined_from, bool with_ev) {
    auto key = std::make_pair(node_id, role);
    auto it = by_key_.find(key);
    if (it != by_key_.end()) return it->second;
    Component c;
    c.id = static_cast<int>(table_.components.size());
    c.node_id = node_id;
    c.line = line;
    c.kind = kind;
    c.rv_number = ++counter_;
    if (with_ev) c.ev_number = ++counter_;
    c.in_loop = depth > 0;
    c.loop_depth = depth;
    c.weight = weight;
    c.refined_from = refined_from;
    table_.components.push_back(c);
    by_key_[key] = c.id;
    return c.id;
  }

  static Expr wrap(Expr inner, int comp, Fallback fb) {
    Expr r;
    r.kind = ExprKind::Relaxed;
    r.node_id = inner.node_id;
    r.line = inner.line;
    r.component = comp;
    r.fallback = fb;
    r.args.push_back(std::move(inner));
    return r;
  }

  const Component* diagnosed(int node_id) const {
    auto it = diagnosed_.find(node_id);
    return it == diagnosed_.end() ? nullptr : &it->second;
  }

  // Splits a condition at its top-level &&/|| chain; each operand gets its own component.
  Expr split_condition(const Expr& cond, const Component& parent, int depth, int stmt_node) {
    BinaryOp op = cond.kind == ExprKind::Binary && is_logical(cond.bop) ? cond.bop : BinaryOp::And;
    std::vector<const Expr*> ops;
    flatten_chain(cond, op, ops);
    std::uint64_t w = std::max<std::uint64_t>(1, parent.weight / ops.size());
    std::vector<Expr> parts;
    for (const Expr* o : ops) {
      int c = component(o->node_id, 1, o->line, ComponentKind::Statement, depth, w, stmt_node, false);
      parts.push_back(wrap(*o, c, Fallback::NondetBool));
    }
    Expr acc = std::move(parts[0]);
    for (std::size_t i = 1; i < parts.size(); ++i) {
      Expr b;
      b.kind = ExprKind::Binary;
      b.bop = op;
      b.line = acc.line;
      b.node_id = cond.node_id;
      b.args.push_back(std::move(acc));
      b.args.push_back(std::move(parts[i]));
      acc = std::move(b);
    }
    return acc;
  }

  // `e` becomes `_rvK ? e : nondet_int()`.
  void nondet_value(Expr& e, const Component& parent, int depth, int stmt_node) {
    int c = component(e.node_id, 2, e.line, ComponentKind::Statement, depth, parent.weight, stmt_node, false);
    e = wrap(std::move(e), c, Fallback::NondetInt);
  }

  void refine_block(std::vector<Stmt>& stmts, int depth, bool in_main) {
    for (auto& s : stmts) refine(s, depth, in_main, false);
  }

  // Compound assignments and increments are rewritten to `x = x op e` so the
  // right-hand side can be made nondeterministic.
  static void to_plain_assign(Stmt& s) {
    if (s.op == AssignOp::Set) return;
    Expr rhs;
    rhs.kind = ExprKind::Binary;
    rhs.line = s.line;
    rhs.node_id = s.value ? s.value->node_id : s.target->node_id;
    Expr lhs = *s.target;
    Expr operand;
    if (s.value) {
      operand = *s.value;
    } else {
      operand.kind = ExprKind::IntLit;
      operand.value = 1;
      operand.line = s.line;
      operand.node_id = s.target->node_id;
    }
    switch (s.op) {
      case AssignOp::Add:
      case AssignOp::Inc: rhs.bop = BinaryOp::Add; break;
      case AssignOp::Sub:
      case AssignOp::Dec: rhs.bop = BinaryOp::Sub; break;
      case AssignOp::Mul: rhs.bop = BinaryOp::Mul; break;
      case AssignOp::Div: rhs.bop = BinaryOp::Div; break;
      case AssignOp::Mod: rhs.bop = BinaryOp::Mod; break;
      case AssignOp::Set: break;
    }
    rhs.args.push_back(std::move(lhs));
    rhs.args.push_back(std::move(operand));
    s.op = AssignOp::Set;
    s.value = std::move(rhs);
  }

  void refine(Stmt& s, int depth, bool in_main, bool list_item) {
    const Component* d = diagnosed(s.node_id);
    switch (s.kind) {
      case StmtKind::Decl:
        if (d && !s.init.empty() && !s.array_size) nondet_value(s.init[0], *d, depth, s.node_id);
        return;
      case StmtKind::Assign:
        if (d) {
          to_plain_assign(s);
          nondet_value(*s.value, *d, depth, s.node_id);
        }
        return;
      case StmtKind::Return:
        if (d && s.value && !in_main) {
          s.guard = Guard::Statement;
          s.component = component(s.node_id, 0, s.line, d->kind, depth, d->weight, s.node_id, false);
          nondet_value(*s.value, *d, depth, s.node_id);
        }
        return;
      case StmtKind::Call:
      case StmtKind::Input:
      case StmtKind::Output:
        if (d) {
          // I/O and calls keep their whole-statement relaxation at the original cost
          s.guard = Guard::Statement;
          s.component = component(s.node_id, 0, s.line, d->kind, depth, d->weight, s.node_id, false);
          if (s.kind == StmtKind::Output) nondet_value(*s.value, *d, depth, s.node_id);
        }
        return;
      case StmtKind::Goto:
        return;
      case StmtKind::Block:
        refine_block(s.body, depth, in_main);
        return;
      case StmtKind::If:
        if (d) {
          int parent = component(s.node_id, 0, s.line, ComponentKind::IfCondition, depth, d->weight, s.node_id, true);
          s.value = wrap(split_condition(*s.value, *d, depth, s.node_id), parent, Fallback::ElseVar);
        }
        refine_block(s.body, depth, in_main);
        refine_block(s.else_body, depth, in_main);
        return;
      case StmtKind::While:
      case StmtKind::For:
        for (auto& i : s.for_init) refine(i, depth, in_main, true);
        if (d && s.value) {
          int parent =
              component(s.node_id, 0, s.line, ComponentKind::LoopCondition, depth + 1, d->weight, s.node_id, false);
          s.value = wrap(split_condition(*s.value, *d, depth + 1, s.node_id), parent, Fallback::LoopImplies);
        }
        refine_block(s.body, depth + 1, in_main);
        for (auto& u : s.for_update) refine(u, depth + 1, in_main, true);
        return;
    }
    (void)list_item;
  }
};

}  // namespace detail

/// Re-instruments the program at sub-expression granularity for the diagnosed
/// components only. `diagnosed` carries the weighted components of a previous run.
inline InstrumentedProgram refine_instrument(const Program& ast, std::span<const TestCase> failing,
                                             std::span<const Component> diagnosed,
                                             const InstrumentOptions& opts = {}) {
  if (opts.unwind < 1) throw std::invalid_argument("unwind must be >= 1");
  detail::check_capacity(ast, opts);
  UnrolledProgram u = unroll(ast, failing);
  std::map<int, Component> by_node;
  for (const auto& c : diagnosed) by_node[c.node_id] = c;
  InstrumentedProgram ip;
  detail::Refiner ref(ip.table, by_node);
  for (auto& sc : u.scopes) ref.run(sc.program);
  ip.unrolled = std::move(u);
  ip.unwind = opts.unwind;
  ip.refined = true;
  return ip;
}

}  // namespace faultloc
