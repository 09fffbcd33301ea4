#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ast.hpp"
#include "errors.hpp"
#include "exec.hpp"
#include "transform.hpp"

namespace faultloc {

using TermId = std::int32_t;

enum class Sort : std::uint8_t { Bool, Int };

enum class Op : std::uint8_t {
  BoolConst,
  IntConst,
  FreeBool,
  FreeInt,
  Not,
  And,
  Or,
  Ite,
  Add,
  Sub,
  Mul,
  Div,
  Mod,
  Neg,
  Eq,
  Lt,  // signed
  Le,  // signed
  BoolToInt,
};

struct Term {
  Op op = Op::BoolConst;
  Sort sort = Sort::Bool;
  TermId a = -1, b = -1, c = -1;
  std::int64_t value = 0;  // constants
};

/// Hash-consed term DAG with constant folding. Terms are created in
/// topological order: every operand id is smaller than the term using it.
class TermStore {
 public:
  explicit TermStore(int width = 16) : width_(width) {
    true_ = intern({Op::BoolConst, Sort::Bool, -1, -1, -1, 1});
    false_ = intern({Op::BoolConst, Sort::Bool, -1, -1, -1, 0});
  }

  int width() const { return width_; }
  std::size_t size() const { return terms_.size(); }
  const Term& operator[](TermId id) const { return terms_[static_cast<std::size_t>(id)]; }
  const std::vector<Term>& all() const { return terms_; }

  TermId tru() const { return true_; }
  TermId fls() const { return false_; }
  TermId boolean(bool b) const { return b ? true_ : false_; }
  TermId integer(std::int64_t v) { return intern({Op::IntConst, Sort::Int, -1, -1, -1, wrap_to_width(v, width_)}); }

  TermId free_bool() { return push({Op::FreeBool, Sort::Bool, -1, -1, -1, 0}); }
  TermId free_int() { return push({Op::FreeInt, Sort::Int, -1, -1, -1, 0}); }

  bool is_const(TermId t) const {
    Op o = (*this)[t].op;
    return o == Op::BoolConst || o == Op::IntConst;
  }
  std::int64_t const_value(TermId t) const { return (*this)[t].value; }

  TermId mk_not(TermId a) {
    if (is_const(a)) return boolean(const_value(a) == 0);
    const Term& t = (*this)[a];
    if (t.op == Op::Not) return t.a;
    return intern({Op::Not, Sort::Bool, a, -1, -1, 0});
  }

  TermId mk_and(TermId a, TermId b) {
    if (a == false_ || b == false_) return false_;
    if (a == true_) return b;
    if (b == true_) return a;
    if (a == b) return a;
    if (a > b) std::swap(a, b);
    return intern({Op::And, Sort::Bool, a, b, -1, 0});
  }

  TermId mk_or(TermId a, TermId b) { return mk_not(mk_and(mk_not(a), mk_not(b))); }

  TermId mk_ite(TermId c, TermId t, TermId e) {
    if (c == true_) return t;
    if (c == false_) return e;
    if (t == e) return t;
    Sort s = (*this)[t].sort;
    if (s == Sort::Bool) {
      if (t == true_ && e == false_) return c;
      if (t == false_ && e == true_) return mk_not(c);
    }
    return intern({Op::Ite, s, c, t, e, 0});
  }

  TermId mk_arith(Op op, TermId a, TermId b) {
    if (is_const(a) && is_const(b)) {
      std::int64_t x = const_value(a), y = const_value(b);
      switch (op) {
        case Op::Add: return integer(x + y);
        case Op::Sub: return integer(x - y);
        case Op::Mul: return integer(x * y);
        case Op::Div: return integer(total_div(x, y, width_));
        case Op::Mod: return integer(total_mod(x, y, width_));
        default: break;
      }
    }
    if ((op == Op::Add || op == Op::Mul) && a > b) std::swap(a, b);
    if (op == Op::Add && is_const(a) && const_value(a) == 0) return b;
    if ((op == Op::Add || op == Op::Sub) && is_const(b) && const_value(b) == 0) return a;
    return intern({op, Sort::Int, a, b, -1, 0});
  }

  TermId mk_neg(TermId a) {
    if (is_const(a)) return integer(-const_value(a));
    return intern({Op::Neg, Sort::Int, a, -1, -1, 0});
  }

  TermId mk_eq(TermId a, TermId b) {
    if (a == b) return true_;
    if (is_const(a) && is_const(b)) return boolean(const_value(a) == const_value(b));
    if (a > b) std::swap(a, b);
    return intern({Op::Eq, Sort::Bool, a, b, -1, 0});
  }

  TermId mk_lt(TermId a, TermId b) {
    if (a == b) return false_;
    if (is_const(a) && is_const(b)) return boolean(const_value(a) < const_value(b));
    return intern({Op::Lt, Sort::Bool, a, b, -1, 0});
  }

  TermId mk_le(TermId a, TermId b) {
    if (a == b) return true_;
    if (is_const(a) && is_const(b)) return boolean(const_value(a) <= const_value(b));
    return intern({Op::Le, Sort::Bool, a, b, -1, 0});
  }

  TermId mk_bool_to_int(TermId a) {
    if (is_const(a)) return integer(const_value(a) != 0 ? 1 : 0);
    return intern({Op::BoolToInt, Sort::Int, a, -1, -1, 0});
  }

  /// `a != 0` as a Boolean term.
  TermId mk_nonzero(TermId a) {
    const Term& t = (*this)[a];
    if (t.op == Op::BoolToInt) return t.a;
    return mk_not(mk_eq(a, integer(0)));
  }

 private:
  struct Key {
    Op op;
    TermId a, b, c;
    std::int64_t value;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::uint64_t h = static_cast<std::uint64_t>(k.op);
      for (std::uint64_t x : {static_cast<std::uint64_t>(k.a), static_cast<std::uint64_t>(k.b),
                              static_cast<std::uint64_t>(k.c), static_cast<std::uint64_t>(k.value)})
        h = (h ^ x) * 0x100000001b3ULL + 0x9e3779b97f4a7c15ULL;
      return static_cast<std::size_t>(h);
    }
  };

  int width_;
  std::vector<Term> terms_;
  std::unordered_map<Key, TermId, KeyHash> index_;
  TermId true_ = -1, false_ = -1;

  TermId push(const Term& t) {
    terms_.push_back(t);
    return static_cast<TermId>(terms_.size() - 1);
  }

  TermId intern(const Term& t) {
    Key k{t.op, t.a, t.b, t.c, t.value};
    auto it = index_.find(k);
    if (it != index_.end()) return it->second;
    TermId id = push(t);
    index_.emplace(k, id);
    return id;
  }
};

/// A named SSA version of a program variable: `name#version := term`.
struct SsaDefinition {
  std::string name;
  TermId term;
};

struct SsaScope {
  std::string test_id;
  std::vector<std::int64_t> expected;
  std::vector<TermId> output;  // buffer cells, capacity = expected + slack
  TermId output_len = -1;
  TermId overflow = -1;
  TermId assertion = -1;  // A_i
};

struct IterationEntry {
  int component;
  std::vector<int> iteration;
  TermId term;
};

struct SsaProgram {
  TermStore terms;
  std::vector<SsaDefinition> definitions;
  std::vector<SsaScope> scopes;
  /// One free Boolean per component (the healthy variable).
  std::vector<TermId> healthy;
  /// Per-iteration relaxation entries; each is implied by its component's healthy variable.
  std::vector<IterationEntry> iteration_entries;
  /// Hard side conditions: unwinding assumptions, in-bounds reads.
  std::vector<TermId> assumptions;
  /// Paths that leave a loop unfinished after `unwind` iterations.
  std::vector<TermId> unwind_violations;
  /// The goal asserted by the trace formula; true when assertions are disabled.
  TermId goal = -1;

  explicit SsaProgram(int width = 16) : terms(width) {}
};

struct SsaOptions {
  int unwind = 8;
  int width = 16;
  /// Output buffer capacity beyond the expected length.
  int output_slack = 4;
  /// Conjoin the per-test output assertions into the goal.
  bool assertions = true;
  /// Treat insufficient unwinding as an assertion failure instead of an assumption.
  bool unwind_assert = false;
};

namespace detail {

class SsaTranslator {
 public:
  SsaTranslator(const InstrumentedProgram& ip, const SsaOptions& opts, SsaProgram& out)
      : ip_(ip), opts_(opts), out_(out), T(out.terms) {}

  void run() {
    for (const auto& c : ip_.table.components) {
      (void)c;
      out_.healthy.push_back(T.free_bool());
    }
    for (const auto& sc : ip_.unrolled.scopes) run_scope(sc);
    TermId goal = T.tru();
    if (opts_.assertions)
      for (const auto& s : out_.scopes) goal = T.mk_and(goal, s.assertion);
    if (opts_.unwind_assert)
      for (TermId v : out_.unwind_violations) goal = T.mk_or(goal, v);
    out_.goal = goal;
  }

 private:
  struct VarState {
    Type type;
    std::string base;
    int version = 0;
    std::vector<TermId> cells;
  };
  struct Frame {
    std::vector<std::map<std::string, VarState>> env;
    TermId exited;
    TermId ret;
    Type ret_type = Type::Int;
  };
  struct Value {
    TermId term;
    Sort sort;
  };

  const InstrumentedProgram& ip_;
  SsaOptions opts_;
  SsaProgram& out_;
  TermStore& T;

  const UnrolledScope* scope_ = nullptr;
  std::vector<Frame> frames_;
  TermId guard_ = -1;
  std::vector<int> iters_;
  std::map<std::pair<int, std::vector<int>>, TermId> entries_;
  std::map<std::pair<int, std::vector<int>>, TermId> locals_;
  TermId in_off_ = -1;
  SsaScope* io_ = nullptr;
  int call_depth_ = 0;

  TermId active() const { return T.mk_and(guard_, T.mk_not(frames_.back().exited)); }

  TermId healthy(int comp) {
    TermId h = out_.healthy[static_cast<std::size_t>(comp)];
    if (iters_.empty()) return h;
    auto key = std::make_pair(comp, iters_);
    auto it = entries_.find(key);
    if (it != entries_.end()) return it->second;
    TermId e = T.free_bool();
    entries_.emplace(key, e);
    out_.iteration_entries.push_back({comp, iters_, e});
    return e;
  }

  // Scope-local symbol for (component, iteration): else-vars and nondet values.
  TermId local_symbol(int comp, Sort sort) {
    auto key = std::make_pair(comp, iters_);
    auto it = locals_.find(key);
    if (it != locals_.end()) return it->second;
    TermId e = sort == Sort::Bool ? T.free_bool() : T.free_int();
    locals_.emplace(key, e);
    return e;
  }

  void run_scope(const UnrolledScope& sc) {
    scope_ = &sc;
    locals_.clear();
    out_.scopes.emplace_back();
    io_ = &out_.scopes.back();
    io_->test_id = sc.test.id;
    io_->expected = sc.test.expected_output;
    std::size_t cap = sc.test.expected_output.size() + static_cast<std::size_t>(opts_.output_slack);
    io_->output.assign(cap, T.integer(0));
    io_->output_len = T.integer(0);
    io_->overflow = T.fls();
    in_off_ = T.integer(0);

    frames_.clear();
    frames_.push_back(Frame{{{}}, T.fls(), T.integer(0), Type::Int});
    guard_ = T.tru();
    const FunctionDef* main = sc.program.find("main");
    block(main->body);

    TermId a = T.mk_eq(io_->output_len, T.integer(static_cast<std::int64_t>(io_->expected.size())));
    a = T.mk_and(a, T.mk_not(io_->overflow));
    for (std::size_t j = 0; j < io_->expected.size(); ++j)
      a = T.mk_and(a, T.mk_eq(io_->output[j], T.integer(io_->expected[j])));
    io_->assertion = a;
  }

  VarState& lookup(const std::string& n) {
    auto& env = frames_.back().env;
    for (auto it = env.rbegin(); it != env.rend(); ++it) {
      auto f = it->find(n);
      if (f != it->end()) return f->second;
    }
    throw std::logic_error("unbound variable " + n);
  }

  void define(VarState& v, std::size_t cell, TermId t) {
    v.cells[cell] = t;
    std::string name = v.base;
    if (v.cells.size() > 1) name += "[" + std::to_string(cell) + "]";
    out_.definitions.push_back({name + "#" + std::to_string(++v.version), t});
  }

  TermId normalize(Type ty, TermId v) { return ty == Type::Bool ? T.mk_bool_to_int(T.mk_nonzero(v)) : v; }

  void block(const std::vector<Stmt>& stmts) {
    frames_.back().env.emplace_back();
    for (const auto& s : stmts) stmt(s);
    frames_.back().env.pop_back();
  }

  // Index must lie within bounds whenever the access executes.
  void require_in_bounds(TermId idx, std::size_t n) {
    TermId ok = T.mk_and(T.mk_le(T.integer(0), idx), T.mk_lt(idx, T.integer(static_cast<std::int64_t>(n))));
    out_.assumptions.push_back(T.mk_not(T.mk_and(active(), T.mk_not(ok))));
  }

  TermId select(const std::vector<TermId>& cells, TermId idx) {
    TermId r = cells.back();
    for (std::size_t j = cells.size() - 1; j-- > 0;)
      r = T.mk_ite(T.mk_eq(idx, T.integer(static_cast<std::int64_t>(j))), cells[j], r);
    return r;
  }

  void store(const Expr& target, TermId value) {
    if (target.kind == ExprKind::Index) {
      TermId idx = eval_int(target.args[0]);
      VarState& v = lookup(target.name);
      require_in_bounds(idx, v.cells.size());
      value = normalize(v.type, value);
      TermId act = active();
      for (std::size_t j = 0; j < v.cells.size(); ++j) {
        TermId hit = T.mk_and(act, T.mk_eq(idx, T.integer(static_cast<std::int64_t>(j))));
        TermId nv = T.mk_ite(hit, value, v.cells[j]);
        if (nv != v.cells[j]) define(v, j, nv);
      }
      return;
    }
    VarState& v = lookup(target.name);
    value = normalize(v.type, value);
    TermId nv = T.mk_ite(active(), value, v.cells[0]);
    define(v, 0, nv);
  }

  void stmt(const Stmt& s) {
    TermId saved = guard_;
    if (s.guard != Guard::None && s.kind != StmtKind::Decl) guard_ = T.mk_and(guard_, healthy(s.component));
    exec(s);
    guard_ = saved;
  }

  void exec(const Stmt& s) {
    switch (s.kind) {
      case StmtKind::Decl: {
        VarState v{s.type, s.name, 0, {}};
        std::size_t n = static_cast<std::size_t>(s.array_size.value_or(1));
        if (!s.init.empty()) {
          TermId on = active();
          if (s.guard != Guard::None) on = T.mk_and(on, healthy(s.component));
          for (std::size_t j = 0; j < n; ++j) {
            TermId init = j < s.init.size() ? normalize(s.type, eval_int(s.init[j])) : T.integer(0);
            v.cells.push_back(T.mk_ite(on, init, T.free_int()));
          }
        } else {
          for (std::size_t j = 0; j < n; ++j) v.cells.push_back(normalize(s.type, T.free_int()));
        }
        auto& slot = frames_.back().env.back()[s.name] = std::move(v);
        for (std::size_t j = 0; j < slot.cells.size(); ++j) {
          std::string name = slot.base + (slot.cells.size() > 1 ? "[" + std::to_string(j) + "]" : "");
          out_.definitions.push_back({name + "#0", slot.cells[j]});
        }
        return;
      }
      case StmtKind::Assign:
        assign(s);
        return;
      case StmtKind::Call:
        eval(*s.value);
        return;
      case StmtKind::Input: {
        const auto& inputs = scope_->test.inputs;
        TermId value = T.integer(0);
        std::vector<TermId> cells;
        for (auto v : inputs) cells.push_back(T.integer(v));
        if (!cells.empty()) value = select(cells, in_off_);
        TermId ok = T.mk_lt(in_off_, T.integer(static_cast<std::int64_t>(inputs.size())));
        out_.assumptions.push_back(T.mk_not(T.mk_and(active(), T.mk_not(ok))));
        TermId off_before = in_off_;
        TermId act = active();
        store(*s.target, value);
        in_off_ = T.mk_ite(act, T.mk_arith(Op::Add, off_before, T.integer(1)), off_before);
        return;
      }
      case StmtKind::Output: {
        TermId v = eval_int(*s.value);
        TermId act = active();
        TermId len = io_->output_len;
        for (std::size_t j = 0; j < io_->output.size(); ++j) {
          TermId hit = T.mk_and(act, T.mk_eq(len, T.integer(static_cast<std::int64_t>(j))));
          io_->output[j] = T.mk_ite(hit, v, io_->output[j]);
        }
        TermId full = T.mk_le(T.integer(static_cast<std::int64_t>(io_->output.size())), len);
        io_->overflow = T.mk_or(io_->overflow, T.mk_and(act, full));
        io_->output_len = T.mk_ite(act, T.mk_arith(Op::Add, len, T.integer(1)), len);
        return;
      }
      case StmtKind::Return: {
        Frame& f = frames_.back();
        TermId act = active();
        if (s.value) f.ret = T.mk_ite(act, normalize(f.ret_type, eval_int(*s.value)), f.ret);
        f.exited = T.mk_or(f.exited, act);
        return;
      }
      case StmtKind::Goto: {
        Frame& f = frames_.back();
        f.exited = T.mk_or(f.exited, active());
        return;
      }
      case StmtKind::If: {
        TermId c = eval_bool(*s.value);
        TermId saved = guard_;
        guard_ = T.mk_and(saved, c);
        block(s.body);
        guard_ = T.mk_and(saved, T.mk_not(c));
        block(s.else_body);
        guard_ = saved;
        return;
      }
      case StmtKind::Block:
        block(s.body);
        return;
      case StmtKind::While:
      case StmtKind::For:
        loop(s);
        return;
    }
  }

  void loop(const Stmt& s) {
    frames_.back().env.emplace_back();
    for (const auto& i : s.for_init) stmt(i);
    TermId saved = guard_;
    TermId running = T.tru();
    for (int k = 0; k < opts_.unwind; ++k) {
      iters_.push_back(k);
      guard_ = T.mk_and(saved, running);
      TermId c = s.value ? eval_bool(*s.value) : T.tru();
      running = T.mk_and(running, c);
      guard_ = T.mk_and(saved, running);
      block(s.body);
      for (const auto& u : s.for_update) stmt(u);
      iters_.pop_back();
    }
    iters_.push_back(opts_.unwind);
    guard_ = T.mk_and(saved, running);
    TermId c = s.value ? eval_bool(*s.value) : T.tru();
    TermId violation = T.mk_and(active(), c);
    iters_.pop_back();
    guard_ = saved;
    if (opts_.unwind_assert)
      out_.unwind_violations.push_back(violation);
    else
      out_.assumptions.push_back(T.mk_not(violation));
    frames_.back().env.pop_back();
  }

  void assign(const Stmt& s) {
    const Expr& t = *s.target;
    if (s.op == AssignOp::Set) {
      store(t, eval_int(*s.value));
      return;
    }
    TermId old = eval_int(t);
    TermId rhs = s.value ? eval_int(*s.value) : T.integer(1);
    Op op = Op::Add;
    switch (s.op) {
      case AssignOp::Add:
      case AssignOp::Inc: op = Op::Add; break;
      case AssignOp::Sub:
      case AssignOp::Dec: op = Op::Sub; break;
      case AssignOp::Mul: op = Op::Mul; break;
      case AssignOp::Div: op = Op::Div; break;
      case AssignOp::Mod: op = Op::Mod; break;
      case AssignOp::Set: break;
    }
    store(t, T.mk_arith(op, old, rhs));
  }

  TermId eval_int(const Expr& e) {
    Value v = eval(e);
    return v.sort == Sort::Int ? v.term : T.mk_bool_to_int(v.term);
  }

  TermId eval_bool(const Expr& e) {
    Value v = eval(e);
    return v.sort == Sort::Bool ? v.term : T.mk_nonzero(v.term);
  }

  // Evaluates `e` with the path guard narrowed by `cond`.
  template <typename F>
  auto under(TermId cond, F&& f) {
    TermId saved = guard_;
    guard_ = T.mk_and(guard_, cond);
    auto r = f();
    guard_ = saved;
    return r;
  }

  Value eval(const Expr& e) {
    switch (e.kind) {
      case ExprKind::IntLit:
        return {T.integer(e.value), Sort::Int};
      case ExprKind::BoolLit:
        return {T.boolean(e.value != 0), Sort::Bool};
      case ExprKind::Var:
        return {lookup(e.name).cells[0], Sort::Int};
      case ExprKind::Index: {
        TermId idx = eval_int(e.args[0]);
        VarState& v = lookup(e.name);
        require_in_bounds(idx, v.cells.size());
        return {select(v.cells, idx), Sort::Int};
      }
      case ExprKind::Unary:
        switch (e.uop) {
          case UnaryOp::Neg: return {T.mk_neg(eval_int(e.args[0])), Sort::Int};
          case UnaryOp::Not: return {T.mk_not(eval_bool(e.args[0])), Sort::Bool};
          case UnaryOp::Plus: return {eval_int(e.args[0]), Sort::Int};
        }
        break;
      case ExprKind::Binary: {
        if (e.bop == BinaryOp::And) {
          TermId l = eval_bool(e.args[0]);
          TermId r = under(l, [&] { return eval_bool(e.args[1]); });
          return {T.mk_and(l, r), Sort::Bool};
        }
        if (e.bop == BinaryOp::Or) {
          TermId l = eval_bool(e.args[0]);
          TermId r = under(T.mk_not(l), [&] { return eval_bool(e.args[1]); });
          return {T.mk_or(l, r), Sort::Bool};
        }
        TermId a = eval_int(e.args[0]);
        TermId b = eval_int(e.args[1]);
        switch (e.bop) {
          case BinaryOp::Add: return {T.mk_arith(Op::Add, a, b), Sort::Int};
          case BinaryOp::Sub: return {T.mk_arith(Op::Sub, a, b), Sort::Int};
          case BinaryOp::Mul: return {T.mk_arith(Op::Mul, a, b), Sort::Int};
          case BinaryOp::Div: return {T.mk_arith(Op::Div, a, b), Sort::Int};
          case BinaryOp::Mod: return {T.mk_arith(Op::Mod, a, b), Sort::Int};
          case BinaryOp::Lt: return {T.mk_lt(a, b), Sort::Bool};
          case BinaryOp::Le: return {T.mk_le(a, b), Sort::Bool};
          case BinaryOp::Gt: return {T.mk_lt(b, a), Sort::Bool};
          case BinaryOp::Ge: return {T.mk_le(b, a), Sort::Bool};
          case BinaryOp::Eq: return {T.mk_eq(a, b), Sort::Bool};
          case BinaryOp::Ne: return {T.mk_not(T.mk_eq(a, b)), Sort::Bool};
          default: break;
        }
        break;
      }
      case ExprKind::Call:
        return {call(e), Sort::Int};
      case ExprKind::Relaxed: {
        TermId h = healthy(e.component);
        switch (e.fallback) {
          case Fallback::ElseVar: {
            TermId inner = under(h, [&] { return eval_bool(e.args[0]); });
            return {T.mk_ite(h, inner, local_symbol(e.component, Sort::Bool)), Sort::Bool};
          }
          case Fallback::NondetBool: {
            TermId inner = under(h, [&] { return eval_bool(e.args[0]); });
            return {T.mk_ite(h, inner, local_symbol(e.component, Sort::Bool)), Sort::Bool};
          }
          case Fallback::NondetInt: {
            TermId inner = under(h, [&] { return eval_int(e.args[0]); });
            return {T.mk_ite(h, inner, local_symbol(e.component, Sort::Int)), Sort::Int};
          }
          case Fallback::LoopImplies: {
            TermId inner = under(h, [&] { return eval_bool(e.args[0]); });
            return {T.mk_or(T.mk_not(h), inner), Sort::Bool};
          }
        }
        break;
      }
    }
    throw std::logic_error("unhandled expression");
  }

  TermId call(const Expr& e) {
    const FunctionDef* f = scope_->program.find(e.name);
    if (!f) throw std::logic_error("unknown function " + e.name);
    std::vector<TermId> args;
    for (const auto& a : e.args) args.push_back(eval_int(a));
    if (++call_depth_ > 256) throw CapacityError("call depth exceeded while inlining " + e.name);
    TermId saved = guard_;
    guard_ = active();
    Frame fr{{{}}, T.fls(), T.free_int(), f->return_type};
    for (std::size_t i = 0; i < f->params.size(); ++i) {
      const Param& p = f->params[i];
      fr.env.back()[p.name] = VarState{p.type, p.name, 0, {normalize(p.type, args[i])}};
    }
    frames_.push_back(std::move(fr));
    block(f->body);
    TermId ret = frames_.back().ret;
    frames_.pop_back();
    guard_ = saved;
    --call_depth_;
    return ret;
  }
};

}  // namespace detail

/// Symbolically executes every scope of the instrumented program with loops
/// unwound `opts.unwind` times and calls inlined.
inline SsaProgram ssa_translate(const InstrumentedProgram& ip, const SsaOptions& opts = {}) {
  if (opts.width != 8 && opts.width != 16 && opts.width != 32)
    throw std::invalid_argument("width must be 8, 16 or 32");
  if (opts.unwind < 1) throw std::invalid_argument("unwind must be >= 1");
  SsaProgram p(opts.width);
  detail::SsaTranslator(ip, opts, p).run();
  return p;
}

/// Direct evaluation of every term under an assignment of the free terms
/// (unassigned free terms read as 0 / false).
inline std::vector<std::int64_t> evaluate_terms(const TermStore& T,
                                                const std::unordered_map<TermId, std::int64_t>& free_values) {
  int w = T.width();
  std::vector<std::int64_t> v(T.size(), 0);
  for (std::size_t i = 0; i < T.size(); ++i) {
    const Term& t = T.all()[i];
    auto A = [&] { return v[static_cast<std::size_t>(t.a)]; };
    auto B = [&] { return v[static_cast<std::size_t>(t.b)]; };
    auto C = [&] { return v[static_cast<std::size_t>(t.c)]; };
    switch (t.op) {
      case Op::BoolConst:
      case Op::IntConst: v[i] = t.value; break;
      case Op::FreeBool:
      case Op::FreeInt: {
        auto it = free_values.find(static_cast<TermId>(i));
        std::int64_t x = it == free_values.end() ? 0 : it->second;
        v[i] = t.op == Op::FreeBool ? (x != 0) : wrap_to_width(x, w);
        break;
      }
      case Op::Not: v[i] = A() == 0; break;
      case Op::And: v[i] = A() != 0 && B() != 0; break;
      case Op::Or: v[i] = A() != 0 || B() != 0; break;
      case Op::Ite: v[i] = A() != 0 ? B() : C(); break;
      case Op::Add: v[i] = wrap_to_width(A() + B(), w); break;
      case Op::Sub: v[i] = wrap_to_width(A() - B(), w); break;
      case Op::Mul: v[i] = wrap_to_width(A() * B(), w); break;
      case Op::Div: v[i] = total_div(A(), B(), w); break;
      case Op::Mod: v[i] = total_mod(A(), B(), w); break;
      case Op::Neg: v[i] = wrap_to_width(-A(), w); break;
      case Op::Eq: v[i] = A() == B(); break;
      case Op::Lt: v[i] = A() < B(); break;
      case Op::Le: v[i] = A() <= B(); break;
      case Op::BoolToInt: v[i] = A() != 0; break;
    }
  }
  return v;
}

}  // namespace faultloc
