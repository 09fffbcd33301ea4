#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ast.hpp"
#include "errors.hpp"
#include "test_suite.hpp"

namespace faultloc {

struct Limits {
  int max_loop_iterations = 8;
  long max_total_steps = 1'000'000;
};

enum class ExecStatus { Completed, StepLimitExceeded, RuntimeFault };

enum class FaultKind { None, InputUnderrun, IndexOutOfBounds };

struct ExecResult {
  ExecStatus status = ExecStatus::Completed;
  FaultKind fault = FaultKind::None;
  std::vector<std::int64_t> output;
  long steps = 0;

  bool operator==(const ExecResult&) const = default;
};

/// Two's-complement wraparound to `width` bits.
inline std::int64_t wrap_to_width(std::int64_t v, int width) {
  if (width >= 64) return v;
  auto u = static_cast<std::uint64_t>(v) & ((std::uint64_t{1} << width) - 1);
  if (u >> (width - 1)) u |= ~((std::uint64_t{1} << width) - 1);
  return static_cast<std::int64_t>(u);
}

/// C-style truncating division, total over zero divisors.
inline std::int64_t total_div(std::int64_t a, std::int64_t b, int width) {
  if (b == 0) return 0;
  return wrap_to_width(a / b, width);
}

inline std::int64_t total_mod(std::int64_t a, std::int64_t b, int width) {
  if (b == 0) return 0;
  return wrap_to_width(a % b, width);
}

/// Supplies values for relaxation variables when running an instrumented program.
/// The default is the all-healthy assignment.
struct RelaxationValues {
  std::function<bool(int component)> healthy = [](int) { return true; };
  std::function<bool(int component)> else_var = [](int) { return false; };
  std::function<std::int64_t(int component)> nondet = [](int) { return 0; };
};

namespace detail {

struct StepLimit {};
struct Fault {
  FaultKind kind;
};

class Interpreter {
 public:
  Interpreter(const Program& p, std::span<const std::int64_t> inputs, const Limits& limits, int width,
              const RelaxationValues& relax)
      : prog_(p), inputs_(inputs), limits_(limits), width_(width), relax_(relax) {}

  ExecResult run() {
    ExecResult r;
    const FunctionDef* main = prog_.find("main");
    try {
      call(*main, {});
      r.status = underrun_ ? ExecStatus::RuntimeFault : ExecStatus::Completed;
      r.fault = underrun_ ? FaultKind::InputUnderrun : FaultKind::None;
    } catch (const StepLimit&) {
      r.status = ExecStatus::StepLimitExceeded;
    } catch (const Fault& f) {
      r.status = ExecStatus::RuntimeFault;
      r.fault = f.kind;
    }
    r.output = std::move(output_);
    r.steps = steps_;
    return r;
  }

 private:
  struct Var {
    Type type;
    std::vector<std::int64_t> cells;
  };
  struct Frame {
    std::vector<std::map<std::string, Var>> scopes;
    bool returned = false;
    std::int64_t ret = 0;
  };

  const Program& prog_;
  std::span<const std::int64_t> inputs_;
  Limits limits_;
  int width_;
  const RelaxationValues& relax_;
  std::vector<Frame> frames_;
  std::vector<std::int64_t> output_;
  std::size_t in_off_ = 0;
  bool underrun_ = false;
  bool halted_ = false;  // main exited (return or goto)
  long steps_ = 0;

  std::int64_t w(std::int64_t v) const { return wrap_to_width(v, width_); }

  Var& lookup(const std::string& n) {
    auto& sc = frames_.back().scopes;
    for (auto it = sc.rbegin(); it != sc.rend(); ++it) {
      auto f = it->find(n);
      if (f != it->end()) return f->second;
    }
    throw std::logic_error("unbound variable " + n);
  }

  std::int64_t call(const FunctionDef& f, const std::vector<std::int64_t>& args) {
    frames_.emplace_back();
    frames_.back().scopes.emplace_back();
    for (std::size_t i = 0; i < f.params.size(); ++i) {
      std::int64_t v = args[i];
      if (f.params[i].type == Type::Bool) v = v != 0;
      frames_.back().scopes.back()[f.params[i].name] = Var{f.params[i].type, {v}};
    }
    exec_block(f.body);
    std::int64_t ret = frames_.back().ret;
    frames_.pop_back();
    if (f.return_type == Type::Bool) ret = ret != 0;
    return ret;
  }

  bool stopped() const { return halted_ || frames_.back().returned; }

  void exec_block(const std::vector<Stmt>& stmts) {
    frames_.back().scopes.emplace_back();
    for (const auto& s : stmts) {
      if (stopped()) break;
      exec(s);
    }
    frames_.back().scopes.pop_back();
  }

  void tick() {
    if (++steps_ > limits_.max_total_steps) throw StepLimit{};
  }

  std::size_t index_of(const Var& v, std::int64_t idx) const {
    if (idx < 0 || idx >= static_cast<std::int64_t>(v.cells.size())) throw Fault{FaultKind::IndexOutOfBounds};
    return static_cast<std::size_t>(idx);
  }

  std::int64_t& lvalue(const Expr& e) {
    if (e.kind == ExprKind::Index) {
      std::int64_t idx = eval(e.args[0]);
      Var& v = lookup(e.name);
      return v.cells[index_of(v, idx)];
    }
    return lookup(e.name).cells[0];
  }

  void store(const Expr& target, std::int64_t v) {
    if (target.kind == ExprKind::Index) {
      std::int64_t idx = eval(target.args[0]);
      Var& var = lookup(target.name);
      var.cells[index_of(var, idx)] = var.type == Type::Bool ? (v != 0) : w(v);
    } else {
      Var& var = lookup(target.name);
      var.cells[0] = var.type == Type::Bool ? (v != 0) : w(v);
    }
  }

  bool guarded_off(const Stmt& s) const { return s.guard != Guard::None && !relax_.healthy(s.component); }

  void exec(const Stmt& s) {
    tick();
    if (s.kind != StmtKind::Decl && guarded_off(s)) return;
    switch (s.kind) {
      case StmtKind::Decl: {
        Var v{s.type, std::vector<std::int64_t>(s.array_size.value_or(1), 0)};
        bool off = guarded_off(s);
        for (std::size_t i = 0; i < s.init.size() && !off; ++i) {
          std::int64_t x = eval(s.init[i]);
          v.cells[i] = s.type == Type::Bool ? (x != 0) : w(x);
        }
        frames_.back().scopes.back()[s.name] = std::move(v);
        return;
      }
      case StmtKind::Assign:
        assign(s);
        return;
      case StmtKind::Call:
        eval(*s.value);
        return;
      case StmtKind::Input: {
        std::int64_t v = 0;
        if (in_off_ < inputs_.size())
          v = inputs_[in_off_];
        else
          underrun_ = true;
        ++in_off_;
        store(*s.target, v);
        return;
      }
      case StmtKind::Output:
        output_.push_back(eval(*s.value));
        return;
      case StmtKind::Return:
        if (s.value) frames_.back().ret = eval(*s.value);
        frames_.back().returned = true;
        if (frames_.size() == 1) halted_ = true;
        return;
      case StmtKind::Goto:
        halted_ = true;
        return;
      case StmtKind::If:
        if (eval(*s.value) != 0)
          exec_block(s.body);
        else
          exec_block(s.else_body);
        return;
      case StmtKind::Block:
        exec_block(s.body);
        return;
      case StmtKind::While:
      case StmtKind::For: {
        frames_.back().scopes.emplace_back();
        for (const auto& i : s.for_init) exec(i);
        for (int iter = 0;; ++iter) {
          if (stopped()) break;
          bool c = !s.value || eval(*s.value) != 0;
          if (!c || stopped()) break;
          if (iter >= limits_.max_loop_iterations) throw StepLimit{};
          exec_block(s.body);
          if (stopped()) break;
          for (const auto& u : s.for_update) exec(u);
        }
        frames_.back().scopes.pop_back();
        return;
      }
    }
  }

  void assign(const Stmt& s) {
    const Expr& t = *s.target;
    if (s.op == AssignOp::Set) {
      store(t, eval(*s.value));
      return;
    }
    std::int64_t old = lvalue(t);
    std::int64_t rhs = s.value ? eval(*s.value) : 1;
    std::int64_t nv = 0;
    switch (s.op) {
      case AssignOp::Add:
      case AssignOp::Inc: nv = old + rhs; break;
      case AssignOp::Sub:
      case AssignOp::Dec: nv = old - rhs; break;
      case AssignOp::Mul: nv = w(old) * w(rhs); break;
      case AssignOp::Div: nv = total_div(old, rhs, width_); break;
      case AssignOp::Mod: nv = total_mod(old, rhs, width_); break;
      case AssignOp::Set: break;
    }
    store(t, nv);
  }

  std::int64_t eval(const Expr& e) {
    switch (e.kind) {
      case ExprKind::IntLit:
        return w(e.value);
      case ExprKind::BoolLit:
        return e.value;
      case ExprKind::Var:
        return lookup(e.name).cells[0];
      case ExprKind::Index: {
        std::int64_t idx = eval(e.args[0]);
        Var& v = lookup(e.name);
        return v.cells[index_of(v, idx)];
      }
      case ExprKind::Unary: {
        std::int64_t v = eval(e.args[0]);
        switch (e.uop) {
          case UnaryOp::Neg: return w(-v);
          case UnaryOp::Not: return v == 0;
          case UnaryOp::Plus: return v;
        }
        return v;
      }
      case ExprKind::Binary: {
        if (e.bop == BinaryOp::And) return eval(e.args[0]) != 0 && eval(e.args[1]) != 0;
        if (e.bop == BinaryOp::Or) return eval(e.args[0]) != 0 || eval(e.args[1]) != 0;
        std::int64_t a = eval(e.args[0]);
        std::int64_t b = eval(e.args[1]);
        switch (e.bop) {
          case BinaryOp::Add: return w(a + b);
          case BinaryOp::Sub: return w(a - b);
          case BinaryOp::Mul: return w(a * b);
          case BinaryOp::Div: return total_div(a, b, width_);
          case BinaryOp::Mod: return total_mod(a, b, width_);
          case BinaryOp::Lt: return a < b;
          case BinaryOp::Le: return a <= b;
          case BinaryOp::Gt: return a > b;
          case BinaryOp::Ge: return a >= b;
          case BinaryOp::Eq: return a == b;
          case BinaryOp::Ne: return a != b;
          default: break;
        }
        return 0;
      }
      case ExprKind::Call: {
        const FunctionDef* f = prog_.find(e.name);
        std::vector<std::int64_t> args;
        for (const auto& a : e.args) args.push_back(eval(a));
        tick();
        return call(*f, args);
      }
      case ExprKind::Relaxed: {
        bool h = relax_.healthy(e.component);
        if (e.fallback == Fallback::LoopImplies) return !h || eval(e.args[0]) != 0;
        if (h) return eval(e.args[0]);
        switch (e.fallback) {
          case Fallback::ElseVar: return relax_.else_var(e.component);
          case Fallback::NondetBool: return relax_.nondet(e.component) != 0;
          case Fallback::NondetInt: return w(relax_.nondet(e.component));
          case Fallback::LoopImplies: break;
        }
        return 0;
      }
    }
    return 0;
  }
};

}  // namespace detail

/// Runs a program concretely with `width`-bit wraparound arithmetic.
inline ExecResult run_concrete(const Program& program, std::span<const std::int64_t> inputs,
                               const Limits& limits, int width = 16,
                               const RelaxationValues& relax = RelaxationValues{}) {
  if (limits.max_loop_iterations <= 0 || limits.max_total_steps <= 0)
    throw std::invalid_argument("limits must be strictly positive");
  std::vector<std::int64_t> wrapped;
  wrapped.reserve(inputs.size());
  for (auto v : inputs) wrapped.push_back(wrap_to_width(v, width));
  return detail::Interpreter(program, wrapped, limits, width, relax).run();
}

struct Classification {
  std::vector<TestCase> passing;
  std::vector<TestCase> failing;
  /// Failing tests whose concrete run hit a loop or step limit.
  std::vector<std::string> over_limit;
};

inline bool test_passes(const ExecResult& r, const TestCase& t, int width) {
  if (r.status != ExecStatus::Completed) return false;
  if (r.output.size() != t.expected_output.size()) return false;
  for (std::size_t i = 0; i < r.output.size(); ++i)
    if (r.output[i] != wrap_to_width(t.expected_output[i], width)) return false;
  return true;
}

inline Classification classify_tests(const Program& program, const TestSuite& suite, const Limits& limits,
                                     int width = 16) {
  Classification c;
  for (const auto& t : suite.tests) {
    ExecResult r = run_concrete(program, t.inputs, limits, width);
    if (test_passes(r, t, width)) {
      c.passing.push_back(t);
    } else {
      if (r.status == ExecStatus::StepLimitExceeded) c.over_limit.push_back(t.id);
      c.failing.push_back(t);
    }
  }
  return c;
}

}  // namespace faultloc
