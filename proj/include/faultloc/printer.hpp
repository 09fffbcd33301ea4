#pragma once

#include <sstream>
#include <string>

#include "ast.hpp"
#include "transform.hpp"

namespace faultloc {

namespace detail {

class Printer {
 public:
  /// `table` is null for plain programs; `scope` is null outside unrolled programs.
  Printer(std::ostringstream& out, const ComponentTable* table, const UnrolledScope* scope)
      : out_(out), table_(table), scope_(scope) {}

  void function(const FunctionDef& f) {
    out_ << to_string(f.return_type) << " " << f.name << "(";
    for (std::size_t i = 0; i < f.params.size(); ++i) {
      if (i) out_ << ", ";
      out_ << to_string(f.params[i].type) << " " << f.params[i].name;
    }
    out_ << ") {\n";
    block(f.body, 1);
    out_ << "}\n";
  }

  void block(const std::vector<Stmt>& stmts, int indent) {
    for (const auto& s : stmts) stmt(s, indent);
  }

  std::string expr(const Expr& e) const {
    switch (e.kind) {
      case ExprKind::IntLit:
        return std::to_string(e.value);
      case ExprKind::BoolLit:
        return e.value ? "true" : "false";
      case ExprKind::Var:
        return e.name;
      case ExprKind::Index:
        return e.name + "[" + expr(e.args[0]) + "]";
      case ExprKind::Unary: {
        const char* op = e.uop == UnaryOp::Neg ? "-" : e.uop == UnaryOp::Not ? "!" : "+";
        return op + sub(e.args[0]);
      }
      case ExprKind::Binary:
        return sub(e.args[0]) + " " + to_string(e.bop) + " " + sub(e.args[1]);
      case ExprKind::Call: {
        std::string s = e.name + "(";
        for (std::size_t i = 0; i < e.args.size(); ++i) {
          if (i) s += ", ";
          s += expr(e.args[i]);
        }
        return s + ")";
      }
      case ExprKind::Relaxed: {
        std::string rv = healthy(e.component);
        std::string inner = "(" + expr(e.args[0]) + ")";
        switch (e.fallback) {
          case Fallback::ElseVar: return rv + " ? " + inner + " : " + else_var(e.component);
          case Fallback::NondetBool: return rv + " ? " + inner + " : nondet_bool()";
          case Fallback::NondetInt: return rv + " ? " + inner + " : nondet_int()";
          case Fallback::LoopImplies: return "!" + rv + " || " + inner;
        }
      }
    }
    return "?";
  }

 private:
  std::ostringstream& out_;
  const ComponentTable* table_;
  const UnrolledScope* scope_;

  std::string sub(const Expr& e) const {
    if (e.kind == ExprKind::Binary || e.kind == ExprKind::Relaxed || e.kind == ExprKind::Unary)
      return "(" + expr(e) + ")";
    return expr(e);
  }

  std::string healthy(int comp) const {
    if (!table_) return "_rv?";
    const Component& c = table_->components[static_cast<std::size_t>(comp)];
    std::string s = c.healthy_var();
    if (c.loop_depth == 1) s += "[_los]";
    for (int d = 1; c.loop_depth > 1 && d <= c.loop_depth; ++d) s += "[_los" + std::to_string(d) + "]";
    return s;
  }

  std::string else_var(int comp) const {
    if (!table_) return "_ev?";
    return table_->components[static_cast<std::size_t>(comp)].else_var();
  }

  static std::string pad(int indent) { return std::string(static_cast<std::size_t>(indent) * 2, ' '); }

  std::string simple(const Stmt& s) const {
    switch (s.kind) {
      case StmtKind::Decl: {
        std::string r = std::string(to_string(s.type)) + " " + s.name;
        if (s.array_size) r += "[" + std::to_string(*s.array_size) + "]";
        if (!s.init.empty()) {
          if (s.array_size) {
            r += " = {";
            for (std::size_t i = 0; i < s.init.size(); ++i) r += (i ? ", " : "") + expr(s.init[i]);
            r += "}";
          } else {
            r += " = " + expr(s.init[0]);
          }
        }
        return r;
      }
      case StmtKind::Assign:
        if (s.op == AssignOp::Inc || s.op == AssignOp::Dec) return expr(*s.target) + to_string(s.op);
        return expr(*s.target) + " " + to_string(s.op) + " " + expr(*s.value);
      case StmtKind::Call:
        return expr(*s.value);
      case StmtKind::Input:
        if (scope_)
          return expr(*s.target) + " = " + UnrolledProgram::input_array(scope_->index) + "[" +
                 UnrolledProgram::input_offset(scope_->index) + "++]";
        return "scanf(\"%d\", &" + expr(*s.target) + ")";
      case StmtKind::Output:
        if (scope_) {
          auto off = UnrolledProgram::output_offset(scope_->index);
          return off + " = printInt(" + UnrolledProgram::output_buffer(scope_->index) + ", " + off + ", " +
                 expr(*s.value) + ")";
        }
        return "printf(\"%d\\n\", " + expr(*s.value) + ")";
      case StmtKind::Return:
        return s.value ? "return " + expr(*s.value) : "return";
      case StmtKind::Goto:
        return "goto " + s.label;
      default:
        return "";
    }
  }

  // Renders a for-header item, relaxed as `_rv ? (item) : 1`.
  std::string item(const Stmt& s) const {
    std::string body = simple(s);
    if (s.guard == Guard::ListItem) return healthy(s.component) + " ? (" + body + ") : 1";
    return body;
  }

  void stmt(const Stmt& s, int indent) {
    std::string p = pad(indent);
    switch (s.kind) {
      case StmtKind::If:
        out_ << p << "if (" << expr(*s.value) << ") {\n";
        block(s.body, indent + 1);
        if (s.has_else) {
          out_ << p << "} else {\n";
          block(s.else_body, indent + 1);
        }
        out_ << p << "}\n";
        return;
      case StmtKind::While:
        out_ << p << "while (" << expr(*s.value) << ") {\n";
        block(s.body, indent + 1);
        out_ << p << "}\n";
        return;
      case StmtKind::For: {
        out_ << p << "for (";
        if (!s.for_init.empty() && s.for_init[0].kind == StmtKind::Decl) {
          // `int i = 0, j = 1` shares one type keyword
          for (std::size_t i = 0; i < s.for_init.size(); ++i) {
            const Stmt& d = s.for_init[i];
            std::string one = i == 0 ? simple(d) : simple(d).substr(std::string(to_string(d.type)).size() + 1);
            out_ << (i ? ", " : "") << (d.guard == Guard::ListItem ? healthy(d.component) + " ? (" + one + ") : 1" : one);
          }
        } else {
          for (std::size_t i = 0; i < s.for_init.size(); ++i) out_ << (i ? ", " : "") << item(s.for_init[i]);
        }
        out_ << "; ";
        if (s.value) out_ << expr(*s.value);
        out_ << "; ";
        for (std::size_t i = 0; i < s.for_update.size(); ++i) out_ << (i ? ", " : "") << item(s.for_update[i]);
        out_ << ") {\n";
        block(s.body, indent + 1);
        out_ << p << "}\n";
        return;
      }
      case StmtKind::Block:
        out_ << p << "{\n";
        block(s.body, indent + 1);
        out_ << p << "}\n";
        return;
      default:
        if (s.guard == Guard::Statement)
          out_ << p << "if (" << healthy(s.component) << ") " << simple(s) << ";\n";
        else
          out_ << p << simple(s) << ";\n";
    }
  }
};

}  // namespace detail

/// Renders a program as MiniC source that parses back to the same tree.
inline std::string print_program(const Program& p) {
  std::ostringstream out;
  detail::Printer pr(out, nullptr, nullptr);
  for (std::size_t i = 0; i < p.functions.size(); ++i) {
    if (i) out << "\n";
    pr.function(p.functions[i]);
  }
  return out.str();
}

inline std::string print_expr(const Expr& e, const ComponentTable* table = nullptr) {
  std::ostringstream out;
  return detail::Printer(out, table, nullptr).expr(e);
}

namespace detail {

inline std::string int_list(const std::vector<std::int64_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s;
}

inline void print_scopes(std::ostringstream& out, const UnrolledProgram& u, const ComponentTable* table) {
  out << "// global vars\n";
  for (const auto& sc : u.scopes) {
    out << "int " << UnrolledProgram::input_array(sc.index) << "[" << sc.test.inputs.size() << "] = {"
        << int_list(sc.test.inputs) << "};\n";
    out << "int " << UnrolledProgram::output_buffer(sc.index) << "[" << sc.test.expected_output.size() + 4
        << "];\n";
    out << "int " << UnrolledProgram::input_offset(sc.index) << " = 0, " << UnrolledProgram::output_offset(sc.index)
        << " = 0;\n";
  }
  // auxiliary functions of every scope
  for (const auto& sc : u.scopes) {
    Printer pr(out, table, &sc);
    for (const auto& f : sc.program.functions)
      if (f.name != "main") {
        out << "\n";
        pr.function(f);
      }
  }
  out << "\nint main() {\n";
  if (table && !table->components.empty()) {
    out << "  // relaxation variables\n";
    for (const auto& c : table->components) {
      out << "  bool " << c.healthy_var();
      if (c.in_loop) out << "[UNWIND]";
      out << ";\n";
    }
  }
  for (const auto& sc : u.scopes) {
    out << "  " << sc.label << ": {\n";
    if (table) {
      std::string evs;
      for (const auto& c : table->components)
        if (c.ev_number >= 0) evs += (evs.empty() ? "" : ", ") + c.else_var();
      if (!evs.empty()) out << "    bool " << evs << ";\n";
    }
    Printer pr(out, table, &sc);
    for (const auto& f : sc.program.functions)
      if (f.name == "main") pr.block(f.body, 2);
    out << "    goto " << sc.next_label << ";\n  }\n";
  }
  out << "  final_step:\n  assert(";
  for (std::size_t i = 0; i < u.scopes.size(); ++i) {
    const auto& sc = u.scopes[i];
    out << (i ? " ||\n         " : "") << "!equals(" << UnrolledProgram::output_buffer(sc.index) << ", "
        << UnrolledProgram::output_offset(sc.index) << ", {" << int_list(sc.test.expected_output) << "})";
  }
  out << ");\n}\n";
}

}  // namespace detail

inline std::string print_unrolled(const UnrolledProgram& u) {
  std::ostringstream out;
  detail::print_scopes(out, u, nullptr);
  return out.str();
}

inline std::string print_instrumented(const InstrumentedProgram& ip) {
  std::ostringstream out;
  detail::print_scopes(out, ip.unrolled, &ip.table);
  return out.str();
}

}  // namespace faultloc
