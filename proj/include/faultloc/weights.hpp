#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>

#include "transform.hpp"

namespace faultloc {

namespace detail {

class WeightPass {
 public:
  explicit WeightPass(ComponentTable& t) : t_(t) {}

  // Sum of the weights of the components directly under `stmts`. Nested
  // compound statements contribute the weight of their controlling component,
  // which already covers everything beneath it. I/O is excluded.
  std::uint64_t block(const std::vector<Stmt>& stmts) {
    std::uint64_t sum = 0;
    for (const auto& s : stmts) sum += stmt(s);
    return sum;
  }

 private:
  ComponentTable& t_;

  Component& comp(int id) { return t_.components[static_cast<std::size_t>(id)]; }

  std::uint64_t leaf(int id) {
    if (id < 0) return 0;
    Component& c = comp(id);
    if (is_io(c.kind)) return 0;
    c.weight = 1;
    return 1;
  }

  std::uint64_t stmt(const Stmt& s) {
    switch (s.kind) {
      case StmtKind::If: {
        std::uint64_t inner = block(s.body) + block(s.else_body);
        if (s.value && s.value->kind == ExprKind::Relaxed) {
          Component& c = comp(s.value->component);
          c.weight = std::max<std::uint64_t>(1, inner);
          return c.weight;
        }
        return inner;
      }
      case StmtKind::While:
      case StmtKind::For: {
        std::uint64_t init = 0;
        for (const auto& i : s.for_init) init += leaf(i.guard != Guard::None ? i.component : -1);
        std::uint64_t inner = block(s.body);
        for (const auto& u : s.for_update) inner += leaf(u.guard != Guard::None ? u.component : -1);
        if (s.value && s.value->kind == ExprKind::Relaxed) {
          Component& c = comp(s.value->component);
          c.weight = std::max<std::uint64_t>(1, inner);
          return init + c.weight;
        }
        return init + inner;
      }
      case StmtKind::Block:
        return block(s.body);
      default:
        return s.guard != Guard::None ? leaf(s.component) : 0;
    }
  }
};

}  // namespace detail

/// Fills in hierarchical weights: leaves weigh 1, a condition weighs the sum of
/// the components directly beneath it (at least 1), and I/O statements weigh
/// `io_multiplier` times the total weight of all other components.
inline ComponentTable compute_weights(ComponentTable table, const InstrumentedProgram& ip,
                                      std::uint64_t io_multiplier = 100) {
  if (io_multiplier < 1) throw std::invalid_argument("io_multiplier must be >= 1");
  if (ip.unrolled.scopes.empty()) return table;
  detail::WeightPass pass(table);
  for (const auto& f : ip.unrolled.scopes.front().program.functions) pass.block(f.body);
  std::uint64_t logic = 0;
  for (const auto& c : table.components)
    if (!is_io(c.kind)) logic += c.weight;
  for (auto& c : table.components)
    if (is_io(c.kind)) c.weight = io_multiplier * std::max<std::uint64_t>(1, logic);
  for (auto& c : table.components) c.weight = std::max<std::uint64_t>(1, c.weight);
  return table;
}

}  // namespace faultloc
