#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "ssa.hpp"

namespace faultloc {

/// DIMACS-style CNF: variables are 1..num_vars, literals are +v / -v.
struct CnfFormula {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;
  /// Component id -> CNF variable of its healthy variable.
  std::vector<int> healthy_vars;
  /// Term id -> literals of its bits (LSB first); one literal for Boolean
  /// terms, empty for terms that were not needed.
  std::vector<std::vector<int>> term_bits;
  int width = 16;
};

/// Truth values indexed by CNF variable (index 0 unused).
using Model = std::vector<bool>;

inline bool lit_value(const Model& m, int lit) {
  bool v = m[static_cast<std::size_t>(lit > 0 ? lit : -lit)];
  return lit > 0 ? v : !v;
}

/// Reads a term's value from a model (signed for Int terms, 0/1 for Bool terms).
inline std::int64_t decode_term(const CnfFormula& f, const Model& m, TermId t) {
  const auto& bits = f.term_bits.at(static_cast<std::size_t>(t));
  if (bits.empty()) throw std::logic_error("term was not bit-blasted");
  if (bits.size() == 1) return lit_value(m, bits[0]) ? 1 : 0;
  std::uint64_t u = 0;
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (lit_value(m, bits[i])) u |= std::uint64_t{1} << i;
  return wrap_to_width(static_cast<std::int64_t>(u), static_cast<int>(bits.size()));
}

namespace detail {

class BitBlaster {
 public:
  BitBlaster(const SsaProgram& p, CnfFormula& f) : p_(p), T(p.terms), f_(f) {
    f_.width = T.width();
    true_ = fresh();
    f_.clauses.push_back({true_});
  }

  void run() {
    std::vector<TermId> roots;
    roots.push_back(p_.goal);
    for (TermId a : p_.assumptions) roots.push_back(a);
    for (const auto& e : p_.iteration_entries) roots.push_back(e.term);
    for (TermId h : p_.healthy) roots.push_back(h);
    for (const auto& s : p_.scopes) {
      roots.push_back(s.output_len);
      for (TermId o : s.output) roots.push_back(o);
    }

    std::vector<char> needed(T.size(), 0);
    for (TermId r : roots) needed[static_cast<std::size_t>(r)] = 1;
    for (std::size_t i = T.size(); i-- > 0;) {
      if (!needed[i]) continue;
      const Term& t = T.all()[i];
      for (TermId c : {t.a, t.b, t.c})
        if (c >= 0) needed[static_cast<std::size_t>(c)] = 1;
    }
    f_.term_bits.assign(T.size(), {});
    for (std::size_t i = 0; i < T.size(); ++i)
      if (needed[i]) f_.term_bits[i] = blast(T.all()[i]);

    unit(lit(p_.goal));
    for (TermId a : p_.assumptions) unit(lit(a));
    for (TermId h : p_.healthy) f_.healthy_vars.push_back(lit(h));
    for (const auto& e : p_.iteration_entries)
      clause({-f_.healthy_vars[static_cast<std::size_t>(e.component)], lit(e.term)});
  }

 private:
  using Bits = std::vector<int>;

  const SsaProgram& p_;
  const TermStore& T;
  CnfFormula& f_;
  int true_ = 0;
  std::map<std::pair<int, int>, int> and_cache_;
  std::map<std::pair<int, int>, int> xor_cache_;

  int fresh() { return ++f_.num_vars; }
  int lit(TermId t) const { return f_.term_bits[static_cast<std::size_t>(t)][0]; }
  const Bits& bits(TermId t) const { return f_.term_bits[static_cast<std::size_t>(t)]; }
  int fls() const { return -true_; }
  bool is_true(int l) const { return l == true_; }
  bool is_false(int l) const { return l == -true_; }

  void unit(int l) { f_.clauses.push_back({l}); }
  void clause(std::vector<int> c) {
    for (int l : c)
      if (is_true(l)) return;
    std::vector<int> out;
    for (int l : c)
      if (!is_false(l)) out.push_back(l);
    if (out.empty()) out.push_back(fls());
    f_.clauses.push_back(std::move(out));
  }

  int mk_and(int a, int b) {
    if (is_false(a) || is_false(b)) return fls();
    if (is_true(a)) return b;
    if (is_true(b)) return a;
    if (a == b) return a;
    if (a == -b) return fls();
    if (a > b) std::swap(a, b);
    auto key = std::make_pair(a, b);
    auto it = and_cache_.find(key);
    if (it != and_cache_.end()) return it->second;
    int g = fresh();
    f_.clauses.push_back({-g, a});
    f_.clauses.push_back({-g, b});
    f_.clauses.push_back({g, -a, -b});
    and_cache_.emplace(key, g);
    return g;
  }

  int mk_or(int a, int b) { return -mk_and(-a, -b); }

  int mk_xor(int a, int b) {
    if (is_false(a)) return b;
    if (is_false(b)) return a;
    if (is_true(a)) return -b;
    if (is_true(b)) return -a;
    if (a == b) return fls();
    if (a == -b) return true_;
    bool neg = false;
    if (a < 0) a = -a, neg = !neg;
    if (b < 0) b = -b, neg = !neg;
    if (a > b) std::swap(a, b);
    auto key = std::make_pair(a, b);
    int g;
    auto it = xor_cache_.find(key);
    if (it != xor_cache_.end()) {
      g = it->second;
    } else {
      g = fresh();
      f_.clauses.push_back({-g, a, b});
      f_.clauses.push_back({-g, -a, -b});
      f_.clauses.push_back({g, -a, b});
      f_.clauses.push_back({g, a, -b});
      xor_cache_.emplace(key, g);
    }
    return neg ? -g : g;
  }

  int mk_mux(int c, int t, int e) {
    if (is_true(c)) return t;
    if (is_false(c)) return e;
    if (t == e) return t;
    if (is_true(t)) return mk_or(c, e);
    if (is_false(t)) return mk_and(-c, e);
    if (is_true(e)) return mk_or(-c, t);
    if (is_false(e)) return mk_and(c, t);
    int g = fresh();
    f_.clauses.push_back({-c, -t, g});
    f_.clauses.push_back({-c, t, -g});
    f_.clauses.push_back({c, -e, g});
    f_.clauses.push_back({c, e, -g});
    // redundant but helps propagation
    f_.clauses.push_back({-t, -e, g});
    f_.clauses.push_back({t, e, -g});
    return g;
  }

  int width() const { return T.width(); }

  Bits constant(std::int64_t v) const {
    Bits b(static_cast<std::size_t>(width()));
    auto u = static_cast<std::uint64_t>(v);
    for (int i = 0; i < width(); ++i) b[static_cast<std::size_t>(i)] = (u >> i) & 1 ? true_ : fls();
    return b;
  }

  Bits add(const Bits& a, const Bits& b, int carry) {
    Bits r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      int x = mk_xor(a[i], b[i]);
      r[i] = mk_xor(x, carry);
      carry = mk_or(mk_and(a[i], b[i]), mk_and(carry, x));
    }
    return r;
  }

  Bits invert(const Bits& a) {
    Bits r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return r;
  }

  Bits neg(const Bits& a) { return add(invert(a), constant(0), true_); }

  Bits mux(int c, const Bits& t, const Bits& e) {
    Bits r(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) r[i] = mk_mux(c, t[i], e[i]);
    return r;
  }

  Bits mul(const Bits& a, const Bits& b) {
    Bits acc = constant(0);
    std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (is_false(b[i])) continue;
      Bits partial(n, fls());
      for (std::size_t j = 0; i + j < n; ++j) partial[i + j] = mk_and(a[j], b[i]);
      acc = add(acc, partial, fls());
    }
    return acc;
  }

  // Unsigned a < b.
  int ult(const Bits& a, const Bits& b) {
    int lt = fls();
    for (std::size_t i = 0; i < a.size(); ++i) {
      int eq = -mk_xor(a[i], b[i]);
      lt = mk_or(mk_and(-a[i], b[i]), mk_and(eq, lt));
    }
    return lt;
  }

  int slt(Bits a, Bits b) {
    a.back() = -a.back();
    b.back() = -b.back();
    return ult(a, b);
  }

  int eq(const Bits& a, const Bits& b) {
    int r = true_;
    for (std::size_t i = 0; i < a.size(); ++i) r = mk_and(r, -mk_xor(a[i], b[i]));
    return r;
  }

  int is_zero(const Bits& a) {
    int r = true_;
    for (int l : a) r = mk_and(r, -l);
    return r;
  }

  // Restoring division on magnitudes; signs applied afterwards (C truncation).
  std::pair<Bits, Bits> divmod(const Bits& a, const Bits& b) {
    std::size_t n = a.size();
    int sa = a.back(), sb = b.back();
    Bits ua = mux(sa, neg(a), a);
    Bits ub = mux(sb, neg(b), b);
    // Work with n+1 bits so the remainder shift cannot overflow.
    Bits divisor = ub;
    divisor.push_back(fls());
    Bits rem(n + 1, fls());
    Bits q(n, fls());
    for (std::size_t k = n; k-- > 0;) {
      Bits shifted(n + 1);
      shifted[0] = ua[k];
      for (std::size_t i = 1; i <= n; ++i) shifted[i] = rem[i - 1];
      int ge = -ult(shifted, divisor);
      q[k] = ge;
      Bits diff = add(shifted, invert(divisor), true_);
      rem = mux(ge, diff, shifted);
    }
    rem.pop_back();
    Bits sq = mux(mk_xor(sa, sb), neg(q), q);
    Bits sr = mux(sa, neg(rem), rem);
    int z = is_zero(b);
    return {mux(z, constant(0), sq), mux(z, constant(0), sr)};
  }

  Bits blast(const Term& t) {
    switch (t.op) {
      case Op::BoolConst: return {t.value ? true_ : fls()};
      case Op::IntConst: return constant(t.value);
      case Op::FreeBool: return {fresh()};
      case Op::FreeInt: {
        Bits b(static_cast<std::size_t>(width()));
        for (auto& l : b) l = fresh();
        return b;
      }
      case Op::Not: return {-lit(t.a)};
      case Op::And: return {mk_and(lit(t.a), lit(t.b))};
      case Op::Or: return {mk_or(lit(t.a), lit(t.b))};
      case Op::Ite:
        if (t.sort == Sort::Bool) return {mk_mux(lit(t.a), lit(t.b), lit(t.c))};
        return mux(lit(t.a), bits(t.b), bits(t.c));
      case Op::Add: return add(bits(t.a), bits(t.b), fls());
      case Op::Sub: return add(bits(t.a), invert(bits(t.b)), true_);
      case Op::Mul: return mul(bits(t.a), bits(t.b));
      case Op::Div: return divmod(bits(t.a), bits(t.b)).first;
      case Op::Mod: return divmod(bits(t.a), bits(t.b)).second;
      case Op::Neg: return neg(bits(t.a));
      case Op::Eq:
        if (T[t.a].sort == Sort::Bool) return {-mk_xor(lit(t.a), lit(t.b))};
        return {eq(bits(t.a), bits(t.b))};
      case Op::Lt: return {slt(bits(t.a), bits(t.b))};
      case Op::Le: return {-slt(bits(t.b), bits(t.a))};
      case Op::BoolToInt: {
        Bits b(static_cast<std::size_t>(width()), fls());
        b[0] = lit(t.a);
        return b;
      }
    }
    throw std::logic_error("unhandled term");
  }
};

}  // namespace detail

/// Tseitin-encodes the trace formula: the goal, every assumption, and the
/// implication from each healthy variable to its per-iteration entries.
inline CnfFormula bitblast(const SsaProgram& p) {
  CnfFormula f;
  detail::BitBlaster(p, f).run();
  return f;
}

}  // namespace faultloc
