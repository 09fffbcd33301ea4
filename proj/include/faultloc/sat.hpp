#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "bitblast.hpp"
#include "errors.hpp"

namespace faultloc {

enum class SatResult { Sat, Unsat };

struct SatStats {
  std::uint64_t solves = 0;
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t restarts = 0;
  std::uint64_t learnt = 0;
};

/// Incremental CDCL solver over DIMACS literals with assumption support.
/// Two watched literals, VSIDS with phase saving, 1-UIP learning with
/// clause minimization, Luby restarts, activity-based clause deletion.
class SatSolver {
 public:
  explicit SatSolver(std::uint64_t seed = 0) : rng_(seed) {}

  int num_vars() const { return static_cast<int>(assigns_.size()); }

  int new_var() {
    assigns_.push_back(kUndef);
    level_.push_back(0);
    reason_.push_back(kNoReason);
    activity_.push_back(0.0);
    polarity_.push_back(1);  // prefer false
    seen_.push_back(0);
    heap_index_.push_back(-1);
    watches_.emplace_back();
    watches_.emplace_back();
    heap_insert(num_vars() - 1);
    return num_vars();
  }

  void ensure_vars(int n) {
    while (num_vars() < n) new_var();
  }

  /// Adds a clause of DIMACS literals. Returns false once the formula is
  /// known to be unsatisfiable at the top level.
  bool add_clause(std::span<const int> dimacs) {
    if (!ok_) return false;
    backtrack(0);
    std::vector<Lit> c;
    for (int d : dimacs) {
      if (d == 0) throw std::invalid_argument("literal 0 in clause");
      ensure_vars(std::abs(d));
      c.push_back(to_lit(d));
    }
    std::sort(c.begin(), c.end());
    std::vector<Lit> out;
    for (std::size_t i = 0; i < c.size(); ++i) {
      Lit l = c[i];
      if (value(l) == kTrue || (i + 1 < c.size() && c[i + 1] == (l ^ 1))) return true;
      if (value(l) == kFalse || (!out.empty() && out.back() == l)) continue;
      out.push_back(l);
    }
    if (out.empty()) return ok_ = false;
    if (out.size() == 1) {
      enqueue(out[0], kNoReason);
      if (propagate() != kNoReason) ok_ = false;
      return ok_;
    }
    attach(new_clause(std::move(out), false));
    return true;
  }

  bool add_clause(std::initializer_list<int> lits) { return add_clause(std::span<const int>(lits.begin(), lits.size())); }

  void add_formula(const CnfFormula& f) {
    ensure_vars(f.num_vars);
    for (const auto& c : f.clauses) add_clause(c);
  }

  /// Conflict budget per solve call; negative means unlimited.
  void set_conflict_budget(std::int64_t budget) { budget_ = budget; }

  SatResult solve(std::span<const int> assumptions = {}) {
    ++stats_.solves;
    model_.clear();
    core_.clear();
    if (!ok_) return SatResult::Unsat;
    assumptions_.clear();
    for (int d : assumptions) {
      ensure_vars(std::abs(d));
      assumptions_.push_back(to_lit(d));
    }
    std::uint64_t start_conflicts = stats_.conflicts;
    max_learnts_ = std::max<double>(max_learnts_, static_cast<double>(clauses_.size()) / 3.0 + 100);
    for (int round = 0;; ++round) {
      double limit = luby(2.0, round) * 100;
      Status s = search(static_cast<std::uint64_t>(limit), start_conflicts);
      if (s == Status::Sat) {
        model_.assign(static_cast<std::size_t>(num_vars()) + 1, false);
        for (int v = 0; v < num_vars(); ++v) model_[static_cast<std::size_t>(v) + 1] = assigns_[static_cast<std::size_t>(v)] == kTrue;
        backtrack(0);
        return SatResult::Sat;
      }
      if (s == Status::Unsat) {
        backtrack(0);
        return SatResult::Unsat;
      }
      if (s == Status::Budget) {
        backtrack(0);
        throw ResourceError("SAT conflict budget exhausted");
      }
      ++stats_.restarts;
    }
  }

  SatResult solve(std::initializer_list<int> a) { return solve(std::span<const int>(a.begin(), a.size())); }

  /// Model of the last satisfiable call, indexed by variable.
  const Model& model() const { return model_; }
  /// Subset of the assumptions (DIMACS literals) responsible for the last UNSAT answer.
  const std::vector<int>& core() const { return core_; }
  const SatStats& stats() const { return stats_; }
  bool okay() const { return ok_; }

 private:
  using Lit = std::uint32_t;
  using CRef = std::uint32_t;
  static constexpr CRef kNoReason = 0xffffffffu;
  static constexpr std::int8_t kTrue = 1, kFalse = -1, kUndef = 0;

  enum class Status { Sat, Unsat, Restart, Budget };

  struct Clause {
    std::vector<Lit> lits;
    bool learnt = false;
    bool removed = false;
    double activity = 0;
  };
  struct Watcher {
    CRef cref;
    Lit blocker;
  };

  bool ok_ = true;
  std::vector<Clause> clauses_;
  std::vector<CRef> learnts_;
  std::vector<std::vector<Watcher>> watches_;
  std::vector<std::int8_t> assigns_;
  std::vector<int> level_;
  std::vector<CRef> reason_;
  std::vector<double> activity_;
  std::vector<std::int8_t> polarity_;
  std::vector<std::int8_t> seen_;
  std::vector<Lit> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;
  std::vector<int> heap_;
  std::vector<int> heap_index_;
  double var_inc_ = 1.0;
  double cla_inc_ = 1.0;
  double max_learnts_ = 0;
  std::int64_t budget_ = -1;
  std::vector<Lit> assumptions_;
  Model model_;
  std::vector<int> core_;
  SatStats stats_;
  std::mt19937_64 rng_;

  static Lit to_lit(int d) { return static_cast<Lit>(2 * (std::abs(d) - 1) + (d < 0 ? 1 : 0)); }
  static int to_dimacs(Lit l) { return (l & 1) ? -static_cast<int>(l / 2 + 1) : static_cast<int>(l / 2 + 1); }
  static int var(Lit l) { return static_cast<int>(l >> 1); }

  std::int8_t value(Lit l) const {
    std::int8_t a = assigns_[static_cast<std::size_t>(var(l))];
    return (l & 1) ? static_cast<std::int8_t>(-a) : a;
  }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  CRef new_clause(std::vector<Lit> lits, bool learnt) {
    clauses_.push_back(Clause{std::move(lits), learnt, false, 0});
    return static_cast<CRef>(clauses_.size() - 1);
  }

  void attach(CRef cr) {
    const auto& c = clauses_[cr].lits;
    watches_[c[0] ^ 1].push_back({cr, c[1]});
    watches_[c[1] ^ 1].push_back({cr, c[0]});
  }

  void enqueue(Lit l, CRef reason) {
    auto v = static_cast<std::size_t>(var(l));
    assigns_[v] = (l & 1) ? kFalse : kTrue;
    level_[v] = decision_level();
    reason_[v] = reason;
    trail_.push_back(l);
  }

  CRef propagate() {
    CRef confl = kNoReason;
    while (qhead_ < trail_.size()) {
      Lit p = trail_[qhead_++];
      ++stats_.propagations;
      auto& ws = watches_[p];
      std::size_t i = 0, j = 0;
      Lit false_lit = p ^ 1;
      while (i < ws.size()) {
        Watcher w = ws[i];
        if (clauses_[w.cref].removed) {
          ++i;
          continue;
        }
        if (value(w.blocker) == kTrue) {
          ws[j++] = ws[i++];
          continue;
        }
        auto& c = clauses_[w.cref].lits;
        if (c[0] == false_lit) std::swap(c[0], c[1]);
        ++i;
        Lit first = c[0];
        if (first != w.blocker && value(first) == kTrue) {
          ws[j++] = {w.cref, first};
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k) {
          if (value(c[k]) != kFalse) {
            std::swap(c[1], c[k]);
            watches_[c[1] ^ 1].push_back({w.cref, first});
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = {w.cref, first};
        if (value(first) == kFalse) {
          confl = w.cref;
          qhead_ = trail_.size();
          while (i < ws.size()) ws[j++] = ws[i++];
        } else {
          enqueue(first, w.cref);
        }
      }
      ws.resize(j);
      if (confl != kNoReason) break;
    }
    return confl;
  }

  void backtrack(int lvl) {
    if (decision_level() <= lvl) return;
    for (std::size_t i = trail_.size(); i-- > trail_lim_[static_cast<std::size_t>(lvl)];) {
      auto v = static_cast<std::size_t>(var(trail_[i]));
      polarity_[v] = static_cast<std::int8_t>(trail_[i] & 1);
      assigns_[v] = kUndef;
      reason_[v] = kNoReason;
      if (heap_index_[v] < 0) heap_insert(static_cast<int>(v));
    }
    trail_.resize(trail_lim_[static_cast<std::size_t>(lvl)]);
    trail_lim_.resize(static_cast<std::size_t>(lvl));
    qhead_ = trail_.size();
  }

  // --- VSIDS heap -----------------------------------------------------------
  bool heap_less(int a, int b) const {
    return activity_[static_cast<std::size_t>(a)] > activity_[static_cast<std::size_t>(b)];
  }
  void heap_up(std::size_t i) {
    int x = heap_[i];
    while (i > 0) {
      std::size_t parent = (i - 1) / 2;
      if (!heap_less(x, heap_[parent])) break;
      heap_[i] = heap_[parent];
      heap_index_[static_cast<std::size_t>(heap_[i])] = static_cast<int>(i);
      i = parent;
    }
    heap_[i] = x;
    heap_index_[static_cast<std::size_t>(x)] = static_cast<int>(i);
  }
  void heap_down(std::size_t i) {
    int x = heap_[i];
    for (;;) {
      std::size_t l = 2 * i + 1;
      if (l >= heap_.size()) break;
      std::size_t c = l + 1 < heap_.size() && heap_less(heap_[l + 1], heap_[l]) ? l + 1 : l;
      if (!heap_less(heap_[c], x)) break;
      heap_[i] = heap_[c];
      heap_index_[static_cast<std::size_t>(heap_[i])] = static_cast<int>(i);
      i = c;
    }
    heap_[i] = x;
    heap_index_[static_cast<std::size_t>(x)] = static_cast<int>(i);
  }
  void heap_insert(int v) {
    heap_.push_back(v);
    heap_up(heap_.size() - 1);
  }
  int heap_pop() {
    int top = heap_[0];
    heap_index_[static_cast<std::size_t>(top)] = -1;
    int last = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
      heap_[0] = last;
      heap_down(0);
    }
    return top;
  }

  void bump_var(int v) {
    auto i = static_cast<std::size_t>(v);
    if ((activity_[i] += var_inc_) > 1e100) {
      for (auto& a : activity_) a *= 1e-100;
      var_inc_ *= 1e-100;
    }
    if (heap_index_[i] >= 0) heap_up(static_cast<std::size_t>(heap_index_[i]));
  }

  void bump_clause(Clause& c) {
    if ((c.activity += cla_inc_) > 1e20) {
      for (CRef r : learnts_) clauses_[r].activity *= 1e-20;
      cla_inc_ *= 1e-20;
    }
  }

  // --- conflict analysis ------------------------------------------------------
  void analyze(CRef confl, std::vector<Lit>& learnt, int& bt_level) {
    learnt.assign(1, 0);
    int path = 0;
    Lit p = 0;
    bool have_p = false;
    std::size_t index = trail_.size();
    std::vector<int> touched;
    do {
      Clause& c = clauses_[confl];
      if (c.learnt) bump_clause(c);
      for (std::size_t k = have_p ? 1 : 0; k < c.lits.size(); ++k) {
        Lit q = c.lits[k];
        auto v = static_cast<std::size_t>(var(q));
        if (!seen_[v] && level_[v] > 0) {
          bump_var(var(q));
          seen_[v] = 1;
          touched.push_back(var(q));
          if (level_[v] >= decision_level())
            ++path;
          else
            learnt.push_back(q);
        }
      }
      while (!seen_[static_cast<std::size_t>(var(trail_[--index]))]) {
      }
      p = trail_[index];
      have_p = true;
      confl = reason_[static_cast<std::size_t>(var(p))];
      seen_[static_cast<std::size_t>(var(p))] = 0;
      --path;
      // the reason clause keeps its implied literal first
      if (confl != kNoReason && clauses_[confl].lits[0] != p) {
        auto& lits = clauses_[confl].lits;
        auto it = std::find(lits.begin(), lits.end(), p);
        std::swap(*lits.begin(), *it);
      }
    } while (path > 0);
    learnt[0] = p ^ 1;

    // drop literals implied by the rest of the clause
    std::size_t j = 1;
    for (std::size_t i = 1; i < learnt.size(); ++i) {
      CRef r = reason_[static_cast<std::size_t>(var(learnt[i]))];
      if (r == kNoReason || !redundant(learnt[i])) learnt[j++] = learnt[i];
    }
    learnt.resize(j);

    bt_level = 0;
    if (learnt.size() > 1) {
      std::size_t best = 1;
      for (std::size_t i = 2; i < learnt.size(); ++i)
        if (level_[static_cast<std::size_t>(var(learnt[i]))] > level_[static_cast<std::size_t>(var(learnt[best]))])
          best = i;
      std::swap(learnt[1], learnt[best]);
      bt_level = level_[static_cast<std::size_t>(var(learnt[1]))];
    }
    for (int v : touched) seen_[static_cast<std::size_t>(v)] = 0;
  }

  // Local minimization: every other literal of the reason is already in the clause.
  bool redundant(Lit l) const {
    const auto& c = clauses_[reason_[static_cast<std::size_t>(var(l))]].lits;
    for (std::size_t k = 1; k < c.size(); ++k) {
      auto v = static_cast<std::size_t>(var(c[k]));
      if (!seen_[v] && level_[v] > 0) return false;
    }
    return true;
  }

  // Collects the assumptions implying the negation of `p`.
  void analyze_final(Lit p) {
    core_.clear();
    core_.push_back(to_dimacs(p ^ 1));
    if (decision_level() == 0) return;
    seen_[static_cast<std::size_t>(var(p))] = 1;
    for (std::size_t i = trail_.size(); i-- > trail_lim_[0];) {
      auto v = static_cast<std::size_t>(var(trail_[i]));
      if (!seen_[v]) continue;
      if (reason_[v] == kNoReason) {
        if (level_[v] > 0) core_.push_back(to_dimacs(trail_[i]));
      } else {
        const auto& c = clauses_[reason_[v]].lits;
        for (std::size_t k = 1; k < c.size(); ++k)
          if (level_[static_cast<std::size_t>(var(c[k]))] > 0) seen_[static_cast<std::size_t>(var(c[k]))] = 1;
      }
      seen_[v] = 0;
    }
    seen_[static_cast<std::size_t>(var(p))] = 0;
    std::sort(core_.begin(), core_.end());
    core_.erase(std::unique(core_.begin(), core_.end()), core_.end());
  }

  void reduce_db() {
    std::vector<CRef> cand;
    for (CRef r : learnts_)
      if (!clauses_[r].removed) cand.push_back(r);
    std::sort(cand.begin(), cand.end(),
              [&](CRef a, CRef b) { return clauses_[a].activity < clauses_[b].activity; });
    std::size_t drop = cand.size() / 2;
    std::vector<CRef> keep;
    for (std::size_t i = 0; i < cand.size(); ++i) {
      Clause& c = clauses_[cand[i]];
      bool locked = value(c.lits[0]) == kTrue && reason_[static_cast<std::size_t>(var(c.lits[0]))] == cand[i];
      if (i < drop && c.lits.size() > 2 && !locked) {
        c.removed = true;
        c.lits.shrink_to_fit();
      } else {
        keep.push_back(cand[i]);
      }
    }
    learnts_ = std::move(keep);
  }

  static double luby(double y, int x) {
    int size = 1, seq = 0;
    while (size < x + 1) {
      ++seq;
      size = 2 * size + 1;
    }
    while (size - 1 != x) {
      size = (size - 1) >> 1;
      --seq;
      x = x % size;
    }
    double r = 1;
    for (int i = 0; i < seq; ++i) r *= y;
    return r;
  }

  int pick_branch() {
    if (!heap_.empty() && std::uniform_int_distribution<int>(0, 99)(rng_) == 0) {
      int v = heap_[std::uniform_int_distribution<std::size_t>(0, heap_.size() - 1)(rng_)];
      if (assigns_[static_cast<std::size_t>(v)] == kUndef) return v;
    }
    while (!heap_.empty()) {
      int v = heap_pop();
      if (assigns_[static_cast<std::size_t>(v)] == kUndef) return v;
    }
    return -1;
  }

  Status search(std::uint64_t restart_after, std::uint64_t start_conflicts) {
    std::uint64_t local = 0;
    std::vector<Lit> learnt;
    for (;;) {
      CRef confl = propagate();
      if (confl != kNoReason) {
        ++stats_.conflicts;
        ++local;
        if (decision_level() == 0) {
          ok_ = false;
          return Status::Unsat;
        }
        int bt = 0;
        analyze(confl, learnt, bt);
        backtrack(bt);
        if (learnt.size() == 1) {
          enqueue(learnt[0], kNoReason);
        } else {
          CRef cr = new_clause(learnt, true);
          learnts_.push_back(cr);
          attach(cr);
          bump_clause(clauses_[cr]);
          enqueue(learnt[0], cr);
          ++stats_.learnt;
        }
        var_inc_ /= 0.95;
        cla_inc_ /= 0.999;
        if (budget_ >= 0 && stats_.conflicts - start_conflicts > static_cast<std::uint64_t>(budget_))
          return Status::Budget;
        continue;
      }
      if (local >= restart_after) {
        backtrack(0);
        return Status::Restart;
      }
      if (static_cast<double>(learnts_.size()) - static_cast<double>(trail_.size()) >= max_learnts_) {
        reduce_db();
        max_learnts_ *= 1.1;
      }
      Lit next = 0;
      bool have = false;
      while (static_cast<std::size_t>(decision_level()) < assumptions_.size()) {
        Lit a = assumptions_[static_cast<std::size_t>(decision_level())];
        if (value(a) == kTrue) {
          trail_lim_.push_back(trail_.size());
        } else if (value(a) == kFalse) {
          analyze_final(a ^ 1);
          return Status::Unsat;
        } else {
          next = a;
          have = true;
          break;
        }
      }
      if (!have) {
        int v = pick_branch();
        if (v < 0) return Status::Sat;
        ++stats_.decisions;
        next = static_cast<Lit>(2 * v) + static_cast<Lit>(polarity_[static_cast<std::size_t>(v)]);
      }
      trail_lim_.push_back(trail_.size());
      enqueue(next, kNoReason);
    }
  }
};

struct SatOutcome {
  bool sat = false;
  Model model;            // when sat
  std::vector<int> core;  // when unsat: subset of the assumptions
};

/// One-shot satisfiability check of a CNF under assumptions.
inline SatOutcome sat_solve(const CnfFormula& cnf, std::span<const int> assumptions = {},
                            std::int64_t conflict_budget = -1, std::uint64_t seed = 0) {
  SatSolver s(seed);
  s.set_conflict_budget(conflict_budget);
  s.add_formula(cnf);
  SatOutcome out;
  out.sat = s.solve(assumptions) == SatResult::Sat;
  if (out.sat)
    out.model = s.model();
  else
    out.core = s.core();
  return out;
}

}  // namespace faultloc
