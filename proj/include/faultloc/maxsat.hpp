#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <vector>

#include "errors.hpp"
#include "sat.hpp"
#include "wcnf.hpp"

namespace faultloc {

struct MaxSatOptions {
  std::int64_t conflict_budget = -1;  // per SAT call; negative = unlimited
  std::uint64_t seed = 0;
};

struct MaxSatStats {
  std::uint64_t sat_calls = 0;
  std::uint64_t cores = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t solutions = 0;

  MaxSatStats& operator+=(const MaxSatStats& o) {
    sat_calls += o.sat_calls;
    cores += o.cores;
    conflicts += o.conflicts;
    solutions += o.solutions;
    return *this;
  }
};

struct OptimumSolution {
  std::uint64_t cost = 0;
  Model model;
  std::vector<int> falsified;  // soft indices, ascending
};

struct McsEntry {
  std::vector<int> falsified;
  std::uint64_t cost = 0;
  bool operator==(const McsEntry&) const = default;
};

using McsList = std::vector<McsEntry>;

inline std::vector<int> falsified_softs(const Wcnf& w, const Model& m) {
  std::vector<int> f;
  for (std::size_t i = 0; i < w.soft.size(); ++i)
    if (!clause_satisfied(w.soft[i].lits, m)) f.push_back(static_cast<int>(i));
  return f;
}

inline std::uint64_t cost_of(const Wcnf& w, const std::vector<int>& falsified) {
  std::uint64_t c = 0;
  for (int i : falsified) c += w.soft[static_cast<std::size_t>(i)].weight;
  return c;
}

/// Checks every hard clause and recomputes the falsified softs from scratch.
inline bool model_satisfies_hard(const Wcnf& w, const Model& m) {
  if (m.size() < static_cast<std::size_t>(w.num_vars) + 1) return false;
  for (const auto& c : w.hard)
    if (!clause_satisfied(c, m)) return false;
  return true;
}

namespace detail {

// Core-guided MaxSAT (OLL) with weight stratification. Each UNSAT core over
// the current assumptions raises the lower bound by its minimum weight and is
// replaced by a totalizer whose outputs become new weighted assumptions.
class Oll {
 public:
  Oll(const Wcnf& w, const MaxSatOptions& opts, MaxSatStats& stats) : w_(w), opts_(opts), stats_(stats), sat_(opts.seed) {
    sat_.set_conflict_budget(opts.conflict_budget);
    sat_.ensure_vars(w.num_vars);
    for (const auto& c : w.hard) sat_.add_clause(c);
    for (const auto& s : w.soft) {
      if (s.lits.empty()) {
        // an empty soft clause is always falsified
        base_cost_ += s.weight;
        continue;
      }
      int sel;
      if (s.lits.size() == 1) {
        sel = s.lits[0];
      } else {
        sel = sat_.new_var();
        std::vector<int> c{-sel};
        c.insert(c.end(), s.lits.begin(), s.lits.end());
        sat_.add_clause(c);
      }
      weight_[sel] += s.weight;
    }
  }

  OptimumSolution run() {
    std::set<std::uint64_t, std::greater<>> levels;
    for (const auto& [l, wt] : weight_) levels.insert(wt);
    auto level = levels.begin();
    std::uint64_t threshold = level == levels.end() ? 0 : *level;
    std::uint64_t lb = base_cost_;
    for (;;) {
      std::vector<int> assumptions;
      for (const auto& [l, wt] : weight_)
        if (wt >= threshold && wt > 0) assumptions.push_back(l);
      ++stats_.sat_calls;
      auto before = sat_.stats().conflicts;
      SatResult r = sat_.solve(assumptions);
      stats_.conflicts += sat_.stats().conflicts - before;
      if (r == SatResult::Sat) {
        // move to the next stratum, including any weights that dropped below the threshold
        std::uint64_t next = 0;
        for (const auto& [l, wt] : weight_)
          if (wt > 0 && wt < threshold) next = std::max(next, wt);
        if (next == 0) {
          OptimumSolution s;
          s.model = sat_.model();
          s.model.resize(static_cast<std::size_t>(w_.num_vars) + 1);
          s.falsified = falsified_softs(w_, s.model);
          s.cost = cost_of(w_, s.falsified);
          if (s.cost != lb) throw std::logic_error("MaxSAT bound mismatch");
          return s;
        }
        threshold = next;
        continue;
      }
      const auto& core = sat_.core();
      if (core.empty()) throw HardUnsatError("hard clauses are unsatisfiable");
      ++stats_.cores;
      std::uint64_t minw = std::numeric_limits<std::uint64_t>::max();
      for (int l : core) minw = std::min(minw, weight_.at(l));
      lb += minw;
      std::vector<int> violated;
      for (int l : core) {
        weight_[l] -= minw;
        violated.push_back(-l);
        auto sum = sums_.find(l);
        if (sum != sums_.end()) extend_sum(sum->second, minw);
      }
      if (violated.size() > 1) {
        int t = build_totalizer(violated);
        // at least one violation is implied; each further one costs minw
        if (totals_[static_cast<std::size_t>(t)].outputs.size() > 1) add_sum(t, 2, minw);
      }
    }
  }

 private:
  struct Totalizer {
    std::vector<int> outputs;  // outputs[k-1] <=> at least k inputs true (upward direction)
  };

  const Wcnf& w_;
  MaxSatOptions opts_;
  MaxSatStats& stats_;
  SatSolver sat_;
  std::map<int, std::uint64_t> weight_;       // assumption literal -> remaining weight
  std::map<int, std::pair<int, int>> sums_;   // assumption literal -> (totalizer, bound)
  std::vector<Totalizer> totals_;
  std::uint64_t base_cost_ = 0;

  std::vector<int> merge(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> r;
    for (std::size_t i = 0; i < a.size() + b.size(); ++i) r.push_back(sat_.new_var());
    for (std::size_t i = 0; i <= a.size(); ++i)
      for (std::size_t j = 0; j <= b.size(); ++j) {
        if (i + j == 0) continue;
        std::vector<int> c;
        if (i > 0) c.push_back(-a[i - 1]);
        if (j > 0) c.push_back(-b[j - 1]);
        c.push_back(r[i + j - 1]);
        sat_.add_clause(c);
      }
    return r;
  }

  std::vector<int> tree(const std::vector<int>& in, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return {in[lo]};
    std::size_t mid = (lo + hi) / 2;
    return merge(tree(in, lo, mid), tree(in, mid, hi));
  }

  int build_totalizer(const std::vector<int>& inputs) {
    totals_.push_back({tree(inputs, 0, inputs.size())});
    return static_cast<int>(totals_.size() - 1);
  }

  void add_sum(int t, int bound, std::uint64_t wt) {
    int out = totals_[static_cast<std::size_t>(t)].outputs[static_cast<std::size_t>(bound - 1)];
    weight_[-out] += wt;
    sums_[-out] = {t, bound};
  }

  void extend_sum(std::pair<int, int> sum, std::uint64_t wt) {
    auto [t, bound] = sum;
    if (static_cast<std::size_t>(bound) < totals_[static_cast<std::size_t>(t)].outputs.size())
      add_sum(t, bound + 1, wt);
  }
};

inline void block(Wcnf& w, const std::vector<int>& falsified) {
  std::vector<int> c;
  for (int i : falsified) {
    const auto& lits = w.soft[static_cast<std::size_t>(i)].lits;
    c.insert(c.end(), lits.begin(), lits.end());
  }
  w.hard.push_back(std::move(c));
}

}  // namespace detail

/// Exact weighted partial MaxSAT optimum.
inline OptimumSolution maxsat_optimum(const Wcnf& w, const MaxSatOptions& opts = {}, MaxSatStats* stats = nullptr) {
  MaxSatStats local;
  OptimumSolution s = detail::Oll(w, opts, local).run();
  ++local.solutions;
  if (stats) *stats += local;
  return s;
}

/// Every distinct falsified set attaining `optimum`, in discovery order.
inline std::vector<OptimumSolution> enumerate_optimal_solutions(const Wcnf& w, std::uint64_t optimum,
                                                                const MaxSatOptions& opts = {},
                                                                MaxSatStats* stats = nullptr) {
  std::vector<OptimumSolution> out;
  Wcnf cur = w;
  for (;;) {
    OptimumSolution s;
    try {
      s = maxsat_optimum(cur, opts, stats);
    } catch (const HardUnsatError&) {
      break;
    }
    if (s.cost > optimum) break;
    s.model.resize(static_cast<std::size_t>(w.num_vars) + 1);
    out.push_back(s);
    if (s.falsified.empty()) break;
    detail::block(cur, s.falsified);
  }
  return out;
}

/// `hard ∧ (soft \ F)` is satisfiable and adding back any single member of F is not.
inline bool is_mcs(const Wcnf& w, const std::vector<int>& falsified, const MaxSatOptions& opts = {}) {
  std::vector<char> in_f(w.soft.size(), 0);
  for (int i : falsified) in_f[static_cast<std::size_t>(i)] = 1;
  auto check = [&](int extra) {
    SatSolver s(opts.seed);
    s.set_conflict_budget(opts.conflict_budget);
    s.ensure_vars(w.num_vars);
    for (const auto& c : w.hard) s.add_clause(c);
    for (std::size_t i = 0; i < w.soft.size(); ++i)
      if (!in_f[i] || static_cast<int>(i) == extra) s.add_clause(w.soft[i].lits);
    return s.solve() == SatResult::Sat;
  };
  if (!check(-1)) return false;
  for (int i : falsified)
    if (check(i)) return false;
  return true;
}

/// MCSes in non-decreasing cost order, each verified before emission.
/// A `limit` of 0 means no limit.
inline McsList enumerate_mcses(const Wcnf& w, std::size_t limit = 0, const MaxSatOptions& opts = {},
                               MaxSatStats* stats = nullptr) {
  McsList out;
  Wcnf cur = w;
  for (;;) {
    if (limit && out.size() >= limit) break;
    OptimumSolution s;
    try {
      s = maxsat_optimum(cur, opts, stats);
    } catch (const HardUnsatError&) {
      break;
    }
    if (s.falsified.empty()) break;
    if (is_mcs(w, s.falsified, opts)) out.push_back({s.falsified, s.cost});
    detail::block(cur, s.falsified);
  }
  return out;
}

}  // namespace faultloc
