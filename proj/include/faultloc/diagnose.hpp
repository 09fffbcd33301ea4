#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "bitblast.hpp"
#include "errors.hpp"
#include "exec.hpp"
#include "maxsat.hpp"
#include "sat.hpp"
#include "ssa.hpp"
#include "test_suite.hpp"
#include "transform.hpp"
#include "wcnf.hpp"
#include "weights.hpp"

namespace faultloc {

struct Config {
  std::string program_path;
  std::string tests_dir;
  std::string strategy = "cfaults";  // cfaults | bugassist | sniper | all
  bool refine = false;
  int unwind = 8;
  int width = 16;
  std::uint64_t io_multiplier = 100;
  std::size_t mcs_limit = 0;  // 0 = unlimited
  std::uint64_t product_cap = 1'000'000;
  std::int64_t conflict_budget = -1;  // negative = unlimited
  std::uint64_t seed = 0;
  std::string output_path;
  bool emit_wcnf = false;
  bool unwind_assert = false;
  int output_slack = 4;
  std::size_t bf_cap = 16;
  long max_total_steps = 1'000'000;

  Limits limits() const { return Limits{unwind, max_total_steps}; }
  MaxSatOptions maxsat() const { return MaxSatOptions{conflict_budget, seed}; }
};

/// Everything produced between the instrumented program and the MaxSAT instance.
struct Encoding {
  InstrumentedProgram ip;
  SsaProgram ssa;
  CnfFormula cnf;
  Wcnf wcnf;

  const ComponentTable& table() const { return ip.table; }
};

namespace detail {

// Re-raises solver failures with the pipeline stage that produced them.
template <typename F>
auto in_stage(const char* stage, F&& f) {
  try {
    return f();
  } catch (const ResourceError& e) {
    throw ResourceError(std::string(stage) + ": " + e.what());
  } catch (const HardUnsatError& e) {
    throw HardUnsatError(std::string(stage) + ": " + e.what());
  } catch (const CapacityError& e) {
    throw CapacityError(std::string(stage) + ": " + e.what());
  }
}

inline Encoding encode_instrumented(InstrumentedProgram ip, const Config& cfg, bool assign_weights) {
  Encoding enc;
  if (assign_weights) ip.table = compute_weights(std::move(ip.table), ip, cfg.io_multiplier);
  enc.ip = std::move(ip);
  SsaOptions so;
  so.unwind = cfg.unwind;
  so.width = cfg.width;
  so.output_slack = cfg.output_slack;
  so.unwind_assert = cfg.unwind_assert;
  enc.ssa = ssa_translate(enc.ip, so);
  enc.cnf = bitblast(enc.ssa);
  enc.wcnf = build_wcnf(enc.cnf, enc.ip.table);
  return enc;
}

}  // namespace detail

/// unroll → instrument → weights → SSA → CNF → WCNF over the given tests.
inline Encoding encode_program(const Program& ast, std::span<const TestCase> tests, const Config& cfg) {
  return detail::in_stage("encode", [&] {
    InstrumentOptions io;
    io.unwind = cfg.unwind;
    return detail::encode_instrumented(instrument(unroll(ast, tests), io), cfg, true);
  });
}

/// Same pipeline over the sub-expression refinement of `diagnosed`.
inline Encoding encode_refined(const Program& ast, std::span<const TestCase> tests,
                               std::span<const Component> diagnosed, const Config& cfg) {
  return detail::in_stage("encode", [&] {
    InstrumentOptions io;
    io.unwind = cfg.unwind;
    return detail::encode_instrumented(refine_instrument(ast, tests, diagnosed, io), cfg, false);
  });
}

struct Diagnosis {
  std::vector<int> components;  // ascending component ids
  std::vector<int> lines;       // ascending, unique
  std::uint64_t cost = 0;

  bool operator==(const Diagnosis&) const = default;
};

inline Diagnosis make_diagnosis(const ComponentTable& table, std::vector<int> components) {
  Diagnosis d;
  std::sort(components.begin(), components.end());
  components.erase(std::unique(components.begin(), components.end()), components.end());
  std::set<int> lines;
  for (int c : components) {
    const Component& comp = table[static_cast<std::size_t>(c)];
    lines.insert(comp.line);
    d.cost += comp.weight;
  }
  d.components = std::move(components);
  d.lines.assign(lines.begin(), lines.end());
  return d;
}

struct DiagnosisReport {
  std::string strategy;
  std::vector<Diagnosis> diagnoses;
  /// Baselines only: number of MCSes found for each failing test, in test order.
  std::vector<std::pair<std::string, std::size_t>> per_test_counts;
  std::size_t unique_aggregated_count = 0;
  /// Baselines only: every ranked or aggregated candidate component set.
  std::vector<std::vector<int>> candidates;
  std::uint64_t optimum_cost = 0;
  double wall_time = 0;  // seconds
  MaxSatStats stats;
  std::vector<std::string> failing_tests;
  std::vector<std::string> excluded_tests;
  ComponentTable table;
  std::size_t cnf_vars = 0;
  std::size_t cnf_clauses = 0;
  std::vector<std::string> warnings;
  /// Set when the strategy failed; the other fields are then incomplete.
  std::string error;
};

/// Answers consistency queries against one encoding: is the hard formula satisfiable
/// with exactly the given components unhealthy?
class Validator {
 public:
  Validator(const Encoding& enc, const Config& cfg) : healthy_(enc.cnf.healthy_vars), sat_(cfg.seed) {
    sat_.set_conflict_budget(cfg.conflict_budget);
    sat_.add_formula(enc.cnf);
  }

  bool consistent(const std::vector<int>& unhealthy) {
    std::vector<char> off(healthy_.size(), 0);
    for (int c : unhealthy) off.at(static_cast<std::size_t>(c)) = 1;
    std::vector<int> assumptions;
    for (std::size_t i = 0; i < healthy_.size(); ++i) assumptions.push_back(off[i] ? -healthy_[i] : healthy_[i]);
    ++calls_;
    return detail::in_stage("validate", [&] { return sat_.solve(assumptions) == SatResult::Sat; });
  }

  std::uint64_t calls() const { return calls_; }

 private:
  std::vector<int> healthy_;
  SatSolver sat_;
  std::uint64_t calls_ = 0;
};

namespace detail {

struct Observations {
  std::vector<TestCase> failing;  // encodable failing tests
  std::vector<std::string> excluded;
};

inline Observations observe(const Program& ast, const TestSuite& suite, const Config& cfg) {
  Classification c = classify_tests(ast, suite, cfg.limits(), cfg.width);
  Observations o;
  std::set<std::string> over(c.over_limit.begin(), c.over_limit.end());
  for (auto& t : c.failing) {
    if (over.count(t.id))
      o.excluded.push_back(t.id);
    else
      o.failing.push_back(std::move(t));
  }
  return o;
}

inline DiagnosisReport start_report(const std::string& strategy, const Observations& o) {
  DiagnosisReport r;
  r.strategy = strategy;
  for (const auto& t : o.failing) r.failing_tests.push_back(t.id);
  r.excluded_tests = o.excluded;
  for (const auto& id : o.excluded)
    r.warnings.push_back("test " + id + " exceeds the unwind bound and is not encoded");
  return r;
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Solves one encoding for all optimum-cost diagnoses, keeping only validated ones.
inline void solve_all_optima(const Encoding& enc, const Config& cfg, DiagnosisReport& r) {
  r.table = enc.table();
  r.cnf_vars = static_cast<std::size_t>(enc.cnf.num_vars);
  r.cnf_clauses = enc.cnf.clauses.size();
  auto opt = in_stage("solve", [&] { return maxsat_optimum(enc.wcnf, cfg.maxsat(), &r.stats); });
  r.optimum_cost = opt.cost;
  auto sols = in_stage("solve", [&] { return enumerate_optimal_solutions(enc.wcnf, opt.cost, cfg.maxsat(), &r.stats); });
  Validator v(enc, cfg);
  for (const auto& s : sols) {
    if (s.falsified.empty()) continue;
    Diagnosis d = make_diagnosis(enc.table(), s.falsified);
    if (v.consistent(d.components))
      r.diagnoses.push_back(std::move(d));
    else
      r.warnings.push_back("dropped a solution that failed validation");
  }
  std::sort(r.diagnoses.begin(), r.diagnoses.end(),
            [](const Diagnosis& a, const Diagnosis& b) { return a.components < b.components; });
  r.unique_aggregated_count = r.diagnoses.size();
}

}  // namespace detail

/// All failing tests in one MaxSAT instance; every optimum is a subset-minimal aggregated diagnosis.
inline DiagnosisReport localize_cfaults(const Program& ast, const TestSuite& suite, const Config& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  auto obs = detail::observe(ast, suite, cfg);
  DiagnosisReport r = detail::start_report("cfaults", obs);
  if (!obs.failing.empty()) {
    Encoding enc = encode_program(ast, obs.failing, cfg);
    detail::solve_all_optima(enc, cfg, r);
  }
  r.wall_time = detail::seconds_since(t0);
  return r;
}

/// Re-encodes the first cfaults diagnosis at sub-expression granularity and solves again.
inline DiagnosisReport localize_cfaults_refined(const Program& ast, const TestSuite& suite, const Config& cfg,
                                                const DiagnosisReport* unrefined = nullptr) {
  auto t0 = std::chrono::steady_clock::now();
  DiagnosisReport base;
  if (!unrefined) {
    base = localize_cfaults(ast, suite, cfg);
    unrefined = &base;
  }
  auto obs = detail::observe(ast, suite, cfg);
  DiagnosisReport r = detail::start_report("cfaults-refined", obs);
  if (!obs.failing.empty() && !unrefined->diagnoses.empty()) {
    std::vector<Component> diagnosed;
    for (int c : unrefined->diagnoses.front().components)
      diagnosed.push_back(unrefined->table[static_cast<std::size_t>(c)]);
    Encoding enc = encode_refined(ast, obs.failing, diagnosed, cfg);
    detail::solve_all_optima(enc, cfg, r);
  }
  r.wall_time = detail::seconds_since(t0);
  return r;
}

/// Consistency check of one diagnosis against all failing tests.
inline bool validate_diagnosis(const Program& ast, const TestSuite& suite, const Diagnosis& d, const Config& cfg) {
  auto obs = detail::observe(ast, suite, cfg);
  if (obs.failing.empty()) return true;
  Encoding enc = encode_program(ast, obs.failing, cfg);
  for (int c : d.components)
    if (c < 0 || static_cast<std::size_t>(c) >= enc.table().size())
      throw std::invalid_argument("diagnosis references an unknown component");
  Validator v(enc, cfg);
  return v.consistent(d.components);
}

namespace detail {

struct PerTestMcses {
  ComponentTable table;
  std::vector<std::pair<std::string, std::vector<std::vector<int>>>> per_test;
};

// Single-scope encoding and MCS enumeration for each failing test.
inline PerTestMcses per_test_mcses(const Program& ast, const std::vector<TestCase>& failing, const Config& cfg,
                                   MaxSatStats& stats) {
  PerTestMcses out;
  for (const auto& t : failing) {
    Encoding enc = encode_program(ast, std::span<const TestCase>(&t, 1), cfg);
    if (out.table.components.empty()) out.table = enc.table();
    McsList list = in_stage("solve", [&] { return enumerate_mcses(enc.wcnf, cfg.mcs_limit, cfg.maxsat(), &stats); });
    std::vector<std::vector<int>> sets;
    for (const auto& m : list) sets.push_back(m.falsified);
    out.per_test.emplace_back(t.id, std::move(sets));
  }
  return out;
}

inline bool rank_less(const std::pair<Diagnosis, std::size_t>& a, const std::pair<Diagnosis, std::size_t>& b) {
  if (a.second != b.second) return a.second > b.second;
  if (a.first.cost != b.first.cost) return a.first.cost < b.first.cost;
  return a.first.components < b.first.components;
}

}  // namespace detail

/// Per-test MCSes ranked by how many failing tests produce them; the first
/// candidate consistent with every test is returned.
inline DiagnosisReport localize_bugassist(const Program& ast, const TestSuite& suite, const Config& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  auto obs = detail::observe(ast, suite, cfg);
  DiagnosisReport r = detail::start_report("bugassist", obs);
  if (obs.failing.empty()) {
    r.wall_time = detail::seconds_since(t0);
    return r;
  }
  auto per = detail::per_test_mcses(ast, obs.failing, cfg, r.stats);
  r.table = per.table;
  std::map<std::vector<int>, std::size_t> votes;
  for (const auto& [id, sets] : per.per_test) {
    r.per_test_counts.emplace_back(id, sets.size());
    for (const auto& s : sets) ++votes[s];
  }
  r.unique_aggregated_count = votes.size();
  for (const auto& [set, n] : votes) r.candidates.push_back(set);
  std::vector<std::pair<Diagnosis, std::size_t>> ranked;
  for (const auto& [set, n] : votes) ranked.emplace_back(make_diagnosis(per.table, set), n);
  std::sort(ranked.begin(), ranked.end(), detail::rank_less);

  Encoding enc = encode_program(ast, obs.failing, cfg);
  r.cnf_vars = static_cast<std::size_t>(enc.cnf.num_vars);
  r.cnf_clauses = enc.cnf.clauses.size();
  Validator v(enc, cfg);
  for (const auto& [d, n] : ranked) {
    if (v.consistent(d.components)) {
      r.diagnoses.push_back(d);
      r.optimum_cost = d.cost;
      break;
    }
  }
  r.wall_time = detail::seconds_since(t0);
  if (r.diagnoses.empty()) throw NoConsistentDiagnosis("bugassist: no candidate is consistent with all failing tests");
  return r;
}

/// Cartesian product of per-test MCSes; the cheapest aggregated set consistent
/// with every test is the final diagnosis.
inline DiagnosisReport localize_sniper(const Program& ast, const TestSuite& suite, const Config& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  auto obs = detail::observe(ast, suite, cfg);
  DiagnosisReport r = detail::start_report("sniper", obs);
  if (obs.failing.empty()) {
    r.wall_time = detail::seconds_since(t0);
    return r;
  }
  auto per = detail::per_test_mcses(ast, obs.failing, cfg, r.stats);
  r.table = per.table;
  std::set<std::vector<int>> product{{}};
  for (const auto& [id, sets] : per.per_test) {
    r.per_test_counts.emplace_back(id, sets.size());
    if (static_cast<double>(product.size()) * static_cast<double>(sets.size()) > static_cast<double>(cfg.product_cap))
      throw ResourceError("sniper: Cartesian product exceeds product cap");
    std::set<std::vector<int>> next;
    for (const auto& acc : product)
      for (const auto& s : sets) {
        std::vector<int> u;
        std::set_union(acc.begin(), acc.end(), s.begin(), s.end(), std::back_inserter(u));
        next.insert(std::move(u));
      }
    product = std::move(next);
  }
  r.unique_aggregated_count = product.size();
  r.candidates.assign(product.begin(), product.end());
  std::vector<Diagnosis> agg;
  for (const auto& s : product) agg.push_back(make_diagnosis(per.table, s));
  std::sort(agg.begin(), agg.end(), [](const Diagnosis& a, const Diagnosis& b) {
    return a.cost != b.cost ? a.cost < b.cost : a.components < b.components;
  });

  Encoding enc = encode_program(ast, obs.failing, cfg);
  r.cnf_vars = static_cast<std::size_t>(enc.cnf.num_vars);
  r.cnf_clauses = enc.cnf.clauses.size();
  Validator v(enc, cfg);
  for (const auto& d : agg) {
    if (d.components.empty()) continue;
    if (v.consistent(d.components)) {
      r.diagnoses.push_back(d);
      r.optimum_cost = d.cost;
      break;
    }
  }
  r.wall_time = detail::seconds_since(t0);
  if (r.diagnoses.empty()) throw NoConsistentDiagnosis("sniper: no aggregated diagnosis is consistent with all failing tests");
  return r;
}

/// Ground truth by exhaustive search: subset-minimal diagnoses of at most
/// `max_size` components, in order of increasing weight. With
/// `min_weight_only`, stops after the lightest weight that has a diagnosis.
inline std::vector<Diagnosis> brute_force_diagnoses(const Program& ast, const TestSuite& suite, std::size_t max_size,
                                                    const Config& cfg, bool min_weight_only = false) {
  auto obs = detail::observe(ast, suite, cfg);
  if (obs.failing.empty()) return {Diagnosis{}};
  Encoding enc = encode_program(ast, obs.failing, cfg);
  const ComponentTable& table = enc.table();
  std::size_t n = table.size();
  if (n > cfg.bf_cap || n >= 31)
    throw CapTooLarge(std::to_string(n) + " components exceed the brute-force cap of " + std::to_string(cfg.bf_cap));

  struct Subset {
    std::uint32_t mask;
    std::uint64_t weight;
    int size;
  };
  std::vector<Subset> subsets;
  for (std::uint32_t m = 0; m < (std::uint32_t{1} << n); ++m) {
    int size = __builtin_popcount(m);
    if (static_cast<std::size_t>(size) > max_size) continue;
    std::uint64_t w = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (m >> i & 1) w += table[i].weight;
    subsets.push_back({m, w, size});
  }
  auto ids = [n](std::uint32_t m) {
    std::vector<int> v;
    for (std::size_t i = 0; i < n; ++i)
      if (m >> i & 1) v.push_back(static_cast<int>(i));
    return v;
  };
  std::sort(subsets.begin(), subsets.end(), [&](const Subset& a, const Subset& b) {
    if (a.weight != b.weight) return a.weight < b.weight;
    if (a.size != b.size) return a.size < b.size;
    return ids(a.mask) < ids(b.mask);
  });

  Validator v(enc, cfg);
  std::vector<std::uint32_t> minimal;
  std::vector<Diagnosis> out;
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  for (const auto& s : subsets) {
    if (min_weight_only && s.weight > best) break;
    // proper subsets weigh strictly less, so any consistent one is already known
    bool dominated = std::any_of(minimal.begin(), minimal.end(), [&](std::uint32_t m) { return (m & s.mask) == m; });
    if (dominated || !v.consistent(ids(s.mask))) continue;
    minimal.push_back(s.mask);
    out.push_back(make_diagnosis(table, ids(s.mask)));
    best = std::min(best, s.weight);
  }
  return out;
}

}  // namespace faultloc
