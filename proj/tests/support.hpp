#pragma once

// Shared fixtures and independent oracles for the test suites.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "faultloc/faultloc.hpp"

#ifndef FAULTLOC_SOURCE_DIR
#error "FAULTLOC_SOURCE_DIR must be defined"
#endif

namespace testing_support {

using namespace faultloc;
namespace fs = std::filesystem;

inline fs::path source_dir() { return fs::path(FAULTLOC_SOURCE_DIR); }
inline fs::path corpus_dir() { return source_dir() / "corpus"; }

struct CorpusEntry {
  std::string name;
  bool buggy = false;
  std::vector<int> fault_lines;
  int unwind = 1;

  fs::path dir() const { return corpus_dir() / name; }
  Program program() const { return parse_program(read_file(dir() / "program.c")); }
  TestSuite suite() const { return load_test_suite(dir() / "tests"); }
  Config config() const {
    Config c;
    c.program_path = (dir() / "program.c").string();
    c.tests_dir = (dir() / "tests").string();
    c.unwind = unwind;
    return c;
  }
};

inline std::vector<CorpusEntry> load_corpus() {
  std::ifstream in(corpus_dir() / "manifest.json");
  auto j = nlohmann::json::parse(in);
  std::vector<CorpusEntry> out;
  for (const auto& e : j.at("programs")) {
    CorpusEntry c;
    c.name = e.at("name").get<std::string>();
    c.buggy = e.at("kind").get<std::string>() == "buggy";
    c.fault_lines = e.at("fault_lines").get<std::vector<int>>();
    c.unwind = e.at("unwind").get<int>();
    out.push_back(std::move(c));
  }
  return out;
}

inline CorpusEntry corpus_entry(const std::string& name) {
  for (auto& e : load_corpus())
    if (e.name == name) return e;
  throw std::runtime_error("no corpus program " + name);
}

inline std::string max3_source() { return read_file(corpus_dir() / "max3" / "program.c"); }

inline TestSuite max3_suite() {
  TestSuite s;
  s.tests.push_back({"t0", {1, 2, 3}, {3}});
  s.tests.push_back({"t1", {6, 2, 1}, {6}});
  s.tests.push_back({"t2", {-1, 3, 1}, {3}});
  return s;
}

inline Config max3_config() {
  Config c;
  c.unwind = 1;
  c.width = 16;
  return c;
}

inline std::set<int> line_set(const Diagnosis& d) { return {d.lines.begin(), d.lines.end()}; }

// ---------------------------------------------------------------------------
// Exhaustive oracles over explicit assignments.

inline bool assignment_satisfies(const std::vector<int>& clause, std::uint64_t bits) {
  for (int l : clause) {
    int v = l > 0 ? l : -l;
    bool val = (bits >> (v - 1)) & 1;
    if ((l > 0) == val) return true;
  }
  return false;
}

inline bool truth_table_sat(int num_vars, const std::vector<std::vector<int>>& clauses) {
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << num_vars); ++a) {
    bool ok = true;
    for (const auto& c : clauses)
      if (!assignment_satisfies(c, a)) {
        ok = false;
        break;
      }
    if (ok) return true;
  }
  return false;
}

struct ExhaustiveMaxSat {
  bool hard_sat = false;
  std::uint64_t optimum = 0;
  std::set<std::vector<int>> optimal_sets;  // falsified sets attaining the optimum
  std::set<std::vector<int>> mcses;         // subset-minimal falsified sets
};

inline ExhaustiveMaxSat exhaustive_maxsat(const Wcnf& w) {
  ExhaustiveMaxSat r;
  std::set<std::vector<int>> achievable;
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << w.num_vars); ++a) {
    bool ok = std::all_of(w.hard.begin(), w.hard.end(), [&](const auto& c) { return assignment_satisfies(c, a); });
    if (!ok) continue;
    std::vector<int> f;
    for (std::size_t i = 0; i < w.soft.size(); ++i)
      if (!assignment_satisfies(w.soft[i].lits, a)) f.push_back(static_cast<int>(i));
    achievable.insert(f);
  }
  if (achievable.empty()) return r;
  r.hard_sat = true;
  auto weight = [&](const std::vector<int>& f) {
    std::uint64_t c = 0;
    for (int i : f) c += w.soft[static_cast<std::size_t>(i)].weight;
    return c;
  };
  r.optimum = std::numeric_limits<std::uint64_t>::max();
  for (const auto& f : achievable) r.optimum = std::min(r.optimum, weight(f));
  for (const auto& f : achievable)
    if (weight(f) == r.optimum) r.optimal_sets.insert(f);
  for (const auto& f : achievable) {
    if (f.empty()) continue;
    bool minimal = std::none_of(achievable.begin(), achievable.end(), [&](const auto& g) {
      return g.size() < f.size() && std::includes(f.begin(), f.end(), g.begin(), g.end());
    });
    if (minimal) r.mcses.insert(f);
  }
  return r;
}

inline std::vector<int> random_clause(std::mt19937_64& rng, int num_vars, int len) {
  std::uniform_int_distribution<int> var(1, num_vars), sign(0, 1);
  std::vector<int> c;
  while (static_cast<int>(c.size()) < len) {
    int v = var(rng);
    if (std::any_of(c.begin(), c.end(), [v](int l) { return l == v || l == -v; })) continue;
    c.push_back(sign(rng) ? v : -v);
  }
  return c;
}

inline Wcnf random_wcnf(std::mt19937_64& rng, int max_vars, int max_softs) {
  std::uniform_int_distribution<int> nv(3, max_vars), ns(1, max_softs), len(1, 3), wt(1, 9);
  Wcnf w;
  w.num_vars = nv(rng);
  int hard = std::uniform_int_distribution<int>(0, 2 * w.num_vars)(rng);
  for (int i = 0; i < hard; ++i) w.hard.push_back(random_clause(rng, w.num_vars, std::min(3, w.num_vars)));
  int softs = ns(rng);
  for (int i = 0; i < softs; ++i)
    w.soft.push_back({random_clause(rng, w.num_vars, std::min(len(rng), w.num_vars)), static_cast<std::uint64_t>(wt(rng))});
  return w;
}

// ---------------------------------------------------------------------------
// Encoder fidelity: a single-test trace formula with every component healthy
// and no output assertion has exactly one output, the concrete one.

struct FidelityResult {
  bool ok = false;
  std::string detail;
};

inline FidelityResult check_single_test_fidelity(const Program& ast, const TestCase& t, const Config& cfg) {
  FidelityResult res;
  ExecResult concrete = run_concrete(ast, t.inputs, cfg.limits(), cfg.width);
  if (concrete.status != ExecStatus::Completed) {
    res.ok = true;
    res.detail = "skipped: concrete run does not complete";
    return res;
  }
  InstrumentOptions io;
  io.unwind = cfg.unwind;
  InstrumentedProgram ip = instrument(unroll(ast, std::span<const TestCase>(&t, 1)), io);
  SsaOptions so;
  so.unwind = cfg.unwind;
  so.width = cfg.width;
  so.assertions = false;
  so.output_slack = static_cast<int>(concrete.output.size()) + cfg.output_slack;
  SsaProgram ssa = ssa_translate(ip, so);
  CnfFormula cnf = bitblast(ssa);

  SatSolver s;
  s.add_formula(cnf);
  std::vector<int> healthy(cnf.healthy_vars.begin(), cnf.healthy_vars.end());
  if (s.solve(healthy) != SatResult::Sat) {
    res.detail = "healthy trace formula is unsatisfiable";
    return res;
  }
  Model m = s.model();
  const SsaScope& scope = ssa.scopes.at(0);
  std::int64_t len = decode_term(cnf, m, scope.output_len);
  std::vector<std::int64_t> out;
  for (std::int64_t i = 0; i < len && i < static_cast<std::int64_t>(scope.output.size()); ++i)
    out.push_back(decode_term(cnf, m, scope.output[static_cast<std::size_t>(i)]));
  if (out != concrete.output || len != static_cast<std::int64_t>(concrete.output.size())) {
    res.detail = "decoded output differs from the concrete run";
    return res;
  }
  // any other output must be impossible
  std::vector<int> differ;
  auto add_bits = [&](TermId term) {
    for (int lit : cnf.term_bits.at(static_cast<std::size_t>(term))) differ.push_back(lit_value(m, lit) ? -lit : lit);
  };
  add_bits(scope.output_len);
  for (std::size_t i = 0; i < out.size(); ++i) add_bits(scope.output[i]);
  s.add_clause(differ);
  if (s.solve(healthy) != SatResult::Unsat) {
    res.detail = "healthy trace formula admits a second output";
    return res;
  }
  res.ok = true;
  return res;
}

/// The full multi-test hard formula with every component healthy is inconsistent.
inline bool healthy_multi_test_unsat(const Program& ast, const std::vector<TestCase>& failing, const Config& cfg) {
  Encoding enc = encode_program(ast, failing, cfg);
  Validator v(enc, cfg);
  return !v.consistent({});
}

}  // namespace testing_support
