#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"

using namespace testing_support;

namespace {

bool model_satisfies(const std::vector<std::vector<int>>& clauses, const Model& m) {
  return std::all_of(clauses.begin(), clauses.end(), [&](const auto& c) { return clause_satisfied(c, m); });
}

// n+1 pigeons into n holes
std::vector<std::vector<int>> pigeonhole(int n) {
  auto var = [n](int p, int h) { return p * n + h + 1; };
  std::vector<std::vector<int>> cls;
  for (int p = 0; p <= n; ++p) {
    std::vector<int> c;
    for (int h = 0; h < n; ++h) c.push_back(var(p, h));
    cls.push_back(c);
  }
  for (int h = 0; h < n; ++h)
    for (int p = 0; p <= n; ++p)
      for (int q = p + 1; q <= n; ++q) cls.push_back({-var(p, h), -var(q, h)});
  return cls;
}

}  // namespace

TEST(Sat, Random3CnfAgreesWithTruthTable) {
  std::mt19937_64 rng(11);
  int sat = 0;
  for (int i = 0; i < 100; ++i) {
    int n = std::uniform_int_distribution<int>(4, 16)(rng);
    int m = static_cast<int>(3.0 * n + 0.5) + std::uniform_int_distribution<int>(0, n)(rng);
    std::vector<std::vector<int>> cls;
    for (int k = 0; k < m; ++k) cls.push_back(random_clause(rng, n, 3));
    SatSolver s(static_cast<std::uint64_t>(i));
    for (const auto& c : cls) s.add_clause(c);
    bool expected = truth_table_sat(n, cls);
    SatResult r = s.solve();
    ASSERT_EQ(r == SatResult::Sat, expected) << "instance " << i;
    if (expected) {
      ++sat;
      EXPECT_TRUE(model_satisfies(cls, s.model()));
    }
  }
  // the ratio range straddles the threshold, so both answers occur
  EXPECT_GT(sat, 5);
  EXPECT_LT(sat, 95);
}

TEST(Sat, AssumptionCoresAreUnsatisfiableSubsets) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 60; ++i) {
    int n = 10;
    std::vector<std::vector<int>> cls;
    for (int k = 0; k < 25; ++k) cls.push_back(random_clause(rng, n, 3));
    if (!truth_table_sat(n, cls)) continue;
    std::vector<int> assume = random_clause(rng, n, 6);
    SatSolver s;
    for (const auto& c : cls) s.add_clause(c);
    auto with = cls;
    for (int a : assume) with.push_back({a});
    bool expected = truth_table_sat(n, with);
    ASSERT_EQ(s.solve(assume) == SatResult::Sat, expected);
    if (expected) continue;
    std::vector<int> core = s.core();
    for (int l : core) EXPECT_NE(std::find(assume.begin(), assume.end(), l), assume.end());
    auto check = cls;
    for (int l : core) check.push_back({l});
    EXPECT_FALSE(truth_table_sat(n, check));
    // the solver stays usable after an unsat call
    EXPECT_EQ(s.solve(), SatResult::Sat);
  }
}

TEST(Sat, IncrementalClausesAndTopLevelConflict) {
  SatSolver s;
  s.add_clause({1, 2});
  EXPECT_EQ(s.solve(), SatResult::Sat);
  s.add_clause({-1});
  EXPECT_EQ(s.solve(), SatResult::Sat);
  EXPECT_TRUE(s.model()[2]);
  s.add_clause({-2});
  EXPECT_EQ(s.solve(), SatResult::Unsat);
  EXPECT_TRUE(s.core().empty());
  EXPECT_FALSE(s.okay());
}

TEST(Sat, PigeonholeIsUnsat) {
  SatSolver s;
  for (const auto& c : pigeonhole(6)) s.add_clause(c);
  EXPECT_EQ(s.solve(), SatResult::Unsat);
  EXPECT_GT(s.stats().conflicts, 0u);
}

TEST(Sat, ConflictBudgetRaisesResourceError) {
  SatSolver s;
  for (const auto& c : pigeonhole(8)) s.add_clause(c);
  s.set_conflict_budget(10);
  EXPECT_THROW(s.solve(), ResourceError);
}

TEST(MaxSat, SmallForcedExample) {
  Wcnf w;
  w.num_vars = 2;
  w.hard = {{1, 2}};
  w.soft = {{{-1}, 1}, {{-2}, 2}};
  OptimumSolution s = maxsat_optimum(w);
  EXPECT_EQ(s.cost, 1u);
  EXPECT_EQ(s.falsified, std::vector<int>{0});
  EXPECT_TRUE(model_satisfies_hard(w, s.model));
}

TEST(MaxSat, RandomInstancesMatchExhaustiveSearch) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 200; ++i) {
    Wcnf w = random_wcnf(rng, 10, 8);
    auto oracle = exhaustive_maxsat(w);
    if (!oracle.hard_sat) {
      EXPECT_THROW(maxsat_optimum(w), HardUnsatError);
      continue;
    }
    MaxSatStats stats;
    OptimumSolution s = maxsat_optimum(w, {}, &stats);
    ASSERT_EQ(s.cost, oracle.optimum) << "instance " << i;
    EXPECT_TRUE(model_satisfies_hard(w, s.model));
    EXPECT_EQ(cost_of(w, falsified_softs(w, s.model)), s.cost);
    EXPECT_GE(stats.sat_calls, 1u);

    std::set<std::vector<int>> optima;
    for (const auto& o : enumerate_optimal_solutions(w, s.cost)) {
      EXPECT_EQ(o.cost, s.cost);
      optima.insert(o.falsified);
    }
    EXPECT_EQ(optima, oracle.optimal_sets) << "instance " << i;

    McsList mcses = enumerate_mcses(w);
    std::set<std::vector<int>> got;
    for (std::size_t k = 0; k < mcses.size(); ++k) {
      got.insert(mcses[k].falsified);
      EXPECT_EQ(mcses[k].cost, cost_of(w, mcses[k].falsified));
      if (k) {
        EXPECT_LE(mcses[k - 1].cost, mcses[k].cost);
      }
    }
    EXPECT_EQ(got.size(), mcses.size());
    EXPECT_EQ(got, oracle.mcses) << "instance " << i;
  }
}

TEST(MaxSat, McsLimitAndMembership) {
  Wcnf w;
  w.num_vars = 3;
  w.hard = {{-1, -2}, {-2, -3}, {-1, -3}};
  w.soft = {{{1}, 1}, {{2}, 1}, {{3}, 1}};
  auto all = enumerate_mcses(w);
  EXPECT_EQ(all.size(), 3u);
  EXPECT_EQ(enumerate_mcses(w, 2).size(), 2u);
  EXPECT_TRUE(is_mcs(w, {0, 1}));
  EXPECT_FALSE(is_mcs(w, {0, 1, 2}));
  EXPECT_FALSE(is_mcs(w, {0}));
}

TEST(MaxSat, EmptySoftClauseAlwaysCosts) {
  Wcnf w;
  w.num_vars = 1;
  w.soft = {{{}, 4}, {{1}, 1}};
  EXPECT_EQ(maxsat_optimum(w).cost, 4u);
}

TEST(MaxSat, HardUnsatIsReported) {
  Wcnf w;
  w.num_vars = 1;
  w.hard = {{1}, {-1}};
  w.soft = {{{1}, 1}};
  EXPECT_THROW(maxsat_optimum(w), HardUnsatError);
  EXPECT_TRUE(enumerate_mcses(w).empty());
}

TEST(Dimacs, CnfRoundTrip) {
  std::mt19937_64 rng(3);
  CnfFormula f;
  f.num_vars = 12;
  for (int i = 0; i < 30; ++i) f.clauses.push_back(random_clause(rng, 12, 3));
  std::stringstream ss;
  write_cnf(ss, f);
  CnfFormula g = read_cnf(ss);
  EXPECT_EQ(g.num_vars, f.num_vars);
  EXPECT_EQ(g.clauses, f.clauses);
}

TEST(Dimacs, WcnfRoundTripAndTop) {
  std::mt19937_64 rng(4);
  Wcnf w = random_wcnf(rng, 12, 10);
  std::stringstream ss;
  write_wcnf(ss, w);
  std::string header;
  std::getline(ss, header);
  EXPECT_EQ(header, "p wcnf " + std::to_string(w.num_vars) + " " + std::to_string(w.hard.size() + w.soft.size()) +
                        " " + std::to_string(w.total_soft_weight() + 1));
  ss.seekg(0);
  Wcnf r = read_wcnf(ss);
  EXPECT_EQ(r.num_vars, w.num_vars);
  EXPECT_EQ(r.hard, w.hard);
  ASSERT_EQ(r.soft.size(), w.soft.size());
  for (std::size_t i = 0; i < w.soft.size(); ++i) {
    EXPECT_EQ(r.soft[i].lits, w.soft[i].lits);
    EXPECT_EQ(r.soft[i].weight, w.soft[i].weight);
  }
}

TEST(Dimacs, HardLineFormat) {
  std::stringstream ss("c comment\nh 1 -2 0\n3 2 0\n1 -1 0\n");
  Wcnf w = read_wcnf(ss);
  EXPECT_EQ(w.num_vars, 2);
  EXPECT_EQ(w.hard, (std::vector<std::vector<int>>{{1, -2}}));
  ASSERT_EQ(w.soft.size(), 2u);
  EXPECT_EQ(w.soft[0].weight, 3u);
}

TEST(Dimacs, MalformedInputsAreRejected) {
  auto cnf = [](const std::string& s) {
    std::stringstream ss(s);
    return read_cnf(ss);
  };
  auto wcnf = [](const std::string& s) {
    std::stringstream ss(s);
    return read_wcnf(ss);
  };
  EXPECT_THROW(cnf("1 2 0\n"), FormatError);
  EXPECT_THROW(cnf("p cnf 2 1\n1 3 0\n"), FormatError);
  EXPECT_THROW(cnf("p cnf 2 2\n1 2 0\n"), FormatError);
  EXPECT_THROW(cnf("p cnf 2 1\n1 x 0\n"), FormatError);
  EXPECT_THROW(cnf("p cnf 2 1\n1 2\n"), FormatError);
  EXPECT_THROW(wcnf("p wcnf 2 1 10\n0 1 0\n"), FormatError);
  EXPECT_THROW(wcnf("p wcnf 2 2 10\n10 1 0\n"), FormatError);
}

TEST(Dimacs, EncodedInstanceSolvesTheSameAfterRoundTrip) {
  Program p = parse_program(max3_source());
  Encoding enc = encode_program(p, max3_suite().tests, max3_config());
  std::stringstream ss;
  write_wcnf(ss, enc.wcnf);
  Wcnf back = read_wcnf(ss);
  EXPECT_EQ(maxsat_optimum(back).cost, maxsat_optimum(enc.wcnf).cost);
}
