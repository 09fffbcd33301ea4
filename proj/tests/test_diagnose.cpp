#include <gtest/gtest.h>

#include "support.hpp"

using namespace testing_support;

namespace {

std::set<std::vector<int>> component_sets(const std::vector<Diagnosis>& ds) {
  std::set<std::vector<int>> out;
  for (const auto& d : ds) out.insert(d.components);
  return out;
}

Diagnosis diagnosis_for_lines(const ComponentTable& t, std::set<int> lines, ComponentKind kind) {
  std::vector<int> comps;
  for (const auto& c : t.components)
    if (lines.count(c.line) && c.kind == kind) comps.push_back(c.id);
  return make_diagnosis(t, comps);
}

}  // namespace

TEST(Cfaults, Max3HasTheSingleDiagnosis) {
  Program p = parse_program(max3_source());
  DiagnosisReport r = localize_cfaults(p, max3_suite(), max3_config());
  ASSERT_EQ(r.diagnoses.size(), 1u);
  EXPECT_EQ(r.diagnoses[0].lines, (std::vector<int>{5, 8, 11}));
  EXPECT_EQ(r.diagnoses[0].cost, 3u);
  EXPECT_EQ(r.optimum_cost, 3u);
  EXPECT_EQ(r.failing_tests, (std::vector<std::string>{"t0", "t1", "t2"}));
  EXPECT_TRUE(r.excluded_tests.empty());
  EXPECT_EQ(r.table.size(), 9u);
  EXPECT_GT(r.cnf_vars, 0u);
}

TEST(Cfaults, ReportsEveryOptimumOnTies) {
  // swapping the branches or flipping the condition both cost 2
  CorpusEntry e = corpus_entry("abs_value");
  DiagnosisReport r = localize_cfaults(e.program(), e.suite(), e.config());
  std::set<std::vector<int>> lines;
  for (const auto& d : r.diagnoses) lines.insert(d.lines);
  EXPECT_EQ(lines, (std::set<std::vector<int>>{{4}, {5, 7}}));
}

TEST(Validate, Max3Examples) {
  Program p = parse_program(max3_source());
  Config cfg = max3_config();
  Encoding enc = encode_program(p, max3_suite().tests, cfg);
  Diagnosis all = diagnosis_for_lines(enc.table(), {5, 8, 11}, ComponentKind::IfCondition);
  ASSERT_EQ(all.components.size(), 3u);
  EXPECT_TRUE(validate_diagnosis(p, max3_suite(), all, cfg));
  for (std::set<int> part : {std::set<int>{5}, {8}, {11}, {5, 8}, {5, 11}, {8, 11}})
    EXPECT_FALSE(validate_diagnosis(p, max3_suite(), diagnosis_for_lines(enc.table(), part, ComponentKind::IfCondition), cfg));
  EXPECT_FALSE(validate_diagnosis(p, max3_suite(), Diagnosis{}, cfg));
  Diagnosis bad;
  bad.components = {42};
  EXPECT_THROW(validate_diagnosis(p, max3_suite(), bad, cfg), std::invalid_argument);
}

TEST(Validate, CorrectProgramAcceptsTheEmptyDiagnosis) {
  CorpusEntry e = corpus_entry("ok_max3");
  EXPECT_TRUE(validate_diagnosis(e.program(), e.suite(), Diagnosis{}, e.config()));
}

TEST(BruteForce, Max3) {
  Program p = parse_program(max3_source());
  auto all = brute_force_diagnoses(p, max3_suite(), 9, max3_config());
  bool found = false;
  for (const auto& d : all) found |= d.lines == std::vector<int>{5, 8, 11} && d.cost == 3;
  EXPECT_TRUE(found);
  for (std::size_t i = 1; i < all.size(); ++i) EXPECT_LE(all[i - 1].cost, all[i].cost);
  // no reported set contains another
  for (const auto& a : all)
    for (const auto& b : all)
      if (&a != &b) {
        EXPECT_FALSE(std::includes(b.components.begin(), b.components.end(), a.components.begin(), a.components.end()));
      }
  auto lightest = brute_force_diagnoses(p, max3_suite(), 9, max3_config(), true);
  DiagnosisReport r = localize_cfaults(p, max3_suite(), max3_config());
  EXPECT_EQ(component_sets(lightest), component_sets(r.diagnoses));
}

TEST(BruteForce, SingleFaultProgramsYieldTheFaultyComponent) {
  for (const char* name : {"factorial", "leap_year", "running_max"}) {
    CorpusEntry e = corpus_entry(name);
    auto lightest = brute_force_diagnoses(e.program(), e.suite(), 2, e.config(), true);
    ASSERT_EQ(lightest.size(), 1u) << name;
    EXPECT_EQ(lightest[0].components.size(), 1u) << name;
    EXPECT_EQ(lightest[0].lines, e.fault_lines) << name;
  }
}

TEST(BruteForce, CorrectProgramAndCap) {
  CorpusEntry ok = corpus_entry("ok_sort3");
  auto d = brute_force_diagnoses(ok.program(), ok.suite(), 3, ok.config());
  ASSERT_EQ(d.size(), 1u);
  EXPECT_TRUE(d[0].components.empty());
  Config cfg = max3_config();
  cfg.bf_cap = 4;
  EXPECT_THROW(brute_force_diagnoses(parse_program(max3_source()), max3_suite(), 2, cfg), CapTooLarge);
}

TEST(Baselines, Max3Sniper) {
  Program p = parse_program(max3_source());
  DiagnosisReport r = localize_sniper(p, max3_suite(), max3_config());
  ASSERT_EQ(r.diagnoses.size(), 1u);
  EXPECT_EQ(r.diagnoses[0].lines, (std::vector<int>{5, 8, 11}));
  ASSERT_EQ(r.per_test_counts.size(), 3u);
  EXPECT_EQ(r.candidates.size(), r.unique_aggregated_count);
  EXPECT_GT(r.unique_aggregated_count, 1u);
}

TEST(Baselines, Max3BugAssistPicksTheMostFrequentConsistentCandidate) {
  Program p = parse_program(max3_source());
  Config cfg = max3_config();
  DiagnosisReport r = localize_bugassist(p, max3_suite(), cfg);
  ASSERT_EQ(r.diagnoses.size(), 1u);
  EXPECT_TRUE(validate_diagnosis(p, max3_suite(), r.diagnoses[0], cfg));
  ASSERT_EQ(r.per_test_counts.size(), 3u);
  std::size_t total = 0;
  for (const auto& [id, n] : r.per_test_counts) total += n;
  EXPECT_LE(r.unique_aggregated_count, total);
}

TEST(Baselines, ProductCapIsEnforced) {
  Config cfg = max3_config();
  cfg.product_cap = 10;
  EXPECT_THROW(localize_sniper(parse_program(max3_source()), max3_suite(), cfg), ResourceError);
}

TEST(Baselines, McsLimitBoundsPerTestCounts) {
  Config cfg = max3_config();
  cfg.mcs_limit = 8;
  DiagnosisReport r = localize_bugassist(parse_program(max3_source()), max3_suite(), cfg);
  for (const auto& [id, n] : r.per_test_counts) EXPECT_LE(n, 8u);
  // too few candidates per test to cover all three conditions
  cfg.mcs_limit = 2;
  EXPECT_THROW(localize_bugassist(parse_program(max3_source()), max3_suite(), cfg), NoConsistentDiagnosis);
}

TEST(Invariants, DominanceOnTheCorpus) {
  for (const auto& e : load_corpus()) {
    if (!e.buggy) continue;
    Program p = e.program();
    TestSuite s = e.suite();
    DiagnosisReport cf = localize_cfaults(p, s, e.config());
    DiagnosisReport sn = localize_sniper(p, s, e.config());
    EXPECT_GE(sn.unique_aggregated_count, cf.diagnoses.size()) << e.name;
    for (const auto& d : cf.diagnoses) {
      bool covered = std::any_of(sn.candidates.begin(), sn.candidates.end(), [&](const std::vector<int>& c) {
        return std::includes(c.begin(), c.end(), d.components.begin(), d.components.end());
      });
      EXPECT_TRUE(covered) << e.name;
    }
  }
}

TEST(Refinement, ImprovesCompoundConditions) {
  CorpusEntry e = corpus_entry("range_bonus");
  Program p = e.program();
  DiagnosisReport base = localize_cfaults(p, e.suite(), e.config());
  ASSERT_EQ(base.diagnoses.size(), 1u);
  EXPECT_EQ(base.diagnoses[0].lines, e.fault_lines);
  EXPECT_EQ(base.optimum_cost, 4u);
  DiagnosisReport ref = localize_cfaults_refined(p, e.suite(), e.config(), &base);
  EXPECT_EQ(ref.strategy, "cfaults-refined");
  EXPECT_EQ(ref.optimum_cost, 2u);
  for (const auto& d : ref.diagnoses) {
    EXPECT_EQ(d.lines, e.fault_lines);
    for (int c : d.components) EXPECT_GE(ref.table[static_cast<std::size_t>(c)].refined_from, 0);
  }
  // computing the base internally gives the same answer
  EXPECT_EQ(localize_cfaults_refined(p, e.suite(), e.config()).diagnoses, ref.diagnoses);
}

TEST(Refinement, Max3KeepsItsCost) {
  Program p = parse_program(max3_source());
  DiagnosisReport ref = localize_cfaults_refined(p, max3_suite(), max3_config());
  EXPECT_LE(ref.optimum_cost, 3u);
  ASSERT_FALSE(ref.diagnoses.empty());
  for (const auto& d : ref.diagnoses) EXPECT_EQ(d.lines, (std::vector<int>{5, 8, 11}));
}

TEST(Strategies, CorrectProgramsYieldNothing) {
  CorpusEntry e = corpus_entry("ok_leap_year");
  Program p = e.program();
  TestSuite s = e.suite();
  for (const auto& r : {localize_cfaults(p, s, e.config()), localize_cfaults_refined(p, s, e.config()),
                        localize_bugassist(p, s, e.config()), localize_sniper(p, s, e.config())}) {
    EXPECT_TRUE(r.diagnoses.empty()) << r.strategy;
    EXPECT_TRUE(r.failing_tests.empty()) << r.strategy;
  }
}

TEST(Strategies, OverLimitFailingTestsAreExcludedWithAWarning) {
  Program p = parse_program(
      "int main() { int n, s; scanf(\"%d\", &n); s = 1; while (n > 0) { s = s + n; n = n - 1; } printf(\"%d\\n\", s); "
      "return 0; }");
  TestSuite suite;
  suite.tests.push_back({"t0", {2}, {3}});
  suite.tests.push_back({"t1", {9}, {45}});
  Config cfg;
  cfg.unwind = 3;
  DiagnosisReport r = localize_cfaults(p, suite, cfg);
  EXPECT_EQ(r.failing_tests, std::vector<std::string>{"t0"});
  EXPECT_EQ(r.excluded_tests, std::vector<std::string>{"t1"});
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_NE(r.warnings[0].find("t1"), std::string::npos);
  EXPECT_FALSE(r.diagnoses.empty());
}

TEST(Strategies, DeterministicForAFixedSeed) {
  CorpusEntry e = corpus_entry("triangle");
  Config cfg = e.config();
  cfg.seed = 17;
  auto a = localize_cfaults(e.program(), e.suite(), cfg);
  auto b = localize_cfaults(e.program(), e.suite(), cfg);
  EXPECT_EQ(a.diagnoses, b.diagnoses);
  EXPECT_EQ(a.stats.sat_calls, b.stats.sat_calls);
  EXPECT_EQ(a.stats.conflicts, b.stats.conflicts);
}
