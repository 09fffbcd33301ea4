#include <gtest/gtest.h>

#include "support.hpp"

using namespace testing_support;

namespace {

ExecResult run(const std::string& src, std::vector<std::int64_t> in, int width = 16, int iters = 8) {
  return run_concrete(parse_program(src), in, Limits{iters, 100000}, width);
}

using Out = std::vector<std::int64_t>;

}  // namespace

TEST(Exec, Max3FailsEveryFailingTest) {
  Program p = parse_program(max3_source());
  Limits lim{1, 1000};
  // hand-traced through the three faulty conditions
  EXPECT_EQ(run_concrete(p, Out{1, 2, 3}, lim).output, Out{});
  EXPECT_EQ(run_concrete(p, Out{6, 2, 1}, lim).output, Out{1});
  EXPECT_EQ(run_concrete(p, Out{-1, 3, 1}, lim).output, Out{});
  Classification c = classify_tests(p, max3_suite(), lim);
  EXPECT_EQ(c.failing.size(), 3u);
  EXPECT_TRUE(c.passing.empty());
  EXPECT_TRUE(c.over_limit.empty());
}

TEST(Exec, ReferenceProgramsReproduceCompiledOutputs) {
  // expected outputs in the corpus come from natively compiled reference programs
  for (const auto& e : load_corpus()) {
    fs::path ref = e.dir() / (e.buggy ? "reference.c" : "program.c");
    Program p = parse_program(read_file(ref));
    for (const auto& t : e.suite().tests) {
      ExecResult r = run_concrete(p, t.inputs, e.config().limits());
      EXPECT_TRUE(test_passes(r, t, 16)) << e.name << "/" << t.id;
    }
  }
}

TEST(Exec, BuggyProgramsFailAtLeastOneTest) {
  for (const auto& e : load_corpus()) {
    Classification c = classify_tests(e.program(), e.suite(), e.config().limits());
    if (e.buggy)
      EXPECT_FALSE(c.failing.empty()) << e.name;
    else
      EXPECT_TRUE(c.failing.empty()) << e.name;
  }
}

TEST(Exec, ArithmeticWrapsAtTheConfiguredWidth) {
  const char* src = "int main() { int a, b; scanf(\"%d %d\", &a, &b); printf(\"%d %d %d\\n\", a + b, a * b, -a); return 0; }";
  EXPECT_EQ(run(src, {100, 100}, 8).output, (Out{-56, 16, -100}));
  EXPECT_EQ(run(src, {30000, 30000}, 16).output, (Out{-5536, -5888, -30000}));
  EXPECT_EQ(run(src, {30000, 30000}, 32).output, (Out{60000, 900000000, -30000}));
  // inputs are wrapped on entry
  EXPECT_EQ(run(src, {200, 0}, 8).output, (Out{-56, 0, 56}));
}

TEST(Exec, DivisionTruncatesTowardZeroAndIsTotal) {
  const char* src = "int main() { int a, b; scanf(\"%d %d\", &a, &b); printf(\"%d %d\\n\", a / b, a % b); return 0; }";
  EXPECT_EQ(run(src, {-7, 2}).output, (Out{-3, -1}));
  EXPECT_EQ(run(src, {7, -2}).output, (Out{-3, 1}));
  EXPECT_EQ(run(src, {5, 0}).output, (Out{0, 0}));
  EXPECT_EQ(run(src, {-128, -1}, 8).output, (Out{-128, 0}));
}

TEST(Exec, ShortCircuitEvaluation) {
  const char* src = R"(
int main() {
  int a[2] = {4, 5};
  int i;
  scanf("%d", &i);
  if (i < 2 && a[i] > 4) printf("%d\n", 1);
  if (i >= 2 || a[i] == 4) printf("%d\n", 2);
  return 0;
}
)";
  EXPECT_EQ(run(src, {1}).output, (Out{1}));
  EXPECT_EQ(run(src, {0}).output, (Out{2}));
  EXPECT_EQ(run(src, {7}).output, (Out{2}));
}

TEST(Exec, NonTerminationHitsTheLoopLimit) {
  ExecResult r = run("int main() { int x = 0; while (1) { x++; } return 0; }", {}, 16, 8);
  EXPECT_EQ(r.status, ExecStatus::StepLimitExceeded);
  // exactly unwind iterations are allowed
  const char* loop = "int main() { int i, n; scanf(\"%d\", &n); for (i = 0; i < n; i++) printf(\"%d\\n\", i); return 0; }";
  EXPECT_EQ(run(loop, {3}, 16, 3).status, ExecStatus::Completed);
  EXPECT_EQ(run(loop, {4}, 16, 3).status, ExecStatus::StepLimitExceeded);
}

TEST(Exec, RuntimeFaults) {
  ExecResult r = run("int main() { int x, y; scanf(\"%d %d\", &x, &y); return 0; }", {1});
  EXPECT_EQ(r.status, ExecStatus::RuntimeFault);
  EXPECT_EQ(r.fault, FaultKind::InputUnderrun);
  r = run("int main() { int a[2]; int i; scanf(\"%d\", &i); a[i] = 1; return 0; }", {2});
  EXPECT_EQ(r.status, ExecStatus::RuntimeFault);
  EXPECT_EQ(r.fault, FaultKind::IndexOutOfBounds);
}

TEST(Exec, ReturnFromMainStopsOutput) {
  const char* src = "int main() { int x; scanf(\"%d\", &x); if (x > 0) return 0; printf(\"%d\\n\", x); return 0; }";
  EXPECT_EQ(run(src, {1}).output, Out{});
  EXPECT_EQ(run(src, {-1}).output, Out{-1});
}

TEST(Exec, OverLimitFailingTestsAreFlagged) {
  Program p = parse_program("int main() { int n; scanf(\"%d\", &n); while (n > 0) n--; printf(\"%d\\n\", 1); return 0; }");
  TestSuite s;
  s.tests.push_back({"t0", {2}, {0}});
  s.tests.push_back({"t1", {50}, {0}});
  s.tests.push_back({"t2", {1}, {1}});
  Classification c = classify_tests(p, s, Limits{4, 100000});
  EXPECT_EQ(c.passing.size(), 1u);
  EXPECT_EQ(c.failing.size(), 2u);
  EXPECT_EQ(c.over_limit, std::vector<std::string>{"t1"});
}

TEST(Exec, RejectsNonPositiveLimits) {
  Program p = parse_program(max3_source());
  EXPECT_THROW(run_concrete(p, Out{1, 2, 3}, Limits{0, 10}), std::invalid_argument);
}
