#include <gtest/gtest.h>

#include "support.hpp"

using namespace testing_support;

namespace {

int count_kind(const std::vector<Stmt>& stmts, StmtKind k) {
  int n = 0;
  for (const auto& s : stmts) {
    if (s.kind == k) ++n;
    n += count_kind(s.body, k) + count_kind(s.else_body, k) + count_kind(s.for_init, k) + count_kind(s.for_update, k);
  }
  return n;
}

fs::path scratch_dir(const std::string& name) {
  fs::path d = fs::temp_directory_path() / ("faultloc_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST(Parser, Max3Structure) {
  Program p = parse_program(max3_source());
  ASSERT_EQ(p.functions.size(), 1u);
  const FunctionDef& main = p.functions[0];
  EXPECT_EQ(main.name, "main");
  EXPECT_EQ(count_kind(main.body, StmtKind::Input), 3);
  EXPECT_EQ(count_kind(main.body, StmtKind::Output), 3);
  EXPECT_EQ(count_kind(main.body, StmtKind::If), 3);

  std::vector<int> if_lines, out_lines;
  for (const auto& s : main.body)
    if (s.kind == StmtKind::If) {
      if_lines.push_back(s.line);
      ASSERT_EQ(s.body.size(), 1u);
      out_lines.push_back(s.body[0].line);
    }
  EXPECT_EQ(if_lines, (std::vector<int>{5, 8, 11}));
  EXPECT_EQ(out_lines, (std::vector<int>{7, 10, 13}));
}

TEST(Parser, NodeIdsAreUniqueAndDeterministic) {
  Program a = parse_program(max3_source());
  Program b = parse_program(max3_source());
  EXPECT_EQ(print_program(a), print_program(b));
  std::set<int> ids;
  std::function<void(const std::vector<Stmt>&)> walk = [&](const std::vector<Stmt>& ss) {
    for (const auto& s : ss) {
      EXPECT_TRUE(ids.insert(s.node_id).second) << "duplicate node id " << s.node_id;
      walk(s.body);
      walk(s.else_body);
      walk(s.for_init);
      walk(s.for_update);
    }
  };
  walk(a.functions[0].body);
}

TEST(Parser, PrintedProgramReparsesToTheSameText) {
  for (const auto& e : load_corpus()) {
    std::string once = print_program(e.program());
    std::string twice = print_program(parse_program(once));
    EXPECT_EQ(once, twice) << e.name;
  }
}

TEST(Parser, AcceptsTheSupportedSubset) {
  const char* src = R"(
int sq(int x) { return x * x; }
bool pos(int x) { return x > 0; }
void noop() { return; }
int main() {
  int a[3] = {1, 2, 3};
  int i, s = 0;
  bool b = true;
  for (i = 0; i < 3; i++) s += a[i];
  while (s > 10) { s -= 4; }
  if (pos(s) && !b || s % 2 == 0) s = sq(s); else if (s == 1) s = -s; else s++;
  noop();
  printf("%d %d\n", s, a[2]);
  return 0;
}
)";
  Program p = parse_program(src);
  EXPECT_EQ(p.functions.size(), 4u);
  ExecResult r = run_concrete(p, {}, Limits{8, 10000});
  EXPECT_EQ(r.status, ExecStatus::Completed);
  // s = 6 after the loops, even, so s = 36
  EXPECT_EQ(r.output, (std::vector<std::int64_t>{36, 3}));
}

TEST(Parser, SyntaxErrorsCarryPosition) {
  try {
    parse_program("int main() {\n  int x\n  x = 1;\n}\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, 3);
  }
  EXPECT_THROW(parse_program("int main() { /* open"), ParseError);
  EXPECT_THROW(parse_program("int main() { int x = 99999999999999999999; return 0; }"), ParseError);
}

TEST(Parser, RejectsUnsupportedAndIllFormedPrograms) {
  EXPECT_THROW(parse_program("int main() { float x; return 0; }"), SemanticError);
  EXPECT_THROW(parse_program("int main() { int *p; return 0; }"), SemanticError);
  EXPECT_THROW(parse_program("int main() { x = 1; return 0; }"), SemanticError);
  EXPECT_THROW(parse_program("int f() { return 1; }"), SemanticError);
  EXPECT_THROW(parse_program("int f(int n) { return f(n); } int main() { return f(1); }"), SemanticError);
  EXPECT_THROW(parse_program("int main() { int x; scanf(\"%d %d\", &x); return 0; }"), SemanticError);
  EXPECT_THROW(parse_program("int main() { printf(\"%f\\n\", 1); return 0; }"), SemanticError);
  EXPECT_THROW(parse_program("int main() { int x; int x; return 0; }"), SemanticError);
}

TEST(TestSuiteLoader, LoadsPairedFilesInNumericOrder) {
  fs::path d = scratch_dir("suite");
  write(d / "t10.in", "5\n");
  write(d / "t10.out", "50\n");
  write(d / "t2.in", "1 -2\n3\n");
  write(d / "t2.out", "");
  write(d / "README", "ignored");
  TestSuite s = load_test_suite(d);
  ASSERT_EQ(s.tests.size(), 2u);
  EXPECT_EQ(s.tests[0].id, "t2");
  EXPECT_EQ(s.tests[0].inputs, (std::vector<std::int64_t>{1, -2, 3}));
  EXPECT_TRUE(s.tests[0].expected_output.empty());
  EXPECT_EQ(s.tests[1].id, "t10");
  EXPECT_EQ(s.tests[1].expected_output, (std::vector<std::int64_t>{50}));
}

TEST(TestSuiteLoader, ReportsMalformedSuites) {
  EXPECT_THROW(load_test_suite(fs::temp_directory_path() / "faultloc_no_such_dir"), IoError);
  fs::path d = scratch_dir("unpaired");
  write(d / "t0.in", "1\n");
  EXPECT_THROW(load_test_suite(d), FormatError);
  fs::path e = scratch_dir("badtoken");
  write(e / "t0.in", "1 x\n");
  write(e / "t0.out", "1\n");
  EXPECT_THROW(load_test_suite(e), FormatError);
}

TEST(TestSuiteLoader, CorpusSuitesMatchTheManifest) {
  for (const auto& e : load_corpus()) {
    TestSuite s = e.suite();
    EXPECT_GE(s.tests.size(), 2u) << e.name;
  }
}
