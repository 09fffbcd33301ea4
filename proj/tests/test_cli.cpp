#include <gtest/gtest.h>

#include <sys/wait.h>

#include "support.hpp"

#ifndef FAULTLOC_CLI
#error "FAULTLOC_CLI must be defined"
#endif

using namespace testing_support;
using ordered_json = nlohmann::ordered_json;

namespace {

struct CliRun {
  int code = -1;
  std::string out, err;
};

fs::path scratch(const std::string& name) {
  fs::path d = fs::temp_directory_path() / ("faultloc_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

CliRun cli(const std::string& args, const fs::path& dir) {
  fs::path out = dir / "stdout.txt", err = dir / "stderr.txt";
  std::string cmd = std::string("\"") + FAULTLOC_CLI + "\" " + args + " >\"" + out.string() + "\" 2>\"" + err.string() + "\"";
  int status = std::system(cmd.c_str());
  CliRun r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_file(out);
  r.err = read_file(err);
  return r;
}

fs::path max3_tests(const fs::path& dir) {
  fs::path t = dir / "tests";
  fs::create_directories(t);
  int i = 0;
  for (const auto& tc : max3_suite().tests) {
    std::ofstream in(t / ("t" + std::to_string(i) + ".in")), out(t / ("t" + std::to_string(i) + ".out"));
    for (auto v : tc.inputs) in << v << ' ';
    for (auto v : tc.expected_output) out << v << ' ';
    ++i;
  }
  return t;
}

std::string max3_args(const fs::path& dir) {
  return "run --program-path \"" + (corpus_dir() / "max3" / "program.c").string() + "\" --tests-dir \"" +
         max3_tests(dir).string() + "\" --unwind 1";
}

}  // namespace

TEST(Report, EmptyDiagnosesAndOrderedFields) {
  DiagnosisReport r;
  r.strategy = "cfaults";
  Config cfg;
  ordered_json j = reports_to_json({r}, cfg);
  EXPECT_EQ(j["schema"], "1");
  EXPECT_TRUE(j["cfaults"]["diagnoses"].is_array());
  EXPECT_TRUE(j["cfaults"]["diagnoses"].empty());
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"schema", "config", "cfaults"}));
  ordered_json no_time = report_to_json(r, ReportOptions{false});
  EXPECT_FALSE(no_time.contains("wall_time_s"));
  EXPECT_TRUE(report_to_json(r).contains("wall_time_s"));
}

TEST(Report, Max3SectionsAndSortedLines) {
  Program p = parse_program(max3_source());
  Config cfg = max3_config();
  std::vector<DiagnosisReport> reports{localize_cfaults(p, max3_suite(), cfg),
                                       localize_sniper(p, max3_suite(), cfg)};
  ordered_json j = reports_to_json(reports, cfg, ReportOptions{false});
  EXPECT_TRUE(j.contains("cfaults"));
  EXPECT_TRUE(j.contains("sniper"));
  EXPECT_EQ(j["cfaults"]["diagnoses"][0]["lines"], ordered_json::parse("[5,8,11]"));
  EXPECT_EQ(j["cfaults"]["diagnoses"][0]["components"][0]["kind"], "if-condition");
  EXPECT_EQ(j["cfaults"]["diagnoses"][0]["components"][0]["relaxation_var"], "_rv4");
  EXPECT_EQ(j["sniper"]["per_test_counts"].size(), 3u);
  std::string summary = format_summary(reports);
  EXPECT_NE(summary.find("cfaults\t#1\tcost 3\tlines {5, 8, 11}"), std::string::npos);
}

TEST(Report, EmitWritesAndFailsOnBadPath) {
  fs::path d = scratch("emit");
  DiagnosisReport r;
  r.strategy = "cfaults";
  emit_report({r}, Config{}, (d / "r.json").string());
  EXPECT_EQ(ordered_json::parse(read_file(d / "r.json"))["schema"], "1");
  EXPECT_THROW(emit_report({r}, Config{}, (d / "missing" / "r.json").string()), IoError);
}

TEST(Cli, Max3CfaultsExitsZero) {
  fs::path d = scratch("max3");
  CliRun r = cli(max3_args(d) + " --strategy cfaults", d);
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = ordered_json::parse(r.out);
  ASSERT_EQ(j["cfaults"]["diagnoses"].size(), 1u);
  EXPECT_EQ(j["cfaults"]["diagnoses"][0]["lines"], ordered_json::parse("[5,8,11]"));
  EXPECT_EQ(j["config"]["unwind"], 1);
}

TEST(Cli, AllStrategiesInOneReport) {
  fs::path d = scratch("all");
  CliRun r = cli(max3_args(d) + " --strategy all --refine --output-path \"" + (d / "r.json").string() + "\"", d);
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = ordered_json::parse(read_file(d / "r.json"));
  for (const char* s : {"cfaults", "cfaults-refined", "bugassist", "sniper"}) EXPECT_TRUE(j.contains(s)) << s;
  EXPECT_GE(j["sniper"]["unique_aggregated_count"].get<std::size_t>(), j["cfaults"]["diagnoses"].size());
}

TEST(Cli, RerunsWithoutTimingsAreByteIdentical) {
  fs::path d = scratch("rerun");
  std::string args = max3_args(d) + " --strategy all --seed 3 --no-timings";
  CliRun a = cli(args, d);
  CliRun b = cli(args, d);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.find("wall_time_s"), std::string::npos);
}

TEST(Cli, SummaryTable) {
  fs::path d = scratch("summary");
  CliRun r = cli(max3_args(d) + " --summary", d);
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "cfaults\t#1\tcost 3\tlines {5, 8, 11}\n");
}

TEST(Cli, EmitsWcnf) {
  fs::path d = scratch("wcnf");
  std::string base = (d / "out").string();
  CliRun r = cli(max3_args(d) + " --emit-wcnf --output-path \"" + base + ".json\"", d);
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(base + ".json.wcnf");
  ASSERT_TRUE(in.good());
  Wcnf w = read_wcnf(in);
  EXPECT_EQ(w.soft.size(), 9u);
  EXPECT_EQ(maxsat_optimum(w).cost, 3u);
}

TEST(Cli, InputErrorsExitThree) {
  fs::path d = scratch("input");
  EXPECT_EQ(cli("run --program-path \"" + (corpus_dir() / "max3" / "program.c").string() +
                    "\" --tests-dir \"" + (d / "nope").string() + "\"",
                d)
                .code,
            3);
  EXPECT_EQ(cli("run --program-path \"" + (d / "nope.c").string() + "\" --tests-dir \"" +
                    max3_tests(d).string() + "\"",
                d)
                .code,
            3);
  std::ofstream(d / "bad.c") << "int main() { float x; return 0; }\n";
  CliRun r = cli("run --program-path \"" + (d / "bad.c").string() + "\" --tests-dir \"" + max3_tests(d).string() +
                     "\"",
                 d);
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("float"), std::string::npos);
  EXPECT_EQ(cli(max3_args(d) + " --width 12", d).code, 3);
  EXPECT_EQ(cli(max3_args(d) + " --strategy nonsense", d).code, 3);
  EXPECT_EQ(cli("", d).code, 3);
}

TEST(Cli, ResourceErrorsExitTwo) {
  fs::path d = scratch("resource");
  CliRun r = cli(max3_args(d) + " --strategy sniper --product-cap 5", d);
  EXPECT_EQ(r.code, 2);
  auto j = ordered_json::parse(r.out);
  EXPECT_TRUE(j["sniper"].contains("error"));
}

TEST(Cli, UnrepairableProgramExitsOne) {
  fs::path d = scratch("unrepairable");
  std::ofstream(d / "p.c") << "int main() {\n  return 0;\n}\n";
  fs::create_directories(d / "tests");
  std::ofstream(d / "tests" / "t0.in") << "";
  std::ofstream(d / "tests" / "t0.out") << "5\n";
  CliRun r = cli("run --program-path \"" + (d / "p.c").string() + "\" --tests-dir \"" + (d / "tests").string() + "\"", d);
  EXPECT_EQ(r.code, 1) << r.err;
}

TEST(Cli, ExecSubcommand) {
  fs::path d = scratch("exec");
  CliRun r = cli("exec --program-path \"" + (corpus_dir() / "max3" / "program.c").string() + "\" --input \"6 2 1\"", d);
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "completed\t[1]\n");
}
