// faultloc: command-line driver for the fault localizer.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "faultloc/faultloc.hpp"

namespace fs = std::filesystem;
using namespace faultloc;

namespace {

enum ExitCode { kOk = 0, kLocalizationFailure = 1, kResourceError = 2, kInputError = 3 };

Program load_program(const std::string& path) { return parse_program(read_file(path)); }

int exit_code_for(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const NoConsistentDiagnosis&) {
    return kLocalizationFailure;
  } catch (const HardUnsatError&) {
    return kLocalizationFailure;
  } catch (const ResourceError&) {
    return kResourceError;
  } catch (const CapacityError&) {
    return kResourceError;
  } catch (const CapTooLarge&) {
    return kResourceError;
  } catch (const std::bad_alloc&) {
    return kResourceError;
  } catch (...) {
    return kInputError;
  }
}

std::string message_of(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const std::exception& x) {
    return x.what();
  } catch (...) {
    return "unknown error";
  }
}

std::string join(const std::vector<std::int64_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

int run(const Config& cfg, bool summary, bool timings) {
  Program ast;
  TestSuite suite;
  try {
    if (!fs::is_regular_file(cfg.program_path)) throw IoError("program not found: " + cfg.program_path);
    ast = load_program(cfg.program_path);
    suite = load_test_suite(cfg.tests_dir);
  } catch (const std::exception& e) {
    std::cerr << "faultloc: " << e.what() << '\n';
    return kInputError;
  }

  std::vector<DiagnosisReport> reports;
  int code = kOk;
  auto attempt = [&](const std::string& name, auto&& fn) -> DiagnosisReport* {
    try {
      reports.push_back(fn());
      return &reports.back();
    } catch (...) {
      auto e = std::current_exception();
      int c = exit_code_for(e);
      std::cerr << "faultloc: " << name << ": " << message_of(e) << '\n';
      if (c == kInputError) {
        code = kInputError;
        return nullptr;
      }
      if (code == kOk) code = c;
      DiagnosisReport r;
      r.strategy = name;
      r.error = message_of(e);
      reports.push_back(std::move(r));
      return nullptr;
    }
  };

  bool all = cfg.strategy == "all";
  if (all || cfg.strategy == "cfaults") {
    DiagnosisReport* base = attempt("cfaults", [&] { return localize_cfaults(ast, suite, cfg); });
    if (cfg.refine && base) {
      DiagnosisReport copy = *base;
      attempt("cfaults-refined", [&] { return localize_cfaults_refined(ast, suite, cfg, &copy); });
    }
  }
  if (code == kInputError) return code;
  if (all || cfg.strategy == "bugassist") attempt("bugassist", [&] { return localize_bugassist(ast, suite, cfg); });
  if (all || cfg.strategy == "sniper") attempt("sniper", [&] { return localize_sniper(ast, suite, cfg); });
  if (code == kInputError) return code;

  if (cfg.emit_wcnf) {
    try {
      auto obs = detail::observe(ast, suite, cfg);
      if (!obs.failing.empty()) {
        Encoding enc = encode_program(ast, obs.failing, cfg);
        std::string base = cfg.output_path.empty() ? fs::path(cfg.program_path).stem().string() : cfg.output_path;
        std::ofstream out(base + ".wcnf");
        if (!out) throw IoError("cannot write " + base + ".wcnf");
        write_wcnf(out, enc.wcnf);
      }
    } catch (const std::exception& e) {
      std::cerr << "faultloc: emit-wcnf: " << e.what() << '\n';
      if (code == kOk) code = kResourceError;
    }
  }

  ReportOptions ro;
  ro.timings = timings;
  try {
    if (!cfg.output_path.empty())
      emit_report(reports, cfg, cfg.output_path, ro);
    else if (!summary)
      std::cout << reports_to_json(reports, cfg, ro).dump(2) << '\n';
  } catch (const std::exception& e) {
    std::cerr << "faultloc: " << e.what() << '\n';
    return kInputError;
  }
  if (summary) std::cout << format_summary(reports);
  return code;
}

int exec_tests(const std::string& program, const std::string& tests, const std::string& input, int unwind,
               int width) {
  try {
    Program ast = load_program(program);
    Limits limits{unwind, 1'000'000};
    auto status = [](const ExecResult& r) -> std::string {
      switch (r.status) {
        case ExecStatus::Completed: return "completed";
        case ExecStatus::StepLimitExceeded: return "step-limit";
        case ExecStatus::RuntimeFault:
          return r.fault == FaultKind::InputUnderrun ? "fault:input-underrun" : "fault:index-out-of-bounds";
      }
      return "?";
    };
    if (!tests.empty()) {
      TestSuite suite = load_test_suite(tests);
      for (const auto& t : suite.tests) {
        ExecResult r = run_concrete(ast, t.inputs, limits, width);
        std::cout << t.id << '\t' << (test_passes(r, t, width) ? "PASS" : "FAIL") << '\t' << status(r)
                  << "\toutput [" << join(r.output) << "]\texpected [" << join(t.expected_output) << "]\n";
      }
    } else {
      ExecResult r = run_concrete(ast, parse_integers(input, "--input"), limits, width);
      std::cout << status(r) << "\t[" << join(r.output) << "]\n";
    }
    return kOk;
  } catch (const std::exception& e) {
    std::cerr << "faultloc: " << e.what() << '\n';
    return kInputError;
  }
}

int show_instrumented(const std::string& program, const std::string& tests, int unwind, int width) {
  try {
    Program ast = load_program(program);
    TestSuite suite = load_test_suite(tests);
    auto c = classify_tests(ast, suite, Limits{unwind, 1'000'000}, width);
    if (c.failing.empty()) {
      std::cout << print_program(ast);
      return kOk;
    }
    InstrumentOptions io;
    io.unwind = unwind;
    std::cout << print_instrumented(instrument(unroll(ast, c.failing), io));
    return kOk;
  } catch (const std::exception& e) {
    std::cerr << "faultloc: " << e.what() << '\n';
    return kInputError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Formula-based fault localization for MiniC programs"};
  app.require_subcommand(1);

  Config cfg;
  bool summary = false;
  bool no_timings = false;
  auto* run_cmd = app.add_subcommand("run", "Localize faults and write a JSON report");
  run_cmd->add_option("--program-path", cfg.program_path, "MiniC source file")->required();
  run_cmd->add_option("--tests-dir", cfg.tests_dir, "Directory of tN.in / tN.out files")->required();
  run_cmd->add_option("--strategy", cfg.strategy, "cfaults, bugassist, sniper or all")
      ->check(CLI::IsMember({"cfaults", "bugassist", "sniper", "all"}));
  run_cmd->add_flag("--refine", cfg.refine, "Also run sub-expression refinement of the first diagnosis");
  run_cmd->add_option("--unwind", cfg.unwind, "Loop unwinding bound")->check(CLI::PositiveNumber);
  run_cmd->add_option("--width", cfg.width, "Integer bit width")->check(CLI::IsMember({8, 16, 32}));
  run_cmd->add_option("--io-multiplier", cfg.io_multiplier, "Weight factor for input/output statements")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--mcs-limit", cfg.mcs_limit, "MCSes per failing test for the baselines (0 = all)");
  run_cmd->add_option("--product-cap", cfg.product_cap, "Maximum Cartesian product size for sniper")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--conflict-budget", cfg.conflict_budget, "SAT conflicts per call (negative = unlimited)");
  run_cmd->add_option("--seed", cfg.seed, "Solver seed");
  run_cmd->add_option("--output-path", cfg.output_path, "Report file (default: standard output)");
  run_cmd->add_flag("--emit-wcnf", cfg.emit_wcnf, "Write the cfaults instance as DIMACS WCNF");
  run_cmd->add_flag("--unwind-assert", cfg.unwind_assert, "Treat insufficient unwinding as a failing path");
  run_cmd->add_flag("--summary", summary, "Print one line per diagnosis");
  run_cmd->add_flag("--no-timings", no_timings, "Omit wall-clock times so reruns are byte-identical");

  std::string program, tests, input;
  int unwind = 8, width = 16;
  auto* exec_cmd = app.add_subcommand("exec", "Run a program on a test suite or a single input");
  exec_cmd->add_option("--program-path", program)->required();
  auto* tests_opt = exec_cmd->add_option("--tests-dir", tests);
  exec_cmd->add_option("--input", input, "Whitespace-separated integers")->excludes(tests_opt);
  exec_cmd->add_option("--unwind", unwind)->check(CLI::PositiveNumber);
  exec_cmd->add_option("--width", width)->check(CLI::IsMember({8, 16, 32}));

  auto* inst_cmd = app.add_subcommand("instrument", "Print the unrolled and instrumented program");
  inst_cmd->add_option("--program-path", program)->required();
  inst_cmd->add_option("--tests-dir", tests)->required();
  inst_cmd->add_option("--unwind", unwind)->check(CLI::PositiveNumber);
  inst_cmd->add_option("--width", width)->check(CLI::IsMember({8, 16, 32}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  if (*run_cmd) return run(cfg, summary, !no_timings);
  if (*exec_cmd) return exec_tests(program, tests, input, unwind, width);
  return show_instrumented(program, tests, unwind, width);
}
