#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "diagnose.hpp"
#include "errors.hpp"

namespace faultloc {

using ordered_json = nlohmann::ordered_json;

struct ReportOptions {
  bool timings = true;  // wall-clock fields make reruns differ
};

inline ordered_json diagnosis_to_json(const Diagnosis& d, const ComponentTable& table) {
  ordered_json j;
  j["lines"] = d.lines;
  ordered_json comps = ordered_json::array();
  for (int c : d.components) {
    const Component& comp = table[static_cast<std::size_t>(c)];
    comps.push_back({{"id", comp.id},
                     {"line", comp.line},
                     {"kind", to_string(comp.kind)},
                     {"relaxation_var", comp.healthy_var()},
                     {"weight", comp.weight}});
  }
  j["components"] = comps;
  j["cost"] = d.cost;
  return j;
}

inline ordered_json report_to_json(const DiagnosisReport& r, const ReportOptions& opts = {}) {
  ordered_json j;
  j["failing_tests"] = r.failing_tests;
  j["excluded_tests"] = r.excluded_tests;
  j["component_count"] = r.table.size();
  ordered_json ds = ordered_json::array();
  for (const auto& d : r.diagnoses) ds.push_back(diagnosis_to_json(d, r.table));
  j["diagnoses"] = ds;
  j["optimum_cost"] = r.optimum_cost;
  j["unique_aggregated_count"] = r.unique_aggregated_count;
  ordered_json counts = ordered_json::object();
  for (const auto& [id, n] : r.per_test_counts) counts[id] = n;
  j["per_test_counts"] = counts;
  j["solver"] = {{"sat_calls", r.stats.sat_calls},
                 {"cores", r.stats.cores},
                 {"conflicts", r.stats.conflicts},
                 {"maxsat_solutions", r.stats.solutions},
                 {"cnf_vars", r.cnf_vars},
                 {"cnf_clauses", r.cnf_clauses}};
  if (opts.timings) j["wall_time_s"] = r.wall_time;
  j["warnings"] = r.warnings;
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

inline ordered_json config_to_json(const Config& cfg) {
  return {{"program", cfg.program_path},
          {"tests", cfg.tests_dir},
          {"strategy", cfg.strategy},
          {"refine", cfg.refine},
          {"unwind", cfg.unwind},
          {"width", cfg.width},
          {"io_multiplier", cfg.io_multiplier},
          {"mcs_limit", cfg.mcs_limit},
          {"product_cap", cfg.product_cap},
          {"conflict_budget", cfg.conflict_budget},
          {"seed", cfg.seed},
          {"unwind_assert", cfg.unwind_assert}};
}

/// One document with a section per strategy, keyed by strategy name.
inline ordered_json reports_to_json(const std::vector<DiagnosisReport>& reports, const Config& cfg,
                                    const ReportOptions& opts = {}) {
  ordered_json j;
  j["schema"] = "1";
  j["config"] = config_to_json(cfg);
  for (const auto& r : reports) j[r.strategy] = report_to_json(r, opts);
  return j;
}

inline void emit_report(const std::vector<DiagnosisReport>& reports, const Config& cfg, const std::string& path,
                        const ReportOptions& opts = {}) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write report to " + path);
  out << reports_to_json(reports, cfg, opts).dump(2) << '\n';
  if (!out) throw IoError("failed writing report to " + path);
}

/// Human-readable table: one line per diagnosis.
inline std::string format_summary(const std::vector<DiagnosisReport>& reports) {
  std::ostringstream out;
  for (const auto& r : reports) {
    if (r.diagnoses.empty()) {
      out << r.strategy << "\t-\tno diagnoses\n";
      continue;
    }
    for (std::size_t i = 0; i < r.diagnoses.size(); ++i) {
      const auto& d = r.diagnoses[i];
      out << r.strategy << "\t#" << i + 1 << "\tcost " << d.cost << "\tlines {";
      for (std::size_t k = 0; k < d.lines.size(); ++k) out << (k ? ", " : "") << d.lines[k];
      out << "}\n";
    }
  }
  return out.str();
}

}  // namespace faultloc
