#pragma once

#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "bitblast.hpp"
#include "errors.hpp"
#include "transform.hpp"

namespace faultloc {

struct SoftClause {
  std::vector<int> lits;
  std::uint64_t weight = 1;
};

/// Weighted partial CNF: hard clauses must hold, soft clauses carry a cost when falsified.
struct Wcnf {
  int num_vars = 0;
  std::vector<std::vector<int>> hard;
  std::vector<SoftClause> soft;

  std::uint64_t total_soft_weight() const {
    std::uint64_t s = 0;
    for (const auto& c : soft) s += c.weight;
    return s;
  }
  /// Weight marking hard clauses in the DIMACS encoding.
  std::uint64_t top() const { return total_soft_weight() + 1; }
};

inline bool clause_satisfied(const std::vector<int>& c, const Model& m) {
  for (int l : c)
    if (lit_value(m, l)) return true;
  return false;
}

/// Hard part is the trace formula; one positive unit soft per healthy variable.
inline Wcnf build_wcnf(const CnfFormula& cnf, const ComponentTable& table) {
  Wcnf w;
  w.num_vars = cnf.num_vars;
  w.hard = cnf.clauses;
  for (const auto& c : table.components) {
    auto i = static_cast<std::size_t>(c.id);
    if (i >= cnf.healthy_vars.size() || cnf.healthy_vars[i] <= 0 || cnf.healthy_vars[i] > cnf.num_vars)
      throw MissingVarError("component " + std::to_string(c.id) + " has no CNF variable");
    w.soft.push_back({{cnf.healthy_vars[i]}, c.weight});
  }
  return w;
}

// ---------------------------------------------------------------------------
// DIMACS

namespace detail {

inline void write_clause(std::ostream& out, const std::vector<int>& c) {
  for (int l : c) out << l << ' ';
  out << "0\n";
}

inline std::vector<std::string> dimacs_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == 'c') continue;
    lines.push_back(line.substr(b));
  }
  return lines;
}

inline long long parse_number(const std::string& tok) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(tok, &pos);
    if (pos != tok.size()) throw FormatError("bad number '" + tok + "'");
    return v;
  } catch (const std::logic_error&) {
    throw FormatError("bad number '" + tok + "'");
  }
}

inline std::vector<int> parse_literals(std::istringstream& ss, int& max_var) {
  std::vector<int> c;
  std::string tok;
  bool closed = false;
  while (ss >> tok) {
    long long v = parse_number(tok);
    if (v == 0) {
      closed = true;
      break;
    }
    if (v > std::numeric_limits<int>::max() || v < -std::numeric_limits<int>::max())
      throw FormatError("literal out of range");
    c.push_back(static_cast<int>(v));
    max_var = std::max(max_var, static_cast<int>(v < 0 ? -v : v));
  }
  if (!closed) throw FormatError("clause not terminated by 0");
  return c;
}

}  // namespace detail

inline void write_cnf(std::ostream& out, int num_vars, const std::vector<std::vector<int>>& clauses) {
  out << "p cnf " << num_vars << ' ' << clauses.size() << '\n';
  for (const auto& c : clauses) detail::write_clause(out, c);
}

inline void write_cnf(std::ostream& out, const CnfFormula& f) { write_cnf(out, f.num_vars, f.clauses); }

inline CnfFormula read_cnf(std::istream& in) {
  auto lines = detail::dimacs_lines(in);
  if (lines.empty()) throw FormatError("missing 'p cnf' header");
  std::istringstream hdr(lines[0]);
  std::string p, kind;
  long long nv = 0, nc = 0;
  if (!(hdr >> p >> kind >> nv >> nc) || p != "p" || kind != "cnf" || nv < 0 || nc < 0)
    throw FormatError("malformed 'p cnf' header");
  CnfFormula f;
  f.num_vars = static_cast<int>(nv);
  int max_var = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::istringstream ss(lines[i]);
    f.clauses.push_back(detail::parse_literals(ss, max_var));
  }
  if (max_var > f.num_vars) throw FormatError("literal exceeds declared variable count");
  if (static_cast<long long>(f.clauses.size()) != nc) throw FormatError("clause count does not match header");
  return f;
}

/// Classic weighted format: `p wcnf <vars> <clauses> <top>`, hard clauses weighted `top`.
inline void write_wcnf(std::ostream& out, const Wcnf& w) {
  std::uint64_t top = w.top();
  out << "p wcnf " << w.num_vars << ' ' << w.hard.size() + w.soft.size() << ' ' << top << '\n';
  for (const auto& c : w.hard) {
    out << top << ' ';
    detail::write_clause(out, c);
  }
  for (const auto& s : w.soft) {
    out << s.weight << ' ';
    detail::write_clause(out, s.lits);
  }
}

/// Reads the classic `p wcnf` format and the header-less format with `h` hard lines.
inline Wcnf read_wcnf(std::istream& in) {
  auto lines = detail::dimacs_lines(in);
  Wcnf w;
  int max_var = 0;
  bool classic = !lines.empty() && lines[0][0] == 'p';
  std::uint64_t top = std::numeric_limits<std::uint64_t>::max();
  long long declared_vars = -1, declared_clauses = -1;
  std::size_t start = 0;
  if (classic) {
    std::istringstream hdr(lines[0]);
    std::string p, kind, top_tok;
    if (!(hdr >> p >> kind >> declared_vars >> declared_clauses) || kind != "wcnf" || declared_vars < 0)
      throw FormatError("malformed 'p wcnf' header");
    if (hdr >> top_tok) top = static_cast<std::uint64_t>(detail::parse_number(top_tok));
    start = 1;
  }
  for (std::size_t i = start; i < lines.size(); ++i) {
    std::istringstream ss(lines[i]);
    std::string first;
    ss >> first;
    if (first == "h") {
      w.hard.push_back(detail::parse_literals(ss, max_var));
      continue;
    }
    long long weight = detail::parse_number(first);
    if (weight <= 0) throw FormatError("clause weight must be positive");
    auto lits = detail::parse_literals(ss, max_var);
    if (static_cast<std::uint64_t>(weight) >= top)
      w.hard.push_back(std::move(lits));
    else
      w.soft.push_back({std::move(lits), static_cast<std::uint64_t>(weight)});
  }
  if (classic) {
    if (max_var > declared_vars) throw FormatError("literal exceeds declared variable count");
    if (static_cast<long long>(w.hard.size() + w.soft.size()) != declared_clauses)
      throw FormatError("clause count does not match header");
    w.num_vars = static_cast<int>(declared_vars);
  } else {
    w.num_vars = max_var;
  }
  return w;
}

}  // namespace faultloc
