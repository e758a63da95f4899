#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dual_benson.hpp"
#include "model.hpp"

namespace moep {

struct RunReport {
  std::string input;
  std::string status;  // complete | iteration_limit | node_limit
  bool exact = true;
  double epsilon = 0.0;
  bool normalized = true;
  std::string oracle = "builtin";
  std::vector<double> ideal_point;
  std::vector<OutcomePoint> points;
  SolveStats stats;
  double seconds = 0.0;
};

/// `_sol` document; see schema/sol.schema.json. Numbers carry 17
/// significant digits. Variable and objective names come from `p`.
std::string solution_json(const Problem& p, const RunReport& r);

struct OracleCounters {
  std::string oracle = "builtin";
  std::size_t calls = 0;
  std::size_t lp_solves = 0;
  std::size_t pivots = 0;
  std::size_t nodes = 0;
};

/// `_oracle` file: one "key value" pair per line.
std::string oracle_report(const OracleCounters& c);

/// Throws Error(Io).
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace moep
