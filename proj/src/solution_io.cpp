#include "solution_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "error.hpp"

namespace moep {

namespace {

std::string number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string quoted(const std::string& s) { return nlohmann::json(s).dump(); }

std::string array(std::span<const double> v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + number(v[i]);
  return out + "]";
}

}  // namespace

std::string solution_json(const Problem& p, const RunReport& r) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"solver\": {\"name\": \"moep\", \"version\": " << quoted(MOEP_VERSION_STRING)
      << ", \"oracle\": " << quoted(r.oracle) << "},\n";
  out << "  \"input\": " << quoted(r.input) << ",\n";
  out << "  \"status\": " << quoted(r.status) << ",\n";
  out << "  \"exact\": " << (r.exact ? "true" : "false") << ",\n";
  out << "  \"epsilon\": " << number(r.epsilon) << ",\n";
  out << "  \"normalized\": " << (r.normalized ? "true" : "false") << ",\n";
  out << "  \"objectives\": [";
  for (std::size_t i = 0; i < p.num_objectives(); ++i)
    out << (i ? ", " : "") << "{\"name\": " << quoted(p.objectives[i].name)
        << ", \"sense\": " << (p.objectives[i].sense == ObjSense::Min ? "\"min\"" : "\"max\"") << "}";
  out << "],\n";
  out << "  \"ideal_point\": " << array(r.ideal_point) << ",\n";
  out << "  \"statistics\": {\"oracle_calls\": " << r.stats.oracle_calls << ", \"iterations\": " << r.stats.iterations
      << ", \"cuts\": " << r.stats.cuts << ", \"confirms\": " << r.stats.confirms
      << ", \"suppressed\": " << r.stats.suppressed << ", \"degeneracy_events\": " << r.stats.degeneracy_events
      << ", \"dual_vertices\": " << r.stats.final_vertices << ", \"dual_facets\": " << r.stats.final_facets
      << ", \"seconds\": " << number(r.seconds) << "},\n";
  out << "  \"points\": [";
  for (std::size_t k = 0; k < r.points.size(); ++k) {
    const OutcomePoint& pt = r.points[k];
    out << (k ? ",\n" : "\n") << "    {\"y\": " << array(pt.y);
    if (pt.certifying_weight) out << ", \"weight\": " << array(*pt.certifying_weight);
    out << ", \"x\": {";
    for (std::size_t j = 0; j < pt.x.size() && j < p.num_variables(); ++j)
      out << (j ? ", " : "") << quoted(p.variables[j].name) << ": " << number(pt.x[j]);
    out << "}}";
  }
  out << (r.points.empty() ? "]\n" : "\n  ]\n");
  out << "}\n";
  return out.str();
}

std::string oracle_report(const OracleCounters& c) {
  std::ostringstream out;
  out << "oracle " << c.oracle << '\n'
      << "calls " << c.calls << '\n'
      << "lp_solves " << c.lp_solves << '\n'
      << "simplex_pivots " << c.pivots << '\n'
      << "bb_nodes " << c.nodes << '\n';
  return out.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error(ErrorCode::Io, "error while writing '" + path.string() + "'");
}

}  // namespace moep
