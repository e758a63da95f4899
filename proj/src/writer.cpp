#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "parser.hpp"

namespace moep {

namespace {

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string mps_num(double v) {
  if (std::isinf(v)) return v > 0 ? "1e30" : "-1e30";
  return num(v);
}

void check_lp_name(const std::string& name) {
  auto start_ok = [](unsigned char c) {
    return std::isalpha(c) || c >= 0x80 || std::string_view("_!\"#$%&'(){},;?@`|~").find(c) != std::string_view::npos;
  };
  bool ok = !name.empty() && start_ok(static_cast<unsigned char>(name[0]));
  for (unsigned char c : name) ok = ok && (start_ok(c) || std::isdigit(c) || c == '.');
  if (!ok) throw Error(ErrorCode::UnsupportedProblem, "name '" + name + "' cannot be written in LP format");
}

// " + 3 x" / " - 3 x"
void term(std::ostringstream& out, double coef, const std::string& what, bool first) {
  const bool neg = std::signbit(coef);
  if (first)
    out << (neg ? "- " : "");
  else
    out << (neg ? " - " : " + ");
  out << num(std::abs(coef)) << ' ' << what;
}

void quadratic(std::ostringstream& out, const SquareMatrix& m, const Problem& p, bool first) {
  out << (first ? "[" : " + [");
  bool any = false;
  for (std::size_t i = 0; i < m.n; ++i) {
    for (std::size_t j = i; j < m.n; ++j) {
      const double q = i == j ? m(i, j) : m(i, j) + m(j, i);
      if (q == 0.0) continue;
      const std::string what =
          i == j ? p.variables[i].name + "^2" : p.variables[i].name + " * " + p.variables[j].name;
      term(out, q, what, !any);
      any = true;
    }
  }
  out << " ]";
}

std::string write_lp(const Problem& p) {
  for (const auto& v : p.variables) check_lp_name(v.name);
  for (const auto& o : p.objectives) check_lp_name(o.name);
  for (const auto& c : p.constraints) check_lp_name(c.name);

  bool all_max = !p.objectives.empty();
  for (const auto& o : p.objectives) all_max = all_max && o.sense == ObjSense::Max;

  std::ostringstream out;
  out << (all_max ? "Maximize\n" : "Minimize\n");
  for (std::size_t i = 0; i < p.objectives.size(); ++i) {
    const Objective& o = p.objectives[i];
    out << ' ';
    if (!all_max && o.sense == ObjSense::Max) out << "max ";
    out << o.name << ':';
    bool first = true;
    for (std::size_t k = 0; k < p.num_variables(); ++k) {
      // The first objective lists every variable so the column order survives a round trip.
      if (i != 0 && o.coeffs[k] == 0.0) continue;
      out << ' ';
      term(out, o.coeffs[k], p.variables[k].name, first);
      first = false;
    }
    if (o.quad) {
      out << ' ';
      quadratic(out, *o.quad, p, first);
      first = false;
    }
    if (o.constant != 0.0)
      out << (std::signbit(o.constant) ? " - " : first ? " " : " + ") << num(std::abs(o.constant));
    out << '\n';
  }

  out << "Subject To\n";
  for (const auto& c : p.constraints) {
    out << ' ' << c.name << ':';
    bool first = true;
    for (std::size_t k = 0; k < p.num_variables(); ++k) {
      if (c.coeffs[k] == 0.0) continue;
      out << ' ';
      term(out, c.coeffs[k], p.variables[k].name, first);
      first = false;
    }
    if (c.quad) {
      out << ' ';
      quadratic(out, *c.quad, p, first);
      first = false;
    }
    if (first && !p.variables.empty()) out << " 0 " << p.variables[0].name;
    out << (c.sense == RowSense::Le ? " <= " : c.sense == RowSense::Ge ? " >= " : " = ") << num(c.rhs) << '\n';
  }

  out << "Bounds\n";
  for (const auto& v : p.variables) {
    if (v.lower == -kInf && v.upper == kInf)
      out << ' ' << v.name << " free\n";
    else if (v.lower == v.upper)
      out << ' ' << v.name << " = " << num(v.lower) << '\n';
    else
      out << ' ' << num(v.lower) << " <= " << v.name << " <= " << num(v.upper) << '\n';
  }

  bool any_integer = false;
  for (const auto& v : p.variables) any_integer = any_integer || v.integer;
  if (any_integer) {
    out << "General\n";
    for (const auto& v : p.variables)
      if (v.integer) out << ' ' << v.name << '\n';
  }
  out << "End\n";
  return out.str();
}

std::string write_mps(const Problem& p) {
  if (!p.is_linear()) throw Error(ErrorCode::UnsupportedProblem, "MPS output does not support quadratic terms");
  if (p.objectives.empty()) throw Error(ErrorCode::UnsupportedProblem, "MPS output needs at least one objective");
  const ObjSense sense = p.objectives[0].sense;
  for (const auto& o : p.objectives)
    if (o.sense != sense)
      throw Error(ErrorCode::UnsupportedProblem, "MPS output needs all objectives to share one sense");

  std::set<std::string> rows;
  auto check_name = [&](const std::string& name, bool row) {
    if (name.empty() || name.find_first_of(" \t\r\n") != std::string::npos || name[0] == '*')
      throw Error(ErrorCode::UnsupportedProblem, "name '" + name + "' cannot be written in MPS format");
    if (row && !rows.insert(name).second)
      throw Error(ErrorCode::UnsupportedProblem, "row name '" + name + "' is used twice");
  };
  for (const auto& o : p.objectives) check_name(o.name, true);
  for (const auto& c : p.constraints) check_name(c.name, true);
  for (const auto& v : p.variables) check_name(v.name, false);

  std::ostringstream out;
  out << "NAME moep\n";
  if (sense == ObjSense::Max) out << "OBJSENSE\n    MAX\n";
  out << "ROWS\n";
  for (const auto& o : p.objectives) out << " N  " << o.name << '\n';
  for (const auto& c : p.constraints)
    out << ' ' << (c.sense == RowSense::Le ? 'L' : c.sense == RowSense::Ge ? 'G' : 'E') << "  " << c.name << '\n';

  out << "COLUMNS\n";
  bool in_integer = false;
  std::size_t marker = 0;
  for (std::size_t k = 0; k < p.num_variables(); ++k) {
    const Variable& v = p.variables[k];
    if (v.integer != in_integer) {
      out << "    MARKER" << marker++ << "  'MARKER'  '" << (v.integer ? "INTORG" : "INTEND") << "'\n";
      in_integer = v.integer;
    }
    bool wrote = false;
    for (const auto& o : p.objectives) {
      if (o.coeffs[k] == 0.0) continue;
      out << "    " << v.name << "  " << o.name << "  " << num(o.coeffs[k]) << '\n';
      wrote = true;
    }
    for (const auto& c : p.constraints) {
      if (c.coeffs[k] == 0.0) continue;
      out << "    " << v.name << "  " << c.name << "  " << num(c.coeffs[k]) << '\n';
      wrote = true;
    }
    if (!wrote) out << "    " << v.name << "  " << p.objectives[0].name << "  0\n";
  }
  if (in_integer) out << "    MARKER" << marker++ << "  'MARKER'  'INTEND'\n";

  out << "RHS\n";
  for (const auto& o : p.objectives)
    if (o.constant != 0.0) out << "    RHS  " << o.name << "  " << num(-o.constant) << '\n';
  for (const auto& c : p.constraints)
    if (c.rhs != 0.0) out << "    RHS  " << c.name << "  " << num(c.rhs) << '\n';

  out << "BOUNDS\n";
  for (const auto& v : p.variables) {
    const std::string tail = "  BND  " + v.name;
    if (v.lower == -kInf && v.upper == kInf) {
      out << " FR" << tail << '\n';
      continue;
    }
    if (v.lower == v.upper) {
      out << " FX" << tail << "  " << mps_num(v.lower) << '\n';
      continue;
    }
    if (v.lower == -kInf)
      out << " MI" << tail << '\n';
    else if (v.lower != 0.0 || std::signbit(v.lower) || v.upper < 0.0)
      out << " LO" << tail << "  " << mps_num(v.lower) << '\n';
    if (v.upper != kInf) out << " UP" << tail << "  " << mps_num(v.upper) << '\n';
  }
  out << "ENDATA\n";
  return out.str();
}

}  // namespace

std::string serialize_problem(const Problem& p, FileFormat format) {
  switch (format) {
    case FileFormat::Mps: return write_mps(p);
    case FileFormat::Lp:
    case FileFormat::Auto: return write_lp(p);
  }
  return write_lp(p);
}

Problem read_problem_file(const std::filesystem::path& path, FileFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (format == FileFormat::Auto) {
    std::string ext = path.extension().string();
    for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    format = (ext == ".mps" || ext == ".mop" || ext == ".fmps") ? FileFormat::Mps : FileFormat::Lp;
  }
  return format == FileFormat::Mps ? parse_mps(text, path.string()) : parse_lp(text, path.string());
}

}  // namespace moep
