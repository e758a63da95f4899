#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>

#include "parser.hpp"

namespace moep {

namespace {

struct Field {
  std::string text;
  std::size_t column;
};

std::vector<Field> split(std::string_view line) {
  std::vector<Field> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    out.push_back({std::string(line.substr(start, i - start)), start + 1});
  }
  return out;
}

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::toupper(c); });
  return out;
}

std::string unquote(std::string_view s) {
  if (s.size() >= 2 && (s.front() == '\'' || s.front() == '"') && s.back() == s.front())
    return std::string(s.substr(1, s.size() - 2));
  return std::string(s);
}

enum class Sec { None, Name, ObjSense, Rows, Columns, Rhs, Ranges, Bounds, End };

struct Row {
  std::string name;
  char type;  // N, L, G, E
  std::size_t index;  // objective or constraint index
};

class MpsParser {
 public:
  MpsParser(std::string_view text, std::string file) : text_(text), file_(std::move(file)) {}

  Problem run();

 private:
  [[noreturn]] void fail(std::size_t column, const std::string& msg) const {
    throw ParseError({file_, line_no_, column}, msg);
  }

  double number(const Field& f) const {
    double v = 0.0;
    const char* first = f.text.data();
    const char* last = first + f.text.size();
    if (!f.text.empty() && *first == '+') ++first;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last || first == last)
      fail(f.column, "malformed number '" + f.text + "'");
    if (std::isnan(v)) fail(f.column, "NaN is not a valid coefficient");
    if (v >= 1e30) return kInf;
    if (v <= -1e30) return -kInf;
    return v;
  }

  const Row& row(const Field& f) const {
    auto it = rows_.find(f.text);
    if (it == rows_.end()) fail(f.column, "undeclared row '" + f.text + "'");
    return it->second;
  }

  std::size_t column(const Field& f) const {
    auto it = col_index_.find(f.text);
    if (it == col_index_.end()) fail(f.column, "unknown column '" + f.text + "'");
    return it->second;
  }

  void header(const std::vector<Field>& f);
  void rows_line(const std::vector<Field>& f);
  void columns_line(const std::vector<Field>& f);
  void rhs_line(const std::vector<Field>& f);
  void ranges_line(const std::vector<Field>& f);
  void bounds_line(const std::vector<Field>& f);

  std::string_view text_;
  std::string file_;
  std::size_t line_no_ = 0;
  Sec sec_ = Sec::None;
  bool seen_rows_ = false;
  bool seen_columns_ = false;
  bool maximize_ = false;
  bool in_integer_ = false;

  std::unordered_map<std::string, Row> rows_;
  std::vector<std::string> objective_names_;
  std::vector<std::pair<std::string, char>> constraint_rows_;
  std::unordered_map<std::string, std::size_t> col_index_;
  std::vector<Variable> vars_;
  std::vector<bool> lower_set_;
  std::optional<std::string> current_column_;
  // Sparse entries keyed by (row index, column); objectives and constraints kept apart.
  std::vector<std::map<std::size_t, double>> obj_entries_;
  std::vector<std::map<std::size_t, double>> con_entries_;
  std::vector<double> obj_constant_;
  std::vector<double> con_rhs_;
  std::map<std::size_t, double> ranges_;
};

void MpsParser::header(const std::vector<Field>& f) {
  const std::string key = upper(f[0].text);
  if (key == "NAME") {
    sec_ = Sec::Name;
  } else if (key == "OBJSENSE") {
    sec_ = Sec::ObjSense;
    if (f.size() > 1) {
      const std::string s = upper(f[1].text);
      if (s == "MAX" || s == "MAXIMIZE") maximize_ = true;
      else if (s != "MIN" && s != "MINIMIZE") fail(f[1].column, "unknown objective sense '" + f[1].text + "'");
    }
  } else if (key == "ROWS") {
    sec_ = Sec::Rows;
    seen_rows_ = true;
  } else if (key == "COLUMNS") {
    if (!seen_rows_) fail(f[0].column, "missing mandatory section ROWS before COLUMNS");
    sec_ = Sec::Columns;
    seen_columns_ = true;
  } else if (key == "RHS" || key == "RANGES" || key == "BOUNDS") {
    if (!seen_columns_) fail(f[0].column, "missing mandatory section COLUMNS before " + key);
    sec_ = key == "RHS" ? Sec::Rhs : key == "RANGES" ? Sec::Ranges : Sec::Bounds;
  } else if (key == "ENDATA") {
    sec_ = Sec::End;
  } else if (key == "QUADOBJ" || key == "QMATRIX" || key == "QCMATRIX" || key == "QSECTION" || key == "SOS" ||
             key == "INDICATORS" || key == "OBJSENSE2") {
    fail(f[0].column, "unsupported section " + key);
  } else {
    fail(f[0].column, "unknown section '" + f[0].text + "'");
  }
}

void MpsParser::rows_line(const std::vector<Field>& f) {
  if (f.size() != 2) fail(f[0].column, "ROWS entry needs a type and a name");
  const std::string type = upper(f[0].text);
  if (type.size() != 1 || std::string_view("NLGE").find(type[0]) == std::string_view::npos)
    fail(f[0].column, "unknown row type '" + f[0].text + "'");
  const std::string& name = f[1].text;
  if (rows_.count(name)) fail(f[1].column, "duplicate row name '" + name + "'");
  Row r{name, type[0], 0};
  if (r.type == 'N') {
    r.index = objective_names_.size();
    objective_names_.push_back(name);
    obj_entries_.emplace_back();
    obj_constant_.push_back(0.0);
  } else {
    r.index = constraint_rows_.size();
    constraint_rows_.emplace_back(name, r.type);
    con_entries_.emplace_back();
    con_rhs_.push_back(0.0);
  }
  rows_.emplace(name, r);
}

void MpsParser::columns_line(const std::vector<Field>& f) {
  if (f.size() >= 3 && upper(unquote(f[1].text)) == "MARKER") {
    const std::string kind = upper(unquote(f[2].text));
    if (kind == "INTORG") in_integer_ = true;
    else if (kind == "INTEND") in_integer_ = false;
    else fail(f[2].column, "unknown marker '" + f[2].text + "'");
    return;
  }
  if (f.size() != 3 && f.size() != 5) fail(f[0].column, "COLUMNS entry needs a column and one or two row/value pairs");
  const std::string& name = f[0].text;
  if (!current_column_ || *current_column_ != name) {
    if (col_index_.count(name)) fail(f[0].column, "column '" + name + "' is not contiguous");
    col_index_.emplace(name, vars_.size());
    Variable v{name};
    v.integer = in_integer_;
    vars_.push_back(v);
    lower_set_.push_back(false);
    current_column_ = name;
  }
  const std::size_t k = col_index_.at(name);
  for (std::size_t j = 1; j + 1 < f.size(); j += 2) {
    const Row& r = row(f[j]);
    const double v = number(f[j + 1]);
    if (std::isinf(v)) fail(f[j + 1].column, "infinite coefficient");
    auto& entries = r.type == 'N' ? obj_entries_[r.index] : con_entries_[r.index];
    if (entries.count(k)) fail(f[j].column, "duplicate entry for row '" + r.name + "' in column '" + name + "'");
    entries[k] = v;
  }
}

void MpsParser::rhs_line(const std::vector<Field>& f) {
  // Optional set name: odd field count means it is present.
  const std::size_t start = f.size() % 2 == 1 ? 1 : 0;
  if (f.size() < 2 || f.size() > 5 || (f.size() - start) % 2 != 0)
    fail(f[0].column, "RHS entry needs one or two row/value pairs");
  for (std::size_t j = start; j + 1 < f.size(); j += 2) {
    const Row& r = row(f[j]);
    const double v = number(f[j + 1]);
    if (r.type == 'N')
      obj_constant_[r.index] = -v;
    else
      con_rhs_[r.index] = v;
  }
}

void MpsParser::ranges_line(const std::vector<Field>& f) {
  const std::size_t start = f.size() % 2 == 1 ? 1 : 0;
  if (f.size() < 2 || f.size() > 5 || (f.size() - start) % 2 != 0)
    fail(f[0].column, "RANGES entry needs one or two row/value pairs");
  for (std::size_t j = start; j + 1 < f.size(); j += 2) {
    const Row& r = row(f[j]);
    if (r.type == 'N') fail(f[j].column, "RANGES entry on objective row '" + r.name + "'");
    ranges_[r.index] = number(f[j + 1]);
  }
}

void MpsParser::bounds_line(const std::vector<Field>& f) {
  if (f.size() < 2) fail(f[0].column, "BOUNDS entry too short");
  const std::string type = upper(f[0].text);
  static const std::set<std::string> no_value = {"FR", "MI", "PL", "BV"};
  static const std::set<std::string> with_value = {"UP", "LO", "FX", "LI", "UI"};
  if (type == "SC") fail(f[0].column, "semi-continuous bounds are not supported");
  const bool needs_value = with_value.count(type) > 0;
  if (!needs_value && !no_value.count(type)) fail(f[0].column, "unknown bound type '" + f[0].text + "'");

  std::size_t col_field = 1;
  std::optional<std::size_t> value_field;
  if (needs_value) {
    if (f.size() == 4) col_field = 2;
    else if (f.size() != 3) fail(f[0].column, "bound " + type + " needs a column and a value");
    value_field = f.size() - 1;
  } else {
    // BV may carry an ignored value; tolerate "BV set col", "BV col", "BV set col 1".
    if (f.size() == 3) col_field = type == "BV" && col_index_.count(f[1].text) && !col_index_.count(f[2].text) ? 1 : 2;
    else if (f.size() == 4) col_field = 2;
    else if (f.size() != 2) fail(f[0].column, "bound " + type + " takes no value");
  }
  const std::size_t k = column(f[col_field]);
  Variable& v = vars_[k];
  const double value = value_field ? number(f[*value_field]) : 0.0;

  if (type == "UP" || type == "UI") {
    v.upper = value;
    if (value < 0.0 && !lower_set_[k] && v.lower == 0.0) v.lower = -kInf;
    if (type == "UI") v.integer = true;
  } else if (type == "LO" || type == "LI") {
    v.lower = value;
    lower_set_[k] = true;
    if (type == "LI") v.integer = true;
  } else if (type == "FX") {
    v.lower = v.upper = value;
    lower_set_[k] = true;
  } else if (type == "FR") {
    v.lower = -kInf;
    v.upper = kInf;
    lower_set_[k] = true;
  } else if (type == "MI") {
    v.lower = -kInf;
    lower_set_[k] = true;
  } else if (type == "PL") {
    v.upper = kInf;
  } else if (type == "BV") {
    v.lower = 0.0;
    v.upper = 1.0;
    v.integer = true;
    lower_set_[k] = true;
  }
}

Problem MpsParser::run() {
  std::size_t pos = 0;
  while (pos <= text_.size()) {
    std::size_t end = text_.find('\n', pos);
    if (end == std::string_view::npos) end = text_.size();
    std::string_view line = text_.substr(pos, end - pos);
    pos = end + 1;
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line[0] == '*') continue;
    const auto f = split(line);
    if (f.empty()) continue;
    if (sec_ == Sec::End) fail(f[0].column, "content after ENDATA");

    const bool indented = std::isspace(static_cast<unsigned char>(line[0]));
    if (!indented) {
      header(f);
      continue;
    }
    switch (sec_) {
      case Sec::None: fail(f[0].column, "data before the first section header");
      case Sec::Name: fail(f[0].column, "unexpected data in NAME section");
      case Sec::ObjSense: {
        const std::string s = upper(f[0].text);
        if (s == "MAX" || s == "MAXIMIZE") maximize_ = true;
        else if (s == "MIN" || s == "MINIMIZE") maximize_ = false;
        else fail(f[0].column, "unknown objective sense '" + f[0].text + "'");
        break;
      }
      case Sec::Rows: rows_line(f); break;
      case Sec::Columns: columns_line(f); break;
      case Sec::Rhs: rhs_line(f); break;
      case Sec::Ranges: ranges_line(f); break;
      case Sec::Bounds: bounds_line(f); break;
      case Sec::End: break;
    }
  }
  if (!seen_rows_) throw ParseError({file_, line_no_, 1}, "missing mandatory section ROWS");
  if (!seen_columns_) throw ParseError({file_, line_no_, 1}, "missing mandatory section COLUMNS");
  if (objective_names_.empty()) throw ParseError({file_, line_no_, 1}, "no objectives (no N rows)");

  const std::size_t n = vars_.size();
  auto dense = [n](const std::map<std::size_t, double>& e) {
    std::vector<double> c(n, 0.0);
    for (auto [k, v] : e) c[k] = v;
    return c;
  };

  Problem p;
  p.variables = vars_;
  for (std::size_t i = 0; i < objective_names_.size(); ++i)
    p.objectives.push_back(Objective{objective_names_[i], maximize_ ? ObjSense::Max : ObjSense::Min,
                                     dense(obj_entries_[i]), std::nullopt, obj_constant_[i]});
  std::set<std::string> used;
  for (const auto& [name, r] : rows_) used.insert(name);
  for (std::size_t j = 0; j < constraint_rows_.size(); ++j) {
    const auto& [name, type] = constraint_rows_[j];
    const RowSense sense = type == 'L' ? RowSense::Le : type == 'G' ? RowSense::Ge : RowSense::Eq;
    Constraint c{name, dense(con_entries_[j]), std::nullopt, sense, con_rhs_[j]};
    auto range = ranges_.find(j);
    if (range == ranges_.end()) {
      p.constraints.push_back(std::move(c));
      continue;
    }
    const double rv = range->second;
    const double b = c.rhs;
    Constraint other = c;
    other.name = name + "_rng";
    while (used.count(other.name)) other.name += "_";
    used.insert(other.name);
    if (type == 'L') {
      other.sense = RowSense::Ge;
      other.rhs = b - std::abs(rv);
    } else if (type == 'G') {
      other.sense = RowSense::Le;
      other.rhs = b + std::abs(rv);
    } else if (rv >= 0.0) {
      c.sense = RowSense::Ge;
      other.sense = RowSense::Le;
      other.rhs = b + rv;
    } else {
      c.sense = RowSense::Le;
      other.sense = RowSense::Ge;
      other.rhs = b + rv;
    }
    p.constraints.push_back(std::move(c));
    p.constraints.push_back(std::move(other));
  }
  return p;
}

}  // namespace

Problem parse_mps(std::string_view text, std::string_view filename) {
  MpsParser parser(text, std::string(filename));
  return parser.run();
}

}  // namespace moep
