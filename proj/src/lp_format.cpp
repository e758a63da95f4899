#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>

#include "parser.hpp"

namespace moep {

namespace {

enum class Tok { Ident, Number, Plus, Minus, Colon, Le, Ge, Eq, LBracket, RBracket, Caret, Star, Slash, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double value = 0.0;
  std::size_t line = 1;
  std::size_t column = 1;
  bool line_start = false;
};

bool is_name_start(unsigned char c) {
  if (std::isalpha(c) || c >= 0x80) return true;
  switch (c) {
    case '_': case '!': case '"': case '#': case '$': case '%': case '&': case '\'': case '(':
    case ')': case '{': case '}': case ',': case ';': case '?': case '@': case '`': case '|': case '~':
      return true;
    default:
      return false;
  }
}

bool is_name_char(unsigned char c) { return is_name_start(c) || std::isdigit(c) || c == '.'; }

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

class Lexer {
 public:
  Lexer(std::string_view text, std::string file) : text_(text), file_(std::move(file)) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    bool line_start = true;
    while (pos_ < text_.size()) {
      const unsigned char c = static_cast<unsigned char>(text_[pos_]);
      if (c == '\n') {
        advance();
        line_start = true;
        continue;
      }
      if (std::isspace(c)) {
        advance();
        continue;
      }
      if (c == '\\') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
        continue;
      }
      Token t;
      t.line = line_;
      t.column = col_;
      t.line_start = line_start;
      line_start = false;
      const std::size_t start = pos_;
      if (std::isdigit(c) || (c == '.' && pos_ + 1 < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) advance();
        if (pos_ < text_.size() && text_[pos_] == '.') {
          advance();
          while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) advance();
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
          std::size_t look = pos_ + 1;
          if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
          if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
            while (pos_ < look) advance();
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) advance();
          }
        }
        t.kind = Tok::Number;
        t.text = std::string(text_.substr(start, pos_ - start));
        const auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.value);
        if (res.ec != std::errc() || res.ptr != t.text.data() + t.text.size())
          throw ParseError({file_, t.line, t.column}, "malformed number '" + t.text + "'");
      } else if (is_name_start(c)) {
        while (pos_ < text_.size() && is_name_char(static_cast<unsigned char>(text_[pos_]))) advance();
        t.kind = Tok::Ident;
        t.text = std::string(text_.substr(start, pos_ - start));
      } else {
        advance();
        switch (c) {
          case '+': t.kind = Tok::Plus; break;
          case '-': t.kind = Tok::Minus; break;
          case ':': t.kind = Tok::Colon; break;
          case '[': t.kind = Tok::LBracket; break;
          case ']': t.kind = Tok::RBracket; break;
          case '^': t.kind = Tok::Caret; break;
          case '*': t.kind = Tok::Star; break;
          case '/': t.kind = Tok::Slash; break;
          case '<':
            t.kind = Tok::Le;
            if (peek('=')) advance();
            break;
          case '>':
            t.kind = Tok::Ge;
            if (peek('=')) advance();
            break;
          case '=':
            t.kind = Tok::Eq;
            if (peek('<')) {
              advance();
              t.kind = Tok::Le;
            } else if (peek('>')) {
              advance();
              t.kind = Tok::Ge;
            }
            break;
          default:
            throw ParseError({file_, t.line, t.column}, "unexpected character '" + std::string(1, static_cast<char>(c)) + "'");
        }
        t.text = std::string(text_.substr(start, pos_ - start));
      }
      out.push_back(std::move(t));
    }
    Token end;
    end.line = line_;
    end.column = col_;
    end.line_start = true;
    out.push_back(end);
    return out;
  }

 private:
  bool peek(char c) const { return pos_ < text_.size() && text_[pos_] == c; }
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::string file_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

enum class Section { None, Objective, Constraints, Bounds, General, Binary, End };

struct Expr {
  std::map<std::size_t, double> linear;
  std::map<std::pair<std::size_t, std::size_t>, double> quad;
  bool has_quad = false;
  double constant = 0.0;
};

struct PendingRow {
  std::string name;
  Expr expr;
  ObjSense obj_sense = ObjSense::Min;
  RowSense sense = RowSense::Le;
  double rhs = 0.0;
};

class LpParser {
 public:
  LpParser(std::vector<Token> tokens, std::string file) : toks_(std::move(tokens)), file_(std::move(file)) {}

  Problem run();

 private:
  const Token& tok(std::size_t k = 0) const { return toks_[std::min(i_ + k, toks_.size() - 1)]; }
  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw ParseError({file_, t.line, t.column}, msg);
  }
  [[noreturn]] void fail(const std::string& msg) const { fail(tok(), msg); }

  // Section keyword at the current token; sets the number of tokens it spans.
  std::optional<Section> section_keyword(std::size_t& span, ObjSense& sense) const;
  bool is_sense_word(const Token& t, ObjSense& sense) const;
  bool at_label(std::size_t k = 0) const { return tok(k).kind == Tok::Ident && tok(k + 1).kind == Tok::Colon; }
  bool at_objective_start() const;
  bool at_section() const {
    std::size_t span = 0;
    ObjSense s;
    return tok().line_start && section_keyword(span, s).has_value();
  }
  void check_unknown_section() const;

  std::size_t var(const std::string& name) {
    auto [it, inserted] = index_.emplace(name, names_.size());
    if (inserted) {
      names_.push_back(name);
      vars_.push_back(Variable{name});
    }
    return it->second;
  }

  Expr expression(bool objective);
  void quad_term(Expr& e, double mult);
  double signed_value(bool allow_inf);
  void objective_row();
  void constraint_row();
  void bound_entry();

  std::vector<Token> toks_;
  std::string file_;
  std::size_t i_ = 0;
  ObjSense default_sense_ = ObjSense::Min;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::string> names_;
  std::vector<Variable> vars_;
  std::vector<PendingRow> objectives_;
  std::vector<PendingRow> constraints_;
  std::set<std::string> objective_names_;
  std::set<std::string> constraint_names_;
};

bool LpParser::is_sense_word(const Token& t, ObjSense& sense) const {
  if (t.kind != Tok::Ident) return false;
  const std::string w = lower(t.text);
  if (w == "min" || w == "minimize" || w == "minimise" || w == "minimum") {
    sense = ObjSense::Min;
    return true;
  }
  if (w == "max" || w == "maximize" || w == "maximise" || w == "maximum") {
    sense = ObjSense::Max;
    return true;
  }
  return false;
}

std::optional<Section> LpParser::section_keyword(std::size_t& span, ObjSense& sense) const {
  const Token& t = tok();
  if (t.kind != Tok::Ident || tok(1).kind == Tok::Colon) return std::nullopt;
  span = 1;
  if (is_sense_word(t, sense)) return Section::Objective;
  const std::string w = lower(t.text);
  const Token& n = tok(1);
  const bool same_line = !n.line_start && n.kind == Tok::Ident;
  if (w == "subject" && same_line && lower(n.text) == "to") {
    span = 2;
    return Section::Constraints;
  }
  if (w == "such" && same_line && lower(n.text) == "that") {
    span = 2;
    return Section::Constraints;
  }
  if (w == "st" || w == "s.t." || w == "st." || w == "subjectto") return Section::Constraints;
  if (w == "bounds" || w == "bound") return Section::Bounds;
  if (w == "general" || w == "generals" || w == "gen" || w == "integer" || w == "integers")
    return Section::General;
  if (w == "binary" || w == "binaries" || w == "bin") return Section::Binary;
  if (w == "end") return Section::End;
  return std::nullopt;
}

bool LpParser::at_objective_start() const {
  if (!tok().line_start) return false;
  if (at_label()) return true;
  ObjSense s;
  return is_sense_word(tok(), s) && at_label(1);
}

void LpParser::check_unknown_section() const {
  const Token& t = tok();
  if (!t.line_start || t.kind != Tok::Ident) return;
  const std::string w = lower(t.text);
  static const std::set<std::string> unsupported = {"sos",  "sos1",   "sos2", "semi", "semis",
                                                    "sec",  "pwlobj", "lazy", "user", "semi-continuous"};
  if (unsupported.count(w) && (tok(1).line_start || tok(1).kind == Tok::Minus || tok(1).kind == Tok::Ident))
    fail("unsupported section keyword '" + t.text + "'");
  if (tok(1).line_start) fail("unknown section keyword '" + t.text + "'");
}

double LpParser::signed_value(bool allow_inf) {
  double sign = 1.0;
  while (tok().kind == Tok::Plus || tok().kind == Tok::Minus) {
    if (tok().kind == Tok::Minus) sign = -sign;
    ++i_;
  }
  if (tok().kind == Tok::Number) {
    const double v = tok().value;
    ++i_;
    return sign * v;
  }
  if (allow_inf && tok().kind == Tok::Ident) {
    const std::string w = lower(tok().text);
    if (w == "inf" || w == "infinity") {
      ++i_;
      return sign * kInf;
    }
  }
  fail("expected a number");
}

void LpParser::quad_term(Expr& e, double mult) {
  const Token& open = tok();
  ++i_;  // '['
  struct Term {
    std::size_t a, b;
    double q;
  };
  std::vector<Term> terms;
  bool first = true;
  while (tok().kind != Tok::RBracket) {
    if (tok().kind == Tok::End) fail(open, "unterminated '['");
    double sign = 1.0;
    bool saw_sign = false;
    while (tok().kind == Tok::Plus || tok().kind == Tok::Minus) {
      if (tok().kind == Tok::Minus) sign = -sign;
      saw_sign = true;
      ++i_;
    }
    if (!first && !saw_sign) fail("expected '+' or '-' between quadratic terms");
    double coef = 1.0;
    if (tok().kind == Tok::Number) {
      coef = tok().value;
      ++i_;
    }
    if (tok().kind != Tok::Ident) fail("expected a variable in quadratic term");
    const std::size_t a = var(tok().text);
    ++i_;
    if (tok().kind == Tok::Caret) {
      ++i_;
      if (tok().kind != Tok::Number || tok().value != 2.0) fail("only '^2' is supported");
      ++i_;
      terms.push_back({a, a, sign * coef});
    } else if (tok().kind == Tok::Star) {
      ++i_;
      if (tok().kind != Tok::Ident) fail("expected a variable after '*'");
      const std::size_t b = var(tok().text);
      ++i_;
      terms.push_back({a, b, sign * coef});
    } else {
      fail("expected '^2' or '*' in quadratic term");
    }
    first = false;
  }
  ++i_;  // ']'
  double divisor = 1.0;
  if (tok().kind == Tok::Slash) {
    ++i_;
    if (tok().kind != Tok::Number || tok().value == 0.0) fail("expected a non-zero divisor after '/'");
    divisor = tok().value;
    ++i_;
  }
  e.has_quad = true;
  for (const auto& t : terms) {
    const double q = t.q * mult / divisor;
    if (t.a == t.b) {
      e.quad[{t.a, t.a}] += q;
    } else {
      e.quad[{t.a, t.b}] += q / 2.0;
      e.quad[{t.b, t.a}] += q / 2.0;
    }
  }
}

Expr LpParser::expression(bool objective) {
  Expr e;
  bool first = true;
  auto stop = [&] {
    if (tok().kind == Tok::End) return true;
    if (tok().kind == Tok::Le || tok().kind == Tok::Ge || tok().kind == Tok::Eq) return true;
    if (!tok().line_start) return false;
    return at_section() || (objective && at_objective_start());
  };
  while (!stop()) {
    double sign = 1.0;
    bool saw_sign = false;
    while (tok().kind == Tok::Plus || tok().kind == Tok::Minus) {
      if (tok().kind == Tok::Minus) sign = -sign;
      saw_sign = true;
      ++i_;
    }
    if (!first && !saw_sign) {
      check_unknown_section();
      fail("expected '+' or '-' before term");
    }
    if (saw_sign && stop()) fail("dangling sign");
    double coef = 1.0;
    bool have_num = false;
    if (tok().kind == Tok::Number) {
      coef = tok().value;
      have_num = true;
      ++i_;
    }
    if (have_num && stop()) {
      e.constant += sign * coef;
    } else if (tok().kind == Tok::LBracket) {
      quad_term(e, sign * coef);
    } else if (tok().kind == Tok::Ident && !(tok().line_start && have_num)) {
      e.linear[var(tok().text)] += sign * coef;
      ++i_;
    } else if (have_num) {
      e.constant += sign * coef;
    } else {
      fail("expected a term");
    }
    first = false;
  }
  return e;
}

void LpParser::objective_row() {
  ObjSense sense = default_sense_;
  if (tok().line_start && is_sense_word(tok(), sense) && at_label(1)) ++i_;
  PendingRow row;
  row.obj_sense = sense;
  if (at_label()) {
    row.name = tok().text;
    if (!objective_names_.insert(row.name).second) fail("duplicate objective name '" + row.name + "'");
    i_ += 2;
  } else {
    row.name = "obj" + std::to_string(objectives_.size() + 1);
    while (objective_names_.count(row.name)) row.name += "_";
    objective_names_.insert(row.name);
  }
  row.expr = expression(true);
  if (tok().kind == Tok::Le || tok().kind == Tok::Ge || tok().kind == Tok::Eq)
    fail("relational operator in objective section");
  objectives_.push_back(std::move(row));
}

void LpParser::constraint_row() {
  PendingRow row;
  const Token& start = tok();
  if (at_label()) {
    row.name = tok().text;
    i_ += 2;
  } else {
    row.name = "c" + std::to_string(constraints_.size() + 1);
    while (constraint_names_.count(row.name)) row.name += "_";
  }
  if (!constraint_names_.insert(row.name).second) fail(start, "duplicate constraint name '" + row.name + "'");
  row.expr = expression(false);
  switch (tok().kind) {
    case Tok::Le: row.sense = RowSense::Le; break;
    case Tok::Ge: row.sense = RowSense::Ge; break;
    case Tok::Eq: row.sense = RowSense::Eq; break;
    default: fail("expected a relational operator");
  }
  ++i_;
  row.rhs = signed_value(false) - row.expr.constant;
  row.expr.constant = 0.0;
  constraints_.push_back(std::move(row));
}

void LpParser::bound_entry() {
  auto relop = [&](Tok k) { return k == Tok::Le || k == Tok::Ge || k == Tok::Eq; };
  auto apply = [&](std::size_t v, Tok op, double value, bool var_on_left) {
    Variable& x = vars_[v];
    if (op == Tok::Eq) {
      x.lower = x.upper = value;
    } else if ((op == Tok::Le) == var_on_left) {
      x.upper = value;
    } else {
      x.lower = value;
    }
  };

  // Leading "value op" form, e.g. "-inf <= x <= 4".
  std::size_t k = 0;
  while (tok(k).kind == Tok::Plus || tok(k).kind == Tok::Minus) ++k;
  const bool value_like =
      tok(k).kind == Tok::Number ||
      (tok(k).kind == Tok::Ident && (lower(tok(k).text) == "inf" || lower(tok(k).text) == "infinity") &&
       relop(tok(k + 1).kind));
  if (value_like) {
    const double lhs = signed_value(true);
    if (!relop(tok().kind)) fail("expected a relational operator in bound");
    const Tok op = tok().kind;
    ++i_;
    if (tok().kind != Tok::Ident) fail("expected a variable in bound");
    const std::size_t v = var(tok().text);
    ++i_;
    apply(v, op, lhs, false);
    if (relop(tok().kind) && !tok().line_start) {
      const Tok op2 = tok().kind;
      ++i_;
      apply(v, op2, signed_value(true), true);
    }
    return;
  }
  if (tok().kind != Tok::Ident) fail("expected a bound");
  const std::size_t v = var(tok().text);
  ++i_;
  if (tok().kind == Tok::Ident && !tok().line_start && lower(tok().text) == "free") {
    vars_[v].lower = -kInf;
    vars_[v].upper = kInf;
    ++i_;
    return;
  }
  if (!relop(tok().kind)) fail("expected a relational operator or 'free' in bound");
  const Tok op = tok().kind;
  ++i_;
  apply(v, op, signed_value(true), true);
}

Problem LpParser::run() {
  Section section = Section::None;
  const Token& first = tok();
  if (first.kind == Tok::End) fail(first, "no objectives: empty input");
  {
    std::size_t span = 0;
    ObjSense s = ObjSense::Min;
    auto sec = section_keyword(span, s);
    if (!sec || *sec != Section::Objective) fail(first, "expected an objective section (Minimize/Maximize)");
  }
  const Token objective_header = first;

  while (tok().kind != Tok::End && section != Section::End) {
    if (tok().line_start) {
      std::size_t span = 0;
      ObjSense s = default_sense_;
      if (auto sec = section_keyword(span, s)) {
        // In the objective section a sense word followed by a label is a row prefix.
        if (!(*sec == Section::Objective && section == Section::Objective && at_label(1))) {
          if (*sec == Section::Objective) {
            if (section != Section::None && section != Section::Objective)
              fail("objective section must come first");
            default_sense_ = s;
          }
          section = *sec;
          i_ += span;
          continue;
        }
      }
      if (section == Section::Objective || section == Section::Constraints || section == Section::Bounds)
        check_unknown_section();
    }
    switch (section) {
      case Section::Objective: objective_row(); break;
      case Section::Constraints: constraint_row(); break;
      case Section::Bounds: bound_entry(); break;
      case Section::General:
      case Section::Binary: {
        if (tok().kind != Tok::Ident) fail("expected a variable name");
        const std::size_t v = var(tok().text);
        vars_[v].integer = true;
        if (section == Section::Binary) {
          vars_[v].lower = 0.0;
          vars_[v].upper = 1.0;
        }
        ++i_;
        break;
      }
      case Section::None:
      case Section::End: break;
    }
  }

  if (objectives_.empty()) fail(objective_header, "no objectives");

  const std::size_t n = vars_.size();
  Problem p;
  p.variables = vars_;
  auto dense = [&](const Expr& e) {
    std::vector<double> c(n, 0.0);
    for (auto [k, v] : e.linear) c[k] = v;
    return c;
  };
  auto quad = [&](const Expr& e) -> std::optional<SquareMatrix> {
    if (!e.has_quad) return std::nullopt;
    SquareMatrix m(n);
    for (auto [ij, v] : e.quad) m(ij.first, ij.second) = v;
    return m;
  };
  for (const auto& r : objectives_)
    p.objectives.push_back(Objective{r.name, r.obj_sense, dense(r.expr), quad(r.expr), r.expr.constant});
  for (const auto& r : constraints_)
    p.constraints.push_back(Constraint{r.name, dense(r.expr), quad(r.expr), r.sense, r.rhs});
  return p;
}

}  // namespace

Problem parse_lp(std::string_view text, std::string_view filename) {
  std::string file(filename);
  Lexer lexer(text, file);
  LpParser parser(lexer.run(), file);
  return parser.run();
}

}  // namespace moep
