#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>

#include "error.hpp"
#include "model.hpp"

namespace moep {

struct SourceLocation {
  std::string file;
  std::size_t line = 1;
  std::size_t column = 1;
};

class ParseError : public Error {
 public:
  ParseError(SourceLocation loc, const std::string& message)
      : Error(ErrorCode::Parse, loc.file + ":" + std::to_string(loc.line) + ":" + std::to_string(loc.column) +
                                    ": " + message),
        location_(std::move(loc)),
        message_(message) {}

  const SourceLocation& location() const { return location_; }
  const std::string& message() const { return message_; }

 private:
  SourceLocation location_;
  std::string message_;
};

enum class FileFormat { Auto, Lp, Mps };

/// LP dialect with several objective rows:
///
///   Minimize
///    obj1: 3 x + 2 y
///    max obj2: x - y + [ x^2 + 2 x*y ] / 2
///   Subject To
///    c1: x + y >= 1
///   Bounds
///    0 <= x <= 4
///   General
///    x
///   End
///
/// Every labelled row in the objective section is an objective; the section
/// header sets the default sense and a leading `min`/`max` overrides it.
/// Throws ParseError.
Problem parse_lp(std::string_view text, std::string_view filename = "<input>");

/// Free-format MPS where every N row is an objective, in file order. A global
/// OBJSENSE section may switch all objectives to MAX. Throws ParseError.
Problem parse_mps(std::string_view text, std::string_view filename = "<input>");

/// Reads and parses a file; Auto picks MPS for .mps/.mop/.fmps extensions
/// and LP otherwise. Throws Error(Io) or ParseError.
Problem read_problem_file(const std::filesystem::path& path, FileFormat format = FileFormat::Auto);

/// Text that parses back to an equal Problem. Throws UnsupportedProblem for
/// what the dialect cannot express (MPS: quadratic terms, mixed senses).
std::string serialize_problem(const Problem& p, FileFormat format);

}  // namespace moep
