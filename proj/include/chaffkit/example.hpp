#pragma once

#include "chaffkit/value.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chaffkit {

/// One student-written example: `function(args...) is expected`.
struct Example {
  std::string function;
  std::vector<Value> args;
  Value expected;
  std::size_t source_line = 0;  // 1-based; 0 when synthesized
  std::string raw_text;
};

/// Equality ignores source_line and raw_text.
bool same_example(const Example& a, const Example& b);

struct ExampleSuite {
  std::vector<Example> examples;
  std::optional<std::string> origin;
};

enum class ParseErrorKind { Lex, ArityLessCall, MissingIs, BadLiteral };

std::string_view parse_error_name(ParseErrorKind k);

struct ParseError {
  std::size_t line = 0;
  ParseErrorKind kind = ParseErrorKind::Lex;
  std::string message;
  std::string text;
};

struct ParseResult {
  ExampleSuite suite;
  std::vector<ParseError> errors;
};

/// Parses a suite file. Never throws; malformed lines are reported and skipped.
///
/// Accepted line forms: `f(v, ...) is v`, `check:` / `check "name":` / `end`
/// wrappers, `include ...` / `import ...` preamble lines, and `#` comments.
ParseResult parse_suite(std::string_view text);

/// Parses a single example line. `line_no` is recorded in the result.
std::variant<Example, ParseError> parse_example_line(std::string_view line, std::size_t line_no = 1);

/// Parses a standalone value literal (whole input must be consumed).
std::optional<Value> parse_value(std::string_view text);

std::string render_example(const Example& e);

}  // namespace chaffkit
