#include "chaffkit/example.hpp"

#include <cctype>
#include <sstream>

namespace chaffkit {

namespace {

enum class Tok { Ident, Number, String, LParen, RParen, LBracket, RBracket, Comma, Colon, Slash, Minus, End };

struct Token {
  Tok kind;
  std::string text;
};

struct Failure {
  ParseErrorKind kind;
  std::string message;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Returns the line with any `#` comment removed (quotes respected), trimmed.
std::string_view strip_comment(std::string_view line) {
  char quote = 0;
  std::size_t cut = line.size();
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote) {
      if (c == '\\') ++i;
      else if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      cut = i;
      break;
    }
  }
  line = line.substr(0, cut);
  while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) line.remove_prefix(1);
  while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.remove_suffix(1);
  return line;
}

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (ident_start(c)) {
      std::size_t j = i + 1;
      while (j < s.size()) {
        if (ident_char(s[j])) ++j;
        else if (s[j] == '-' && j + 1 < s.size() && ident_char(s[j + 1])) j += 2;
        else break;
      }
      if (j < s.size() && s[j] == '?') ++j;
      out.push_back({Tok::Ident, std::string(s.substr(i, j - i))});
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      if (j < s.size() && s[j] == '.') {
        ++j;
        const std::size_t frac = j;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        if (j == frac) throw Failure{ParseErrorKind::BadLiteral, "decimal point without fraction digits"};
      }
      if (j < s.size() && ident_start(s[j]))
        throw Failure{ParseErrorKind::BadLiteral, "malformed number '" + std::string(s.substr(i, j - i + 1)) + "'"};
      out.push_back({Tok::Number, std::string(s.substr(i, j - i))});
      i = j;
    } else if (c == '"' || c == '\'') {
      std::string text;
      std::size_t j = i + 1;
      bool closed = false;
      while (j < s.size()) {
        const char d = s[j];
        if (d == '\\') {
          if (j + 1 >= s.size()) break;
          const char e = s[j + 1];
          switch (e) {
            case 'n': text += '\n'; break;
            case 't': text += '\t'; break;
            case 'r': text += '\r'; break;
            case '\\': text += '\\'; break;
            case '"': text += '"'; break;
            case '\'': text += '\''; break;
            default: throw Failure{ParseErrorKind::Lex, std::string("unknown escape '\\") + e + "'"};
          }
          j += 2;
        } else if (d == c) {
          closed = true;
          ++j;
          break;
        } else {
          text += d;
          ++j;
        }
      }
      if (!closed) throw Failure{ParseErrorKind::Lex, "unterminated string literal"};
      out.push_back({Tok::String, std::move(text)});
      i = j;
    } else {
      Tok k;
      switch (c) {
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        case '[': k = Tok::LBracket; break;
        case ']': k = Tok::RBracket; break;
        case ',': k = Tok::Comma; break;
        case ':': k = Tok::Colon; break;
        case '/': k = Tok::Slash; break;
        case '-': k = Tok::Minus; break;
        default: throw Failure{ParseErrorKind::Lex, std::string("unexpected character '") + c + "'"};
      }
      out.push_back({k, std::string(1, c)});
      ++i;
    }
  }
  out.push_back({Tok::End, ""});
  return out;
}

// cpp_int reads a leading 0 as octal, so digits are stripped before conversion.
boost::multiprecision::cpp_int decimal_int(std::string digits) {
  const auto nz = digits.find_first_not_of('0');
  digits = nz == std::string::npos ? "0" : digits.substr(nz);
  return boost::multiprecision::cpp_int(digits);
}

Rational decimal_to_rational(const std::string& lit) {
  const auto dot = lit.find('.');
  if (dot == std::string::npos) return Rational(decimal_int(lit));
  const std::string digits = lit.substr(0, dot) + lit.substr(dot + 1);
  boost::multiprecision::cpp_int den = 1;
  for (std::size_t k = dot + 1; k < lit.size(); ++k) den *= 10;
  return Rational(decimal_int(digits), den);
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  Token next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  bool at_end() const { return peek().kind == Tok::End; }

  void expect(Tok k, const char* what) {
    if (!accept(k)) throw Failure{ParseErrorKind::BadLiteral, std::string("expected ") + what};
  }

  std::vector<Value> value_list(Tok close, const char* what) {
    std::vector<Value> items;
    if (accept(close)) return items;
    for (;;) {
      items.push_back(value());
      if (accept(close)) return items;
      if (!accept(Tok::Comma))
        throw Failure{ParseErrorKind::BadLiteral, std::string("expected ',' or ") + what};
    }
  }

  Value value() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Minus:
      case Tok::Number: return number();
      case Tok::String: return Value::text(next().text);
      case Tok::LBracket: {
        next();
        if (peek().kind == Tok::Ident && peek().text == "list" && peek(1).kind == Tok::Colon) {
          next();
          next();
        }
        return Value::list(value_list(Tok::RBracket, "']'"));
      }
      case Tok::Ident: {
        const std::string name = next().text;
        if (name == "true") return Value::boolean(true);
        if (name == "false") return Value::boolean(false);
        if (accept(Tok::LParen)) return Value::record(name, value_list(Tok::RParen, "')'"));
        if (name == "empty") return Value::list({});
        if (std::isupper(static_cast<unsigned char>(name.front()))) return Value::record(name, {});
        throw Failure{ParseErrorKind::BadLiteral, "identifier '" + name + "' is not a literal"};
      }
      case Tok::End: throw Failure{ParseErrorKind::BadLiteral, "unexpected end of line"};
      default: throw Failure{ParseErrorKind::BadLiteral, "unexpected '" + t.text + "'"};
    }
  }

  Value number() {
    const bool negative = accept(Tok::Minus);
    if (peek().kind != Tok::Number) throw Failure{ParseErrorKind::BadLiteral, "expected number after '-'"};
    const std::string lit = next().text;
    Rational r = decimal_to_rational(lit);
    if (accept(Tok::Slash)) {
      if (lit.find('.') != std::string::npos || peek().kind != Tok::Number ||
          peek().text.find('.') != std::string::npos)
        throw Failure{ParseErrorKind::BadLiteral, "fraction parts must be integers"};
      const boost::multiprecision::cpp_int den = decimal_int(next().text);
      if (den == 0) throw Failure{ParseErrorKind::BadLiteral, "zero denominator"};
      r /= Rational(den);
    }
    return Value::number(negative ? Rational(-r) : r);
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

enum class LineShape { Blank, Wrapper, Example };

LineShape classify(const std::vector<Token>& toks) {
  if (toks.front().kind == Tok::End) return LineShape::Blank;
  const Token& first = toks.front();
  if (first.kind == Tok::Ident) {
    if (first.text == "end" && toks[1].kind == Tok::End) return LineShape::Wrapper;
    if (first.text == "include" || first.text == "import" || first.text == "provide")
      return LineShape::Wrapper;
    if (first.text == "check" && toks.back().kind == Tok::End && toks.size() >= 2 &&
        toks[toks.size() - 2].kind == Tok::Colon)
      return LineShape::Wrapper;
  }
  return LineShape::Example;
}

Example parse_tokens(std::vector<Token> toks) {
  Parser p(std::move(toks));
  if (p.peek().kind != Tok::Ident) throw Failure{ParseErrorKind::BadLiteral, "example must start with a function name"};
  Example e;
  e.function = p.next().text;
  if (!p.accept(Tok::LParen))
    throw Failure{ParseErrorKind::ArityLessCall, "'" + e.function + "' is not applied to an argument list"};
  e.args = p.value_list(Tok::RParen, "')'");
  if (!(p.peek().kind == Tok::Ident && p.peek().text == "is"))
    throw Failure{ParseErrorKind::MissingIs, "expected 'is' after the call"};
  p.next();
  e.expected = p.value();
  if (!p.at_end()) throw Failure{ParseErrorKind::BadLiteral, "unexpected trailing '" + p.peek().text + "'"};
  return e;
}

}  // namespace

bool same_example(const Example& a, const Example& b) {
  if (a.function != b.function || a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!value_eq(a.args[i], b.args[i])) return false;
  return value_eq(a.expected, b.expected);
}

std::string_view parse_error_name(ParseErrorKind k) {
  switch (k) {
    case ParseErrorKind::Lex: return "lex error";
    case ParseErrorKind::ArityLessCall: return "arity-less call";
    case ParseErrorKind::MissingIs: return "missing is";
    case ParseErrorKind::BadLiteral: return "bad literal";
  }
  return "?";
}

std::variant<Example, ParseError> parse_example_line(std::string_view line, std::size_t line_no) {
  const std::string_view body = strip_comment(line);
  try {
    Example e = parse_tokens(tokenize(body));
    e.source_line = line_no;
    e.raw_text = std::string(body);
    return e;
  } catch (const Failure& f) {
    return ParseError{line_no, f.kind, f.message, std::string(body)};
  } catch (const std::exception& ex) {
    return ParseError{line_no, ParseErrorKind::BadLiteral, ex.what(), std::string(body)};
  }
}

ParseResult parse_suite(std::string_view text) {
  ParseResult result;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(start, nl - start);
    ++line_no;
    start = nl + 1;

    const std::string_view body = strip_comment(line);
    try {
      auto toks = tokenize(body);
      switch (classify(toks)) {
        case LineShape::Blank:
        case LineShape::Wrapper: break;
        case LineShape::Example: {
          Example e = parse_tokens(std::move(toks));
          e.source_line = line_no;
          e.raw_text = std::string(body);
          result.suite.examples.push_back(std::move(e));
          break;
        }
      }
    } catch (const Failure& f) {
      result.errors.push_back({line_no, f.kind, f.message, std::string(body)});
    } catch (const std::exception& ex) {
      result.errors.push_back({line_no, ParseErrorKind::BadLiteral, ex.what(), std::string(body)});
    }
    if (nl == text.size()) break;
  }
  return result;
}

std::optional<Value> parse_value(std::string_view text) {
  try {
    Parser p(tokenize(strip_comment(text)));
    Value v = p.value();
    if (!p.at_end()) return std::nullopt;
    return v;
  } catch (...) {
    return std::nullopt;
  }
}

std::string render_example(const Example& e) {
  std::ostringstream out;
  out << e.function << "(";
  for (std::size_t i = 0; i < e.args.size(); ++i) {
    if (i) out << ", ";
    out << render_value(e.args[i]);
  }
  out << ") is " << render_value(e.expected);
  return out.str();
}

}  // namespace chaffkit
