#include "doctest.h"

#include "chaffkit/example.hpp"
#include "chaffkit/synth.hpp"

#include <random>

using namespace chaffkit;

namespace {

Example only_example(std::string_view text) {
  auto r = parse_suite(text);
  REQUIRE(r.errors.empty());
  REQUIRE(r.suite.examples.size() == 1);
  return r.suite.examples.front();
}

// Random values of bounded depth for the equivalence and round-trip laws.
Value random_value(Rng& rng, int depth) {
  const auto pick = rng.below(depth > 0 ? 5 : 3);
  switch (pick) {
    case 0: return Value::number(rng.between(-20, 20), rng.between(1, 6));
    case 1: {
      static const char* words[] = {"a", "B", "", "x y", "q\"t", "back\\slash", "caf\xc3\xa9"};
      return Value::text(words[rng.below(7)]);
    }
    case 2: return Value::boolean(rng.below(2) == 1);
    case 3: {
      List xs;
      for (auto n = rng.below(4); n > 0; --n) xs.push_back(random_value(rng, depth - 1));
      return Value::list(std::move(xs));
    }
    default: {
      std::vector<Value> fields;
      for (auto n = rng.below(3); n > 0; --n) fields.push_back(random_value(rng, depth - 1));
      return Value::record(rng.below(2) ? "Node" : "Leaf", std::move(fields));
    }
  }
}

}  // namespace

TEST_CASE("parse a list-literal example") {
  const Example e = only_example("median([list: 1, 2, 3]) is 2");
  CHECK(e.function == "median");
  REQUIRE(e.args.size() == 1);
  CHECK(value_eq(e.args[0], Value::list({Value::number(1), Value::number(2), Value::number(3)})));
  CHECK(value_eq(e.expected, Value::number(2)));
  CHECK(e.source_line == 1);
  CHECK(e.raw_text == "median([list: 1, 2, 3]) is 2");
}

TEST_CASE("empty text gives an empty suite") {
  auto r = parse_suite("");
  CHECK(r.suite.examples.empty());
  CHECK(r.errors.empty());
}

TEST_CASE("unbalanced bracket is reported and skipped") {
  auto r = parse_suite("median([1, 2) is 3");
  CHECK(r.suite.examples.empty());
  REQUIRE(r.errors.size() == 1);
  CHECK(r.errors[0].line == 1);
}

TEST_CASE("error categories") {
  auto kind_of = [](std::string_view line) {
    auto r = parse_example_line(line);
    REQUIRE(std::holds_alternative<ParseError>(r));
    return std::get<ParseError>(r).kind;
  };
  CHECK(kind_of("median([1) is 1 @") == ParseErrorKind::Lex);
  CHECK(kind_of("f(\"open is 1") == ParseErrorKind::Lex);
  CHECK(kind_of("median is 3") == ParseErrorKind::ArityLessCall);
  CHECK(kind_of("median([1, 2]) 3") == ParseErrorKind::MissingIs);
  CHECK(kind_of("median([1, 2]) is") == ParseErrorKind::BadLiteral);
  CHECK(kind_of("f(1/0) is 1") == ParseErrorKind::BadLiteral);
  CHECK(kind_of("f(x) is 1") == ParseErrorKind::BadLiteral);
}

TEST_CASE("parsing continues past bad lines and keeps line numbers") {
  auto r = parse_suite("check:\n  f(1) is 1\n  f(1 is 2\n  # comment only\n  g(\"a # not a comment\") is true # trailing\nend\n");
  REQUIRE(r.suite.examples.size() == 2);
  CHECK(r.suite.examples[0].source_line == 2);
  CHECK(r.suite.examples[1].source_line == 5);
  CHECK(value_eq(r.suite.examples[1].args[0], Value::text("a # not a comment")));
  REQUIRE(r.errors.size() == 1);
  CHECK(r.errors[0].line == 3);
}

TEST_CASE("wrapper and header lines are not examples") {
  auto r = parse_suite("include my-gdrive(\"median-code.arr\")\n# header\ncheck \"named\":\n  f(1) is 1\nend\n");
  CHECK(r.errors.empty());
  CHECK(r.suite.examples.size() == 1);
}

TEST_CASE("literal forms") {
  CHECK(value_eq(*parse_value("[1, 2]"), *parse_value("[list: 1, 2]")));
  CHECK(value_eq(*parse_value("[]"), *parse_value("empty")));
  CHECK(value_eq(*parse_value("0.25"), Value::number(1, 4)));
  CHECK(value_eq(*parse_value("-3/6"), Value::number(-1, 2)));
  CHECK(value_eq(*parse_value("'single'"), Value::text("single")));
  CHECK(value_eq(*parse_value("true"), Value::boolean(true)));
  const auto rec = parse_value("Node(1, Leaf)");
  REQUIRE(rec);
  REQUIRE(rec->is_record());
  CHECK(rec->as_record().ctor == "Node");
  REQUIRE(rec->as_record().fields.size() == 2);
  CHECK(rec->as_record().fields[1].as_record().ctor == "Leaf");
  CHECK_FALSE(parse_value("[1, 2"));
}

TEST_CASE("value_eq cases") {
  CHECK(value_eq(Value::number(1), Value::number(1)));
  CHECK_FALSE(value_eq(*parse_value("[1, 2]"), *parse_value("[2, 1]")));
  CHECK(value_eq(*parse_value("0.1"), Value::number(1, 10)));
  CHECK(render_value(*parse_value("0.1")) == "1/10");
  CHECK_FALSE(value_eq(Value::number(1), Value::text("1")));
  CHECK_FALSE(value_eq(Value::boolean(true), Value::number(1)));
  CHECK_FALSE(value_eq(Value::record("A", {}), Value::record("B", {})));
}

TEST_CASE("rationals are canonical") {
  const Value v = Value::number(6, -4);
  CHECK(boost::multiprecision::numerator(v.as_number()) == -3);
  CHECK(boost::multiprecision::denominator(v.as_number()) == 2);
  CHECK(render_value(Value::number(4, 2)) == "2");
}

TEST_CASE("render canonical forms") {
  Example e;
  e.function = "median";
  e.args = {Value::list({Value::number(1), Value::number(2), Value::number(3)})};
  e.expected = Value::number(2);
  CHECK(render_example(e) == "median([list: 1, 2, 3]) is 2");

  Example o;
  o.function = "overlap";
  o.args = {Value::list({Value::text("A")}), Value::list({Value::text("a")})};
  o.expected = Value::number(0);
  CHECK(render_example(o) == "overlap([list: \"A\"], [list: \"a\"]) is 0");
}

TEST_CASE("value_eq is an equivalence relation on random values") {
  Rng rng(7);
  std::vector<Value> pool;
  for (int i = 0; i < 120; ++i) pool.push_back(random_value(rng, 3));
  for (const auto& a : pool) {
    CHECK(value_eq(a, a));
    for (const auto& b : pool) {
      CHECK(value_eq(a, b) == value_eq(b, a));
      if (!value_eq(a, b)) continue;
      for (const auto& c : pool)
        if (value_eq(b, c)) CHECK(value_eq(a, c));
    }
  }
}

TEST_CASE("render then parse is the identity on random examples") {
  Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    Example e;
    e.function = rng.below(2) ? "f" : "is-valid?";
    for (auto n = rng.below(4); n > 0; --n) e.args.push_back(random_value(rng, 3));
    e.expected = random_value(rng, 2);
    const std::string text = render_example(e);
    auto back = parse_example_line(text);
    REQUIRE_MESSAGE(std::holds_alternative<Example>(back), text);
    CHECK_MESSAGE(same_example(std::get<Example>(back), e), text);
    CHECK(render_example(std::get<Example>(back)) == text);
  }
}

TEST_CASE("parsing is total on arbitrary bytes") {
  std::mt19937_64 gen(3);
  const std::string alphabet = "f()[],:is 0123456789./-\"'\\#\nlistemptyTrue\xff\x00";
  for (int i = 0; i < 3000; ++i) {
    std::string s;
    const auto len = gen() % 40;
    for (std::size_t k = 0; k < len; ++k) s += alphabet[gen() % alphabet.size()];
    ParseResult r;
    CHECK_NOTHROW(r = parse_suite(s));
    for (const auto& e : r.suite.examples) {
      auto again = parse_example_line(render_example(e));
      CHECK(std::holds_alternative<Example>(again));
    }
  }
}
