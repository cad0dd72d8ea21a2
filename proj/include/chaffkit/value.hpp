#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace chaffkit {

/// Exact rational; always normalized to lowest terms with positive denominator.
using Rational = boost::multiprecision::cpp_rational;

class Value;

using List = std::vector<Value>;

struct Record {
  std::string ctor;
  std::vector<Value> fields;
};

/// Immutable runtime value shared by examples, implementations and plug-ins.
class Value {
 public:
  using Storage = std::variant<Rational, std::string, bool, List, Record>;

  enum class Kind { Number, Text, Boolean, List, Record };

  Value() : data_(Rational(0)) {}

  static Value number(Rational r) { return Value(Storage(std::move(r))); }
  static Value number(long long n) { return Value(Storage(Rational(n))); }
  static Value number(long long p, long long q) { return Value(Storage(Rational(p) / Rational(q))); }
  static Value text(std::string s) { return Value(Storage(std::move(s))); }
  static Value boolean(bool b) { return Value(Storage(b)); }
  static Value list(List items) { return Value(Storage(std::move(items))); }
  static Value record(std::string ctor, std::vector<Value> fields) {
    return Value(Storage(Record{std::move(ctor), std::move(fields)}));
  }

  Kind kind() const { return static_cast<Kind>(data_.index()); }
  bool is_number() const { return kind() == Kind::Number; }
  bool is_text() const { return kind() == Kind::Text; }
  bool is_boolean() const { return kind() == Kind::Boolean; }
  bool is_list() const { return kind() == Kind::List; }
  bool is_record() const { return kind() == Kind::Record; }

  // Accessors throw std::bad_variant_access on kind mismatch.
  const Rational& as_number() const { return std::get<Rational>(data_); }
  const std::string& as_text() const { return std::get<std::string>(data_); }
  bool as_boolean() const { return std::get<bool>(data_); }
  const List& as_list() const { return std::get<List>(data_); }
  const Record& as_record() const { return std::get<Record>(data_); }

  const Storage& storage() const { return data_; }

 private:
  explicit Value(Storage s) : data_(std::move(s)) {}
  Storage data_;
};

/// Structural equality. Numbers compare exactly; different kinds are unequal.
bool value_eq(const Value& a, const Value& b);

inline bool operator==(const Value& a, const Value& b) { return value_eq(a, b); }

/// Total order used only for deterministic sorting (kind first, then content).
bool value_less(const Value& a, const Value& b);

std::string_view kind_name(Value::Kind k);

/// Canonical surface syntax: `3`, `-1/2`, `"s"`, `true`, `[list: ...]`, `Ctor(...)`.
std::string render_value(const Value& v);

std::string render_rational(const Rational& r);

}  // namespace chaffkit
