#include "chaffkit/value.hpp"

#include <sstream>

namespace chaffkit {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool list_eq(const std::vector<Value>& a, const std::vector<Value>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!value_eq(a[i], b[i])) return false;
  return true;
}

bool list_less(const std::vector<Value>& a, const std::vector<Value>& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (value_less(a[i], b[i])) return true;
    if (value_less(b[i], a[i])) return false;
  }
  return a.size() < b.size();
}

void escape_into(std::ostringstream& out, const std::string& s) {
  out << '"';
  for (char c : s) {
    switch (c) {
      case '"': out << "\\\""; break;
      case '\\': out << "\\\\"; break;
      case '\n': out << "\\n"; break;
      case '\t': out << "\\t"; break;
      case '\r': out << "\\r"; break;
      default: out << c;
    }
  }
  out << '"';
}

void render_into(std::ostringstream& out, const Value& v) {
  std::visit(overloaded{
                 [&](const Rational& r) { out << render_rational(r); },
                 [&](const std::string& s) { escape_into(out, s); },
                 [&](bool b) { out << (b ? "true" : "false"); },
                 [&](const List& items) {
                   out << "[list: ";
                   for (std::size_t i = 0; i < items.size(); ++i) {
                     if (i) out << ", ";
                     render_into(out, items[i]);
                   }
                   out << "]";
                 },
                 [&](const Record& rec) {
                   out << rec.ctor << "(";
                   for (std::size_t i = 0; i < rec.fields.size(); ++i) {
                     if (i) out << ", ";
                     render_into(out, rec.fields[i]);
                   }
                   out << ")";
                 },
             },
             v.storage());
}

}  // namespace

bool value_eq(const Value& a, const Value& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Value::Kind::Number: return a.as_number() == b.as_number();
    case Value::Kind::Text: return a.as_text() == b.as_text();
    case Value::Kind::Boolean: return a.as_boolean() == b.as_boolean();
    case Value::Kind::List: return list_eq(a.as_list(), b.as_list());
    case Value::Kind::Record:
      return a.as_record().ctor == b.as_record().ctor &&
             list_eq(a.as_record().fields, b.as_record().fields);
  }
  return false;
}

bool value_less(const Value& a, const Value& b) {
  if (a.kind() != b.kind()) return a.kind() < b.kind();
  switch (a.kind()) {
    case Value::Kind::Number: return a.as_number() < b.as_number();
    case Value::Kind::Text: return a.as_text() < b.as_text();
    case Value::Kind::Boolean: return a.as_boolean() < b.as_boolean();
    case Value::Kind::List: return list_less(a.as_list(), b.as_list());
    case Value::Kind::Record: {
      const auto& ra = a.as_record();
      const auto& rb = b.as_record();
      if (ra.ctor != rb.ctor) return ra.ctor < rb.ctor;
      return list_less(ra.fields, rb.fields);
    }
  }
  return false;
}

std::string_view kind_name(Value::Kind k) {
  switch (k) {
    case Value::Kind::Number: return "number";
    case Value::Kind::Text: return "text";
    case Value::Kind::Boolean: return "boolean";
    case Value::Kind::List: return "list";
    case Value::Kind::Record: return "record";
  }
  return "?";
}

std::string render_rational(const Rational& r) {
  const auto num = boost::multiprecision::numerator(r);
  const auto den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string render_value(const Value& v) {
  std::ostringstream out;
  render_into(out, v);
  return out.str();
}

}  // namespace chaffkit
