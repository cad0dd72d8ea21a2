#include "chaffkit/codec.hpp"

#include "chaffkit/builtins.hpp"
#include "chaffkit/plugin.hpp"

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace chaffkit {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw std::invalid_argument(msg); }

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) bad(where + ": missing \"" + key + "\"");
  return obj.at(key);
}

std::string require_string(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_string()) bad(where + ": \"" + key + "\" must be a string");
  return v.get<std::string>();
}

Rational parse_num_field(const std::string& s) {
  auto v = parse_value(s);
  if (!v || !v->is_number()) bad("bad number literal \"" + s + "\"");
  return v->as_number();
}

std::shared_ptr<const Backend> backend_from(const json& obj, const std::string& where,
                                            const std::filesystem::path& base_dir) {
  if (obj.contains("builtin")) {
    const std::string name = require_string(obj, "builtin", where);
    auto b = builtin_backend(name);
    if (!b) bad(where + ": unknown builtin \"" + name + "\"");
    return b;
  }
  if (obj.contains("plugin")) {
    const json& p = obj.at("plugin");
    const json& cmd = require(p, "cmd", where + ".plugin");
    if (!cmd.is_array() || cmd.empty()) bad(where + ".plugin: \"cmd\" must be a non-empty array");
    std::vector<std::string> argv;
    for (const auto& a : cmd) {
      if (!a.is_string()) bad(where + ".plugin: \"cmd\" entries must be strings");
      argv.push_back(a.get<std::string>());
    }
    if (argv[0].find('/') != std::string::npos && std::filesystem::path(argv[0]).is_relative())
      argv[0] = (base_dir / argv[0]).lexically_normal().string();
    long long timeout_ms = 5000;
    if (p.contains("timeout_ms")) {
      if (!p["timeout_ms"].is_number_integer() || p["timeout_ms"].get<long long>() <= 0)
        bad(where + ".plugin: \"timeout_ms\" must be a positive integer");
      timeout_ms = p["timeout_ms"].get<long long>();
    }
    return std::make_shared<PluginBackend>(std::move(argv), std::chrono::milliseconds(timeout_ms));
  }
  bad(where + ": implementation needs \"builtin\" or \"plugin\"");
}

ProblemSpec problem_from_json_at(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) bad("problem config must be a JSON object");
  if (j.contains("builtin_problem")) {
    if (!j["builtin_problem"].is_string()) bad("\"builtin_problem\" must be a string");
    return builtin_problem(j["builtin_problem"].get<std::string>());
  }

  ProblemSpec p;
  p.name = require_string(j, "name", "problem");

  const json& fns = require(j, "functions", "problem");
  if (!fns.is_array()) bad("problem: \"functions\" must be an array");
  for (std::size_t i = 0; i < fns.size(); ++i) {
    const std::string where = "functions[" + std::to_string(i) + "]";
    FunctionSig f;
    f.name = require_string(fns[i], "name", where);
    const json& ar = require(fns[i], "arity", where);
    if (!ar.is_number_unsigned()) bad(where + ": \"arity\" must be a natural number");
    f.arity = ar.get<std::size_t>();
    f.subproblem = fns[i].contains("subproblem") ? require_string(fns[i], "subproblem", where) : f.name;
    p.functions.push_back(std::move(f));
  }

  if (j.contains("characteristics")) {
    const json& cs = j["characteristics"];
    if (!cs.is_array()) bad("problem: \"characteristics\" must be an array");
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const std::string where = "characteristics[" + std::to_string(i) + "]";
      Characteristic c;
      c.id = require_string(cs[i], "id", where);
      c.text = require_string(cs[i], "text", where);
      if (cs[i].contains("failure_notes")) c.failure_notes = require_string(cs[i], "failure_notes", where);
      p.characteristics.push_back(std::move(c));
    }
  }

  const json& ws = require(j, "wheats", "problem");
  if (!ws.is_array()) bad("problem: \"wheats\" must be an array");
  for (std::size_t i = 0; i < ws.size(); ++i) {
    const std::string where = "wheats[" + std::to_string(i) + "]";
    Implementation w;
    w.role = Role::Wheat;
    if (ws[i].contains("id")) w.id = require_string(ws[i], "id", where);
    else if (ws[i].contains("builtin")) w.id = require_string(ws[i], "builtin", where);
    else w.id = "wheat-" + std::to_string(i + 1);
    if (ws[i].contains("characteristic")) bad(where + ": a wheat cannot reference a characteristic");
    w.backend = backend_from(ws[i], where, base_dir);
    p.wheats.push_back(std::move(w));
  }

  if (j.contains("mutants")) {
    const json& ms = j["mutants"];
    if (!ms.is_array()) bad("problem: \"mutants\" must be an array");
    for (std::size_t i = 0; i < ms.size(); ++i) {
      const std::string where = "mutants[" + std::to_string(i) + "]";
      Implementation m;
      m.role = Role::Mutant;
      m.id = require_string(ms[i], "id", where);
      m.characteristic_id = require_string(ms[i], "characteristic", where);
      m.explanation = ms[i].contains("explanation") ? require_string(ms[i], "explanation", where) : "";
      if (ms[i].contains("subproblem")) m.subproblem = require_string(ms[i], "subproblem", where);
      m.backend = backend_from(ms[i], where, base_dir);
      p.mutant_family.push_back(std::move(m));
    }
  }

  validate_problem(p);
  return p;
}

}  // namespace

json value_to_json(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Number: return json{{"num", render_rational(v.as_number())}};
    case Value::Kind::Text: return v.as_text();
    case Value::Kind::Boolean: return v.as_boolean();
    case Value::Kind::List: {
      json arr = json::array();
      for (const auto& x : v.as_list()) arr.push_back(value_to_json(x));
      return arr;
    }
    case Value::Kind::Record: {
      json fields = json::array();
      for (const auto& x : v.as_record().fields) fields.push_back(value_to_json(x));
      return json{{"ctor", v.as_record().ctor}, {"fields", fields}};
    }
  }
  return nullptr;
}

Value value_from_json(const json& j) {
  if (j.is_string()) return Value::text(j.get<std::string>());
  if (j.is_boolean()) return Value::boolean(j.get<bool>());
  if (j.is_number_integer()) return Value::number(j.get<long long>());
  if (j.is_array()) {
    List items;
    for (const auto& x : j) items.push_back(value_from_json(x));
    return Value::list(std::move(items));
  }
  if (j.is_object()) {
    if (j.contains("num")) {
      if (!j["num"].is_string()) bad("\"num\" must be a string");
      return Value::number(parse_num_field(j["num"].get<std::string>()));
    }
    if (j.contains("ctor")) {
      if (!j["ctor"].is_string()) bad("\"ctor\" must be a string");
      std::vector<Value> fields;
      if (j.contains("fields")) {
        if (!j["fields"].is_array()) bad("\"fields\" must be an array");
        for (const auto& x : j["fields"]) fields.push_back(value_from_json(x));
      }
      return Value::record(j["ctor"].get<std::string>(), std::move(fields));
    }
  }
  bad("cannot decode value " + j.dump());
}

ProblemSpec problem_from_json(const json& j) { return problem_from_json_at(j, std::filesystem::current_path()); }

ProblemSpec load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad(path.string() + ": cannot open problem config");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    bad(path.string() + ": " + e.what());
  }
  try {
    return problem_from_json_at(j, path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
  } catch (const std::invalid_argument& e) {
    bad(path.string() + ": " + e.what());
  }
}

json problem_to_json(const ProblemSpec& p) {
  json j;
  j["name"] = p.name;
  j["functions"] = json::array();
  for (const auto& f : p.functions)
    j["functions"].push_back({{"name", f.name}, {"arity", f.arity}, {"subproblem", f.subproblem}});
  j["characteristics"] = json::array();
  for (const auto& c : p.characteristics) {
    json cj = {{"id", c.id}, {"text", c.text}};
    if (c.failure_notes) cj["failure_notes"] = *c.failure_notes;
    j["characteristics"].push_back(cj);
  }
  j["wheats"] = json::array();
  for (const auto& w : p.wheats) j["wheats"].push_back({{"id", w.id}, {"backend", w.backend->describe()}});
  j["mutants"] = json::array();
  for (const auto& m : p.mutant_family) {
    json mj = {{"id", m.id},
               {"characteristic", m.characteristic_id.value_or("")},
               {"explanation", m.explanation},
               {"subproblem", p.subproblem_of(m)},
               {"backend", m.backend->describe()}};
    j["mutants"].push_back(mj);
  }
  return j;
}

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

std::string problem_hash(const ProblemSpec& p) { return "fnv1a64:" + fnv1a64_hex(problem_to_json(p).dump()); }

ProblemSpec resolve_problem(const std::string& ref) {
  const std::filesystem::path path(ref);
  if (path.extension() == ".json" || std::filesystem::exists(path)) return load_problem(path);
  return builtin_problem(ref);
}

}  // namespace chaffkit
