#pragma once

#include "chaffkit/problem.hpp"
#include "chaffkit/value.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>

namespace chaffkit {

using json = nlohmann::json;

/// Wire encoding: numbers {"num":"p/q"}, strings, booleans, arrays, {"ctor", "fields"}.
json value_to_json(const Value& v);

/// Throws std::invalid_argument on malformed input.
Value value_from_json(const json& j);

/// Reads a problem config. A config may also name a built-in problem via
/// {"builtin_problem": "docdiff"}. Throws std::invalid_argument with a message
/// naming the offending entry.
ProblemSpec load_problem(const std::filesystem::path& path);

ProblemSpec problem_from_json(const json& j);

/// Canonical description used for hashing; backends appear by description.
json problem_to_json(const ProblemSpec& p);

/// `fnv1a64:<hex>` of the canonical problem description.
std::string problem_hash(const ProblemSpec& p);

/// Resolves `--problem` arguments: a path to a JSON config, or a built-in name.
ProblemSpec resolve_problem(const std::string& ref);

std::string fnv1a64_hex(std::string_view bytes);

}  // namespace chaffkit
