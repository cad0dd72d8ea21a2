#pragma once

#include "chaffkit/problem.hpp"

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace chaffkit {

/// Looks up a built-in implementation such as `median.wheat` or `docdiff.always-0`.
/// Returns nullptr for unknown names.
std::shared_ptr<const Backend> builtin_backend(std::string_view name);

std::vector<std::string> builtin_backend_names();

/// Built-in problems: "median" (4-mutant deck) and "docdiff" (14-mutant family).
/// Throws std::invalid_argument for other names.
ProblemSpec builtin_problem(std::string_view name);

std::vector<std::string> builtin_problem_names();

}  // namespace chaffkit
