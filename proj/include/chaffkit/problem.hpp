#pragma once

#include "chaffkit/example.hpp"
#include "chaffkit/value.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace chaffkit {

/// Why an implementation could not produce a value.
enum class EvalErrorKind { UnknownFunction, ArityMismatch, Domain, Type, PluginTimeout, PluginProtocol };

std::string_view eval_error_name(EvalErrorKind k);

class EvalError : public std::runtime_error {
 public:
  EvalError(EvalErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  EvalErrorKind kind() const { return kind_; }

 private:
  EvalErrorKind kind_;
};

/// Executable behaviour behind an Implementation. Must be safe to call concurrently.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual Value call(std::string_view function, std::span<const Value> args) const = 0;
  /// Human-readable description, e.g. `builtin:median.mean` or the plug-in command.
  virtual std::string describe() const = 0;
};

struct Characteristic {
  std::string id;
  std::string text;
  std::optional<std::string> failure_notes;
};

enum class Role { Wheat, Mutant };

struct Implementation {
  std::string id;
  Role role = Role::Wheat;
  std::optional<std::string> characteristic_id;  // mutants only
  std::string explanation;                       // mutants only
  std::optional<std::string> subproblem;         // mutants only; defaults to the first function's tag
  std::shared_ptr<const Backend> backend;
};

struct FunctionSig {
  std::string name;
  std::size_t arity = 0;
  std::string subproblem;
};

/// A problem: its functions, correct implementations and ordered mutant family.
/// The family order defines feature-vector bit positions.
struct ProblemSpec {
  std::string name;
  std::vector<FunctionSig> functions;
  std::vector<Implementation> wheats;
  std::vector<Implementation> mutant_family;
  std::vector<Characteristic> characteristics;

  const FunctionSig* find_function(std::string_view fn) const;
  const Characteristic* find_characteristic(std::string_view id) const;
  const Implementation* find_mutant(std::string_view id) const;
  std::optional<std::size_t> mutant_index(std::string_view id) const;
  /// Subproblem tag a mutant touches.
  std::string subproblem_of(const Implementation& mutant) const;
  /// Distinct subproblem tags in function order.
  std::vector<std::string> subproblems() const;
};

/// Throws std::invalid_argument when structural invariants are violated.
void validate_problem(const ProblemSpec& p);

enum class Outcome { Pass, Fail, Error };

std::string_view outcome_name(Outcome o);

struct Verdict {
  Outcome outcome = Outcome::Error;
  std::optional<Value> actual;
  std::optional<std::string> error_detail;
};

/// Checks the function table then dispatches to the backend. Throws EvalError.
Value eval_call(const ProblemSpec& problem, const Implementation& impl, std::string_view function,
                std::span<const Value> args);

/// Never throws; evaluation failures become Outcome::Error.
Verdict run_example(const ProblemSpec& problem, const Implementation& impl, const Example& e);

}  // namespace chaffkit
