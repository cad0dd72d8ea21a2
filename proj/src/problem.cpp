#include "chaffkit/problem.hpp"

#include <algorithm>
#include <set>

namespace chaffkit {

std::string_view eval_error_name(EvalErrorKind k) {
  switch (k) {
    case EvalErrorKind::UnknownFunction: return "unknown function";
    case EvalErrorKind::ArityMismatch: return "arity mismatch";
    case EvalErrorKind::Domain: return "domain error";
    case EvalErrorKind::Type: return "type error";
    case EvalErrorKind::PluginTimeout: return "plug-in timeout";
    case EvalErrorKind::PluginProtocol: return "plug-in protocol error";
  }
  return "?";
}

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Pass: return "pass";
    case Outcome::Fail: return "fail";
    case Outcome::Error: return "error";
  }
  return "?";
}

const FunctionSig* ProblemSpec::find_function(std::string_view fn) const {
  auto it = std::find_if(functions.begin(), functions.end(), [&](const FunctionSig& f) { return f.name == fn; });
  return it == functions.end() ? nullptr : &*it;
}

const Characteristic* ProblemSpec::find_characteristic(std::string_view id) const {
  auto it = std::find_if(characteristics.begin(), characteristics.end(),
                         [&](const Characteristic& c) { return c.id == id; });
  return it == characteristics.end() ? nullptr : &*it;
}

const Implementation* ProblemSpec::find_mutant(std::string_view id) const {
  auto idx = mutant_index(id);
  return idx ? &mutant_family[*idx] : nullptr;
}

std::optional<std::size_t> ProblemSpec::mutant_index(std::string_view id) const {
  for (std::size_t i = 0; i < mutant_family.size(); ++i)
    if (mutant_family[i].id == id) return i;
  return std::nullopt;
}

std::string ProblemSpec::subproblem_of(const Implementation& mutant) const {
  if (mutant.subproblem) return *mutant.subproblem;
  return functions.empty() ? std::string() : functions.front().subproblem;
}

std::vector<std::string> ProblemSpec::subproblems() const {
  std::vector<std::string> out;
  for (const auto& f : functions)
    if (std::find(out.begin(), out.end(), f.subproblem) == out.end()) out.push_back(f.subproblem);
  return out;
}

void validate_problem(const ProblemSpec& p) {
  if (p.name.empty()) throw std::invalid_argument("problem has no name");
  if (p.functions.empty()) throw std::invalid_argument("problem '" + p.name + "' declares no functions");
  if (p.wheats.empty()) throw std::invalid_argument("problem '" + p.name + "' needs at least one wheat");

  std::set<std::string> seen;
  for (const auto& f : p.functions)
    if (!seen.insert(f.name).second) throw std::invalid_argument("duplicate function '" + f.name + "'");

  seen.clear();
  for (const auto& c : p.characteristics)
    if (!seen.insert(c.id).second) throw std::invalid_argument("duplicate characteristic id '" + c.id + "'");

  const auto subs = p.subproblems();
  seen.clear();
  for (const auto& w : p.wheats) {
    if (!seen.insert(w.id).second) throw std::invalid_argument("duplicate implementation id '" + w.id + "'");
    if (w.role != Role::Wheat) throw std::invalid_argument("'" + w.id + "' listed as wheat has mutant role");
    if (w.characteristic_id) throw std::invalid_argument("wheat '" + w.id + "' must not reference a characteristic");
    if (!w.backend) throw std::invalid_argument("wheat '" + w.id + "' has no backend");
  }
  for (const auto& m : p.mutant_family) {
    if (!seen.insert(m.id).second) throw std::invalid_argument("duplicate implementation id '" + m.id + "'");
    if (m.role != Role::Mutant) throw std::invalid_argument("'" + m.id + "' listed as mutant has wheat role");
    if (!m.characteristic_id) throw std::invalid_argument("mutant '" + m.id + "' has no characteristic");
    if (!p.find_characteristic(*m.characteristic_id))
      throw std::invalid_argument("mutant '" + m.id + "' references unknown characteristic '" +
                                  *m.characteristic_id + "'");
    if (m.subproblem && std::find(subs.begin(), subs.end(), *m.subproblem) == subs.end())
      throw std::invalid_argument("mutant '" + m.id + "' references unknown subproblem '" + *m.subproblem + "'");
    if (!m.backend) throw std::invalid_argument("mutant '" + m.id + "' has no backend");
  }
}

Value eval_call(const ProblemSpec& problem, const Implementation& impl, std::string_view function,
                std::span<const Value> args) {
  const FunctionSig* sig = problem.find_function(function);
  if (!sig) throw EvalError(EvalErrorKind::UnknownFunction, "unknown function '" + std::string(function) + "'");
  if (sig->arity != args.size())
    throw EvalError(EvalErrorKind::ArityMismatch, "'" + sig->name + "' expects " + std::to_string(sig->arity) +
                                                      " argument(s), got " + std::to_string(args.size()));
  return impl.backend->call(function, args);
}

Verdict run_example(const ProblemSpec& problem, const Implementation& impl, const Example& e) {
  try {
    Value actual = eval_call(problem, impl, e.function, e.args);
    const bool ok = value_eq(actual, e.expected);
    return Verdict{ok ? Outcome::Pass : Outcome::Fail, std::move(actual), std::nullopt};
  } catch (const EvalError& err) {
    return Verdict{Outcome::Error, std::nullopt, std::string(eval_error_name(err.kind())) + ": " + err.what()};
  } catch (const std::exception& err) {
    return Verdict{Outcome::Error, std::nullopt, std::string("internal error: ") + err.what()};
  }
}

}  // namespace chaffkit
