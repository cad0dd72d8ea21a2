#include "chaffkit/builtins.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace chaffkit {

namespace {

using Fn = std::function<Value(std::span<const Value>)>;

class BuiltinBackend final : public Backend {
 public:
  BuiltinBackend(std::string name, std::string function, Fn fn)
      : name_(std::move(name)), function_(std::move(function)), fn_(std::move(fn)) {}

  Value call(std::string_view function, std::span<const Value> args) const override {
    if (function != function_)
      throw EvalError(EvalErrorKind::UnknownFunction,
                      "'" + name_ + "' does not implement '" + std::string(function) + "'");
    return fn_(args);
  }

  std::string describe() const override { return "builtin:" + name_; }

 private:
  std::string name_;
  std::string function_;
  Fn fn_;
};

// ---------------------------------------------------------------------------
// median

std::vector<Rational> numbers_arg(std::span<const Value> args) {
  if (args.size() != 1) throw EvalError(EvalErrorKind::ArityMismatch, "median expects 1 argument");
  if (!args[0].is_list()) throw EvalError(EvalErrorKind::Type, "median expects a list of numbers");
  std::vector<Rational> xs;
  for (const auto& v : args[0].as_list()) {
    if (!v.is_number()) throw EvalError(EvalErrorKind::Type, "median expects a list of numbers");
    xs.push_back(v.as_number());
  }
  if (xs.empty()) throw EvalError(EvalErrorKind::Domain, "median of an empty list");
  return xs;
}

Value median_sorted(std::span<const Value> args) {
  auto xs = numbers_arg(args);
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  if (n % 2 == 1) return Value::number(xs[n / 2]);
  return Value::number((xs[n / 2 - 1] + xs[n / 2]) / 2);
}

// Second wheat: selection instead of a full sort.
Value median_select(std::span<const Value> args) {
  auto xs = numbers_arg(args);
  const std::size_t n = xs.size();
  auto upper = xs.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(xs.begin(), upper, xs.end());
  const Rational hi = *upper;
  if (n % 2 == 1) return Value::number(hi);
  const Rational lo = *std::max_element(xs.begin(), upper);
  return Value::number((lo + hi) / 2);
}

Value median_mean(std::span<const Value> args) {
  const auto xs = numbers_arg(args);
  Rational sum = 0;
  for (const auto& x : xs) sum += x;
  return Value::number(sum / static_cast<long long>(xs.size()));
}

// Most frequent value; ties go to the value that occurs first in the input.
Value median_mode(std::span<const Value> args) {
  const auto xs = numbers_arg(args);
  std::size_t best = 0;
  std::size_t best_count = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto c = static_cast<std::size_t>(std::count(xs.begin(), xs.end(), xs[i]));
    if (c > best_count) {
      best = i;
      best_count = c;
    }
  }
  return Value::number(xs[best]);
}

// Middle of the list as written; for even lengths, the right-of-middle element.
Value median_unsorted_middle(std::span<const Value> args) {
  const auto xs = numbers_arg(args);
  return Value::number(xs[xs.size() / 2]);
}

Value median_even_left(std::span<const Value> args) {
  auto xs = numbers_arg(args);
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return Value::number(n % 2 == 1 ? xs[n / 2] : xs[n / 2 - 1]);
}

// ---------------------------------------------------------------------------
// docdiff

using Doc = std::vector<std::string>;
using Bag = std::map<std::string, long long>;

std::string ascii_lower(std::string s) {
  for (char& c : s)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return s;
}

Doc doc_arg(const Value& v) {
  if (!v.is_list()) throw EvalError(EvalErrorKind::Type, "overlap expects two lists of strings");
  Doc d;
  for (const auto& w : v.as_list()) {
    if (!w.is_text()) throw EvalError(EvalErrorKind::Type, "overlap expects two lists of strings");
    d.push_back(w.as_text());
  }
  if (d.empty()) throw EvalError(EvalErrorKind::Domain, "overlap requires non-empty documents");
  return d;
}

struct DocPair {
  Doc a;
  Doc b;
};

DocPair docs_arg(std::span<const Value> args, bool fold_case = true) {
  if (args.size() != 2) throw EvalError(EvalErrorKind::ArityMismatch, "overlap expects 2 arguments");
  DocPair p{doc_arg(args[0]), doc_arg(args[1])};
  if (fold_case) {
    for (auto& w : p.a) w = ascii_lower(w);
    for (auto& w : p.b) w = ascii_lower(w);
  }
  return p;
}

Bag bag_of(const Doc& d) {
  Bag b;
  for (const auto& w : d) ++b[w];
  return b;
}

long long count_in(const Bag& b, const std::string& w) {
  auto it = b.find(w);
  return it == b.end() ? 0 : it->second;
}

struct Vectors {
  std::vector<long long> v1;
  std::vector<long long> v2;
};

// Count vectors over `vocab`.
Vectors count_vectors(const Bag& b1, const Bag& b2, const std::vector<std::string>& vocab) {
  Vectors out;
  for (const auto& w : vocab) {
    out.v1.push_back(count_in(b1, w));
    out.v2.push_back(count_in(b2, w));
  }
  return out;
}

std::vector<std::string> union_vocab(const Bag& b1, const Bag& b2) {
  std::vector<std::string> vocab;
  for (const auto& [w, _] : b1) vocab.push_back(w);
  for (const auto& [w, _] : b2)
    if (!b1.count(w)) vocab.push_back(w);
  return vocab;
}

std::vector<std::string> keys_of(const Bag& b) {
  std::vector<std::string> vocab;
  for (const auto& [w, _] : b) vocab.push_back(w);
  return vocab;
}

long long dot(const std::vector<long long>& x, const std::vector<long long>& y) {
  long long s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

long long sq(const std::vector<long long>& x) { return dot(x, x); }

Rational ratio(long long num, long long den) {
  if (den == 0) throw EvalError(EvalErrorKind::Domain, "division by zero");
  return Rational(num) / Rational(den);
}

Vectors union_counts(const DocPair& p) {
  const Bag b1 = bag_of(p.a), b2 = bag_of(p.b);
  return count_vectors(b1, b2, union_vocab(b1, b2));
}

Rational wheat_overlap(const DocPair& p) {
  const auto v = union_counts(p);
  return ratio(dot(v.v1, v.v2), std::max(sq(v.v1), sq(v.v2)));
}

Value docdiff_wheat(std::span<const Value> args) { return Value::number(wheat_overlap(docs_arg(args))); }

Value docdiff_case_sensitive(std::span<const Value> args) {
  return Value::number(wheat_overlap(docs_arg(args, false)));
}

Value docdiff_presence(std::span<const Value> args) {
  auto v = union_counts(docs_arg(args));
  for (auto& x : v.v1) x = x > 0;
  for (auto& x : v.v2) x = x > 0;
  return Value::number(ratio(dot(v.v1, v.v2), std::max(sq(v.v1), sq(v.v2))));
}

// Shared words counted once, but normalization still uses the frequency vectors.
Value docdiff_set_words(std::span<const Value> args) {
  const auto v = union_counts(docs_arg(args));
  long long shared = 0;
  for (std::size_t i = 0; i < v.v1.size(); ++i) shared += (v.v1[i] > 0 && v.v2[i] > 0);
  return Value::number(ratio(shared, std::max(sq(v.v1), sq(v.v2))));
}

Value docdiff_normalize_smaller(std::span<const Value> args) {
  const auto v = union_counts(docs_arg(args));
  return Value::number(ratio(dot(v.v1, v.v2), std::min(sq(v.v1), sq(v.v2))));
}

Value docdiff_normalize_mag4(std::span<const Value> args) {
  const auto v = union_counts(docs_arg(args));
  const long long m = std::max(sq(v.v1), sq(v.v2));
  return Value::number(ratio(dot(v.v1, v.v2), m * m));
}

Value docdiff_no_normalization(std::span<const Value> args) {
  const auto v = union_counts(docs_arg(args));
  return Value::number(Rational(dot(v.v1, v.v2)));
}

// The magnitude is irrational unless the squared magnitude is a perfect square;
// exact numbers cannot represent that, so it is a domain error.
Value docdiff_normalize_magnitude(std::span<const Value> args) {
  const auto v = union_counts(docs_arg(args));
  const long long m2 = std::max(sq(v.v1), sq(v.v2));
  long long root = 0;
  while ((root + 1) * (root + 1) <= m2) ++root;
  if (root * root != m2) throw EvalError(EvalErrorKind::Domain, "magnitude is irrational");
  return Value::number(ratio(dot(v.v1, v.v2), root));
}

Value docdiff_identical_only(std::span<const Value> args) {
  const auto p = docs_arg(args);
  return Value::number(p.a == p.b ? 1 : 0);
}

bool sub_bag(const Bag& small, const Bag& big) {
  return std::all_of(small.begin(), small.end(), [&](const auto& kv) { return count_in(big, kv.first) >= kv.second; });
}

Value docdiff_subsumes_one(std::span<const Value> args) {
  const auto p = docs_arg(args);
  const Bag b1 = bag_of(p.a), b2 = bag_of(p.b);
  if (sub_bag(b1, b2) || sub_bag(b2, b1)) return Value::number(1);
  return Value::number(wheat_overlap(p));
}

Value docdiff_always(std::span<const Value> args, long long k) {
  docs_arg(args);
  return Value::number(k);
}

Value docdiff_round(std::span<const Value> args) {
  const Rational w = wheat_overlap(docs_arg(args));
  return Value::number(w * 2 >= 1 ? 1 : 0);
}

Value docdiff_one_vocab(std::span<const Value> args, bool first) {
  const auto p = docs_arg(args);
  const Bag b1 = bag_of(p.a), b2 = bag_of(p.b);
  const auto v = count_vectors(b1, b2, keys_of(first ? b1 : b2));
  return Value::number(ratio(dot(v.v1, v.v2), std::max(sq(v.v1), sq(v.v2))));
}

// ---------------------------------------------------------------------------

struct Entry {
  const char* name;
  const char* function;
  Fn fn;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = {
      {"median.wheat", "median", median_sorted},
      {"median.wheat-select", "median", median_select},
      {"median.mean", "median", median_mean},
      {"median.mode", "median", median_mode},
      {"median.unsorted-middle", "median", median_unsorted_middle},
      {"median.even-left", "median", median_even_left},
      {"docdiff.wheat", "overlap", docdiff_wheat},
      {"docdiff.case-sensitive", "overlap", docdiff_case_sensitive},
      {"docdiff.presence", "overlap", docdiff_presence},
      {"docdiff.set-words", "overlap", docdiff_set_words},
      {"docdiff.normalize-smaller", "overlap", docdiff_normalize_smaller},
      {"docdiff.normalize-mag4", "overlap", docdiff_normalize_mag4},
      {"docdiff.no-normalization", "overlap", docdiff_no_normalization},
      {"docdiff.normalize-magnitude", "overlap", docdiff_normalize_magnitude},
      {"docdiff.identical-only", "overlap", docdiff_identical_only},
      {"docdiff.subsumes-one", "overlap", docdiff_subsumes_one},
      {"docdiff.always-0", "overlap", [](std::span<const Value> a) { return docdiff_always(a, 0); }},
      {"docdiff.always-1", "overlap", [](std::span<const Value> a) { return docdiff_always(a, 1); }},
      {"docdiff.round", "overlap", docdiff_round},
      {"docdiff.first-vocab", "overlap", [](std::span<const Value> a) { return docdiff_one_vocab(a, true); }},
      {"docdiff.second-vocab", "overlap", [](std::span<const Value> a) { return docdiff_one_vocab(a, false); }},
  };
  return entries;
}

Implementation wheat(const char* id) {
  return Implementation{id, Role::Wheat, std::nullopt, "", std::nullopt, builtin_backend(id)};
}

Implementation mutant(const char* id, const char* characteristic, const char* explanation) {
  return Implementation{id, Role::Mutant, characteristic, explanation, std::nullopt, builtin_backend(id)};
}

ProblemSpec median_problem() {
  ProblemSpec p;
  p.name = "median";
  p.functions = {{"median", 1, "median"}};
  p.wheats = {wheat("median.wheat"), wheat("median.wheat-select")};
  p.characteristics = {
      {"ordered", "The median is taken from the values in sorted order, not the order they were written in.",
       std::nullopt},
      {"middle", "The median is the middle value, which is neither the average of all values nor the most common one.",
       std::nullopt},
      {"even", "For an even number of values the median is the average of the two middle values.", std::nullopt},
  };
  p.mutant_family = {
      mutant("median.mean", "middle", "Returns the mean of the list"),
      mutant("median.mode", "middle", "Returns the most frequent value (first occurrence wins ties)"),
      mutant("median.unsorted-middle", "ordered", "Returns the middle element without sorting"),
      mutant("median.even-left", "even", "Returns the left-of-middle element for even-length lists"),
  };
  return p;
}

ProblemSpec docdiff_problem() {
  ProblemSpec p;
  p.name = "docdiff";
  p.functions = {{"overlap", 2, "overlap"}};
  p.wheats = {wheat("docdiff.wheat")};
  p.characteristics = {
      {"case", "Words match when they contain the same characters in the same order, regardless of case.",
       "Treating case as significant."},
      {"frequency", "Each vector entry counts how often its word occurs in the document.",
       "Recording only whether a word occurs."},
      {"duplicates", "A document may repeat words, and every repetition counts.",
       "Collecting words into a set and losing repeats."},
      {"normalization", "The overlap is divided by the squared magnitude of the larger document vector.",
       "Dividing by the wrong quantity or not dividing at all."},
      {"proportional", "The overlap grows with the dot product of the two document vectors.",
       "Answering only 0 or 1."},
      {"no-rounding", "The overlap is an exact fraction and is never rounded.", "Rounding the result."},
      {"all-words", "Both vectors range over every distinct word of either document.",
       "Building a vector from one document's words only."},
  };
  p.mutant_family = {
      mutant("docdiff.case-sensitive", "case", "Performs a case-sensitive comparison of words"),
      mutant("docdiff.presence", "frequency", "Uses 0/1 presence vectors instead of word counts"),
      mutant("docdiff.set-words", "duplicates", "Counts shared words once, ignoring repeats"),
      mutant("docdiff.normalize-smaller", "normalization", "Normalizes by the smaller vector's squared magnitude"),
      mutant("docdiff.normalize-mag4", "normalization", "Normalizes by the fourth power of the magnitude"),
      mutant("docdiff.no-normalization", "normalization", "Returns the raw dot product"),
      mutant("docdiff.normalize-magnitude", "normalization", "Normalizes by the magnitude instead of its square"),
      mutant("docdiff.identical-only", "proportional", "Returns 1 for identical lists and 0 otherwise"),
      mutant("docdiff.subsumes-one", "proportional", "Returns 1 when one document's words contain the other's"),
      mutant("docdiff.always-0", "proportional", "Always returns 0"),
      mutant("docdiff.always-1", "proportional", "Always returns 1"),
      mutant("docdiff.round", "no-rounding", "Rounds the overlap to 0 or 1"),
      mutant("docdiff.first-vocab", "all-words", "Builds vectors over the first document's words only"),
      mutant("docdiff.second-vocab", "all-words", "Builds vectors over the second document's words only"),
  };
  return p;
}

}  // namespace

std::shared_ptr<const Backend> builtin_backend(std::string_view name) {
  static const auto table = [] {
    std::map<std::string, std::shared_ptr<const Backend>, std::less<>> t;
    for (const auto& e : registry()) t.emplace(e.name, std::make_shared<BuiltinBackend>(e.name, e.function, e.fn));
    return t;
  }();
  auto it = table.find(name);
  return it == table.end() ? nullptr : it->second;
}

std::vector<std::string> builtin_backend_names() {
  std::vector<std::string> names;
  for (const auto& e : registry()) names.emplace_back(e.name);
  return names;
}

ProblemSpec builtin_problem(std::string_view name) {
  if (name == "median") return median_problem();
  if (name == "docdiff") return docdiff_problem();
  throw std::invalid_argument("unknown built-in problem '" + std::string(name) + "'");
}

std::vector<std::string> builtin_problem_names() { return {"median", "docdiff"}; }

}  // namespace chaffkit
