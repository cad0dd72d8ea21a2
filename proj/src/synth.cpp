#include "chaffkit/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <optional>
#include <set>

namespace chaffkit {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below(0)");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do x = engine_();
  while (x >= limit);
  return x % n;
}

long long Rng::between(long long lo, long long hi) {
  return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

double Rng::unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

namespace {

const std::vector<std::string> kVocabulary = {"the", "The", "cat", "Cat", "sat", "mat"};

}  // namespace

std::vector<Value> sample_args(const std::string& function, Rng& rng) {
  if (function == "median") {
    List xs;
    const auto len = rng.between(1, 7);
    for (long long i = 0; i < len; ++i) xs.push_back(Value::number(rng.between(-9, 9)));
    return {Value::list(std::move(xs))};
  }
  if (function == "overlap") {
    auto doc = [&] {
      List words;
      const auto len = rng.between(1, 5);
      for (long long i = 0; i < len; ++i) words.push_back(Value::text(kVocabulary[rng.below(kVocabulary.size())]));
      return Value::list(std::move(words));
    };
    Value a = doc();
    Value b = doc();
    return {std::move(a), std::move(b)};
  }
  throw std::invalid_argument("no input sampler for function '" + function + "'");
}

namespace {

struct Generator {
  const ProblemSpec& problem;
  const SynthConfig& cfg;
  Rng rng;

  const FunctionSig& function_for(const Implementation* mutant) {
    if (mutant) {
      const std::string tag = problem.subproblem_of(*mutant);
      for (const auto& f : problem.functions)
        if (f.subproblem == tag) return f;
    }
    return problem.functions[rng.below(problem.functions.size())];
  }

  Example make(const std::string& fn, std::vector<Value> args, Value expected) {
    Example e;
    e.function = fn;
    e.args = std::move(args);
    e.expected = std::move(expected);
    e.raw_text = render_example(e);
    return e;
  }

  std::optional<Value> try_eval(const Implementation& impl, const std::string& fn, const std::vector<Value>& args) {
    try {
      return eval_call(problem, impl, fn, args);
    } catch (const EvalError&) {
      return std::nullopt;
    }
  }

  Example misconceived(const Implementation& mutant) {
    const FunctionSig& f = function_for(&mutant);
    for (std::size_t attempt = 0; attempt < cfg.search_limit; ++attempt) {
      auto args = sample_args(f.name, rng);
      auto truth = try_eval(problem.wheats.front(), f.name, args);
      auto wrong = try_eval(mutant, f.name, args);
      if (truth && wrong && !value_eq(*truth, *wrong)) return make(f.name, std::move(args), std::move(*wrong));
    }
    throw std::invalid_argument("mutant '" + mutant.id + "' never disagrees with the wheat on " +
                                std::to_string(cfg.search_limit) + " sampled inputs");
  }

  Example correct() {
    const FunctionSig& f = function_for(nullptr);
    for (std::size_t attempt = 0; attempt < cfg.search_limit; ++attempt) {
      auto args = sample_args(f.name, rng);
      if (auto truth = try_eval(problem.wheats.front(), f.name, args)) return make(f.name, std::move(args), std::move(*truth));
    }
    throw std::invalid_argument("wheat rejects every sampled input for '" + f.name + "'");
  }

  Value perturb(const Value& v) {
    for (;;) {
      Value out;
      switch (v.kind()) {
        case Value::Kind::Number: {
          const Rational& r = v.as_number();
          if (boost::multiprecision::denominator(r) == 1 && rng.unit() < 0.5) {
            long long delta = rng.between(1, 5);
            out = Value::number(rng.unit() < 0.5 ? Rational(r + delta) : Rational(r - delta));
          } else {
            const long long q = rng.between(1, 12);
            out = Value::number(Rational(rng.between(0, 2 * q), q));
          }
          break;
        }
        case Value::Kind::Text: {
          std::string s = v.as_text();
          s += static_cast<char>('a' + rng.below(26));
          out = Value::text(std::move(s));
          break;
        }
        case Value::Kind::Boolean: out = Value::boolean(!v.as_boolean()); break;
        case Value::Kind::List: {
          List items = v.as_list();
          if (!items.empty() && rng.unit() < 0.5) items.pop_back();
          else items.push_back(items.empty() ? Value::number(rng.between(0, 9)) : items.front());
          out = Value::list(std::move(items));
          break;
        }
        case Value::Kind::Record: out = Value::text(v.as_record().ctor); break;
      }
      if (!value_eq(out, v)) return out;
    }
  }

  Example typo() {
    Example ok = correct();
    return make(ok.function, ok.args, perturb(ok.expected));
  }

  const Implementation* sample_misconception(bool allow_none) {
    double total = 0;
    for (const auto& [id, w] : cfg.misconception_mix)
      if (allow_none || id != "none") total += w;
    if (total <= 0) return nullptr;
    double x = rng.unit() * total;
    for (const auto& [id, w] : cfg.misconception_mix) {
      if (!allow_none && id == "none") continue;
      if (x < w) return id == "none" ? nullptr : problem.find_mutant(id);
      x -= w;
    }
    const auto& last = cfg.misconception_mix.back().first;
    return last == "none" ? nullptr : problem.find_mutant(last);
  }
};

std::string timestamp_at(std::size_t tick) {
  const std::size_t seconds = tick * 37;
  char buf[64];
  std::snprintf(buf, sizeof buf, "2020-10-%02zuT%02zu:%02zu:%02zuZ", 1 + seconds / 86400, seconds / 3600 % 24,
                seconds / 60 % 60, seconds % 60);
  return buf;
}

void validate(const ProblemSpec& problem, const SynthConfig& cfg) {
  if (cfg.misconception_mix.empty()) throw std::invalid_argument("misconception_mix is empty");
  double total = 0;
  for (const auto& [id, w] : cfg.misconception_mix) {
    if (!(w >= 0)) throw std::invalid_argument("weight of '" + id + "' is negative");
    if (id != "none" && !problem.find_mutant(id))
      throw std::invalid_argument("misconception '" + id + "' is not a mutant of '" + problem.name + "'");
    total += w;
  }
  if (total <= 0) throw std::invalid_argument("misconception weights are all zero");
  if (!(cfg.typo_rate >= 0 && cfg.typo_rate <= 1)) throw std::invalid_argument("typo_rate must be in [0, 1]");
  if (!(cfg.misconception_rate >= 0 && cfg.misconception_rate <= 1))
    throw std::invalid_argument("misconception_rate must be in [0, 1]");
  if (cfg.examples_min == 0 || cfg.examples_min > cfg.examples_max)
    throw std::invalid_argument("examples per student must be a range 1 <= min <= max");
  if (cfg.submissions_max == 0) throw std::invalid_argument("submissions_max must be at least 1");
}

}  // namespace

SynthCohort generate_cohort(const ProblemSpec& problem, const SynthConfig& cfg) {
  validate(problem, cfg);
  Generator gen{problem, cfg, Rng(cfg.seed)};
  SynthCohort out;
  std::set<std::pair<std::string, std::string>> labelled;
  std::size_t tick = 0;

  auto record = [&](const Example& e, const std::string& student, const std::string& label) {
    if (labelled.insert({student, e.raw_text}).second) out.truth.push_back({e.raw_text, student, label});
  };
  auto suite_text = [](const std::vector<Example>& xs, std::size_t count) {
    std::string text = "check:\n";
    for (std::size_t i = 0; i < count; ++i) text += "  " + xs[i].raw_text + "\n";
    return text + "end\n";
  };

  for (std::size_t s = 0; s < cfg.students; ++s) {
    char idbuf[32];
    std::snprintf(idbuf, sizeof idbuf, "s%03zu", s + 1);
    const std::string student = idbuf;
    const Implementation* mis = gen.sample_misconception(true);
    const auto count = static_cast<std::size_t>(gen.rng.between(static_cast<long long>(cfg.examples_min),
                                                                static_cast<long long>(cfg.examples_max)));
    std::vector<Example> examples;
    for (std::size_t k = 0; k < count; ++k) {
      if (gen.rng.unit() < cfg.typo_rate) {
        examples.push_back(gen.typo());
        record(examples.back(), student, kTypoLabel);
      } else if (mis && gen.rng.unit() < cfg.misconception_rate) {
        examples.push_back(gen.misconceived(*mis));
        record(examples.back(), student, mis->id);
      } else {
        examples.push_back(gen.correct());
      }
    }
    const auto snapshots = static_cast<std::size_t>(gen.rng.between(1, static_cast<long long>(cfg.submissions_max)));
    for (std::size_t j = 1; j <= snapshots; ++j) {
      const std::size_t upto = (j * examples.size() + snapshots - 1) / snapshots;
      out.submissions.push_back({student, timestamp_at(tick++), suite_text(examples, upto)});
    }
  }

  for (std::size_t s = 0; s < cfg.spammer_count; ++s) {
    char idbuf[32];
    std::snprintf(idbuf, sizeof idbuf, "spammer-%02zu", s + 1);
    const std::string student = idbuf;
    const Implementation* mis = gen.sample_misconception(false);
    if (!mis) throw std::invalid_argument("spammers need at least one weighted mutant in misconception_mix");
    const Example repeated = gen.misconceived(*mis);
    record(repeated, student, mis->id);
    for (std::size_t j = 0; j < cfg.spam_submissions; ++j) {
      std::vector<Example> xs = {repeated, gen.misconceived(*mis)};
      record(xs.back(), student, mis->id);
      out.submissions.push_back({student, timestamp_at(tick++), suite_text(xs, xs.size())});
    }
  }
  return out;
}

}  // namespace chaffkit
