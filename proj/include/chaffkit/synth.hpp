#pragma once

#include "chaffkit/harness.hpp"
#include "chaffkit/problem.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace chaffkit {

/// Synthetic cohort parameters. A mix key of "none" weights students without a misconception.
struct SynthConfig {
  std::uint64_t seed = 0;
  std::size_t students = 50;
  std::vector<std::pair<std::string, double>> misconception_mix;
  double typo_rate = 0.2;
  std::size_t examples_min = 4;
  std::size_t examples_max = 10;
  double misconception_rate = 0.6;  // share of a misconceived student's non-typo examples that are wrong
  std::size_t submissions_max = 3;  // snapshots per student (growing prefixes of their suite)
  std::size_t spammer_count = 0;
  std::size_t spam_submissions = 30;
  std::size_t search_limit = 2000;  // input draws before a mutant is declared indistinguishable
};

inline constexpr const char* kTypoLabel = "typo";

struct TruthRow {
  std::string raw_text;
  std::string student_id;
  std::string label;  // mutant id or "typo"
};

struct SynthCohort {
  std::vector<Submission> submissions;
  std::vector<TruthRow> truth;
};

/// Deterministic for a given (problem, config). Throws std::invalid_argument when the
/// config is malformed or a mutant never disagrees with the wheat within the search limit.
SynthCohort generate_cohort(const ProblemSpec& problem, const SynthConfig& cfg);

/// Portable seeded generator: std::mt19937_64 with explicit integer mapping, so
/// streams do not depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n);
  /// Uniform in [lo, hi].
  long long between(long long lo, long long hi);
  /// Uniform in [0, 1).
  double unit();

 private:
  std::mt19937_64 engine_;
};

/// Random arguments for one call of `function`, drawn from the small built-in domains
/// (median: 1-7 integers in [-9, 9]; overlap: two 1-5 word documents over 6 words).
/// Throws std::invalid_argument for functions without a sampler.
std::vector<Value> sample_args(const std::string& function, Rng& rng);

}  // namespace chaffkit
