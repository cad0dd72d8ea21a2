#include "doctest.h"

#include "chaffkit/builtins.hpp"
#include "chaffkit/clustering.hpp"
#include "chaffkit/synth.hpp"

#include <map>
#include <set>

using namespace chaffkit;

namespace {

SynthConfig config(std::uint64_t seed, std::vector<std::pair<std::string, double>> mix) {
  SynthConfig c;
  c.seed = seed;
  c.students = 30;
  c.misconception_mix = std::move(mix);
  return c;
}

FeatureVector featurize_text(const std::string& text, const ProblemSpec& p) {
  return featurize(std::get<Example>(parse_example_line(text)), p);
}

}  // namespace

TEST_CASE("single mutant without typos plants its bit everywhere") {
  const ProblemSpec p = builtin_problem("median");
  auto c = config(5, {{"median.mean", 1}});
  c.typo_rate = 0;
  c.misconception_rate = 1;
  const auto cohort = generate_cohort(p, c);
  const auto wfes = extract_wfes(cohort.submissions, p).wfes;
  REQUIRE(!wfes.empty());
  const std::size_t mean = *p.mutant_index("median.mean");
  for (const auto& f : featurize_all(wfes, p)) CHECK(f.vector.matches(mean));
  for (const auto& t : cohort.truth) CHECK(t.label == "median.mean");
}

TEST_CASE("truth labels are consistent with the problem") {
  for (const char* name : {"median", "docdiff"}) {
    const ProblemSpec p = builtin_problem(name);
    std::vector<std::pair<std::string, double>> mix;
    for (const auto& m : p.mutant_family)
      if (m.id != "docdiff.always-0" && m.id != "docdiff.always-1") mix.push_back({m.id, 1});
    mix.push_back({"none", 1});
    auto c = config(21, mix);
    c.spammer_count = 2;
    c.spam_submissions = 5;
    const auto cohort = generate_cohort(p, c);

    std::set<std::pair<std::string, std::string>> truth_keys;
    for (const auto& t : cohort.truth) {
      CHECK(truth_keys.insert({t.student_id, t.raw_text}).second);
      const auto parsed = parse_example_line(t.raw_text);
      REQUIRE(std::holds_alternative<Example>(parsed));
      const Example& e = std::get<Example>(parsed);
      CHECK_FALSE(failing_wheats(p, e).empty());
      if (t.label != kTypoLabel) {
        REQUIRE(p.mutant_index(t.label));
        CHECK(featurize(e, p).matches(*p.mutant_index(t.label)));
      }
    }
    // Every extracted WFE has exactly one truth row and vice versa.
    std::set<std::pair<std::string, std::string>> wfe_keys;
    for (const auto& w : extract_wfes(cohort.submissions, p).wfes) wfe_keys.insert({w.student_id, w.example.raw_text});
    CHECK(wfe_keys == truth_keys);
  }
}

TEST_CASE("generation is deterministic per seed") {
  const ProblemSpec d = builtin_problem("docdiff");
  auto c = config(77, {{"docdiff.presence", 1}, {"none", 1}});
  const auto a = generate_cohort(d, c);
  const auto b = generate_cohort(d, c);
  REQUIRE(a.submissions.size() == b.submissions.size());
  for (std::size_t i = 0; i < a.submissions.size(); ++i) {
    CHECK(a.submissions[i].student_id == b.submissions[i].student_id);
    CHECK(a.submissions[i].timestamp == b.submissions[i].timestamp);
    CHECK(a.submissions[i].suite_text == b.submissions[i].suite_text);
  }
  c.seed = 78;
  const auto other = generate_cohort(d, c);
  bool differs = other.submissions.size() != a.submissions.size();
  for (std::size_t i = 0; !differs && i < a.submissions.size(); ++i)
    differs = other.submissions[i].suite_text != a.submissions[i].suite_text;
  CHECK(differs);
}

TEST_CASE("volume stays within the configured ranges") {
  const ProblemSpec p = builtin_problem("median");
  auto c = config(3, {{"median.mode", 2}, {"none", 1}});
  c.examples_min = 2;
  c.examples_max = 5;
  c.submissions_max = 4;
  const auto cohort = generate_cohort(p, c);
  std::map<std::string, std::vector<std::size_t>> sizes;
  for (const auto& s : cohort.submissions) {
    const auto parsed = parse_suite(s.suite_text);
    CHECK(parsed.errors.empty());
    sizes[s.student_id].push_back(parsed.suite.examples.size());
  }
  CHECK(sizes.size() == c.students);
  for (const auto& [student, counts] : sizes) {
    CHECK(counts.size() >= 1);
    CHECK(counts.size() <= 4);
    for (std::size_t i = 1; i < counts.size(); ++i) CHECK(counts[i] >= counts[i - 1]);
    CHECK(counts.back() >= 2);
    CHECK(counts.back() <= 5);
  }
  for (std::size_t i = 1; i < cohort.submissions.size(); ++i)
    CHECK(cohort.submissions[i - 1].timestamp < cohort.submissions[i].timestamp);
}

TEST_CASE("spammers resubmit one example many times") {
  const ProblemSpec p = builtin_problem("median");
  auto c = config(9, {{"median.unsorted-middle", 1}, {"none", 3}});
  c.students = 5;
  c.spammer_count = 1;
  c.spam_submissions = 40;
  const auto cohort = generate_cohort(p, c);
  std::size_t spam = 0;
  std::map<std::string, std::size_t> seen;
  for (const auto& s : cohort.submissions)
    if (s.student_id.rfind("spammer-", 0) == 0) {
      ++spam;
      for (const auto& e : parse_suite(s.suite_text).suite.examples) ++seen[e.raw_text];
    }
  CHECK(spam == 40);
  std::size_t most = 0;
  for (const auto& [text, n] : seen) most = std::max(most, n);
  CHECK(most >= 40);
  const auto extracted = extract_wfes(cohort.submissions, p);
  CHECK(extracted.duplicates >= 39);
}

TEST_CASE("config errors") {
  const ProblemSpec p = builtin_problem("median");
  CHECK_THROWS_AS(generate_cohort(p, config(1, {})), std::invalid_argument);
  CHECK_THROWS_AS(generate_cohort(p, config(1, {{"median.nope", 1}})), std::invalid_argument);
  CHECK_THROWS_AS(generate_cohort(p, config(1, {{"median.mean", -1}, {"none", 2}})), std::invalid_argument);
  CHECK_THROWS_AS(generate_cohort(p, config(1, {{"median.mean", 0}})), std::invalid_argument);
  auto c = config(1, {{"none", 1}});
  c.typo_rate = 1.5;
  CHECK_THROWS_AS(generate_cohort(p, c), std::invalid_argument);
  c = config(1, {{"none", 1}});
  c.examples_min = 6;
  c.examples_max = 2;
  CHECK_THROWS_AS(generate_cohort(p, c), std::invalid_argument);
  c = config(1, {{"none", 1}});
  c.spammer_count = 1;
  CHECK_THROWS_AS(generate_cohort(p, c), std::invalid_argument);
}

TEST_CASE("a mutant that always agrees with the wheat is rejected") {
  ProblemSpec p = builtin_problem("median");
  p.mutant_family[0].backend = p.wheats.front().backend;
  auto c = config(1, {{p.mutant_family[0].id, 1}});
  c.typo_rate = 0;
  c.misconception_rate = 1;
  c.search_limit = 50;
  CHECK_THROWS_AS(generate_cohort(p, c), std::invalid_argument);
}
