#pragma once

#include "chaffkit/clustering.hpp"
#include "chaffkit/example.hpp"
#include "chaffkit/problem.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace chaffkit {

/// One logged suite snapshot. Timestamps are ISO-8601 and compared as text,
/// so a log should use a single offset style.
struct Submission {
  std::string student_id;
  std::string timestamp;
  std::string suite_text;
};

struct WfeRecord {
  std::string wfe_id;
  Example example;
  std::string student_id;
  std::string timestamp;
  std::vector<std::string> failed_wheats;
};

/// Stable id derived from (student_id, raw_text).
std::string make_wfe_id(const std::string& student_id, const std::string& raw_text);

/// Ids of the wheats the example fails or errors on.
std::vector<std::string> failing_wheats(const ProblemSpec& problem, const Example& e);

struct WheatFailure {
  std::string wheat_id;
  std::vector<Example> examples;
};

struct ChaffResult {
  std::string chaff_id;
  bool caught = false;
  std::vector<std::size_t> caught_by_lines;
};

struct Hint {
  std::size_t line = 0;
  std::string example_text;
  std::string text;
};

struct AssessmentReport {
  bool valid = true;
  std::vector<ParseError> parse_errors;
  std::vector<WheatFailure> wheat_failures;  // only wheats with failing examples
  std::vector<ChaffResult> chaffs;           // empty unless valid
  std::size_t chaffs_deployed = 0;
  std::vector<Hint> hints;

  std::size_t caught_count() const;
  /// Distinct wheat-failing example lines, in suite order.
  std::vector<std::size_t> invalid_lines() const;
};

/// Wheat check first; chaffs are only run when every example passes every wheat.
/// Throws std::invalid_argument if a deployed chaff is not in the problem's family.
AssessmentReport assess_suite(const ExampleSuite& suite, const ProblemSpec& problem,
                              const std::vector<Implementation>& deployed_chaffs,
                              const std::vector<ParseError>& parse_errors = {});

std::string render_assessment(const AssessmentReport& report);

struct ExtractResult {
  std::vector<WfeRecord> wfes;
  std::size_t examples_seen = 0;
  std::size_t parse_errors = 0;
  std::size_t duplicates = 0;
};

/// Emits one record per distinct (student, raw text) example that fails some wheat,
/// keeping the earliest timestamp. Output is ordered by (timestamp, student, submission, line).
ExtractResult extract_wfes(const std::vector<Submission>& submissions, const ProblemSpec& problem);

/// Characteristic text(s) for vectors with one or two m-bits; nullopt otherwise.
std::optional<std::string> hint_for(const FeatureVector& fv, const ProblemSpec& problem);

}  // namespace chaffkit
