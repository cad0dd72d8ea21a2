#include "chaffkit/harness.hpp"

#include "chaffkit/codec.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace chaffkit {

std::string make_wfe_id(const std::string& student_id, const std::string& raw_text) {
  std::string key = student_id;
  key += '\x1f';
  key += raw_text;
  return "wfe-" + fnv1a64_hex(key);
}

std::vector<std::string> failing_wheats(const ProblemSpec& problem, const Example& e) {
  std::vector<std::string> out;
  for (const auto& w : problem.wheats)
    if (run_example(problem, w, e).outcome != Outcome::Pass) out.push_back(w.id);
  return out;
}

std::size_t AssessmentReport::caught_count() const {
  return static_cast<std::size_t>(std::count_if(chaffs.begin(), chaffs.end(), [](const auto& c) { return c.caught; }));
}

std::vector<std::size_t> AssessmentReport::invalid_lines() const {
  std::set<std::size_t> lines;
  for (const auto& wf : wheat_failures)
    for (const auto& e : wf.examples) lines.insert(e.source_line);
  return {lines.begin(), lines.end()};
}

AssessmentReport assess_suite(const ExampleSuite& suite, const ProblemSpec& problem,
                              const std::vector<Implementation>& deployed_chaffs,
                              const std::vector<ParseError>& parse_errors) {
  for (const auto& c : deployed_chaffs)
    if (!problem.find_mutant(c.id))
      throw std::invalid_argument("chaff '" + c.id + "' is not in the mutant family of '" + problem.name + "'");

  AssessmentReport report;
  report.parse_errors = parse_errors;
  report.chaffs_deployed = deployed_chaffs.size();

  for (const auto& w : problem.wheats) {
    WheatFailure wf{w.id, {}};
    for (const auto& e : suite.examples)
      if (run_example(problem, w, e).outcome != Outcome::Pass) wf.examples.push_back(e);
    if (!wf.examples.empty()) report.wheat_failures.push_back(std::move(wf));
  }
  report.valid = report.wheat_failures.empty();

  if (!report.valid) {
    for (const auto& e : suite.examples) {
      if (failing_wheats(problem, e).empty()) continue;
      if (auto h = hint_for(featurize(e, problem), problem))
        report.hints.push_back({e.source_line, e.raw_text.empty() ? render_example(e) : e.raw_text, *h});
    }
    return report;
  }

  for (const auto& c : deployed_chaffs) {
    ChaffResult r{c.id, false, {}};
    for (const auto& e : suite.examples)
      if (run_example(problem, c, e).outcome != Outcome::Pass) r.caught_by_lines.push_back(e.source_line);
    r.caught = !r.caught_by_lines.empty();
    report.chaffs.push_back(std::move(r));
  }
  return report;
}

std::string render_assessment(const AssessmentReport& report) {
  std::ostringstream out;
  if (!report.valid) {
    out << "INVALID: examples disagree with the reference implementation; thoroughness not assessed\n";
    std::map<std::size_t, std::string> lines;
    for (const auto& wf : report.wheat_failures)
      for (const auto& e : wf.examples) lines.emplace(e.source_line, e.raw_text.empty() ? render_example(e) : e.raw_text);
    for (const auto& [line, text] : lines) out << "  line " << line << ": " << text << "\n";
    for (const auto& h : report.hints) out << "  hint (line " << h.line << "): " << h.text << "\n";
  } else {
    out << "VALID: caught " << report.caught_count() << " of " << report.chaffs_deployed << " chaffs\n";
    for (const auto& c : report.chaffs) out << "  " << (c.caught ? "caught " : "missed ") << c.chaff_id << "\n";
  }
  for (const auto& e : report.parse_errors)
    out << "  parse error (line " << e.line << ", " << parse_error_name(e.kind) << "): " << e.message << "\n";
  return out.str();
}

ExtractResult extract_wfes(const std::vector<Submission>& submissions, const ProblemSpec& problem) {
  std::vector<std::size_t> order(submissions.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& sa = submissions[a];
    const auto& sb = submissions[b];
    if (sa.timestamp != sb.timestamp) return sa.timestamp < sb.timestamp;
    if (sa.student_id != sb.student_id) return sa.student_id < sb.student_id;
    return sa.suite_text < sb.suite_text;
  });

  ExtractResult result;
  std::set<std::pair<std::string, std::string>> seen;
  // Wheat verdicts depend only on the example, so cache by raw text.
  std::map<std::string, std::vector<std::string>> verdicts;

  for (std::size_t idx : order) {
    const Submission& s = submissions[idx];
    auto parsed = parse_suite(s.suite_text);
    result.parse_errors += parsed.errors.size();
    for (auto& e : parsed.suite.examples) {
      ++result.examples_seen;
      if (!seen.insert({s.student_id, e.raw_text}).second) {
        ++result.duplicates;
        continue;
      }
      auto it = verdicts.find(e.raw_text);
      if (it == verdicts.end()) it = verdicts.emplace(e.raw_text, failing_wheats(problem, e)).first;
      if (it->second.empty()) continue;
      WfeRecord r;
      r.wfe_id = make_wfe_id(s.student_id, e.raw_text);
      r.student_id = s.student_id;
      r.timestamp = s.timestamp;
      r.failed_wheats = it->second;
      r.example = std::move(e);
      result.wfes.push_back(std::move(r));
    }
  }
  return result;
}

std::optional<std::string> hint_for(const FeatureVector& fv, const ProblemSpec& problem) {
  const std::size_t m = fv.m_count();
  if (m == 0 || m > 2) return std::nullopt;
  std::vector<std::string> texts;
  for (std::size_t i = 0; i < fv.size() && i < problem.mutant_family.size(); ++i) {
    if (!fv.matches(i)) continue;
    const auto& mut = problem.mutant_family[i];
    const Characteristic* c = mut.characteristic_id ? problem.find_characteristic(*mut.characteristic_id) : nullptr;
    std::string text = c ? c->text : mut.explanation;
    if (std::find(texts.begin(), texts.end(), text) == texts.end()) texts.push_back(std::move(text));
  }
  if (texts.empty()) return std::nullopt;
  std::string out = "Remember: " + texts[0];
  for (std::size_t i = 1; i < texts.size(); ++i) out += " Also: " + texts[i];
  return out;
}

}  // namespace chaffkit
