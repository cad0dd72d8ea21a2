#pragma once

#include "chaffkit/clustering.hpp"
#include "chaffkit/problem.hpp"

#include <set>
#include <string>
#include <vector>

namespace chaffkit {

/// Where a selected chaff came from: a cluster id, "manual", "count-fill" or "coverage-fill".
struct SelectedChaff {
  std::string mutant_id;
  std::string provenance;
};

struct ChaffSuite {
  std::string problem;
  std::vector<SelectedChaff> chaffs;
  std::vector<std::string> warnings;

  std::vector<std::string> ids() const;
};

struct SelectOptions {
  std::size_t n = 5;
  std::set<std::string> skip;  // cluster ids (compact vectors) to pass over
  bool must_cover_subproblems = false;
  std::vector<std::string> manual;  // mutant ids pinned first
};

/// Walks `ranked` top-down: skips all-d, skipped and large-m clusters; a one-m cluster
/// contributes its chaff, a small-m cluster its highest-count chaff not yet chosen.
/// Leftover slots go to the highest-count unused chaffs with a nonzero count.
/// Optionally swaps chaffs so every subproblem is touched. Throws std::invalid_argument if n == 0.
ChaffSuite select_chaffs(const std::vector<Cluster>& ranked, const ProblemSpec& problem,
                         const std::vector<std::size_t>& chaff_counts, const SelectOptions& options);

/// Resolves a suite's ids against the problem. Throws std::invalid_argument on unknown ids.
std::vector<Implementation> suite_implementations(const ChaffSuite& suite, const ProblemSpec& problem);

enum class AuditFlag { Ok, UnderConstrained, OverConstrained };

std::string_view audit_flag_name(AuditFlag f);

struct ChaffAuditEntry {
  std::string mutant_id;
  std::size_t matched = 0;
  double pass_rate = 0.0;
  AuditFlag flag = AuditFlag::Ok;
};

struct AuditThresholds {
  double hi = 0.8;
  double lo = 0.01;
};

struct ChaffAudit {
  std::size_t corpus_size = 0;
  std::vector<ChaffAuditEntry> entries;
};

/// pass_rate >= hi: under-constrained; <= lo: over-constrained.
/// Throws std::invalid_argument for an empty corpus, bad thresholds or unknown chaffs.
ChaffAudit audit_chaffs(const std::vector<FeaturedWfe>& wfes, const ChaffSuite& suite, const ProblemSpec& problem,
                        const AuditThresholds& thresholds = {});

}  // namespace chaffkit
