#pragma once

#include "chaffkit/clustering.hpp"
#include "chaffkit/codec.hpp"
#include "chaffkit/harness.hpp"
#include "chaffkit/metrics.hpp"
#include "chaffkit/selection.hpp"
#include "chaffkit/stats.hpp"
#include "chaffkit/synth.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace chaffkit {

/// Malformed input file; the message names the file and, when known, the line.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::filesystem::path& path);

// Submission log: {"student_id", "timestamp", "suite"} per line.
std::vector<Submission> read_submissions(const std::filesystem::path& path);
void write_submissions(std::ostream& out, const std::vector<Submission>& subs);

// WFE log: {"wfe_id", "student_id", "timestamp", "example", "failed_wheats"} per line.
void write_wfes(std::ostream& out, const std::vector<WfeRecord>& wfes);
std::vector<WfeRecord> read_wfes(const std::filesystem::path& path);

/// A featurized WFE as stored on disk: the vector plus enough context to re-cluster.
struct VectorRecord {
  std::string wfe_id;
  std::string student_id;
  std::string example;
  FeatureVector vector;
};

void write_vectors(std::ostream& out, const std::vector<WfeRecord>& wfes, const std::vector<FeaturedWfe>& featured);
/// With `expected_len`, a vector of any other length is rejected with its file and line.
std::vector<VectorRecord> read_vectors(const std::filesystem::path& path,
                                       std::optional<std::size_t> expected_len = std::nullopt);
std::vector<FeaturedWfe> to_featured(const std::vector<VectorRecord>& records);

json clusters_to_json(const std::vector<Cluster>& clusters, const ProblemSpec& problem, std::size_t total_wfes);
void write_clusters_csv(std::ostream& out, const std::vector<Cluster>& clusters);
/// Reads the JSON cluster report back (members only; used by eval-clusters).
std::vector<Cluster> read_clusters(const std::filesystem::path& path);

/// Table-style text: size, vector, candidate description; then the all-d share.
std::string render_cluster_table(const std::vector<Cluster>& ranked, std::size_t top, std::size_t total_wfes);

json suite_to_json(const ChaffSuite& suite, const ProblemSpec& problem);
ChaffSuite read_suite(const std::filesystem::path& path);

json audit_to_json(const ChaffAudit& audit);

void write_truth_csv(std::ostream& out, const std::vector<TruthRow>& truth);

/// Minimal RFC-4180 CSV (quoted fields, doubled quotes). First row is the header.
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path);
std::string csv_field(const std::string& s);

/// Ground-truth labels keyed by wfe_id. Accepts `wfe_id,class_label` files, or the
/// synth truth format `raw_text,student_id,label` joined through `wfes`.
std::map<std::string, std::string> read_ground_truth(const std::filesystem::path& path,
                                                     const std::vector<WfeRecord>* wfes);

json vscores_to_json(const VScores& v);
json ztest_to_json(const ZTestResult& z);
json effect_to_json(const EffectSize& e);

SynthConfig synth_config_from_json(const json& j);

/// Run manifest sidecar (`<artifact>.manifest.json`).
struct Manifest {
  std::string problem_ref;
  std::string problem_hash;
  std::vector<std::pair<std::string, std::string>> inputs;  // path, hash
  std::optional<std::uint64_t> seed;
  std::string command;
};

inline constexpr const char* kToolVersion = "0.3.0";

void write_manifest(const std::filesystem::path& artifact, const Manifest& m);
std::optional<Manifest> read_manifest(const std::filesystem::path& artifact);
std::string file_hash(const std::filesystem::path& path);

}  // namespace chaffkit
