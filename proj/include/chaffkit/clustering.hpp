#pragma once

#include "chaffkit/problem.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace chaffkit {

struct WfeRecord;

/// m/d bits over a problem's mutant family, in family order.
class FeatureVector {
 public:
  FeatureVector() = default;
  explicit FeatureVector(std::vector<bool> bits) : bits_(std::move(bits)) {}

  /// Parses "d m d" (space separated) or the compact form "dmd".
  static std::optional<FeatureVector> parse(std::string_view text);

  std::size_t size() const { return bits_.size(); }
  bool matches(std::size_t i) const { return bits_.at(i); }
  std::size_t m_count() const;
  bool all_d() const { return m_count() == 0; }
  const std::vector<bool>& bits() const { return bits_; }

  /// "d d m d", the report form.
  std::string to_string() const;
  /// "ddmd", used as a cluster id.
  std::string compact() const;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
  friend auto operator<=>(const FeatureVector& a, const FeatureVector& b) { return a.compact() <=> b.compact(); }

 private:
  std::vector<bool> bits_;
};

enum class Category { NoM, OneM, SmallM, LargeM };

std::string_view category_name(Category c);

/// 0 m-bits: no-m; 1: one-m; 2-3: small-m; 4 or more: large-m.
Category categorize(const FeatureVector& fv);

/// Bit i is m iff mutant i passes the example.
FeatureVector featurize(const Example& example, const ProblemSpec& problem);

struct FeaturedWfe {
  std::string wfe_id;
  std::string student_id;
  FeatureVector vector;
};

/// Featurizes a corpus, spreading examples over `jobs` threads. Output order matches input.
std::vector<FeaturedWfe> featurize_all(const std::vector<WfeRecord>& wfes, const ProblemSpec& problem,
                                       unsigned jobs = 1);

struct ClusterMember {
  std::string wfe_id;
  std::string student_id;
};

struct Cluster {
  FeatureVector vector;
  std::vector<ClusterMember> members;
  std::size_t distinct_students = 0;
  Category category = Category::NoM;
  std::optional<std::string> candidate_description;

  std::size_t size() const { return members.size(); }
  std::string id() const { return vector.compact(); }
};

/// Groups by exact vector equality. Clusters come out ordered by vector; members keep input order.
/// Throws std::invalid_argument on mixed vector lengths.
std::vector<Cluster> cluster_by_vector(const std::vector<FeaturedWfe>& wfes);

/// Fills candidate_description of one-m clusters with the matching mutant's explanation.
void describe_clusters(std::vector<Cluster>& clusters, const ProblemSpec& problem);

struct RankOptions {
  std::set<std::string> exclude_students;
  std::size_t min_distinct_students = 1;
};

/// Largest first; ties by fewer m-bits, then by vector.
std::vector<Cluster> rank_clusters(std::vector<Cluster> clusters, const RankOptions& options = {});

/// count[i] = number of WFEs whose bit i is m.
std::vector<std::size_t> per_chaff_counts(const std::vector<FeaturedWfe>& wfes, std::size_t family_size);

struct SplitReport {
  double all_d_fraction = 0.0;
  std::size_t all_d_size = 0;
  std::size_t total = 0;
  std::vector<Cluster> non_all_d;
};

SplitReport split_report(const std::vector<Cluster>& clusters);

}  // namespace chaffkit
