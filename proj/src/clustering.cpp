#include "chaffkit/clustering.hpp"

#include "chaffkit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <thread>

namespace chaffkit {

std::optional<FeatureVector> FeatureVector::parse(std::string_view text) {
  std::vector<bool> bits;
  for (char c : text) {
    if (c == 'm') bits.push_back(true);
    else if (c == 'd') bits.push_back(false);
    else if (c != ' ') return std::nullopt;
  }
  return FeatureVector(std::move(bits));
}

std::size_t FeatureVector::m_count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true));
}

std::string FeatureVector::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (i) out += ' ';
    out += bits_[i] ? 'm' : 'd';
  }
  return out;
}

std::string FeatureVector::compact() const {
  std::string out;
  for (bool b : bits_) out += b ? 'm' : 'd';
  return out;
}

std::string_view category_name(Category c) {
  switch (c) {
    case Category::NoM: return "no-m";
    case Category::OneM: return "one-m";
    case Category::SmallM: return "small-m";
    case Category::LargeM: return "large-m";
  }
  return "?";
}

Category categorize(const FeatureVector& fv) {
  const std::size_t m = fv.m_count();
  if (m == 0) return Category::NoM;
  if (m == 1) return Category::OneM;
  if (m <= 3) return Category::SmallM;
  return Category::LargeM;
}

FeatureVector featurize(const Example& example, const ProblemSpec& problem) {
  std::vector<bool> bits;
  bits.reserve(problem.mutant_family.size());
  for (const auto& mutant : problem.mutant_family)
    bits.push_back(run_example(problem, mutant, example).outcome == Outcome::Pass);
  return FeatureVector(std::move(bits));
}

std::vector<FeaturedWfe> featurize_all(const std::vector<WfeRecord>& wfes, const ProblemSpec& problem,
                                       unsigned jobs) {
  std::vector<FeaturedWfe> out(wfes.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < wfes.size(); i = next++)
      out[i] = FeaturedWfe{wfes[i].wfe_id, wfes[i].student_id, featurize(wfes[i].example, problem)};
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, wfes.size()))));
  if (jobs == 1) {
    worker();
    return out;
  }
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  pool.clear();
  return out;
}

namespace {

std::size_t count_students(const std::vector<ClusterMember>& members) {
  std::vector<std::string> ids;
  for (const auto& m : members) ids.push_back(m.student_id);
  std::sort(ids.begin(), ids.end());
  return static_cast<std::size_t>(std::unique(ids.begin(), ids.end()) - ids.begin());
}

}  // namespace

std::vector<Cluster> cluster_by_vector(const std::vector<FeaturedWfe>& wfes) {
  if (!wfes.empty()) {
    const std::size_t n = wfes.front().vector.size();
    for (const auto& w : wfes)
      if (w.vector.size() != n)
        throw std::invalid_argument("mixed feature-vector lengths (" + std::to_string(n) + " and " +
                                    std::to_string(w.vector.size()) + ")");
  }
  std::map<std::string, Cluster> by_vector;
  for (const auto& w : wfes) {
    auto [it, fresh] = by_vector.try_emplace(w.vector.compact());
    if (fresh) {
      it->second.vector = w.vector;
      it->second.category = categorize(w.vector);
    }
    it->second.members.push_back({w.wfe_id, w.student_id});
  }
  std::vector<Cluster> out;
  out.reserve(by_vector.size());
  for (auto& [_, c] : by_vector) {
    c.distinct_students = count_students(c.members);
    out.push_back(std::move(c));
  }
  return out;
}

void describe_clusters(std::vector<Cluster>& clusters, const ProblemSpec& problem) {
  for (auto& c : clusters) {
    c.candidate_description.reset();
    if (c.category != Category::OneM) continue;
    for (std::size_t i = 0; i < c.vector.size() && i < problem.mutant_family.size(); ++i)
      if (c.vector.matches(i)) c.candidate_description = problem.mutant_family[i].explanation;
  }
}

std::vector<Cluster> rank_clusters(std::vector<Cluster> clusters, const RankOptions& options) {
  std::vector<Cluster> kept;
  for (auto& c : clusters) {
    if (!options.exclude_students.empty()) {
      std::erase_if(c.members, [&](const ClusterMember& m) { return options.exclude_students.count(m.student_id) > 0; });
      c.distinct_students = count_students(c.members);
    }
    if (c.members.empty() || c.distinct_students < options.min_distinct_students) continue;
    kept.push_back(std::move(c));
  }
  std::sort(kept.begin(), kept.end(), [](const Cluster& a, const Cluster& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    const auto ma = a.vector.m_count(), mb = b.vector.m_count();
    if (ma != mb) return ma < mb;
    return a.vector.compact() < b.vector.compact();
  });
  return kept;
}

std::vector<std::size_t> per_chaff_counts(const std::vector<FeaturedWfe>& wfes, std::size_t family_size) {
  std::vector<std::size_t> counts(family_size, 0);
  for (const auto& w : wfes) {
    if (w.vector.size() != family_size)
      throw std::invalid_argument("feature vector of '" + w.wfe_id + "' has length " +
                                  std::to_string(w.vector.size()) + ", expected " + std::to_string(family_size));
    for (std::size_t i = 0; i < family_size; ++i) counts[i] += w.vector.matches(i);
  }
  return counts;
}

SplitReport split_report(const std::vector<Cluster>& clusters) {
  SplitReport r;
  for (const auto& c : clusters) {
    r.total += c.size();
    if (c.vector.all_d()) r.all_d_size += c.size();
    else r.non_all_d.push_back(c);
  }
  r.all_d_fraction = r.total ? static_cast<double>(r.all_d_size) / static_cast<double>(r.total) : 0.0;
  return r;
}

}  // namespace chaffkit
