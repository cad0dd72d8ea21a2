#include "chaffkit/selection.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

namespace chaffkit {

std::vector<std::string> ChaffSuite::ids() const {
  std::vector<std::string> out;
  for (const auto& c : chaffs) out.push_back(c.mutant_id);
  return out;
}

namespace {

class Picker {
 public:
  explicit Picker(const std::vector<std::size_t>& counts) : counts_(counts) {}

  bool chosen(std::size_t idx) const { return taken_.count(idx) > 0; }

  void add(std::size_t idx, std::string provenance) {
    taken_.insert(idx);
    suite.push_back({idx, std::move(provenance)});
  }

  void remove_at(std::size_t pos) {
    taken_.erase(suite[pos].index);
    suite.erase(suite.begin() + static_cast<std::ptrdiff_t>(pos));
  }

  std::size_t count(std::size_t idx) const { return idx < counts_.size() ? counts_[idx] : 0; }

  // Highest-count unused mutant among `candidates` satisfying `ok`; ties to the lower index.
  template <class Pred>
  std::optional<std::size_t> best(const std::vector<std::size_t>& candidates, Pred ok) const {
    std::optional<std::size_t> pick;
    for (std::size_t idx : candidates) {
      if (chosen(idx) || !ok(idx)) continue;
      if (!pick || count(idx) > count(*pick)) pick = idx;
    }
    return pick;
  }

  struct Entry {
    std::size_t index;
    std::string provenance;
  };
  std::vector<Entry> suite;

 private:
  const std::vector<std::size_t>& counts_;
  std::set<std::size_t> taken_;
};

}  // namespace

ChaffSuite select_chaffs(const std::vector<Cluster>& ranked, const ProblemSpec& problem,
                         const std::vector<std::size_t>& chaff_counts, const SelectOptions& options) {
  if (options.n == 0) throw std::invalid_argument("chaff suite size must be at least 1");
  const std::size_t family = problem.mutant_family.size();
  if (chaff_counts.size() != family)
    throw std::invalid_argument("per-chaff counts have length " + std::to_string(chaff_counts.size()) +
                                ", family has " + std::to_string(family));

  ChaffSuite out;
  out.problem = problem.name;
  Picker pick(chaff_counts);

  for (const auto& id : options.manual) {
    auto idx = problem.mutant_index(id);
    if (!idx) throw std::invalid_argument("unknown mutant '" + id + "'");
    if (!pick.chosen(*idx) && pick.suite.size() < options.n) pick.add(*idx, "manual");
  }

  for (const auto& c : ranked) {
    if (pick.suite.size() >= options.n) break;
    if (c.vector.size() != family)
      throw std::invalid_argument("cluster " + c.id() + " does not match the mutant family size");
    if (c.vector.all_d() || c.category == Category::LargeM || options.skip.count(c.id())) continue;
    std::vector<std::size_t> bits;
    for (std::size_t i = 0; i < family; ++i)
      if (c.vector.matches(i)) bits.push_back(i);
    if (auto idx = pick.best(bits, [](std::size_t) { return true; })) pick.add(*idx, c.id());
  }

  std::vector<std::size_t> all(family);
  for (std::size_t i = 0; i < family; ++i) all[i] = i;
  while (pick.suite.size() < options.n) {
    auto idx = pick.best(all, [&](std::size_t i) { return chaff_counts[i] > 0; });
    if (!idx) break;
    pick.add(*idx, "count-fill");
  }

  if (options.must_cover_subproblems) {
    auto covered = [&](const std::string& tag) {
      return std::any_of(pick.suite.begin(), pick.suite.end(), [&](const auto& e) {
        return problem.subproblem_of(problem.mutant_family[e.index]) == tag;
      });
    };
    auto tag_count = [&](const std::string& tag) {
      return std::count_if(pick.suite.begin(), pick.suite.end(), [&](const auto& e) {
        return problem.subproblem_of(problem.mutant_family[e.index]) == tag;
      });
    };
    for (const auto& tag : problem.subproblems()) {
      if (covered(tag)) continue;
      auto idx = pick.best(all, [&](std::size_t i) { return problem.subproblem_of(problem.mutant_family[i]) == tag; });
      if (!idx) {
        out.warnings.push_back("no chaff available for subproblem '" + tag + "'");
        continue;
      }
      if (pick.suite.size() >= options.n) {
        std::optional<std::size_t> victim;
        for (std::size_t pos = pick.suite.size(); pos-- > 0;) {
          const auto& e = pick.suite[pos];
          if (e.provenance == "manual" || e.provenance == "coverage-fill") continue;
          if (tag_count(problem.subproblem_of(problem.mutant_family[e.index])) < 2) continue;
          victim = pos;
          break;
        }
        if (!victim) {
          out.warnings.push_back("cannot cover subproblem '" + tag + "' without uncovering another");
          continue;
        }
        pick.remove_at(*victim);
      }
      pick.add(*idx, "coverage-fill");
    }
  }

  if (pick.suite.size() < options.n)
    out.warnings.push_back("only " + std::to_string(pick.suite.size()) + " informative chaff(s) available; " +
                           std::to_string(options.n) + " requested");

  for (const auto& e : pick.suite) out.chaffs.push_back({problem.mutant_family[e.index].id, e.provenance});
  return out;
}

std::vector<Implementation> suite_implementations(const ChaffSuite& suite, const ProblemSpec& problem) {
  std::vector<Implementation> out;
  for (const auto& c : suite.chaffs) {
    const Implementation* m = problem.find_mutant(c.mutant_id);
    if (!m) throw std::invalid_argument("chaff '" + c.mutant_id + "' is not a mutant of '" + problem.name + "'");
    out.push_back(*m);
  }
  return out;
}

std::string_view audit_flag_name(AuditFlag f) {
  switch (f) {
    case AuditFlag::Ok: return "ok";
    case AuditFlag::UnderConstrained: return "under_constrained";
    case AuditFlag::OverConstrained: return "over_constrained";
  }
  return "?";
}

ChaffAudit audit_chaffs(const std::vector<FeaturedWfe>& wfes, const ChaffSuite& suite, const ProblemSpec& problem,
                        const AuditThresholds& thresholds) {
  if (wfes.empty()) throw std::invalid_argument("cannot audit chaffs against an empty WFE corpus");
  if (!(thresholds.lo >= 0 && thresholds.lo < thresholds.hi && thresholds.hi <= 1))
    throw std::invalid_argument("audit thresholds must satisfy 0 <= lo < hi <= 1");
  const auto counts = per_chaff_counts(wfes, problem.mutant_family.size());

  ChaffAudit audit;
  audit.corpus_size = wfes.size();
  for (const auto& c : suite.chaffs) {
    auto idx = problem.mutant_index(c.mutant_id);
    if (!idx) throw std::invalid_argument("chaff '" + c.mutant_id + "' is not a mutant of '" + problem.name + "'");
    ChaffAuditEntry e;
    e.mutant_id = c.mutant_id;
    e.matched = counts[*idx];
    e.pass_rate = static_cast<double>(e.matched) / static_cast<double>(wfes.size());
    if (e.pass_rate >= thresholds.hi) e.flag = AuditFlag::UnderConstrained;
    else if (e.pass_rate <= thresholds.lo) e.flag = AuditFlag::OverConstrained;
    audit.entries.push_back(std::move(e));
  }
  return audit;
}

}  // namespace chaffkit
