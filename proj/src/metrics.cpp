#include "chaffkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace chaffkit {

namespace {

struct Contingency {
  std::map<std::pair<std::string, std::string>, double> joint;  // (class, cluster) -> count
  std::map<std::string, double> classes;
  std::map<std::string, double> clusters;
  double n = 0;
};

Contingency tabulate(const LabeledPartition& part) {
  if (part.empty()) throw std::invalid_argument("v-measure needs at least one item");
  Contingency t;
  for (const auto& it : part) {
    t.joint[{it.class_label, it.cluster_id}] += 1;
    t.classes[it.class_label] += 1;
    t.clusters[it.cluster_id] += 1;
    t.n += 1;
  }
  return t;
}

double entropy(const std::map<std::string, double>& counts, double n) {
  double h = 0;
  for (const auto& [_, c] : counts) h -= (c / n) * std::log(c / n);
  return h;
}

// H(C|K) when `by_cluster`, else H(K|C).
double conditional_entropy(const Contingency& t, bool by_cluster) {
  double h = 0;
  for (const auto& [key, nck] : t.joint) {
    const double cond = by_cluster ? t.clusters.at(key.second) : t.classes.at(key.first);
    h -= (nck / t.n) * std::log(nck / cond);
  }
  return h;
}

VScores scores(const Contingency& t) {
  VScores s;
  const double hc = entropy(t.classes, t.n);
  const double hk = entropy(t.clusters, t.n);
  s.homogeneity = hc == 0 ? 1.0 : 1.0 - conditional_entropy(t, true) / hc;
  s.completeness = hk == 0 ? 1.0 : 1.0 - conditional_entropy(t, false) / hk;
  // Clamp rounding noise so scores stay inside [0, 1].
  s.homogeneity = std::clamp(s.homogeneity, 0.0, 1.0);
  s.completeness = std::clamp(s.completeness, 0.0, 1.0);
  const double sum = s.homogeneity + s.completeness;
  s.v_measure = sum > 0 ? 2 * s.homogeneity * s.completeness / sum : 0.0;
  return s;
}

}  // namespace

VScores v_measure(const LabeledPartition& part) { return scores(tabulate(part)); }

double homogeneity(const LabeledPartition& part) { return v_measure(part).homogeneity; }

double completeness(const LabeledPartition& part) { return v_measure(part).completeness; }

}  // namespace chaffkit
