#pragma once

#include <string>
#include <vector>

namespace chaffkit {

struct LabeledItem {
  std::string item_id;
  std::string class_label;
  std::string cluster_id;
};

using LabeledPartition = std::vector<LabeledItem>;

struct VScores {
  double homogeneity = 0.0;
  double completeness = 0.0;
  double v_measure = 0.0;
};

/// Conditional-entropy cluster evaluation (beta = 1, natural logs).
/// Throws std::invalid_argument for an empty partition.
VScores v_measure(const LabeledPartition& part);

double homogeneity(const LabeledPartition& part);
double completeness(const LabeledPartition& part);

}  // namespace chaffkit
