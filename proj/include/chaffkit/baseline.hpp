#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace chaffkit {

struct WfeRecord;

/// Edit distance over Unicode code points (invalid UTF-8 bytes count as single units).
std::size_t levenshtein(std::string_view a, std::string_view b);

/// Square similarity matrix; the diagonal holds preferences.
struct SimilarityMatrix {
  Eigen::MatrixXd s;
  std::size_t size() const { return static_cast<std::size_t>(s.rows()); }
};

struct ApOptions {
  double damping = 0.5;
  std::size_t max_iter = 1000;
  std::size_t stable_window = 5;
};

struct BaselineClustering {
  std::vector<std::size_t> exemplar_of;
  std::size_t iterations_run = 0;
  bool converged = false;

  std::vector<std::size_t> exemplars() const;
};

/// Frey-Dueck affinity propagation with synchronous, damped updates. Stops once the
/// exemplar assignment has been unchanged for `stable_window` iterations, or at `max_iter`.
/// Throws std::invalid_argument for an empty or non-square matrix or damping outside [0.5, 1).
BaselineClustering affinity_propagation(const SimilarityMatrix& sim, const ApOptions& options = {});

struct BaselineOptions {
  ApOptions ap;
  bool normalize_text = false;  // lowercase and collapse whitespace before measuring
};

/// Similarity = -levenshtein(raw_text); preference = median off-diagonal similarity.
SimilarityMatrix levenshtein_similarity(const std::vector<std::string>& texts, bool normalize_text = false);

BaselineClustering baseline_cluster(const std::vector<std::string>& texts, const BaselineOptions& options = {});
BaselineClustering baseline_cluster(const std::vector<WfeRecord>& wfes, const BaselineOptions& options = {});

}  // namespace chaffkit
