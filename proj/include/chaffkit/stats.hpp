#pragma once

#include "chaffkit/clustering.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace chaffkit {

struct ZTestResult {
  double z = 0.0;
  double p = 1.0;        // two-tailed
  double log10_p = 0.0;  // finite even when p underflows
  double rate1 = 0.0;
  double rate2 = 0.0;
  std::uint64_t n1 = 0;
  std::uint64_t n2 = 0;
  bool degenerate = false;  // zero standard error
};

/// Unpooled two-proportion z test. Throws std::invalid_argument if n is 0 or k > n.
ZTestResult two_proportion_z(std::uint64_t k1, std::uint64_t n1, std::uint64_t k2, std::uint64_t n2);

struct EffectSize {
  double d = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  bool degenerate = false;  // zero pooled variance
};

/// Cohen's d for two Bernoulli samples with pooled (n-1) variance, normal-approximation 95% CI.
/// Throws std::invalid_argument unless n1 + n2 >= 3, n1, n2 >= 1 and k <= n.
EffectSize cohens_d(std::uint64_t k1, std::uint64_t n1, std::uint64_t k2, std::uint64_t n2);

/// Two-tailed standard normal tail P(|Z| >= |z|), and its log10.
double normal_two_tailed_p(double z);
double normal_two_tailed_log10_p(double z);

/// (WFEs with exactly one or two m-bits, all WFEs).
std::pair<std::uint64_t, std::uint64_t> small_m_rate(const std::vector<FeaturedWfe>& wfes);

}  // namespace chaffkit
