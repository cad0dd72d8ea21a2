#include "chaffkit/stats.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace chaffkit {

namespace {

void check_counts(std::uint64_t k1, std::uint64_t n1, std::uint64_t k2, std::uint64_t n2) {
  if (n1 == 0 || n2 == 0) throw std::invalid_argument("cohort sizes must be at least 1");
  if (k1 > n1 || k2 > n2) throw std::invalid_argument("count exceeds cohort size");
}

// ln erfc(x) for x >= 0. Below the cut std::erfc is exact enough and far from
// underflow; above it, erfc(x) = exp(-x^2)/sqrt(pi) * F(x) with F the continued
// fraction 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))), evaluated by modified Lentz.
double log_erfc(double x) {
  constexpr double cut = 5.0;
  if (x < cut) return std::log(std::erfc(x));
  constexpr double tiny = 1e-300;
  double f = x;
  double c = x;
  double d = 0.0;
  for (int k = 1; k < 500; ++k) {
    const double a = 0.5 * k;
    d = x + a * d;
    if (std::abs(d) < tiny) d = tiny;
    c = x + a / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return -x * x - 0.5 * std::log(std::numbers::pi) - std::log(f);
}

}  // namespace

double normal_two_tailed_p(double z) {
  if (std::isinf(z)) return 0.0;
  const double x = std::abs(z) / std::numbers::sqrt2;
  if (x < 5.0) return std::erfc(x);
  return std::exp(log_erfc(x));
}

double normal_two_tailed_log10_p(double z) {
  if (std::isinf(z)) return -std::numeric_limits<double>::infinity();
  return log_erfc(std::abs(z) / std::numbers::sqrt2) / std::numbers::ln10;
}

ZTestResult two_proportion_z(std::uint64_t k1, std::uint64_t n1, std::uint64_t k2, std::uint64_t n2) {
  check_counts(k1, n1, k2, n2);
  ZTestResult r;
  r.n1 = n1;
  r.n2 = n2;
  r.rate1 = static_cast<double>(k1) / static_cast<double>(n1);
  r.rate2 = static_cast<double>(k2) / static_cast<double>(n2);
  // Exact integer forms keep the variance free of cancellation.
  const double var1 = static_cast<double>(k1) * static_cast<double>(n1 - k1) /
                      (static_cast<double>(n1) * static_cast<double>(n1) * static_cast<double>(n1));
  const double var2 = static_cast<double>(k2) * static_cast<double>(n2 - k2) /
                      (static_cast<double>(n2) * static_cast<double>(n2) * static_cast<double>(n2));
  const double se = std::sqrt(var1 + var2);
  const double diff = static_cast<double>(k1 * n2) - static_cast<double>(k2 * n1);
  if (se == 0.0) {
    r.degenerate = true;
    if (diff == 0.0) {
      r.z = 0.0;
      r.p = 1.0;
      r.log10_p = 0.0;
    } else {
      r.z = diff > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
      r.p = 0.0;
      r.log10_p = -std::numeric_limits<double>::infinity();
    }
    return r;
  }
  r.z = diff / (static_cast<double>(n1) * static_cast<double>(n2)) / se;
  r.p = normal_two_tailed_p(r.z);
  r.log10_p = normal_two_tailed_log10_p(r.z);
  return r;
}

EffectSize cohens_d(std::uint64_t k1, std::uint64_t n1, std::uint64_t k2, std::uint64_t n2) {
  check_counts(k1, n1, k2, n2);
  if (n1 + n2 < 3) throw std::invalid_argument("Cohen's d needs at least 3 observations");
  const double dn1 = static_cast<double>(n1), dn2 = static_cast<double>(n2);
  const double ss1 = static_cast<double>(k1) * static_cast<double>(n1 - k1) / dn1;
  const double ss2 = static_cast<double>(k2) * static_cast<double>(n2 - k2) / dn2;
  const double pooled = std::sqrt((ss1 + ss2) / (dn1 + dn2 - 2));
  const double diff = (static_cast<double>(k1 * n2) - static_cast<double>(k2 * n1)) / (dn1 * dn2);

  EffectSize e;
  if (pooled == 0.0) {
    e.degenerate = true;
    if (diff == 0.0) return e;
    e.d = e.ci_low = e.ci_high =
        diff > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    return e;
  }
  e.d = diff / pooled;
  const double se = std::sqrt((dn1 + dn2) / (dn1 * dn2) + e.d * e.d / (2 * (dn1 + dn2)));
  e.ci_low = e.d - 1.96 * se;
  e.ci_high = e.d + 1.96 * se;
  return e;
}

std::pair<std::uint64_t, std::uint64_t> small_m_rate(const std::vector<FeaturedWfe>& wfes) {
  std::uint64_t k = 0;
  for (const auto& w : wfes) {
    const auto m = w.vector.m_count();
    k += (m == 1 || m == 2);
  }
  return {k, wfes.size()};
}

}  // namespace chaffkit
