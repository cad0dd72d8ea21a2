#include "doctest.h"

#include "chaffkit/metrics.hpp"
#include "chaffkit/stats.hpp"
#include "chaffkit/synth.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>

using namespace chaffkit;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

LabeledPartition make(std::vector<std::string> classes, std::vector<std::string> clusters) {
  LabeledPartition p;
  for (std::size_t i = 0; i < classes.size(); ++i) p.push_back({"i" + std::to_string(i), classes[i], clusters[i]});
  return p;
}

// Entropies by direct counting, one item at a time, in base 2.
struct Brute {
  long double h, c, v;
};

Brute brute_v(const LabeledPartition& p) {
  const long double n = static_cast<long double>(p.size());
  auto count_if = [&](auto pred) {
    long double k = 0;
    for (const auto& q : p) k += pred(q) ? 1 : 0;
    return k;
  };
  long double hc = 0, hk = 0, hc_k = 0, hk_c = 0;
  for (const auto& it : p) {
    const long double nc = count_if([&](const auto& q) { return q.class_label == it.class_label; });
    const long double nk = count_if([&](const auto& q) { return q.cluster_id == it.cluster_id; });
    const long double nck =
        count_if([&](const auto& q) { return q.class_label == it.class_label && q.cluster_id == it.cluster_id; });
    // Each item contributes 1/n of -log of its cell's probability.
    hc -= std::log2(nc / n) / n;
    hk -= std::log2(nk / n) / n;
    hc_k -= std::log2(nck / nk) / n;
    hk_c -= std::log2(nck / nc) / n;
  }
  Brute b;
  b.h = hc == 0 ? 1 : 1 - hc_k / hc;
  b.c = hk == 0 ? 1 : 1 - hk_c / hk;
  b.v = b.h + b.c == 0 ? 0 : 2 * b.h * b.c / (b.h + b.c);
  return b;
}

LabeledPartition random_partition(Rng& rng) {
  LabeledPartition p;
  const auto n = rng.between(1, 12);
  const auto classes = rng.between(1, 4), clusters = rng.between(1, 4);
  for (long long i = 0; i < n; ++i)
    p.push_back({"i" + std::to_string(i), "c" + std::to_string(rng.below(classes)), "k" + std::to_string(rng.below(clusters))});
  return p;
}

Big big_z(std::uint64_t k1, std::uint64_t n1, std::uint64_t k2, std::uint64_t n2) {
  const Big p1 = Big(k1) / n1, p2 = Big(k2) / n2;
  return (p1 - p2) / sqrt(p1 * (1 - p1) / n1 + p2 * (1 - p2) / n2);
}

}  // namespace

TEST_CASE("v-measure reference values") {
  const VScores v = v_measure(make({"x", "x", "y", "y"}, {"1", "1", "1", "2"}));
  CHECK(v.homogeneity == doctest::Approx(0.31127812445913283).epsilon(1e-12));
  CHECK(v.completeness == doctest::Approx(0.3836885465963443).epsilon(1e-12));
  CHECK(v.v_measure == doctest::Approx(0.34371101848545077).epsilon(1e-12));
}

TEST_CASE("v-measure trivial partitions") {
  const VScores same = v_measure(make({"a", "a", "b", "b"}, {"1", "1", "2", "2"}));
  CHECK(same.homogeneity == doctest::Approx(1));
  CHECK(same.completeness == doctest::Approx(1));
  CHECK(same.v_measure == doctest::Approx(1));

  const VScores lump = v_measure(make({"x", "x", "y", "y"}, {"1", "1", "1", "1"}));
  CHECK(lump.homogeneity == doctest::Approx(0));
  CHECK(lump.v_measure == doctest::Approx(0));

  const VScores singletons = v_measure(make({"a", "a", "b"}, {"1", "2", "3"}));
  CHECK(singletons.homogeneity == doctest::Approx(1));
  CHECK(singletons.completeness <= 1);
  CHECK(homogeneity(make({"a", "a", "b", "b"}, {"1", "1", "2", "2"})) == doctest::Approx(1));

  CHECK_THROWS_AS(v_measure({}), std::invalid_argument);
}

TEST_CASE("v-measure agrees with direct entropy counting") {
  Rng rng(1234);
  for (int t = 0; t < 500; ++t) {
    const auto p = random_partition(rng);
    const VScores v = v_measure(p);
    const Brute b = brute_v(p);
    CHECK(std::abs(v.homogeneity - static_cast<double>(b.h)) < 1e-9);
    CHECK(std::abs(v.completeness - static_cast<double>(b.c)) < 1e-9);
    CHECK(std::abs(v.v_measure - static_cast<double>(b.v)) < 1e-9);
  }
}

TEST_CASE("v-measure laws") {
  Rng rng(77);
  for (int t = 0; t < 300; ++t) {
    auto p = random_partition(rng);
    const VScores v = v_measure(p);
    CHECK(v.homogeneity >= 0);
    CHECK(v.homogeneity <= 1);
    CHECK(v.completeness >= 0);
    CHECK(v.completeness <= 1);
    CHECK(v.v_measure >= 0);
    CHECK(v.v_measure <= 1);

    auto relabeled = p;
    for (auto& it : relabeled) {
      it.class_label = "C-" + it.class_label + "-z";
      it.cluster_id = std::string(1, static_cast<char>('Z' - (it.cluster_id.back() - '0'))) + "!";
    }
    const VScores r = v_measure(relabeled);
    CHECK(r.v_measure == doctest::Approx(v.v_measure).epsilon(1e-12));
    CHECK(r.homogeneity == doctest::Approx(v.homogeneity).epsilon(1e-12));

    auto swapped = p;
    for (auto& it : swapped) std::swap(it.class_label, it.cluster_id);
    CHECK(completeness(p) == doctest::Approx(homogeneity(swapped)).epsilon(1e-12));

    // Merging two clusters cannot raise homogeneity; splitting one cannot lower it.
    auto merged = p;
    for (auto& it : merged)
      if (it.cluster_id == "k1") it.cluster_id = "k0";
    CHECK(homogeneity(merged) <= v.homogeneity + 1e-12);
    auto split = p;
    bool flip = false;
    for (auto& it : split) {
      if (it.cluster_id != "k0") continue;
      flip = !flip;
      if (flip) it.cluster_id = "k0-split";
    }
    CHECK(homogeneity(split) >= v.homogeneity - 1e-12);

    // V = 1 exactly when the partitions coincide up to relabeling.
    auto perfect = p;
    for (auto& it : perfect) it.cluster_id = "K" + it.class_label;
    CHECK(v_measure(perfect).v_measure == doctest::Approx(1));
  }
}

TEST_CASE("completeness is not monotone under splitting") {
  // Splitting cluster 0 into singletons raises completeness from about 0.274 to 0.579.
  const double before = completeness(make({"a", "a", "b"}, {"0", "1", "0"}));
  const double after = completeness(make({"a", "a", "b"}, {"2", "1", "0"}));
  CHECK(before == doctest::Approx(0.2740175421212811).epsilon(1e-12));
  CHECK(after == doctest::Approx(0.5793801642856952).epsilon(1e-12));
}

TEST_CASE("z test reference values") {
  const ZTestResult z = two_proportion_z(141, 591, 37, 1546);
  CHECK(z.z == doctest::Approx(11.952745718032909).epsilon(1e-12));
  CHECK(z.p == doctest::Approx(6.2815049044487936e-33).epsilon(1e-9));
  CHECK(z.p > 0);
  CHECK(z.p < 1e-30);
  CHECK(z.log10_p == doctest::Approx(std::log10(6.2815049044487936e-33)).epsilon(1e-12));
  CHECK(z.rate1 == doctest::Approx(141.0 / 591));
  CHECK_FALSE(z.degenerate);

  const ZTestResult eq = two_proportion_z(10, 100, 20, 200);
  CHECK(eq.z == 0);
  CHECK(eq.p == 1);

  const ZTestResult flat = two_proportion_z(0, 10, 0, 30);
  CHECK(flat.degenerate);
  CHECK(flat.z == 0);
  CHECK(flat.p == 1);
  CHECK_FALSE(two_proportion_z(10, 10, 10, 20).degenerate);
  const ZTestResult apart = two_proportion_z(10, 10, 0, 20);
  CHECK(apart.degenerate);
  CHECK(std::isinf(apart.z));
  CHECK(apart.z > 0);
  CHECK(apart.p == 0);

  CHECK_THROWS_AS(two_proportion_z(5, 4, 1, 2), std::invalid_argument);
  CHECK_THROWS_AS(two_proportion_z(0, 0, 1, 2), std::invalid_argument);
}

TEST_CASE("z test antisymmetry and monotone p") {
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    const auto n1 = rng.between(1, 3000), n2 = rng.between(1, 3000);
    const auto k1 = rng.between(0, n1), k2 = rng.between(0, n2);
    const auto a = two_proportion_z(k1, n1, k2, n2);
    const auto b = two_proportion_z(k2, n2, k1, n1);
    CHECK(a.z == doctest::Approx(-b.z));
    CHECK(a.p == doctest::Approx(b.p));
  }
  double last = 1.0;
  for (double z = 0.25; z < 37; z += 0.25) {
    const double p = normal_two_tailed_p(z);
    CHECK(p < last);
    last = p;
  }
  double last_log = 0.0;
  for (double z = 1; z < 200; z += 1) {
    const double l = normal_two_tailed_log10_p(z);
    CHECK(l < last_log);
    last_log = l;
  }
}

TEST_CASE("normal tail against high precision") {
  for (double z = 0.0; z < 37.5; z += 0.37) {
    const Big exact = boost::math::erfc(Big(z) / sqrt(Big(2)));
    const double p = normal_two_tailed_p(z);
    CHECK(std::abs(p / exact.convert_to<double>() - 1) < 1e-12);
    const double lg = normal_two_tailed_log10_p(z);
    CHECK(std::abs(lg - log10(exact).convert_to<double>()) < 1e-12 * std::max(1.0, std::abs(lg)));
  }
  // Past double range the log stays finite and correct.
  const double lg = normal_two_tailed_log10_p(60.0);
  const Big exact = log10(boost::math::erfc(Big(60) / sqrt(Big(2))));
  CHECK(lg == doctest::Approx(exact.convert_to<double>()).epsilon(1e-12));
  CHECK(std::isfinite(lg));
}

TEST_CASE("z against high precision on random counts") {
  Rng rng(9);
  for (int t = 0; t < 200; ++t) {
    const auto n1 = rng.between(2, 5000), n2 = rng.between(2, 5000);
    const auto k1 = rng.between(1, n1 - 1), k2 = rng.between(1, n2 - 1);
    const auto r = two_proportion_z(k1, n1, k2, n2);
    const Big z = big_z(k1, n1, k2, n2);
    if (z == 0) {
      CHECK(r.z == 0);
      continue;
    }
    CHECK(std::abs(r.z / z.convert_to<double>() - 1) < 1e-9);
  }
}

TEST_CASE("cohen's d") {
  const EffectSize e = cohens_d(141, 591, 37, 1546);
  // Pooled-SD d from the two Bernoulli sample variances.
  const double p1 = 141.0 / 591, p2 = 37.0 / 1546;
  const double s1 = 591 * p1 * (1 - p1) / 590, s2 = 1546 * p2 * (1 - p2) / 1545;
  const double sp = std::sqrt((590 * s1 + 1545 * s2) / (591 + 1546 - 2));
  CHECK(e.d == doctest::Approx((p1 - p2) / sp).epsilon(1e-12));
  CHECK(e.d == doctest::Approx(0.828).epsilon(1e-3));
  CHECK(e.ci_low < e.d);
  CHECK(e.d < e.ci_high);

  const EffectSize zero = cohens_d(10, 100, 20, 200);
  CHECK(zero.d == 0);
  CHECK(zero.ci_low == doctest::Approx(-zero.ci_high));

  const EffectSize swapped = cohens_d(37, 1546, 141, 591);
  CHECK(swapped.d == doctest::Approx(-e.d));

  CHECK(cohens_d(0, 5, 0, 5).degenerate);
  CHECK_THROWS_AS(cohens_d(1, 1, 0, 1), std::invalid_argument);
}

TEST_CASE("small-m rate") {
  auto fw = [](const char* v) { return FeaturedWfe{"w", "s", *FeatureVector::parse(v)}; };
  CHECK(small_m_rate({fw("ddd"), fw("ddd")}) == std::pair<std::uint64_t, std::uint64_t>{0, 2});
  CHECK(small_m_rate({fw("dmd")}) == std::pair<std::uint64_t, std::uint64_t>{1, 1});
  CHECK(small_m_rate({fw("mmd"), fw("mmm"), fw("ddd"), fw("dmd")}) == std::pair<std::uint64_t, std::uint64_t>{2, 4});
}
