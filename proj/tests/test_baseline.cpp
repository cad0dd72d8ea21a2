#include "doctest.h"

#include "chaffkit/baseline.hpp"
#include "chaffkit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

using namespace chaffkit;

namespace {

// Textbook full-table edit distance; inputs below are ASCII so bytes are code points.
std::size_t table_distance(const std::string& a, const std::string& b) {
  std::vector<std::vector<std::size_t>> t(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) t[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) t[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i)
    for (std::size_t j = 1; j <= b.size(); ++j)
      t[i][j] = std::min({t[i - 1][j] + 1, t[i][j - 1] + 1, t[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
  return t[a.size()][b.size()];
}

std::string random_string(Rng& rng) {
  std::string s;
  for (auto n = rng.below(9); n > 0; --n) s += "abc"[rng.below(3)];
  return s;
}

// Net similarity of an exemplar set: preferences of the exemplars plus each other
// point's best similarity to one of them.
double net_similarity(const Eigen::MatrixXd& s, const std::vector<std::size_t>& exemplars) {
  double total = 0;
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    const auto self = static_cast<std::size_t>(i);
    if (std::find(exemplars.begin(), exemplars.end(), self) != exemplars.end()) {
      total += s(i, i);
      continue;
    }
    double best = -std::numeric_limits<double>::infinity();
    for (auto e : exemplars) best = std::max(best, s(i, static_cast<Eigen::Index>(e)));
    total += best;
  }
  return total;
}

}  // namespace

TEST_CASE("levenshtein reference values") {
  CHECK(levenshtein("kitten", "sitting") == 3);
  CHECK(levenshtein("median([1, 2]) is 1", "median([1, 2]) is 2") == 1);
  CHECK(levenshtein("same", "same") == 0);
  CHECK(levenshtein("", "abc") == 3);
  CHECK(levenshtein("caf\xc3\xa9", "cafe") == 1);  // one code point, two bytes
}

TEST_CASE("levenshtein metric laws") {
  Rng rng(3);
  std::vector<std::string> pool;
  for (int i = 0; i < 60; ++i) pool.push_back(random_string(rng));
  for (const auto& a : pool)
    for (const auto& b : pool) {
      const auto d = levenshtein(a, b);
      CHECK(d == table_distance(a, b));
      CHECK((d == 0) == (a == b));
      CHECK(d == levenshtein(b, a));
      CHECK(d <= std::max(a.size(), b.size()));
      CHECK(d >= (a.size() > b.size() ? a.size() - b.size() : b.size() - a.size()));
      for (int k = 0; k < 5; ++k) {
        const auto& c = pool[rng.below(pool.size())];
        CHECK(d <= levenshtein(a, c) + levenshtein(c, b));
      }
    }
}

TEST_CASE("affinity propagation singleton") {
  SimilarityMatrix s{Eigen::MatrixXd::Constant(1, 1, -3.0)};
  const auto r = affinity_propagation(s);
  CHECK(r.exemplar_of == std::vector<std::size_t>{0});
}

TEST_CASE("two separated groups give two clusters at the best exemplar set") {
  const std::vector<std::string> texts = {
      "aaaaaaaaaaaaaaaaaaaaaaaa", "aaaaaaaaaaaaaaaaaaaaaaab", "aaaaaaaaaaaaaaaaaaaaaaac", "baaaaaaaaaaaaaaaaaaaaaaa",
      "zzzzzzzzzzzzzzzzzzzzzzzz", "zzzzzzzzzzzzzzzzzzzzzzzy", "yzzzzzzzzzzzzzzzzzzzzzzz"};
  const SimilarityMatrix sim = levenshtein_similarity(texts);
  const auto r = affinity_propagation(sim);
  CHECK(r.converged);
  const auto ex = r.exemplars();
  REQUIRE(ex.size() == 2);
  for (std::size_t i = 0; i < 4; ++i) CHECK(r.exemplar_of[i] == r.exemplar_of[0]);
  for (std::size_t i = 4; i < 7; ++i) CHECK(r.exemplar_of[i] == r.exemplar_of[4]);
  CHECK(r.exemplar_of[0] != r.exemplar_of[4]);
  for (auto e : ex) CHECK(r.exemplar_of[e] == e);

  // Exhaustive search over every nonempty exemplar subset.
  double best = -std::numeric_limits<double>::infinity();
  const std::size_t n = texts.size();
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::size_t> set;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) set.push_back(i);
    best = std::max(best, net_similarity(sim.s, set));
  }
  CHECK(net_similarity(sim.s, ex) == doctest::Approx(best));
}

TEST_CASE("similarity matrix shape") {
  const SimilarityMatrix sim = levenshtein_similarity({"ab", "abc", "xyz", "ab"});
  REQUIRE(sim.size() == 4);
  for (Eigen::Index i = 0; i < 4; ++i)
    for (Eigen::Index j = 0; j < 4; ++j) {
      CHECK(std::isfinite(sim.s(i, j)));
      if (i != j) CHECK(sim.s(i, j) == sim.s(j, i));
    }
  CHECK(sim.s(0, 1) == -1);
  // Off-diagonal values: -1, -3, 0, -3, -1, -3 (each twice); median -2.
  CHECK(sim.s(0, 0) == doctest::Approx(-2));
  CHECK(sim.s(2, 2) == sim.s(0, 0));
}

TEST_CASE("identical strings form one cluster") {
  const auto r = baseline_cluster(std::vector<std::string>(5, "median([1, 2]) is 1"));
  CHECK(r.exemplars().size() == 1);
}

TEST_CASE("edit-distance neighbours share a baseline cluster") {
  const std::vector<std::string> texts = {"median([1, 2]) is 1",
                                          "median([1, 2]) is 2",
                                          "median([4, 678, 0, 99, 3]) is 0",
                                          "median([4, 678, 0, 99, 3]) is 3",
                                          "median([5, 6, 7, 8, 9, 10, 11]) is 11",
                                          "median([5, 6, 7, 8, 9, 10, 11]) is 5"};
  const auto r = baseline_cluster(texts);
  CHECK(r.exemplar_of[0] == r.exemplar_of[1]);
  CHECK(r.exemplar_of[0] != r.exemplar_of[2]);
}

TEST_CASE("affinity propagation is deterministic and well formed") {
  Rng rng(12);
  for (int t = 0; t < 20; ++t) {
    std::vector<std::string> texts;
    for (auto n = rng.between(1, 25); n > 0; --n) texts.push_back(random_string(rng));
    const auto a = baseline_cluster(texts);
    const auto b = baseline_cluster(texts);
    CHECK(a.exemplar_of == b.exemplar_of);
    CHECK(a.iterations_run == b.iterations_run);
    REQUIRE(a.exemplar_of.size() == texts.size());
    const auto ex = a.exemplars();
    CHECK_FALSE(ex.empty());
    for (auto e : ex) CHECK(a.exemplar_of[e] == e);
    for (auto e : a.exemplar_of) CHECK(std::find(ex.begin(), ex.end(), e) != ex.end());
  }
}

TEST_CASE("options") {
  SimilarityMatrix s{Eigen::MatrixXd::Zero(3, 3)};
  s.s << -1, -5, -9, -5, -1, -4, -9, -4, -1;
  ApOptions o;
  o.max_iter = 1;
  o.stable_window = 5;
  const auto r = affinity_propagation(s, o);
  CHECK(r.iterations_run <= 1);
  CHECK_FALSE(r.converged);
  CHECK(ApOptions{}.stable_window == 5);
}
