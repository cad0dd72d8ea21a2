#include "chaffkit/baseline.hpp"

#include "chaffkit/harness.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <random>
#include <stdexcept>

namespace chaffkit {

namespace {

std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  for (std::size_t i = 0; i < s.size();) {
    const auto c = static_cast<unsigned char>(s[i]);
    int len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 0;
    if (len == 0 || i + len > s.size()) {
      out.push_back(0xDC00 + c);  // lone byte
      ++i;
      continue;
    }
    char32_t cp = len == 1 ? c : c & (0xFF >> (len + 1));
    bool ok = true;
    for (int k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc >> 6) != 0x2) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (!ok) {
      out.push_back(0xDC00 + c);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += static_cast<std::size_t>(len);
  }
  return out;
}

std::string normalize(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

double median_of(std::vector<double> xs) {
  const std::size_t n = xs.size();
  std::sort(xs.begin(), xs.end());
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace

std::size_t levenshtein(std::string_view a, std::string_view b) {
  const auto x = decode_utf8(a);
  const auto y = decode_utf8(b);
  std::vector<std::size_t> row(y.size() + 1);
  for (std::size_t j = 0; j <= y.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= x.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= y.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (x[i - 1] == y[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[y.size()];
}

std::vector<std::size_t> BaselineClustering::exemplars() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < exemplar_of.size(); ++i)
    if (exemplar_of[i] == i) out.push_back(i);
  return out;
}

BaselineClustering affinity_propagation(const SimilarityMatrix& sim, const ApOptions& options) {
  const Eigen::Index n = sim.s.rows();
  if (n == 0 || sim.s.cols() != n) throw std::invalid_argument("similarity matrix must be square and non-empty");
  if (!(options.damping >= 0.5 && options.damping < 1.0)) throw std::invalid_argument("damping must be in [0.5, 1)");
  if (!sim.s.allFinite()) throw std::invalid_argument("similarity matrix has non-finite entries");

  BaselineClustering out;
  if (n == 1) {
    out.exemplar_of = {0};
    out.converged = true;
    return out;
  }

  // Tiny fixed-seed jitter breaks ties between equal similarities.
  Eigen::MatrixXd S = sim.s;
  {
    std::mt19937_64 rng(0x5eed);
    const double scale = std::max(1.0, S.cwiseAbs().maxCoeff()) * 1e-12;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index k = 0; k < n; ++k)
        S(i, k) += scale * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  }

  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd Rnew(n, n), Anew(n, n);
  const double lambda = options.damping;

  std::vector<std::size_t> assignment, previous;
  std::size_t stable = 0;

  auto assign = [&](std::vector<std::size_t>& result) {
    result.assign(static_cast<std::size_t>(n), 0);
    std::vector<Eigen::Index> ex;
    for (Eigen::Index k = 0; k < n; ++k)
      if (A(k, k) + R(k, k) > 0) ex.push_back(k);
    if (ex.empty()) return false;
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::Index best = ex.front();
      double best_val = -std::numeric_limits<double>::infinity();
      for (Eigen::Index k : ex) {
        if (k == i) {
          best = i;
          break;
        }
        const double v = A(i, k) + R(i, k);
        if (v > best_val) {
          best_val = v;
          best = k;
        }
      }
      result[static_cast<std::size_t>(i)] = static_cast<std::size_t>(best);
    }
    return true;
  };

  for (std::size_t it = 1; it <= options.max_iter; ++it) {
    // Responsibilities.
    const Eigen::MatrixXd AS = A + S;
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::Index top;
      const double first = AS.row(i).maxCoeff(&top);
      double second = -std::numeric_limits<double>::infinity();
      for (Eigen::Index k = 0; k < n; ++k)
        if (k != top) second = std::max(second, AS(i, k));
      Rnew.row(i) = S.row(i).array() - first;
      Rnew(i, top) = S(i, top) - second;
    }
    R = lambda * R + (1 - lambda) * Rnew;

    // Availabilities.
    Eigen::MatrixXd Rp = R.cwiseMax(0.0);
    Rp.diagonal() = R.diagonal();
    const Eigen::RowVectorXd colsum = Rp.colwise().sum();
    Anew = (-Rp).rowwise() + colsum;
    const Eigen::VectorXd self = Anew.diagonal();
    Anew = Anew.cwiseMin(0.0);
    Anew.diagonal() = self;
    A = lambda * A + (1 - lambda) * Anew;

    out.iterations_run = it;
    const bool have = assign(assignment);
    if (have && assignment == previous) {
      if (++stable >= options.stable_window) {
        out.converged = true;
        break;
      }
    } else {
      stable = 0;
    }
    previous = have ? assignment : std::vector<std::size_t>{};
  }

  if (!assign(out.exemplar_of)) {
    Eigen::Index k;
    (A.diagonal() + R.diagonal()).maxCoeff(&k);
    out.exemplar_of.assign(static_cast<std::size_t>(n), static_cast<std::size_t>(k));
  }
  return out;
}

SimilarityMatrix levenshtein_similarity(const std::vector<std::string>& texts, bool normalize_text) {
  const auto n = static_cast<Eigen::Index>(texts.size());
  std::vector<std::string> norm;
  norm.reserve(texts.size());
  for (const auto& t : texts) norm.push_back(normalize_text ? normalize(t) : t);

  SimilarityMatrix sim{Eigen::MatrixXd::Zero(n, n)};
  std::vector<double> off;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = i + 1; k < n; ++k) {
      const double d = -static_cast<double>(levenshtein(norm[static_cast<std::size_t>(i)], norm[static_cast<std::size_t>(k)]));
      sim.s(i, k) = sim.s(k, i) = d;
      off.push_back(d);
    }
  const double pref = off.empty() ? 0.0 : median_of(std::move(off));
  sim.s.diagonal().setConstant(pref);
  return sim;
}

BaselineClustering baseline_cluster(const std::vector<std::string>& texts, const BaselineOptions& options) {
  if (texts.empty()) throw std::invalid_argument("baseline clustering needs at least one example");
  const SimilarityMatrix sim = levenshtein_similarity(texts, options.normalize_text);
  const auto n = sim.s.rows();

  // All points equidistant: message passing has nothing to separate, so one cluster.
  bool uniform = true;
  for (Eigen::Index i = 0; i < n && uniform; ++i)
    for (Eigen::Index k = 0; k < n; ++k)
      if (i != k && sim.s(i, k) != sim.s(0, n > 1 ? 1 : 0)) {
        uniform = false;
        break;
      }
  if (uniform) {
    BaselineClustering out;
    out.exemplar_of.assign(static_cast<std::size_t>(n), 0);
    out.converged = true;
    return out;
  }
  return affinity_propagation(sim, options.ap);
}

BaselineClustering baseline_cluster(const std::vector<WfeRecord>& wfes, const BaselineOptions& options) {
  std::vector<std::string> texts;
  texts.reserve(wfes.size());
  for (const auto& w : wfes) texts.push_back(w.example.raw_text.empty() ? render_example(w.example) : w.example.raw_text);
  return baseline_cluster(texts, options);
}

}  // namespace chaffkit
