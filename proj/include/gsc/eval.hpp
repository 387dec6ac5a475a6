#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gsc/errors.hpp"
#include "gsc/types.hpp"

namespace gsc {

/// Contingency table of predicted clusters (rows) against true classes
/// (columns), with the label values each row/column stands for.
struct ConfusionMatrix {
  std::vector<std::vector<long long>> counts; // k_pred x k_true
  std::vector<std::string> pred_values;
  std::vector<std::string> truth_values;
  long long total = 0;

  std::size_t k_pred() const { return counts.size(); }
  std::size_t k_true() const { return counts.empty() ? 0 : counts[0].size(); }
};

namespace detail {

inline std::vector<int> encode_labels(const std::vector<std::string>& labels,
                                      std::vector<std::string>& values) {
  std::map<std::string, int> codes;
  for (const auto& lab : labels) codes.emplace(lab, 0);
  int next = 0;
  for (auto& [lab, code] : codes) code = next++;
  values.clear();
  values.resize(codes.size());
  for (const auto& [lab, code] : codes)
    values[static_cast<std::size_t>(code)] = lab;
  std::vector<int> out;
  out.reserve(labels.size());
  for (const auto& lab : labels) out.push_back(codes.at(lab));
  return out;
}

inline std::vector<std::string> stringify(const std::vector<int>& labels) {
  std::vector<std::string> out;
  out.reserve(labels.size());
  for (int lab : labels) out.push_back(std::to_string(lab));
  return out;
}

/// Maximum-weight assignment of rows to columns (Hungarian algorithm,
/// shortest-augmenting-path form). Returns, for each row, the assigned
/// column or -1; min(rows, cols) pairs are assigned.
inline std::vector<int> hungarian_max(
    const std::vector<std::vector<double>>& weight) {
  const std::size_t rows = weight.size();
  const std::size_t cols = rows == 0 ? 0 : weight[0].size();
  const bool transposed = rows > cols;
  const std::size_t n = transposed ? cols : rows;
  const std::size_t m = transposed ? rows : cols;
  auto cost = [&](std::size_t i, std::size_t j) {
    // Negate to minimize; guaranteed n <= m.
    return transposed ? -weight[j][i] : -weight[i][j];
  };

  // Potentials / matching over a (n+1) x (m+1) grid, 1-based.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> match(m + 1, 0); // column -> row
  for (std::size_t i = 1; i <= n; ++i) {
    std::vector<double> min_slack(m + 1, inf);
    std::vector<std::size_t> path(m + 1, 0);
    std::vector<bool> used(m + 1, false);
    std::size_t j0 = 0;
    match[0] = i;
    do {
      used[j0] = true;
      const std::size_t i0 = match[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < min_slack[j]) {
          min_slack[j] = cur;
          path[j] = j0;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = path[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_to_col(rows, -1);
  for (std::size_t j = 1; j <= m; ++j) {
    if (match[j] == 0) continue;
    const std::size_t a = match[j] - 1; // row in the reduced problem
    const std::size_t b = j - 1;
    if (transposed)
      row_to_col[b] = static_cast<int>(a);
    else
      row_to_col[a] = static_cast<int>(b);
  }
  return row_to_col;
}

inline double entropy(const std::vector<long long>& sizes, long long n) {
  double h = 0.0;
  for (long long s : sizes) {
    if (s <= 0) continue;
    const double p = static_cast<double>(s) / static_cast<double>(n);
    h -= p * std::log(p);
  }
  return h;
}

/// Expected mutual information under the hypergeometric (permutation)
/// model, evaluated with log-gamma for numerical range.
inline double expected_mutual_information(const std::vector<long long>& a,
                                          const std::vector<long long>& b,
                                          long long n) {
  const double log_n = std::log(static_cast<double>(n));
  auto lg = [](long long x) { return std::lgamma(static_cast<double>(x) + 1.0); };
  double emi = 0.0;
  for (long long ai : a) {
    for (long long bj : b) {
      const long long lo = std::max<long long>(1, ai + bj - n);
      const long long hi = std::min(ai, bj);
      for (long long nij = lo; nij <= hi; ++nij) {
        const double t1 = static_cast<double>(nij) / static_cast<double>(n);
        const double t2 = log_n + std::log(static_cast<double>(nij)) -
                          std::log(static_cast<double>(ai)) -
                          std::log(static_cast<double>(bj));
        const double log_t3 = lg(ai) + lg(bj) + lg(n - ai) + lg(n - bj) -
                              lg(n) - lg(nij) - lg(ai - nij) - lg(bj - nij) -
                              lg(n - ai - bj + nij);
        emi += t1 * t2 * std::exp(log_t3);
      }
    }
  }
  return emi;
}

struct Contingency {
  std::vector<std::vector<long long>> counts;
  std::vector<long long> row_sums; // pred cluster sizes
  std::vector<long long> col_sums; // truth class sizes
  long long n = 0;
};

inline Contingency contingency(const std::vector<int>& pred,
                               const std::vector<int>& truth) {
  if (pred.size() != truth.size())
    throw ValidationError("pred/truth label lengths differ");
  if (pred.empty()) throw ValidationError("empty labelings");
  int kp = 0, kt = 0;
  for (int p : pred) kp = std::max(kp, p + 1);
  for (int t : truth) kt = std::max(kt, t + 1);
  Contingency c;
  c.counts.assign(static_cast<std::size_t>(kp),
                  std::vector<long long>(static_cast<std::size_t>(kt), 0));
  c.row_sums.assign(static_cast<std::size_t>(kp), 0);
  c.col_sums.assign(static_cast<std::size_t>(kt), 0);
  c.n = static_cast<long long>(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    c.counts[static_cast<std::size_t>(pred[i])]
            [static_cast<std::size_t>(truth[i])]++;
    c.row_sums[static_cast<std::size_t>(pred[i])]++;
    c.col_sums[static_cast<std::size_t>(truth[i])]++;
  }
  return c;
}

} // namespace detail

inline ConfusionMatrix confusion(const std::vector<std::string>& pred,
                                 const std::vector<std::string>& truth) {
  if (pred.size() != truth.size())
    throw ValidationError("pred/truth label lengths differ");
  if (pred.empty()) throw ValidationError("empty labelings");
  ConfusionMatrix cm;
  const auto p = detail::encode_labels(pred, cm.pred_values);
  const auto t = detail::encode_labels(truth, cm.truth_values);
  cm.counts.assign(cm.pred_values.size(),
                   std::vector<long long>(cm.truth_values.size(), 0));
  for (std::size_t i = 0; i < p.size(); ++i)
    cm.counts[static_cast<std::size_t>(p[i])]
             [static_cast<std::size_t>(t[i])]++;
  cm.total = static_cast<long long>(pred.size());
  return cm;
}

inline ConfusionMatrix confusion(const std::vector<int>& pred,
                                 const std::vector<int>& truth) {
  return confusion(detail::stringify(pred), detail::stringify(truth));
}

struct MatchResult {
  std::vector<int> assignment; // pred cluster -> truth class, -1 if unmatched
  long long matched = 0;       // points landing in their assigned class
  double error_rate = 0.0;     // 1 - matched / n
};

/// Aligns predicted clusters to true classes with a maximum-weight
/// bipartite assignment over the confusion counts.
inline MatchResult match_labels(const ConfusionMatrix& cm) {
  std::vector<std::vector<double>> weight(cm.k_pred(),
                                          std::vector<double>(cm.k_true()));
  for (std::size_t i = 0; i < cm.k_pred(); ++i)
    for (std::size_t j = 0; j < cm.k_true(); ++j)
      weight[i][j] = static_cast<double>(cm.counts[i][j]);
  MatchResult res;
  res.assignment = detail::hungarian_max(weight);
  for (std::size_t i = 0; i < cm.k_pred(); ++i)
    if (res.assignment[i] >= 0)
      res.matched += cm.counts[i][static_cast<std::size_t>(res.assignment[i])];
  res.error_rate = 1.0 - static_cast<double>(res.matched) /
                             static_cast<double>(cm.total);
  return res;
}

struct PairScores {
  double rand = 0.0;
  double adjusted_rand = 0.0;
  double fowlkes_mallows = 0.0;
};

/// Pair-counting scores over the contingency table. When the adjusted-Rand
/// denominator vanishes (degenerate partitions), ARI is defined as 0.
inline PairScores pair_scores(const std::vector<int>& pred,
                              const std::vector<int>& truth) {
  const auto c = detail::contingency(pred, truth);
  auto choose2 = [](long long x) {
    return static_cast<double>(x) * static_cast<double>(x - 1) / 2.0;
  };
  double sum_nij = 0.0, sum_a = 0.0, sum_b = 0.0;
  for (const auto& row : c.counts)
    for (long long nij : row) sum_nij += choose2(nij);
  for (long long ai : c.row_sums) sum_a += choose2(ai);
  for (long long bj : c.col_sums) sum_b += choose2(bj);
  const double pairs = choose2(c.n);

  PairScores out;
  // Rand: agreeing pairs (together in both, or separated in both).
  out.rand = (pairs + 2.0 * sum_nij - sum_a - sum_b) / pairs;
  const double expected = sum_a * sum_b / pairs;
  const double max_index = (sum_a + sum_b) / 2.0;
  out.adjusted_rand = (max_index - expected) == 0.0
                          ? 0.0
                          : (sum_nij - expected) / (max_index - expected);
  out.fowlkes_mallows = (sum_a == 0.0 || sum_b == 0.0)
                            ? 0.0
                            : sum_nij / std::sqrt(sum_a * sum_b);
  return out;
}

struct InfoScores {
  double mutual_info = 0.0;            // in nats
  double normalized_mutual_info = 0.0; // arithmetic-mean normalization
  double adjusted_mutual_info = 0.0;   // hypergeometric expected-MI correction
  double homogeneity = 0.0;
  double completeness = 0.0;
  double v_measure = 0.0;
};

inline InfoScores info_scores(const std::vector<int>& pred,
                              const std::vector<int>& truth) {
  const auto c = detail::contingency(pred, truth);
  const double n = static_cast<double>(c.n);
  const double h_pred = detail::entropy(c.row_sums, c.n);
  const double h_true = detail::entropy(c.col_sums, c.n);

  double mi = 0.0;
  for (std::size_t i = 0; i < c.counts.size(); ++i) {
    for (std::size_t j = 0; j < c.counts[i].size(); ++j) {
      const long long nij = c.counts[i][j];
      if (nij == 0) continue;
      const double pij = static_cast<double>(nij) / n;
      mi += pij * std::log(n * static_cast<double>(nij) /
                           (static_cast<double>(c.row_sums[i]) *
                            static_cast<double>(c.col_sums[j])));
    }
  }
  mi = std::max(mi, 0.0);

  InfoScores out;
  out.mutual_info = mi;
  const double mean_h = (h_pred + h_true) / 2.0;
  out.normalized_mutual_info = mean_h > 0.0 ? mi / mean_h : 0.0;
  const double emi =
      detail::expected_mutual_information(c.row_sums, c.col_sums, c.n);
  const double denom = mean_h - emi;
  out.adjusted_mutual_info = denom == 0.0 ? 0.0 : (mi - emi) / denom;
  out.homogeneity = h_true > 0.0 ? mi / h_true : 1.0;
  out.completeness = h_pred > 0.0 ? mi / h_pred : 1.0;
  const double hc = out.homogeneity + out.completeness;
  out.v_measure = hc > 0.0 ? 2.0 * out.homogeneity * out.completeness / hc : 0.0;
  return out;
}

/// Macro-averaged F1 over truth classes after Hungarian matching of
/// clusters to classes; unmatched classes contribute 0. This is the
/// F-score convention used throughout this project.
inline double f_score(const std::vector<int>& pred,
                      const std::vector<int>& truth) {
  const auto c = detail::contingency(pred, truth);
  std::vector<std::vector<double>> weight(c.row_sums.size(),
                                          std::vector<double>(c.col_sums.size()));
  for (std::size_t i = 0; i < c.counts.size(); ++i)
    for (std::size_t j = 0; j < c.counts[i].size(); ++j)
      weight[i][j] = static_cast<double>(c.counts[i][j]);
  const auto assignment = detail::hungarian_max(weight);

  std::vector<double> f1(c.col_sums.size(), 0.0);
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] < 0) continue;
    const auto j = static_cast<std::size_t>(assignment[i]);
    const double tp = static_cast<double>(c.counts[i][j]);
    if (tp == 0.0) continue;
    const double precision = tp / static_cast<double>(c.row_sums[i]);
    const double recall = tp / static_cast<double>(c.col_sums[j]);
    f1[j] = 2.0 * precision * recall / (precision + recall);
  }
  double total = 0.0;
  for (double f : f1) total += f;
  return total / static_cast<double>(f1.size());
}

/// All scores the reporting layer knows about, named after the rows of the
/// text report.
struct ScoreReport {
  double rand = 0.0;
  double adjusted_rand = 0.0;
  double fowlkes_mallows = 0.0;
  double mutual_info = 0.0;
  double normalized_mutual_info = 0.0;
  double adjusted_mutual_info = 0.0;
  double homogeneity = 0.0;
  double completeness = 0.0;
  double v_measure = 0.0;
  double f_score = 0.0;
  double error_rate = 0.0;
};

inline ScoreReport score_report(const std::vector<int>& pred,
                                const std::vector<int>& truth) {
  ScoreReport report;
  const auto pair = pair_scores(pred, truth);
  report.rand = pair.rand;
  report.adjusted_rand = pair.adjusted_rand;
  report.fowlkes_mallows = pair.fowlkes_mallows;
  const auto info = info_scores(pred, truth);
  report.mutual_info = info.mutual_info;
  report.normalized_mutual_info = info.normalized_mutual_info;
  report.adjusted_mutual_info = info.adjusted_mutual_info;
  report.homogeneity = info.homogeneity;
  report.completeness = info.completeness;
  report.v_measure = info.v_measure;
  report.f_score = gsc::f_score(pred, truth);
  report.error_rate = match_labels(confusion(pred, truth)).error_rate;
  return report;
}

inline ScoreReport score_report(const std::vector<std::string>& pred,
                                const std::vector<std::string>& truth) {
  std::vector<std::string> dummy;
  return score_report(detail::encode_labels(pred, dummy),
                      detail::encode_labels(truth, dummy));
}

} // namespace gsc
