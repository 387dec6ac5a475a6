#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "gsc/corpus.hpp"
#include "gsc/errors.hpp"
#include "gsc/types.hpp"

namespace gsc {

enum class KMeansInit { KMeansPP, Random };

inline std::string to_string(KMeansInit init) {
  return init == KMeansInit::KMeansPP ? "kmeanspp" : "random";
}

inline KMeansInit parse_kmeans_init(const std::string& s) {
  if (s == "kmeanspp") return KMeansInit::KMeansPP;
  if (s == "random") return KMeansInit::Random;
  throw ValidationError("unknown init \"" + s + "\"");
}

struct KMeansConfig {
  int k = 2;
  KMeansInit init = KMeansInit::KMeansPP;
  std::uint64_t seed = 0;
  int max_iter = 300;
  double tol = 1e-9; // on squared centroid movement
};

struct Clustering {
  std::vector<int> labels; // length n, values in [0, k)
  int k = 0;
  double objective = 0.0; // sum of squared distances (k-means) or sum of
                          // cosines (spherical k-means)
  int iterations = 0;
  std::uint64_t seed = 0;

  std::vector<Index> cluster_sizes() const {
    std::vector<Index> sizes(static_cast<std::size_t>(k), 0);
    for (int lab : labels) sizes[static_cast<std::size_t>(lab)] += 1;
    return sizes;
  }
};

namespace detail {

// Bounded uniform draw with an explicit rejection loop so results depend
// only on the mt19937_64 stream, not on the standard library's
// distribution implementation.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % bound;
}

inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline void validate_kmeans_args(const Matrix& x, const KMeansConfig& cfg) {
  if (cfg.k < 1) throw ValidationError("k must be positive");
  if (cfg.k > x.rows())
    throw ValidationError("k = " + std::to_string(cfg.k) +
                          " exceeds the number of points " +
                          std::to_string(x.rows()));
  if (cfg.max_iter < 1) throw ValidationError("max_iter must be >= 1");
}

// Guarantees every cluster is non-empty: moves the member farthest from its
// own cluster mean into each empty cluster. Runs after the final assignment,
// so ties on duplicate points cannot leave a cluster vacant.
inline void ensure_nonempty(const Matrix& x, int k, std::vector<int>& labels) {
  const Index n = x.rows();
  std::vector<Index> counts(static_cast<std::size_t>(k), 0);
  for (int lab : labels) counts[static_cast<std::size_t>(lab)]++;
  for (int j = 0; j < k; ++j) {
    if (counts[static_cast<std::size_t>(j)] > 0) continue;
    Matrix means = Matrix::Zero(k, x.cols());
    for (Index i = 0; i < n; ++i)
      means.row(labels[static_cast<std::size_t>(i)]) += x.row(i);
    for (int c = 0; c < k; ++c)
      if (counts[static_cast<std::size_t>(c)] > 0)
        means.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
    Index worst = -1;
    double worst_d = -1.0;
    for (Index i = 0; i < n; ++i) {
      const int lab = labels[static_cast<std::size_t>(i)];
      if (counts[static_cast<std::size_t>(lab)] < 2) continue;
      const double d = (x.row(i) - means.row(lab)).squaredNorm();
      if (d > worst_d) {
        worst_d = d;
        worst = i;
      }
    }
    counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(worst)])]--;
    labels[static_cast<std::size_t>(worst)] = j;
    counts[static_cast<std::size_t>(j)] = 1;
  }
}

inline Matrix random_init(const Matrix& x, int k, std::mt19937_64& rng) {
  // Sample k distinct row indices.
  const Index n = x.rows();
  std::vector<Index> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), Index{0});
  Matrix centroids(k, x.cols());
  for (int j = 0; j < k; ++j) {
    const auto pick = static_cast<std::size_t>(
        uniform_below(rng, static_cast<std::uint64_t>(pool.size())));
    centroids.row(j) = x.row(pool[pick]);
    pool[pick] = pool.back();
    pool.pop_back();
  }
  return centroids;
}

// Assigns every row to its nearest centroid (ties to the lowest cluster
// index) and returns the summed squared distance.
inline double assign_nearest(const Matrix& x, const Matrix& centroids,
                             std::vector<int>& labels) {
  const Index n = x.rows();
  const int k = static_cast<int>(centroids.rows());
  double total = 0.0;
  for (Index i = 0; i < n; ++i) {
    int best = 0;
    double best_d = (x.row(i) - centroids.row(0)).squaredNorm();
    for (int j = 1; j < k; ++j) {
      const double d = (x.row(i) - centroids.row(j)).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    labels[static_cast<std::size_t>(i)] = best;
    total += best_d;
  }
  return total;
}

} // namespace detail

/// Standard D^2 seeding: the first centroid is uniform, each further one is
/// drawn with probability proportional to the squared distance to the
/// nearest centroid chosen so far. Deterministic for a given rng state.
inline Matrix kmeans_pp_init(const Matrix& x, int k, std::mt19937_64& rng) {
  const Index n = x.rows();
  if (k < 1 || k > n) throw ValidationError("kmeans_pp_init: k out of range");
  Matrix centroids(k, x.cols());
  centroids.row(0) =
      x.row(static_cast<Index>(detail::uniform_below(rng, static_cast<std::uint64_t>(n))));
  Vector dist2 = (x.rowwise() - centroids.row(0)).rowwise().squaredNorm();
  for (int j = 1; j < k; ++j) {
    const double total = dist2.sum();
    Index chosen;
    if (total > 0.0) {
      const double target = detail::uniform_unit(rng) * total;
      double acc = 0.0;
      chosen = n - 1;
      for (Index i = 0; i < n; ++i) {
        acc += dist2[i];
        if (acc >= target) {
          chosen = i;
          break;
        }
      }
    } else {
      // All points coincide with an existing centroid.
      chosen = static_cast<Index>(
          detail::uniform_below(rng, static_cast<std::uint64_t>(n)));
    }
    centroids.row(j) = x.row(chosen);
    dist2 = dist2.cwiseMin(
        (x.rowwise() - centroids.row(j)).rowwise().squaredNorm());
  }
  return centroids;
}

/// Lloyd's algorithm. Runs until the squared centroid movement drops below
/// cfg.tol or max_iter is reached. Empty clusters are repaired by promoting
/// the point farthest from its centroid to a singleton cluster. The
/// objective Q = sum_i ||x_i - mu_{label(i)}||^2 never increases.
inline Clustering kmeans(const Matrix& x, const KMeansConfig& cfg) {
  detail::validate_kmeans_args(x, cfg);
  const Index n = x.rows();
  const int k = cfg.k;
  std::mt19937_64 rng(cfg.seed);

  Matrix centroids = cfg.init == KMeansInit::KMeansPP
                         ? kmeans_pp_init(x, k, rng)
                         : detail::random_init(x, k, rng);

  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  double objective = detail::assign_nearest(x, centroids, labels);
  double prev_objective = std::numeric_limits<double>::infinity();
  int iterations = 0;

  for (; iterations < cfg.max_iter; ++iterations) {
    // Update step.
    Matrix sums = Matrix::Zero(k, x.cols());
    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    for (Index i = 0; i < n; ++i) {
      sums.row(labels[static_cast<std::size_t>(i)]) += x.row(i);
      counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])]++;
    }
    for (int j = 0; j < k; ++j) {
      if (counts[static_cast<std::size_t>(j)] == 0) {
        // Repair: promote the point farthest from its current centroid.
        Index worst = 0;
        double worst_d = -1.0;
        for (Index i = 0; i < n; ++i) {
          const int lab = labels[static_cast<std::size_t>(i)];
          if (counts[static_cast<std::size_t>(lab)] < 2) continue;
          const double d = (x.row(i) - centroids.row(lab)).squaredNorm();
          if (d > worst_d) {
            worst_d = d;
            worst = i;
          }
        }
        const int old = labels[static_cast<std::size_t>(worst)];
        sums.row(old) -= x.row(worst);
        counts[static_cast<std::size_t>(old)]--;
        labels[static_cast<std::size_t>(worst)] = j;
        sums.row(j) = x.row(worst);
        counts[static_cast<std::size_t>(j)] = 1;
      }
    }
    double shift = 0.0;
    for (int j = 0; j < k; ++j) {
      const RowVector updated =
          sums.row(j) / static_cast<double>(counts[static_cast<std::size_t>(j)]);
      shift += (centroids.row(j) - updated).squaredNorm();
      centroids.row(j) = updated;
    }

    prev_objective = objective;
    objective = detail::assign_nearest(x, centroids, labels);
    if (objective > prev_objective + 1e-9 * std::max(1.0, prev_objective))
      throw NumericalError("k-means objective increased between iterations");
    if (shift < cfg.tol) {
      ++iterations;
      break;
    }
  }

  detail::ensure_nonempty(x, k, labels);
  // Exact objective of the final labeling at its own centroids.
  {
    Matrix sums = Matrix::Zero(k, x.cols());
    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    for (Index i = 0; i < n; ++i) {
      sums.row(labels[static_cast<std::size_t>(i)]) += x.row(i);
      counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])]++;
    }
    objective = 0.0;
    for (Index i = 0; i < n; ++i) {
      const int lab = labels[static_cast<std::size_t>(i)];
      const RowVector mu =
          sums.row(lab) / static_cast<double>(counts[static_cast<std::size_t>(lab)]);
      objective += (x.row(i) - mu).squaredNorm();
    }
  }

  return Clustering{std::move(labels), k, objective, iterations, cfg.seed};
}

/// Spherical k-means: rows are unit-normalized, assignment maximizes the
/// cosine to the centroid direction, and centroids are normalized means of
/// their members. The objective sum_i cos(x_i, c_{label(i)}) never
/// decreases. Zero rows are rejected.
inline Clustering spherical_kmeans(const Matrix& x, const KMeansConfig& cfg) {
  detail::validate_kmeans_args(x, cfg);
  const Index n = x.rows();
  const int k = cfg.k;

  Matrix unit = x;
  for (Index i = 0; i < n; ++i) {
    const double norm = unit.row(i).norm();
    if (!(norm > 0.0)) throw ZeroVectorError(i);
    unit.row(i) /= norm;
  }

  std::mt19937_64 rng(cfg.seed);
  Matrix centroids = cfg.init == KMeansInit::KMeansPP
                         ? kmeans_pp_init(unit, k, rng)
                         : detail::random_init(unit, k, rng);
  for (int j = 0; j < k; ++j) {
    const double norm = centroids.row(j).norm();
    if (norm > 0.0) centroids.row(j) /= norm;
  }

  auto assign = [&](std::vector<int>& labels) {
    double total = 0.0;
    for (Index i = 0; i < n; ++i) {
      int best = 0;
      double best_cos = unit.row(i).dot(centroids.row(0));
      for (int j = 1; j < k; ++j) {
        const double c = unit.row(i).dot(centroids.row(j));
        if (c > best_cos) {
          best_cos = c;
          best = j;
        }
      }
      labels[static_cast<std::size_t>(i)] = best;
      total += best_cos;
    }
    return total;
  };

  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  double objective = assign(labels);
  int iterations = 0;

  for (; iterations < cfg.max_iter; ++iterations) {
    Matrix sums = Matrix::Zero(k, unit.cols());
    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    for (Index i = 0; i < n; ++i) {
      sums.row(labels[static_cast<std::size_t>(i)]) += unit.row(i);
      counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])]++;
    }
    for (int j = 0; j < k; ++j) {
      if (counts[static_cast<std::size_t>(j)] == 0) {
        // Repair with the member least aligned to its centroid.
        Index worst = 0;
        double worst_cos = 2.0;
        for (Index i = 0; i < n; ++i) {
          const int lab = labels[static_cast<std::size_t>(i)];
          if (counts[static_cast<std::size_t>(lab)] < 2) continue;
          const double c = unit.row(i).dot(centroids.row(lab));
          if (c < worst_cos) {
            worst_cos = c;
            worst = i;
          }
        }
        const int old = labels[static_cast<std::size_t>(worst)];
        sums.row(old) -= unit.row(worst);
        counts[static_cast<std::size_t>(old)]--;
        labels[static_cast<std::size_t>(worst)] = j;
        sums.row(j) = unit.row(worst);
        counts[static_cast<std::size_t>(j)] = 1;
      }
    }
    double shift = 0.0;
    for (int j = 0; j < k; ++j) {
      RowVector dir = sums.row(j);
      const double norm = dir.norm();
      if (norm > 0.0) dir /= norm; // degenerate mean keeps the old direction
      else dir = centroids.row(j);
      shift += (centroids.row(j) - dir).squaredNorm();
      centroids.row(j) = dir;
    }

    const double prev = objective;
    objective = assign(labels);
    if (objective < prev - 1e-9 * std::max(1.0, std::abs(prev)))
      throw NumericalError(
          "spherical k-means objective decreased between iterations");
    if (shift < cfg.tol) {
      ++iterations;
      break;
    }
  }

  detail::ensure_nonempty(unit, k, labels);
  // Exact objective of the final labeling at its own centroid directions.
  {
    Matrix sums = Matrix::Zero(k, unit.cols());
    for (Index i = 0; i < n; ++i)
      sums.row(labels[static_cast<std::size_t>(i)]) += unit.row(i);
    objective = 0.0;
    for (Index i = 0; i < n; ++i) {
      const RowVector dir = sums.row(labels[static_cast<std::size_t>(i)]);
      const double norm = dir.norm();
      if (norm > 0.0) objective += unit.row(i).dot(dir) / norm;
    }
  }

  return Clustering{std::move(labels), k, objective, iterations, cfg.seed};
}

/// Pairwise form of the k-means objective:
/// sum_j (1/(2 n_j)) sum_{i,l in C_j} ||x_i - x_l||^2.
inline double kmeans_objective_pairwise(const Matrix& x,
                                        const std::vector<int>& labels) {
  if (static_cast<Index>(labels.size()) != x.rows())
    throw ValidationError("labels length does not match row count");
  const int k = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<std::vector<Index>> members(static_cast<std::size_t>(k));
  for (Index i = 0; i < x.rows(); ++i)
    members[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])]
        .push_back(i);
  double total = 0.0;
  for (const auto& cluster : members) {
    if (cluster.empty()) throw ValidationError("empty cluster in labeling");
    double acc = 0.0;
    for (Index a : cluster)
      for (Index b : cluster) acc += (x.row(a) - x.row(b)).squaredNorm();
    total += acc / (2.0 * static_cast<double>(cluster.size()));
  }
  return total;
}

/// The clustering-dependent part of the similarity objective:
/// sum_j (1/(2 n_j)) sum_{i != l in C_j} S_il. For a full-rank uncorrected
/// K-embedding, Q(labels) + this = (n - k) / 2.
inline double similarity_objective(const SimilarityMatrix& s,
                                   const std::vector<int>& labels) {
  if (static_cast<Index>(labels.size()) != s.size())
    throw ValidationError("labels length does not match similarity size");
  const int k = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<std::vector<Index>> members(static_cast<std::size_t>(k));
  for (Index i = 0; i < s.size(); ++i)
    members[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])]
        .push_back(i);
  double total = 0.0;
  for (const auto& cluster : members) {
    if (cluster.empty()) throw ValidationError("empty cluster in labeling");
    double acc = 0.0;
    for (Index a : cluster)
      for (Index b : cluster)
        if (a != b) acc += s.s(a, b);
    total += acc / (2.0 * static_cast<double>(cluster.size()));
  }
  return total;
}

} // namespace gsc
