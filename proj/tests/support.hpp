#pragma once

// Shared helpers and independent oracles for the test suites. Everything in
// here must stay independent of the implementation paths it is used to
// check.

#include <functional>
#include <random>
#include <vector>

#include "gsc/corpus.hpp"
#include "gsc/types.hpp"

namespace gsc_test {

using gsc::Index;
using gsc::Matrix;
using gsc::Vector;

/// Symmetric matrix with U[0,1] off-diagonal entries and zero diagonal.
inline Matrix random_similarity(Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix s = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) s(i, j) = s(j, i) = unif(rng);
  return s;
}

/// Random non-negative unit-L2 rows, the shape of a tf-idf matrix. The
/// similarity matrix of such rows always yields a PSD Gram embedding.
inline Matrix random_unit_rows(Index n, Index dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix w(n, dim);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < dim; ++j) w(i, j) = unif(rng);
    w.row(i) /= w.row(i).norm();
  }
  return w;
}

inline gsc::SimilarityMatrix similarity_of_rows(const Matrix& w) {
  Matrix s = w * w.transpose();
  s.diagonal().setZero();
  s = ((s + s.transpose()) / 2.0).eval();
  return gsc::SimilarityMatrix{std::move(s)};
}

/// Random symmetric matrix with entries in [-1, 1].
inline Matrix random_symmetric(Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Matrix m(n, n);
  for (Index i = 0; i < n; ++i) {
    m(i, i) = unif(rng);
    for (Index j = i + 1; j < n; ++j) m(i, j) = m(j, i) = unif(rng);
  }
  return m;
}

/// Random symmetric positive semidefinite matrix B B^T.
inline Matrix random_psd(Index n, Index rank, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix b(n, rank);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < rank; ++j) b(i, j) = normal(rng);
  Matrix m = b * b.transpose();
  return ((m + m.transpose()) / 2.0).eval();
}

/// Enumerates every partition of {0..n-1} into exactly k non-empty blocks
/// (restricted growth strings); calls fn with the label vector.
inline void enumerate_partitions(
    int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  // labels[0] is fixed to 0; recurse over the rest with the RGS constraint
  // labels[i] <= 1 + max(labels[0..i-1]).
  std::function<void(int, int)> rec = [&](int i, int max_used) {
    if (i == n) {
      if (max_used + 1 == k) fn(labels);
      return;
    }
    const int cap = std::min(max_used + 1, k - 1);
    for (int c = 0; c <= cap; ++c) {
      labels[static_cast<std::size_t>(i)] = c;
      rec(i + 1, std::max(max_used, c));
    }
  };
  rec(1, 0);
}

/// Distance between the subspaces spanned by the columns of A and B
/// (Frobenius norm of the projector difference).
inline double projector_distance(const Matrix& a, const Matrix& b) {
  const Matrix pa = a * (a.transpose() * a).inverse() * a.transpose();
  const Matrix pb = b * (b.transpose() * b).inverse() * b.transpose();
  return (pa - pb).norm();
}

/// Centroid-form k-means objective, computed directly from the definition.
inline double centroid_objective(const Matrix& x,
                                 const std::vector<int>& labels) {
  int k = 0;
  for (int lab : labels) k = std::max(k, lab + 1);
  double total = 0.0;
  for (int j = 0; j < k; ++j) {
    gsc::RowVector mu = gsc::RowVector::Zero(x.cols());
    Index count = 0;
    for (Index i = 0; i < x.rows(); ++i)
      if (labels[static_cast<std::size_t>(i)] == j) {
        mu += x.row(i);
        ++count;
      }
    if (count == 0) continue;
    mu /= static_cast<double>(count);
    for (Index i = 0; i < x.rows(); ++i)
      if (labels[static_cast<std::size_t>(i)] == j)
        total += (x.row(i) - mu).squaredNorm();
  }
  return total;
}

} // namespace gsc_test
