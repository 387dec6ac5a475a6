#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "gsc/corpus.hpp"
#include "gsc/errors.hpp"
#include "gsc/spectra.hpp"
#include "gsc/types.hpp"

namespace gsc {

enum class EmbeddingKind { L, K, NormK, W };

inline std::string to_string(EmbeddingKind kind) {
  switch (kind) {
    case EmbeddingKind::L: return "L";
    case EmbeddingKind::K: return "K";
    case EmbeddingKind::NormK: return "NormK";
    case EmbeddingKind::W: return "W";
  }
  return "?";
}

inline EmbeddingKind parse_embedding_kind(const std::string& s) {
  if (s == "L") return EmbeddingKind::L;
  if (s == "K") return EmbeddingKind::K;
  if (s == "NormK") return EmbeddingKind::NormK;
  if (s == "W") return EmbeddingKind::W;
  throw ValidationError("unknown embedding kind \"" + s + "\"");
}

/// Document coordinates plus the provenance needed to interpret them:
/// the eigenvalues behind each column and the Lingoes shift applied, if any.
struct Embedding {
  EmbeddingKind kind = EmbeddingKind::K;
  Matrix coords;            // n x r, row i = embedding of doc i
  Vector eigenvalues_used;  // length r (empty for kind = W)
  double lingoes_sigma = 0.0;
  Index source_dim = 0;

  Index n() const { return coords.rows(); }
  Index dim() const { return coords.cols(); }
};

/// Combinatorial Laplacian L = D - S, with D the diagonal of row sums of S.
inline Matrix laplacian(const SimilarityMatrix& s) {
  Matrix l = -s.s;
  l.diagonal() += s.degrees();
  return l;
}

/// Normalized Laplacian I - D^{-1/2} S D^{-1/2}; requires positive degrees.
inline Matrix normalized_laplacian(const SimilarityMatrix& s) {
  const Vector d = s.degrees();
  for (Index i = 0; i < d.size(); ++i)
    if (!(d[i] > 0.0)) throw IsolatedDocumentError(i);
  const Vector dinv = d.cwiseSqrt().cwiseInverse();
  Matrix l = -(dinv.asDiagonal() * s.s * dinv.asDiagonal());
  l.diagonal().array() += 1.0;
  return l;
}

/// Degree-scaled similarity D^{-1/2} S D^{-1/2} with the diagonal zeroed,
/// ready for the dissimilarity construction.
inline Matrix normalized_similarity(const SimilarityMatrix& s) {
  const Vector d = s.degrees();
  for (Index i = 0; i < d.size(); ++i)
    if (!(d[i] > 0.0)) throw IsolatedDocumentError(i);
  const Vector dinv = d.cwiseSqrt().cwiseInverse();
  Matrix scaled = dinv.asDiagonal() * s.s * dinv.asDiagonal();
  scaled.diagonal().setZero();
  scaled = ((scaled + scaled.transpose()) / 2.0).eval();
  return scaled;
}

/// Rows of the k eigenvectors of L with smallest eigenvalues, columns in
/// ascending eigenvalue order. The constant eigenvector is kept unless
/// `include_trivial` is false, in which case the k smallest after it are used.
inline Embedding l_embedding(const Matrix& l, Index k,
                             bool include_trivial = true) {
  const Index n = l.rows();
  const Index skip = include_trivial ? 0 : 1;
  if (k < 2 || k + skip > n)
    throw ValidationError("l_embedding: k out of range (need 2 <= k <= n)");
  const EigenSystem es = eig_sym(l);
  Embedding emb;
  emb.kind = EmbeddingKind::L;
  emb.source_dim = n;
  emb.coords = Matrix(n, k);
  emb.eigenvalues_used = Vector(k);
  for (Index j = 0; j < k; ++j) {
    const Index idx = n - 1 - skip - j; // ascending from the bottom
    emb.coords.col(j) = es.vectors.col(idx);
    emb.eigenvalues_used[j] = es.values[idx];
  }
  return emb;
}

/// Dissimilarity matrix 1 - S off the diagonal, zero on it.
inline Matrix dissimilarity_matrix(const SimilarityMatrix& s) {
  const Index n = s.size();
  Matrix a = Matrix::Ones(n, n) - Matrix::Identity(n, n) - s.s;
  a.diagonal().setZero();
  return a;
}

/// Double-centered Gram matrix -1/2 J A J with J = I - (1/n) 11^T.
/// The all-ones vector is in its null space by construction.
inline Matrix double_centered_gram(const Matrix& a) {
  const Index n = a.rows();
  const Vector row_mean = a.rowwise().mean();
  const double grand_mean = a.mean();
  Matrix k(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      k(i, j) = -0.5 * (a(i, j) - row_mean[i] - row_mean[j] + grand_mean);
  return k;
}

struct LingoesResult {
  Matrix a;      // corrected dissimilarity matrix
  double sigma;  // 0 when no correction was needed
};

/// Lingoes correction: when the Gram matrix of `a` has smallest eigenvalue
/// lambda_min < -tol, adds 2*sigma with sigma = -lambda_min to every
/// off-diagonal entry, which makes the re-centered Gram matrix PSD.
inline LingoesResult lingoes_correct(const Matrix& a, double lambda_min,
                                     double tol = 1e-10) {
  if (lambda_min >= -tol) return LingoesResult{a, 0.0};
  const double sigma = -lambda_min;
  Matrix corrected = a.array() + 2.0 * sigma;
  corrected.diagonal().setZero();
  return LingoesResult{std::move(corrected), sigma};
}

namespace detail {

// Shared pipeline for the K and NormK embeddings: dissimilarity, double
// centering, Lingoes correction if indefinite, then sqrt(lambda)-scaled
// eigenvector rows.
inline Embedding gram_embedding(const Matrix& similarity, Index r,
                                EmbeddingKind kind, double tol = 1e-10) {
  const Index n = similarity.rows();
  if (r < 1 || r > n) throw ValidationError("k_embedding: r out of range");

  Matrix a = Matrix::Ones(n, n) - Matrix::Identity(n, n) - similarity;
  a.diagonal().setZero();

  Matrix k = double_centered_gram(a);
  EigenSystem es = eig_sym(k);
  double sigma = 0.0;
  const double lambda_min = es.values[n - 1];
  if (lambda_min < -tol) {
    LingoesResult fixed = lingoes_correct(a, lambda_min, tol);
    sigma = fixed.sigma;
    k = double_centered_gram(fixed.a);
    es = eig_sym(k);
  }

  Embedding emb;
  emb.kind = kind;
  emb.source_dim = n;
  emb.lingoes_sigma = sigma;
  emb.coords = Matrix(n, r);
  emb.eigenvalues_used = Vector(r);
  for (Index j = 0; j < r; ++j) {
    // Residual negatives after correction are numerical noise; clamp.
    const double lambda = std::max(es.values[j], 0.0);
    emb.eigenvalues_used[j] = lambda;
    emb.coords.col(j) = std::sqrt(lambda) * es.vectors.col(j);
  }
  return emb;
}

} // namespace detail

/// K-embedding: top-r eigenpairs of the double-centered Gram matrix of
/// 1 - S, rows scaled by sqrt(lambda). With r = n and no correction,
/// ||z_i - z_l||^2 = 1 - S_il for i != l; a Lingoes shift adds 2*sigma.
inline Embedding k_embedding(const SimilarityMatrix& s, Index r) {
  return detail::gram_embedding(s.s, r, EmbeddingKind::K);
}

/// Same pipeline applied to the degree-normalized similarity
/// D^{-1/2} S D^{-1/2}.
inline Embedding k_embedding_normalized(const SimilarityMatrix& s, Index r) {
  return detail::gram_embedding(normalized_similarity(s), r,
                                EmbeddingKind::NormK);
}

/// The term-vector (tf-idf) rows exposed under the common Embedding shape.
inline Embedding w_embedding(const TermMatrix& w) {
  Embedding emb;
  emb.kind = EmbeddingKind::W;
  emb.coords = w.rows;
  emb.source_dim = w.n();
  return emb;
}

} // namespace gsc
