#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "gsc/corpus.hpp"
#include "gsc/errors.hpp"
#include "gsc/types.hpp"

namespace gsc {

struct TermScore {
  std::string term;
  double score = 0.0;
};

/// A cluster as seen from the term space: the (unnormalized) mean of its
/// member tf-idf rows, the heaviest centroid terms, and the constant
/// S_CjCj = (|C_j|-2)/|C_j| + mu_j^T mu_j that appears in the
/// center-distance identity.
struct ClusterProfile {
  int cluster = 0;
  Index size = 0;
  Vector centroid;
  std::vector<TermScore> top_terms;
  double self_constant = 0.0;
};

/// Per-other-cluster contrastive evidence: the terms with the largest
/// summands of ||w_i - mu_{j'}||^2, i.e. why the document is far from j'.
struct ContrastiveBlock {
  int cluster = 0;
  double center_distance = 0.0;
  std::vector<TermScore> terms;
};

struct Explanation {
  std::string doc_id;
  int cluster = 0;
  double memb = 0.0; // average similarity to the rest of the own cluster
  double center_distance_own = 0.0;
  std::vector<TermScore> supporting_terms;   // largest summands of w_i^T mu_j
  std::vector<ContrastiveBlock> contrastive; // one block per other cluster
};

namespace detail {

inline std::vector<std::vector<Index>> cluster_members(
    const std::vector<int>& labels) {
  int k = 0;
  for (int lab : labels) k = std::max(k, lab + 1);
  std::vector<std::vector<Index>> members(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < labels.size(); ++i)
    members[static_cast<std::size_t>(labels[i])].push_back(
        static_cast<Index>(i));
  return members;
}

// Top-m (term, score) pairs, scores descending, ties broken by term.
inline std::vector<TermScore> top_terms(const std::vector<std::string>& vocab,
                                        const Vector& scores, int m) {
  std::vector<Index> order(static_cast<std::size_t>(scores.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return vocab[static_cast<std::size_t>(a)] <
           vocab[static_cast<std::size_t>(b)];
  });
  const auto take = std::min<std::size_t>(static_cast<std::size_t>(std::max(m, 0)),
                                          order.size());
  std::vector<TermScore> out;
  out.reserve(take);
  for (std::size_t r = 0; r < take; ++r)
    out.push_back(TermScore{vocab[static_cast<std::size_t>(order[r])],
                            scores[order[r]]});
  return out;
}

} // namespace detail

/// memb(i, C_j): the document's average similarity to the other members of
/// its cluster. Undefined (error) for singleton clusters.
inline double membership_score(const SimilarityMatrix& s,
                               const std::vector<int>& labels, Index i) {
  if (static_cast<Index>(labels.size()) != s.size())
    throw ValidationError("labels length does not match similarity size");
  const int own = labels[static_cast<std::size_t>(i)];
  double acc = 0.0;
  Index n_j = 0;
  for (Index l = 0; l < s.size(); ++l) {
    if (labels[static_cast<std::size_t>(l)] != own) continue;
    ++n_j;
    if (l != i) acc += s.s(i, l);
  }
  if (n_j < 2) throw SingletonClusterError(own);
  return acc / static_cast<double>(n_j - 1);
}

/// Mean of the member rows of cluster j (not re-normalized), its top-m
/// terms, and the cluster's self-similarity constant.
inline ClusterProfile cluster_profile(const TermMatrix& w,
                                      const std::vector<int>& labels,
                                      int cluster, int m) {
  if (static_cast<Index>(labels.size()) != w.n())
    throw ValidationError("labels length does not match term matrix");
  ClusterProfile profile;
  profile.cluster = cluster;
  profile.centroid = Vector::Zero(w.term_count());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != cluster) continue;
    profile.centroid += w.rows.row(static_cast<Index>(i)).transpose();
    ++profile.size;
  }
  if (profile.size == 0)
    throw ValidationError("cluster " + std::to_string(cluster) + " is empty");
  profile.centroid /= static_cast<double>(profile.size);
  const double nj = static_cast<double>(profile.size);
  profile.self_constant =
      (nj - 2.0) / nj + profile.centroid.squaredNorm();
  profile.top_terms = detail::top_terms(w.vocab, profile.centroid, m);
  return profile;
}

/// Squared Euclidean distance ||w_i - mu_j||^2, valid for any document and
/// any profile.
inline double center_distance(const TermMatrix& w,
                              const ClusterProfile& profile, Index i) {
  return (w.rows.row(i).transpose() - profile.centroid).squaredNorm();
}

/// The similarity-only route to the same distance, valid for members of the
/// cluster: S_CjCj - (2/|C_j|) sum_{l in C_j, l != i} S_il.
inline double center_distance_identity(const SimilarityMatrix& s,
                                       const std::vector<int>& labels,
                                       const ClusterProfile& profile,
                                       Index i) {
  double acc = 0.0;
  for (Index l = 0; l < s.size(); ++l)
    if (labels[static_cast<std::size_t>(l)] == profile.cluster && l != i)
      acc += s.s(i, l);
  return profile.self_constant -
         2.0 / static_cast<double>(profile.size) * acc;
}

/// Assembles the full textual explanation of one document: membership
/// score, the terms that tie it to its own cluster (largest summands of
/// w_i^T mu_j), and per other cluster the terms that push it away
/// (largest summands of ||w_i - mu_{j'}||^2).
inline Explanation explain_document(const TermMatrix& w,
                                    const SimilarityMatrix& s,
                                    const std::vector<int>& labels, Index i,
                                    int m,
                                    const std::vector<ClusterProfile>& profiles) {
  Explanation ex;
  ex.doc_id = w.doc_ids[static_cast<std::size_t>(i)];
  ex.cluster = labels[static_cast<std::size_t>(i)];
  ex.memb = membership_score(s, labels, i);

  const auto& own = profiles[static_cast<std::size_t>(ex.cluster)];
  const Vector support =
      w.rows.row(i).transpose().cwiseProduct(own.centroid);
  ex.supporting_terms = detail::top_terms(w.vocab, support, m);
  ex.center_distance_own = center_distance(w, own, i);

  for (const auto& other : profiles) {
    if (other.cluster == ex.cluster) continue;
    ContrastiveBlock block;
    block.cluster = other.cluster;
    block.center_distance = center_distance(w, other, i);
    const Vector diff2 =
        (w.rows.row(i).transpose() - other.centroid).cwiseAbs2();
    block.terms = detail::top_terms(w.vocab, diff2, m);
    ex.contrastive.push_back(std::move(block));
  }
  return ex;
}

inline Explanation explain_document(const TermMatrix& w,
                                    const SimilarityMatrix& s,
                                    const std::vector<int>& labels, Index i,
                                    int m) {
  int k = 0;
  for (int lab : labels) k = std::max(k, lab + 1);
  std::vector<ClusterProfile> profiles;
  profiles.reserve(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j)
    profiles.push_back(cluster_profile(w, labels, j, m));
  return explain_document(w, s, labels, i, m, profiles);
}

struct ClusteringExplanation {
  std::vector<ClusterProfile> profiles;
  std::vector<Explanation> documents;
};

/// Explains every document of the clustering; deterministic.
inline ClusteringExplanation explain_clustering(const TermMatrix& w,
                                                const SimilarityMatrix& s,
                                                const std::vector<int>& labels,
                                                int m) {
  int k = 0;
  for (int lab : labels) k = std::max(k, lab + 1);
  ClusteringExplanation out;
  out.profiles.reserve(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j)
    out.profiles.push_back(cluster_profile(w, labels, j, m));
  out.documents.reserve(labels.size());
  for (Index i = 0; i < w.n(); ++i)
    out.documents.push_back(
        explain_document(w, s, labels, i, m, out.profiles));
  return out;
}

} // namespace gsc
