#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gsc/errors.hpp"
#include "gsc/types.hpp"

namespace gsc {

struct Doc {
  std::string id;
  std::string text;
  std::optional<std::string> label;
};

struct Corpus {
  std::vector<Doc> docs;

  Index size() const { return static_cast<Index>(docs.size()); }

  /// Checks the corpus invariants: unique ids, at least two documents.
  void validate() const {
    if (docs.size() < 2) throw TooFewDocumentsError(docs.size());
    std::unordered_set<std::string> seen;
    for (const auto& d : docs)
      if (!seen.insert(d.id).second) throw DuplicateIdError(d.id);
  }

  std::vector<std::string> ids() const {
    std::vector<std::string> out;
    out.reserve(docs.size());
    for (const auto& d : docs) out.push_back(d.id);
    return out;
  }

  /// Ground-truth labels, or an empty vector when any document lacks one.
  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    out.reserve(docs.size());
    for (const auto& d : docs) {
      if (!d.label) return {};
      out.push_back(*d.label);
    }
    return out;
  }
};

struct TokenizerConfig {
  bool lowercase = true;
  int min_token_len = 1;
  std::unordered_set<std::string> stopwords;
};

/// Splits text into maximal alphanumeric runs, then applies the filters.
inline std::vector<std::string> tokenize(std::string_view text,
                                         const TokenizerConfig& cfg = {}) {
  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    if (static_cast<int>(cur.size()) >= cfg.min_token_len &&
        !cfg.stopwords.count(cur))
      tokens.push_back(cur);
    cur.clear();
  };
  for (char c : text) {
    const auto uc = static_cast<unsigned char>(c);
    if (std::isalnum(uc))
      cur.push_back(cfg.lowercase ? static_cast<char>(std::tolower(uc)) : c);
    else
      flush();
  }
  flush();
  return tokens;
}

/// Unit-L2 tf-idf rows over a lexicographically ordered vocabulary.
/// Rows flagged empty carry all-zero weights.
struct TermMatrix {
  std::vector<std::string> vocab;     // sorted, size t
  std::vector<std::string> doc_ids;   // row i belongs to doc_ids[i]
  Matrix rows;                        // n x t, non-negative
  std::vector<bool> empty_rows;       // true where the document had no tokens

  Index n() const { return rows.rows(); }
  Index term_count() const { return rows.cols(); }

  Index term_index(std::string_view term) const {
    auto it = std::lower_bound(vocab.begin(), vocab.end(), term);
    if (it == vocab.end() || *it != term) return -1;
    return static_cast<Index>(it - vocab.begin());
  }
};

struct TfidfConfig {
  TokenizerConfig tokenizer;
  // When false, a document whose token list is emptied by the filters is an
  // error; when true it is kept as an all-zero row flagged empty.
  bool allow_empty = false;
};

/// Builds the term-vector embedding: w[i][t] = tf(i,t) * idf(t) with
/// idf(t) = ln((1+n)/(1+df(t))) + 1, rows L2-normalized.
inline TermMatrix vectorize_tfidf(const Corpus& corpus,
                                  const TfidfConfig& cfg = {}) {
  corpus.validate();
  const Index n = corpus.size();

  std::vector<std::vector<std::string>> doc_tokens(n);
  std::map<std::string, Index> df; // ordered -> sorted vocabulary
  for (Index i = 0; i < n; ++i) {
    doc_tokens[i] = tokenize(corpus.docs[i].text, cfg.tokenizer);
    if (doc_tokens[i].empty() && !cfg.allow_empty)
      throw EmptyDocumentError(corpus.docs[i].id);
    std::unordered_set<std::string_view> distinct(doc_tokens[i].begin(),
                                                  doc_tokens[i].end());
    for (const auto& t : distinct) df[std::string(t)] += 1;
  }

  TermMatrix tm;
  tm.doc_ids = corpus.ids();
  tm.vocab.reserve(df.size());
  std::unordered_map<std::string_view, Index> term_of;
  Vector idf(static_cast<Index>(df.size()));
  for (const auto& [term, count] : df) {
    const Index t = static_cast<Index>(tm.vocab.size());
    tm.vocab.push_back(term);
    idf[t] = std::log((1.0 + static_cast<double>(n)) /
                      (1.0 + static_cast<double>(count))) +
             1.0;
  }
  for (Index t = 0; t < static_cast<Index>(tm.vocab.size()); ++t)
    term_of.emplace(tm.vocab[t], t);

  tm.rows = Matrix::Zero(n, static_cast<Index>(tm.vocab.size()));
  tm.empty_rows.assign(static_cast<std::size_t>(n), false);
  for (Index i = 0; i < n; ++i) {
    for (const auto& tok : doc_tokens[i]) tm.rows(i, term_of.at(tok)) += 1.0;
    tm.rows.row(i) = tm.rows.row(i).cwiseProduct(idf.transpose());
    const double norm = tm.rows.row(i).norm();
    if (norm > 0.0)
      tm.rows.row(i) /= norm;
    else
      tm.empty_rows[static_cast<std::size_t>(i)] = true;
  }
  return tm;
}

/// Symmetric cosine-similarity matrix with exactly zero diagonal.
struct SimilarityMatrix {
  Matrix s;

  Index size() const { return s.rows(); }

  /// Degree d_j = sum_k S_jk of the induced similarity graph.
  Vector degrees() const { return s.rowwise().sum(); }
};

inline SimilarityMatrix similarity_matrix(const TermMatrix& w) {
  Matrix s = w.rows * w.rows.transpose();
  s.diagonal().setZero();
  s = ((s + s.transpose()) / 2.0).eval();
  return SimilarityMatrix{std::move(s)};
}

} // namespace gsc
