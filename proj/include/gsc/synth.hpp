#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gsc/cluster.hpp"
#include "gsc/corpus.hpp"
#include "gsc/errors.hpp"

namespace gsc {

/// Configuration of the BLK synthetic corpus: k classes with disjoint
/// class vocabularies plus a shared pool. Each token of a class-j document
/// comes from the shared pool with probability `noise`, otherwise from the
/// class vocabulary. The resulting similarity matrix has a clear block
/// structure.
struct BlkConfig {
  int k = 4;
  int n_per_class = 500;
  int vocab_per_class = 60;
  int shared_vocab = 120;
  int doc_len = 50;
  double noise = 0.2;
  std::uint64_t seed = 42;

  static constexpr const char* rng_name = "mt19937_64";

  void validate() const {
    if (k < 2) throw ValidationError("BLK: k must be >= 2");
    if (n_per_class < 2) throw ValidationError("BLK: n_per_class must be >= 2");
    if (vocab_per_class < 1)
      throw ValidationError("BLK: vocab_per_class must be >= 1");
    if (shared_vocab < 1) throw ValidationError("BLK: shared_vocab must be >= 1");
    if (doc_len < 1) throw ValidationError("BLK: doc_len must be >= 1");
    if (!(noise >= 0.0 && noise <= 1.0))
      throw ValidationError("BLK: noise must lie in [0, 1]");
  }
};

/// The planted vocabulary of class `cls` (used by tests and the
/// explanation-faithfulness checks).
inline std::vector<std::string> blk_class_vocabulary(const BlkConfig& cfg,
                                                     int cls) {
  std::vector<std::string> vocab;
  vocab.reserve(static_cast<std::size_t>(cfg.vocab_per_class));
  for (int t = 0; t < cfg.vocab_per_class; ++t)
    vocab.push_back("c" + std::to_string(cls) + "w" + std::to_string(t));
  return vocab;
}

inline std::vector<std::string> blk_shared_vocabulary(const BlkConfig& cfg) {
  std::vector<std::string> vocab;
  vocab.reserve(static_cast<std::size_t>(cfg.shared_vocab));
  for (int t = 0; t < cfg.shared_vocab; ++t)
    vocab.push_back("shw" + std::to_string(t));
  return vocab;
}

/// Generates the labeled BLK corpus; deterministic for a fixed config.
inline Corpus generate_blk(const BlkConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);

  std::vector<std::vector<std::string>> class_vocab;
  class_vocab.reserve(static_cast<std::size_t>(cfg.k));
  for (int j = 0; j < cfg.k; ++j)
    class_vocab.push_back(blk_class_vocabulary(cfg, j));
  const std::vector<std::string> shared = blk_shared_vocabulary(cfg);

  Corpus corpus;
  corpus.docs.reserve(static_cast<std::size_t>(cfg.k) *
                      static_cast<std::size_t>(cfg.n_per_class));
  int doc_no = 0;
  for (int j = 0; j < cfg.k; ++j) {
    for (int d = 0; d < cfg.n_per_class; ++d, ++doc_no) {
      std::string text;
      for (int t = 0; t < cfg.doc_len; ++t) {
        const bool from_shared = detail::uniform_unit(rng) < cfg.noise;
        const auto& pool = from_shared ? shared : class_vocab[static_cast<std::size_t>(j)];
        const auto pick = static_cast<std::size_t>(
            detail::uniform_below(rng, static_cast<std::uint64_t>(pool.size())));
        if (t > 0) text += ' ';
        text += pool[pick];
      }
      corpus.docs.push_back(Doc{"blk-" + std::to_string(doc_no),
                                std::move(text), std::to_string(j)});
    }
  }
  return corpus;
}

} // namespace gsc
