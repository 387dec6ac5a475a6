#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "gsc/embed.hpp"
#include "gsc/synth.hpp"
#include "support.hpp"

using namespace gsc;
using gsc_test::random_similarity;
using gsc_test::random_unit_rows;
using gsc_test::similarity_of_rows;

namespace {

double max_distance_identity_gap(const SimilarityMatrix& s,
                                 const Embedding& emb) {
  // max over i != l of | ||z_i - z_l||^2 - (1 - S_il + 2 sigma) |
  double worst = 0.0;
  for (Index i = 0; i < s.size(); ++i)
    for (Index l = i + 1; l < s.size(); ++l) {
      const double d2 = (emb.coords.row(i) - emb.coords.row(l)).squaredNorm();
      const double expected = 1.0 - s.s(i, l) + 2.0 * emb.lingoes_sigma;
      worst = std::max(worst, std::abs(d2 - expected));
    }
  return worst;
}

} // namespace

TEST_CASE("laplacian basics") {
  SimilarityMatrix s{(Matrix(2, 2) << 0.0, 0.5, 0.5, 0.0).finished()};
  const Matrix l = laplacian(s);
  CHECK(l(0, 0) == Catch::Approx(0.5));
  CHECK(l(0, 1) == Catch::Approx(-0.5));
  CHECK(l(1, 0) == Catch::Approx(-0.5));
  CHECK(l(1, 1) == Catch::Approx(0.5));

  std::mt19937_64 rng(3);
  const Matrix rand_s = random_similarity(10, rng);
  const Matrix rl = laplacian(SimilarityMatrix{rand_s});
  CHECK((rl * Vector::Ones(10)).cwiseAbs().maxCoeff() < 1e-10);

  const EigenSystem es = eig_sym(rl);
  CHECK(es.values[9] > -1e-8);               // PSD
  CHECK(std::abs(es.values[9]) < 1e-8);      // smallest eigenvalue is 0
  const Vector null = es.vectors.col(9);
  // Eigenvector proportional to the all-ones vector.
  CHECK((null - Vector::Constant(10, null.mean())).cwiseAbs().maxCoeff() <
        1e-8);
}

TEST_CASE("normalized laplacian") {
  SimilarityMatrix s{(Matrix(2, 2) << 0.0, 0.5, 0.5, 0.0).finished()};
  const Matrix nl = normalized_laplacian(s);
  CHECK(nl(0, 0) == Catch::Approx(1.0));
  CHECK(nl(0, 1) == Catch::Approx(-1.0));

  SECTION("null vector D^{1/2} 1 and eigenvalue range") {
    std::mt19937_64 rng(5);
    const SimilarityMatrix rs{random_similarity(12, rng)};
    const Matrix l = normalized_laplacian(rs);
    const Vector dsqrt1 = rs.degrees().cwiseSqrt();
    CHECK((l * dsqrt1).cwiseAbs().maxCoeff() < 1e-10);
    const EigenSystem es = eig_sym(l);
    CHECK(es.values[0] <= 2.0 + 1e-8);
    CHECK(es.values[11] >= -1e-8);
  }

  SECTION("isolated document is an error") {
    Matrix s0 = Matrix::Zero(3, 3);
    s0(0, 1) = s0(1, 0) = 0.7;
    CHECK_THROWS_AS(normalized_laplacian(SimilarityMatrix{s0}),
                    IsolatedDocumentError);
  }
}

TEST_CASE("l_embedding spans the component indicators of a disconnected graph") {
  // Two components: {0,1,2} and {3,4}.
  Matrix s = Matrix::Zero(5, 5);
  const auto connect = [&](Index a, Index b, double v) {
    s(a, b) = s(b, a) = v;
  };
  connect(0, 1, 0.9);
  connect(0, 2, 0.8);
  connect(1, 2, 0.7);
  connect(3, 4, 0.6);
  const Matrix l = laplacian(SimilarityMatrix{s});
  const Embedding emb = l_embedding(l, 2);
  REQUIRE(emb.dim() == 2);
  CHECK(emb.eigenvalues_used[0] == Catch::Approx(0.0).margin(1e-10));
  CHECK(emb.eigenvalues_used[1] == Catch::Approx(0.0).margin(1e-10));

  Matrix indicators = Matrix::Zero(5, 2);
  indicators.col(0).head(3).setOnes();
  indicators.col(1).tail(2).setOnes();
  CHECK(gsc_test::projector_distance(emb.coords, indicators) < 1e-8);

  CHECK_THROWS_AS(l_embedding(l, 1), ValidationError);
  CHECK_THROWS_AS(l_embedding(l, 6), ValidationError);
}

TEST_CASE("l_embedding can drop the constant eigenvector") {
  std::mt19937_64 rng(17);
  const SimilarityMatrix s = similarity_of_rows(random_unit_rows(8, 5, rng));
  const Matrix l = laplacian(s);
  const Embedding with_trivial = l_embedding(l, 3);
  const Embedding without = l_embedding(l, 3, false);
  // Ascending eigenvalues either way; dropping shifts the window up by one.
  CHECK(with_trivial.eigenvalues_used[0] == Catch::Approx(0.0).margin(1e-8));
  CHECK(without.eigenvalues_used[0] ==
        Catch::Approx(with_trivial.eigenvalues_used[1]).margin(1e-10));
  for (Index j = 0; j + 1 < 3; ++j) {
    CHECK(with_trivial.eigenvalues_used[j] <=
          with_trivial.eigenvalues_used[j + 1] + 1e-12);
  }
}

TEST_CASE("dissimilarity matrix is 1 - S off the diagonal") {
  const Matrix zero = Matrix::Zero(3, 3);
  const Matrix a0 = dissimilarity_matrix(SimilarityMatrix{zero});
  CHECK((a0 - (Matrix::Ones(3, 3) - Matrix::Identity(3, 3)))
            .cwiseAbs()
            .maxCoeff() == 0.0);

  std::mt19937_64 rng(23);
  const Matrix s = random_similarity(6, rng);
  const Matrix a = dissimilarity_matrix(SimilarityMatrix{s});
  for (Index i = 0; i < 6; ++i) {
    CHECK(a(i, i) == 0.0);
    for (Index j = 0; j < 6; ++j)
      if (i != j) CHECK(a(i, j) == Catch::Approx(1.0 - s(i, j)).margin(1e-15));
  }

  Matrix ones_off = Matrix::Zero(2, 2);
  ones_off(0, 1) = ones_off(1, 0) = 1.0;
  const Matrix a1 = dissimilarity_matrix(SimilarityMatrix{ones_off});
  CHECK(a1(0, 1) == 0.0);
}

TEST_CASE("double-centered gram matrix") {
  SECTION("hand case n=2, S12=0.5") {
    SimilarityMatrix s{(Matrix(2, 2) << 0.0, 0.5, 0.5, 0.0).finished()};
    const Matrix k = double_centered_gram(dissimilarity_matrix(s));
    CHECK(k(0, 0) == Catch::Approx(0.125).margin(1e-14));
    CHECK(k(0, 1) == Catch::Approx(-0.125).margin(1e-14));
    CHECK(k(1, 0) == Catch::Approx(-0.125).margin(1e-14));
    CHECK(k(1, 1) == Catch::Approx(0.125).margin(1e-14));
  }

  SECTION("the ones vector is in the null space") {
    std::mt19937_64 rng(31);
    const Index n = 15;
    const Matrix a = dissimilarity_matrix(SimilarityMatrix{random_similarity(n, rng)});
    const Matrix k = double_centered_gram(a);
    const Vector ones = Vector::Ones(n);
    CHECK(std::abs(ones.dot(k * ones)) <
          1e-10 * static_cast<double>(n) * static_cast<double>(n));
    CHECK((k * ones).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((k - k.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("lingoes correction") {
  SECTION("PSD gram needs no correction") {
    std::mt19937_64 rng(37);
    const SimilarityMatrix s = similarity_of_rows(random_unit_rows(10, 6, rng));
    const Matrix a = dissimilarity_matrix(s);
    const EigenSystem es = eig_sym(double_centered_gram(a));
    const auto fixed = lingoes_correct(a, es.values[9]);
    CHECK(fixed.sigma == 0.0);
    CHECK((fixed.a - a).cwiseAbs().maxCoeff() == 0.0);
  }

  SECTION("an indefinite case gets sigma = -lambda_min and a PSD gram") {
    // Triangle violation: two docs very close to a third but unrelated to
    // each other cannot be embedded isometrically.
    Matrix s = Matrix::Zero(3, 3);
    s(0, 1) = s(1, 0) = 0.9;
    s(0, 2) = s(2, 0) = 0.9;
    const Matrix a = dissimilarity_matrix(SimilarityMatrix{s});
    const EigenSystem es = eig_sym(double_centered_gram(a));
    const double lambda_min = es.values[2];
    REQUIRE(lambda_min < -1e-6);

    const auto fixed = lingoes_correct(a, lambda_min);
    CHECK(fixed.sigma == Catch::Approx(-lambda_min));
    CHECK(fixed.a.diagonal().cwiseAbs().maxCoeff() == 0.0);
    CHECK(fixed.a(0, 1) == Catch::Approx(a(0, 1) + 2.0 * fixed.sigma));

    const EigenSystem corrected = eig_sym(double_centered_gram(fixed.a));
    CHECK(corrected.values[2] > -1e-8);
  }
}

TEST_CASE("k_embedding distance identity") {
  SECTION("hand case: n=2, r=2") {
    SimilarityMatrix s{(Matrix(2, 2) << 0.0, 0.5, 0.5, 0.0).finished()};
    const Embedding emb = k_embedding(s, 2);
    CHECK(emb.lingoes_sigma == 0.0);
    CHECK((emb.coords.row(0) - emb.coords.row(1)).squaredNorm() ==
          Catch::Approx(0.5).margin(1e-12));
  }

  SECTION("full rank, PSD case: ||z_i - z_l||^2 = 1 - S_il") {
    std::mt19937_64 rng(41);
    for (int rep = 0; rep < 5; ++rep) {
      const SimilarityMatrix s =
          similarity_of_rows(random_unit_rows(12, 7, rng));
      const Embedding emb = k_embedding(s, 12);
      CHECK(emb.lingoes_sigma == 0.0);
      CHECK(max_distance_identity_gap(s, emb) < 1e-8);
      CHECK(emb.eigenvalues_used.minCoeff() >= 0.0);
    }
  }

  SECTION("full rank, corrected case: identity holds with +2 sigma") {
    std::mt19937_64 rng(43);
    int corrected_seen = 0;
    for (int rep = 0; rep < 5; ++rep) {
      const SimilarityMatrix s{random_similarity(10, rng)};
      const Embedding emb = k_embedding(s, 10);
      if (emb.lingoes_sigma > 0.0) ++corrected_seen;
      CHECK(max_distance_identity_gap(s, emb) < 1e-8);
    }
    CHECK(corrected_seen > 0); // random similarities do need the correction
  }

  SECTION("r out of range") {
    SimilarityMatrix s{(Matrix(2, 2) << 0.0, 0.5, 0.5, 0.0).finished()};
    CHECK_THROWS_AS(k_embedding(s, 0), ValidationError);
    CHECK_THROWS_AS(k_embedding(s, 3), ValidationError);
  }
}

TEST_CASE("truncated distance reconstruction improves with r") {
  std::mt19937_64 rng(47);
  const SimilarityMatrix s = similarity_of_rows(random_unit_rows(20, 10, rng));
  double prev = std::numeric_limits<double>::infinity();
  for (Index r : {1, 2, 4, 8, 14, 20}) {
    const Embedding emb = k_embedding(s, r);
    double total = 0.0;
    Index pairs = 0;
    for (Index i = 0; i < 20; ++i)
      for (Index l = i + 1; l < 20; ++l) {
        const double d2 =
            (emb.coords.row(i) - emb.coords.row(l)).squaredNorm();
        total += std::abs(1.0 - s.s(i, l) - d2);
        ++pairs;
      }
    const double mean_err = total / static_cast<double>(pairs);
    CHECK(mean_err <= prev + 1e-12);
    prev = mean_err;
  }
}

TEST_CASE("normalized k_embedding") {
  SECTION("scaled similarity is S_il / sqrt(d_i d_l)") {
    std::mt19937_64 rng(53);
    const SimilarityMatrix s{random_similarity(8, rng)};
    const Matrix scaled = normalized_similarity(s);
    const Vector d = s.degrees();
    for (Index i = 0; i < 8; ++i)
      for (Index l = 0; l < 8; ++l) {
        if (i == l)
          CHECK(scaled(i, l) == 0.0);
        else
          CHECK(scaled(i, l) ==
                Catch::Approx(s.s(i, l) / std::sqrt(d[i] * d[l]))
                    .margin(1e-12));
      }
  }

  SECTION("equal degrees: distances are 1 - S_il / d") {
    // A similarity-regular graph: all off-diagonal entries equal.
    const Index n = 6;
    Matrix s = Matrix::Constant(n, n, 0.4);
    s.diagonal().setZero();
    const double degree = 0.4 * static_cast<double>(n - 1);
    const SimilarityMatrix sim{s};
    const Embedding emb = k_embedding_normalized(sim, n);
    CHECK(emb.lingoes_sigma == 0.0);
    for (Index i = 0; i < n; ++i)
      for (Index l = i + 1; l < n; ++l) {
        const double d2 =
            (emb.coords.row(i) - emb.coords.row(l)).squaredNorm();
        CHECK(d2 == Catch::Approx(1.0 - s(i, l) / degree).margin(1e-8));
      }
  }

  SECTION("full-r identity against the scaled similarity") {
    std::mt19937_64 rng(59);
    const SimilarityMatrix s{random_similarity(9, rng)};
    const Matrix scaled = normalized_similarity(s);
    const Embedding emb = k_embedding_normalized(s, 9);
    double worst = 0.0;
    for (Index i = 0; i < 9; ++i)
      for (Index l = i + 1; l < 9; ++l) {
        const double d2 =
            (emb.coords.row(i) - emb.coords.row(l)).squaredNorm();
        worst = std::max(worst, std::abs(d2 - (1.0 - scaled(i, l) +
                                               2.0 * emb.lingoes_sigma)));
      }
    CHECK(worst < 1e-8);
  }

  SECTION("isolated document propagates") {
    Matrix s0 = Matrix::Zero(3, 3);
    s0(0, 1) = s0(1, 0) = 0.7;
    CHECK_THROWS_AS(k_embedding_normalized(SimilarityMatrix{s0}, 3),
                    IsolatedDocumentError);
  }
}

TEST_CASE("BLK spectrum has a dominant leading block of eigenvalues") {
  BlkConfig cfg;
  cfg.n_per_class = 40;
  cfg.vocab_per_class = 30;
  cfg.shared_vocab = 60;
  cfg.doc_len = 30;
  cfg.noise = 0.2;
  cfg.seed = 2024;
  const Corpus corpus = generate_blk(cfg);
  const SimilarityMatrix s = similarity_matrix(vectorize_tfidf(corpus));
  const Matrix k = double_centered_gram(dissimilarity_matrix(s));
  const EigenSystem es = eig_sym(k);

  // Equal-size blocks center to k-1 strong directions, so the gap sits at
  // position k-1 or k. Either way a small leading set dominates the bulk.
  double best_gap = 0.0;
  for (Index j = cfg.k - 2; j <= cfg.k - 1; ++j)
    best_gap = std::max(best_gap, es.values[j] / es.values[j + 1]);
  CHECK(best_gap > 2.0);
}
