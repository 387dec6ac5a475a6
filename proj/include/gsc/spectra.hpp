#pragma once

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "gsc/errors.hpp"
#include "gsc/types.hpp"

namespace gsc {

/// Full spectrum of a symmetric matrix, eigenvalues sorted descending.
/// Column j of `vectors` pairs with `values[j]`.
struct EigenSystem {
  Vector values;
  Matrix vectors;

  Index size() const { return values.size(); }
};

enum class SpectrumEnd { Top, Bottom };

/// Dense symmetric eigendecomposition (Householder tridiagonalization with
/// implicit-shift QL via Eigen's self-adjoint solver).
///
/// The input must be symmetric within `tol` (relative to its largest entry);
/// it is symmetrized exactly before solving. Each eigenvector is flipped so
/// that its largest-magnitude entry is positive, which makes repeated runs
/// comparable.
inline EigenSystem eig_sym(const Matrix& m, double tol = 1e-10) {
  if (m.rows() != m.cols())
    throw ValidationError("eig_sym requires a square matrix");
  if (!m.allFinite())
    throw ValidationError("eig_sym requires finite entries");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > tol * scale)
    throw ValidationError("matrix is not symmetric within tolerance");

  const Matrix sym = (m + m.transpose()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success)
    throw NumericalError("symmetric eigendecomposition did not converge");

  const Index n = sym.rows();
  EigenSystem es;
  es.values = Vector(n);
  es.vectors = Matrix(n, n);
  // Eigen returns ascending order; flip to descending.
  for (Index j = 0; j < n; ++j) {
    es.values[j] = solver.eigenvalues()[n - 1 - j];
    es.vectors.col(j) = solver.eigenvectors().col(n - 1 - j);
  }
  for (Index j = 0; j < n; ++j) {
    Index arg = 0;
    es.vectors.col(j).cwiseAbs().maxCoeff(&arg);
    if (es.vectors(arg, j) < 0.0) es.vectors.col(j) = -es.vectors.col(j);
  }
  return es;
}

/// Sum of r eigenpair outer products lambda_j v_j v_j^T, selecting the
/// largest eigenvalues ("top") or the smallest ("bottom").
inline Matrix truncated_reconstruct(const EigenSystem& es, Index r,
                                    SpectrumEnd from) {
  const Index n = es.size();
  if (r < 1 || r > n)
    throw ValidationError("truncated_reconstruct: r out of range");
  Matrix out = Matrix::Zero(n, n);
  for (Index j = 0; j < r; ++j) {
    const Index idx = from == SpectrumEnd::Top ? j : n - 1 - j;
    out.noalias() +=
        es.values[idx] * es.vectors.col(idx) * es.vectors.col(idx).transpose();
  }
  return out;
}

/// Mean absolute entrywise error of the truncated reconstruction against M.
inline double reconstruction_error(const Matrix& m, const EigenSystem& es,
                                   Index r, SpectrumEnd from) {
  const Matrix rec = truncated_reconstruct(es, r, from);
  return (m - rec).cwiseAbs().mean();
}

} // namespace gsc
