#pragma once

#include <vector>

#include "droplin/matrix.hpp"

namespace droplin {

// Compact SVD: a = left * diag(singulars) * right^T with orthonormal
// columns on both sides and singulars sorted descending.  Only the
// numerical rank is kept: singular values at or below
// 1e-10 * sigma_max are dropped, so a zero matrix yields zero-width
// factors.
struct SvdDecomp {
  DenseMatrix left;
  std::vector<double> singulars;
  DenseMatrix right;

  std::size_t rank() const { return singulars.size(); }
  double nuclear_norm() const;
  DenseMatrix reconstruct() const;
};

// One-sided Jacobi on the taller orientation.  Deterministic sweep
// order and the same sign convention as sym_eig (applied to the left
// factor, with the right factor flipped in tandem).  Throws
// NoConvergence if column pairs are still coupled after 64 sweeps.
SvdDecomp svd_compact(const DenseMatrix& a);

// Singular value shrinkage: left * diag((sigma_i - alpha)+) * right^T.
// alpha must be nonnegative.
DenseMatrix svt(const DenseMatrix& a, double alpha);

}  // namespace droplin
