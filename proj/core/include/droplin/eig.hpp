#pragma once

#include <vector>

#include "droplin/matrix.hpp"

namespace droplin {

// Eigendecomposition of a symmetric matrix: a = eigvecs * diag(eigvals)
// * eigvecs^T, eigvals sorted descending, eigvecs orthonormal columns.
struct SpectralDecomp {
  DenseMatrix eigvecs;
  std::vector<double> eigvals;
};

// Cyclic Jacobi.  Deterministic: fixed sweep order, eigenvalues sorted
// descending with stable ties, and each eigenvector scaled so its
// largest-magnitude entry is positive (ties broken by lowest index).
// Throws NonSymmetric when ||a - a^T||_F > 1e-10 * (1 + ||a||_F),
// NoConvergence if the off-diagonal norm is still above
// 1e-12 * ||a||_F after 64 sweeps.
SpectralDecomp sym_eig(const DenseMatrix& a);

}  // namespace droplin
