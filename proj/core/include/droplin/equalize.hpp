#pragma once

#include "droplin/matrix.hpp"
#include "droplin/objective.hpp"

namespace droplin {

struct EqualizeResult {
  DenseMatrix q;    // orthogonal, r x r
  double residual;  // max - min of diag((uq)^T (uq)) after rotation
};

// Finds an orthogonal q such that u q has equal column norms, one
// deflation step per column: shift the column Gram to traceless form,
// take w as the normalized sum of the current block's eigenvectors
// (w^T G w = 0 for traceless G), rotate w onto the leading axis by a
// Householder reflection, and recurse on the trailing block.  u q
// always satisfies (u q)(u q)^T = u u^T.
EqualizeResult eqz(const DenseMatrix& u);

// The closed-form equalizer for r = 2^(k-1): an orthogonal matrix z
// with all entries of magnitude 2^((1-k)/2), so z^T d z has constant
// diagonal tr(d) / r for every diagonal d.  Throws SizeOverflow when
// the requested size exceeds max_size.
DenseMatrix universal_equalizer(int k, std::size_t max_size = 512);

// Rebalances a factor pair without changing its product: split the
// product's compact SVD evenly between the sides, zero-pad to r
// columns, and apply one eqz rotation to both.  Output columns all
// carry norm^2 = nuclear(u v^T) / r on each side.
FactorPair joint_equalize(const FactorPair& f);

}  // namespace droplin
