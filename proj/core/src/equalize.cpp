#include "droplin/equalize.hpp"

#include <cmath>

#include "droplin/eig.hpp"
#include "droplin/errors.hpp"
#include "droplin/svd.hpp"

namespace droplin {

namespace {

// Orthogonal s x s reflection whose first column is +-w.  The sign
// choice keeps the reflection well conditioned when w is close to e1;
// either sign leaves w^T B w on the leading diagonal.
DenseMatrix householder_onto_axis(const std::vector<double>& w) {
  const std::size_t s = w.size();
  std::vector<double> v = w;
  v[0] += (w[0] >= 0.0 ? 1.0 : -1.0);
  const double vsq = sqnorm(v);
  DenseMatrix h = DenseMatrix::identity(s);
  if (vsq == 0.0) return h;
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) h(i, j) -= 2.0 * v[i] * v[j] / vsq;
  return h;
}

}  // namespace

EqualizeResult eqz(const DenseMatrix& u) {
  const std::size_t r = u.cols();
  const DenseMatrix g = gram(u);
  const double shift = g.trace() / static_cast<double>(r);

  DenseMatrix block = g;
  for (std::size_t i = 0; i < r; ++i) block(i, i) -= shift;

  DenseMatrix q = DenseMatrix::identity(r);
  for (std::size_t step = 0; step + 1 < r; ++step) {
    const std::size_t s = r - step;
    const SpectralDecomp ed = sym_eig(block);

    std::vector<double> w(s, 0.0);
    const double inv = 1.0 / std::sqrt(static_cast<double>(s));
    for (std::size_t i = 0; i < s; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < s; ++j) row += ed.eigvecs(i, j);
      w[i] = row * inv;
    }

    const DenseMatrix h = householder_onto_axis(w);

    // q <- q * blockdiag(I_step, h)
    DenseMatrix tail(r, s);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < s; ++j) tail(i, j) = q(i, step + j);
    const DenseMatrix rotated = tail * h;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < s; ++j) q(i, step + j) = rotated(i, j);

    // Deflate: (h^T B h) with the zeroed leading entry dropped.
    const DenseMatrix hbh = multiply_at_b(h, block * h);
    DenseMatrix next(s - 1, s - 1);
    for (std::size_t i = 1; i < s; ++i)
      for (std::size_t j = 1; j < s; ++j) next(i - 1, j - 1) = hbh(i, j);
    block = std::move(next);
  }

  const DenseMatrix gq = multiply_at_b(q, g * q);
  double lo = gq(0, 0), hi = gq(0, 0);
  for (std::size_t i = 1; i < r; ++i) {
    lo = std::min(lo, gq(i, i));
    hi = std::max(hi, gq(i, i));
  }
  return {std::move(q), hi - lo};
}

DenseMatrix universal_equalizer(int k, std::size_t max_size) {
  if (k < 1) throw Error("universal_equalizer: k must be >= 1");
  if (k - 1 >= 64 || (std::size_t{1} << (k - 1)) > max_size)
    throw SizeOverflow("universal_equalizer: 2^(k-1) exceeds cap");
  DenseMatrix z = DenseMatrix::identity(1);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int level = 2; level <= k; ++level) {
    const std::size_t n = z.rows();
    DenseMatrix next(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const double v = inv_sqrt2 * z(i, j);
        next(i, j) = v;
        next(i, j + n) = v;
        next(i + n, j) = -v;
        next(i + n, j + n) = v;
      }
    z = std::move(next);
  }
  return z;
}

FactorPair joint_equalize(const FactorPair& f) {
  if (f.u.cols() != f.v.cols())
    throw DimensionMismatch("factor column counts differ");
  const std::size_t r = f.rank();
  const SvdDecomp d = svd_compact(f.product());

  DenseMatrix su = d.left;
  DenseMatrix sv = d.right;
  for (std::size_t j = 0; j < d.rank(); ++j) {
    const double root = std::sqrt(d.singulars[j]);
    su.scale_column(j, root);
    sv.scale_column(j, root);
  }
  // Zero columns carry the equalizer's mass for ranks below r.
  su = su.take_columns(r);
  sv = sv.take_columns(r);

  const EqualizeResult eq = eqz(su);
  return {su * eq.q, sv * eq.q};
}

}  // namespace droplin
