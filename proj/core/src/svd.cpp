#include "droplin/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "droplin/errors.hpp"

namespace droplin {

namespace {

constexpr int kMaxSweeps = 64;
constexpr double kCoupleTol = 1e-14;   // relative column coupling
constexpr double kRankFactor = 1e-10;  // numerical rank cutoff

// Orthogonalizes the columns of w in place, accumulating the applied
// rotations into v.  On exit column j of w is sigma_j * u_j.
void one_sided_jacobi(DenseMatrix& w, DenseMatrix& v) {
  const std::size_t n = w.cols();
  bool converged = n < 2;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double a = w.column_sqnorm(p);
        const double b = w.column_sqnorm(q);
        const double c = w.column_dot(p, q);
        if (a == 0.0 || b == 0.0) continue;
        if (std::fabs(c) <= kCoupleTol * std::sqrt(a * b)) continue;
        converged = false;
        const double zeta = (b - a) / (2.0 * c);
        const double t =
            (zeta >= 0.0 ? 1.0 : -1.0) /
            (std::fabs(zeta) + std::sqrt(zeta * zeta + 1.0));
        const double cs = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * cs;
        w.rotate_columns(p, q, cs, sn);
        v.rotate_columns(p, q, cs, sn);
      }
    }
  }
  if (!converged) throw NoConvergence("svd_compact: sweep cap reached");
}

}  // namespace

double SvdDecomp::nuclear_norm() const {
  double s = 0.0;
  for (double v : singulars) s += v;
  return s;
}

DenseMatrix SvdDecomp::reconstruct() const {
  DenseMatrix scaled = left;
  for (std::size_t j = 0; j < singulars.size(); ++j)
    scaled.scale_column(j, singulars[j]);
  return multiply_a_bt(scaled, right);
}

SvdDecomp svd_compact(const DenseMatrix& a) {
  const bool flipped = a.rows() < a.cols();
  DenseMatrix w = flipped ? a.transposed() : a;
  DenseMatrix v = DenseMatrix::identity(w.cols());
  one_sided_jacobi(w, v);

  const std::size_t n = w.cols();
  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = std::sqrt(w.column_sqnorm(j));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return sigma[i] > sigma[j]; });

  const double smax = n ? sigma[order[0]] : 0.0;
  const double cutoff = kRankFactor * smax;
  std::size_t k = 0;
  while (k < n && sigma[order[k]] > cutoff && sigma[order[k]] > 0.0) ++k;

  SvdDecomp out;
  out.singulars.resize(k);
  DenseMatrix uk(w.rows(), k);
  DenseMatrix vk(v.rows(), k);
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t src = order[j];
    const double s = sigma[src];
    out.singulars[j] = s;
    for (std::size_t i = 0; i < w.rows(); ++i) uk(i, j) = w(i, src) / s;
    for (std::size_t i = 0; i < v.rows(); ++i) vk(i, j) = v(i, src);
  }
  out.left = flipped ? std::move(vk) : std::move(uk);
  out.right = flipped ? std::move(uk) : std::move(vk);

  // Joint sign fix keyed off the left factor; flipping both columns
  // leaves the product unchanged.
  for (std::size_t j = 0; j < k; ++j) {
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < out.left.rows(); ++i) {
      const double m = std::fabs(out.left(i, j));
      if (m > best) {
        best = m;
        arg = i;
      }
    }
    if (out.left(arg, j) < 0.0) {
      for (std::size_t i = 0; i < out.left.rows(); ++i)
        out.left(i, j) = -out.left(i, j);
      for (std::size_t i = 0; i < out.right.rows(); ++i)
        out.right(i, j) = -out.right(i, j);
    }
  }
  return out;
}

DenseMatrix svt(const DenseMatrix& a, double alpha) {
  if (alpha < 0.0) throw Error("svt: negative threshold");
  SvdDecomp d = svd_compact(a);
  DenseMatrix out(a.rows(), a.cols());
  for (std::size_t j = 0; j < d.rank(); ++j) {
    const double s = d.singulars[j] - alpha;
    if (s <= 0.0) continue;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      const double uis = d.left(i, j) * s;
      if (uis == 0.0) continue;
      for (std::size_t c = 0; c < a.cols(); ++c)
        out(i, c) += uis * d.right(c, j);
    }
  }
  return out;
}

}  // namespace droplin
