#include "droplin/eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "droplin/errors.hpp"

namespace droplin {

namespace {

constexpr int kMaxSweeps = 64;
constexpr double kOffdiagFactor = 1e-12;
constexpr double kSymmetryTol = 1e-10;

double offdiag_norm(const DenseMatrix& a) {
  double s = 0.0;
  const std::size_t n = a.rows();
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = p + 1; q < n; ++q) s += 2.0 * a(p, q) * a(p, q);
  return std::sqrt(s);
}

// Largest-magnitude entry positive; ties resolved by the lowest index
// so repeated runs pick the same representative.
void fix_column_signs(DenseMatrix& v) {
  for (std::size_t j = 0; j < v.cols(); ++j) {
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < v.rows(); ++i) {
      const double m = std::fabs(v(i, j));
      if (m > best) {
        best = m;
        arg = i;
      }
    }
    if (v(arg, j) < 0.0)
      for (std::size_t i = 0; i < v.rows(); ++i) v(i, j) = -v(i, j);
  }
}

}  // namespace

SpectralDecomp sym_eig(const DenseMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("sym_eig needs square");
  const std::size_t n = a.rows();
  const double scale = a.frobenius_norm();
  if (a.asymmetry() > kSymmetryTol * (1.0 + scale))
    throw NonSymmetric("sym_eig: asymmetry above tolerance");

  DenseMatrix w = a;
  // Enforce exact symmetry so rotations keep it.
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = p + 1; q < n; ++q) {
      const double m = 0.5 * (w(p, q) + w(q, p));
      w(p, q) = m;
      w(q, p) = m;
    }
  DenseMatrix v = DenseMatrix::identity(n);

  const double threshold = kOffdiagFactor * scale;
  bool converged = offdiag_norm(w) <= threshold;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = w(p, q);
        if (apq == 0.0) continue;
        const double zeta = (w(q, q) - w(p, p)) / (2.0 * apq);
        const double t =
            (zeta >= 0.0 ? 1.0 : -1.0) /
            (std::fabs(zeta) + std::sqrt(zeta * zeta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        // Rows p,q then columns p,q of W; the pivot lands on zero.
        for (std::size_t k = 0; k < n; ++k) {
          const double wpk = w(p, k);
          const double wqk = w(q, k);
          w(p, k) = c * wpk - s * wqk;
          w(q, k) = s * wpk + c * wqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double wkp = w(k, p);
          const double wkq = w(k, q);
          w(k, p) = c * wkp - s * wkq;
          w(k, q) = s * wkp + c * wkq;
        }
        w(p, q) = 0.0;
        w(q, p) = 0.0;
        v.rotate_columns(p, q, c, s);
      }
    }
    converged = offdiag_norm(w) <= threshold;
  }
  if (!converged) throw NoConvergence("sym_eig: sweep cap reached");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return w(i, i) > w(j, j);
  });

  SpectralDecomp out;
  out.eigvals.resize(n);
  out.eigvecs = DenseMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.eigvals[j] = w(order[j], order[j]);
    for (std::size_t i = 0; i < n; ++i) out.eigvecs(i, j) = v(i, order[j]);
  }
  fix_column_signs(out.eigvecs);
  return out;
}

}  // namespace droplin
