#include "droplin/generate.hpp"

#include <cmath>

#include "droplin/errors.hpp"
#include "droplin/rng.hpp"

namespace droplin {

DenseMatrix random_orthonormal(std::size_t d, std::size_t k,
                               std::uint64_t seed) {
  if (k > d) throw DimensionMismatch("random_orthonormal: k > d");
  SplitMix64 g(seed);
  DenseMatrix q(d, k);
  for (double& v : q.data()) v = g.next_gaussian();
  // Modified Gram-Schmidt, twice for orthogonality near round-off.
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t p = 0; p < j; ++p) {
        const double proj = q.column_dot(p, j);
        for (std::size_t i = 0; i < d; ++i) q(i, j) -= proj * q(i, p);
      }
      const double norm = std::sqrt(q.column_sqnorm(j));
      if (norm == 0.0) throw Error("random_orthonormal: degenerate draw");
      q.scale_column(j, 1.0 / norm);
    }
  }
  return q;
}

DenseMatrix generated_instance(std::size_t d1, std::size_t d2, double tau,
                               std::uint64_t seed) {
  if (d1 < 1 || d2 < 1) throw DimensionMismatch("generated_instance: dims");
  const std::size_t d = d1 < d2 ? d1 : d2;
  if (tau <= 0.0) tau = static_cast<double>(d) / 6.0;

  SplitMix64 g(seed);
  DenseMatrix left = random_orthonormal(d1, d, g.next_u64());
  const DenseMatrix right = random_orthonormal(d2, d, g.next_u64());
  for (std::size_t j = 0; j < d; ++j)
    left.scale_column(j, std::exp(-static_cast<double>(j + 1) / tau));
  return multiply_a_bt(left, right);
}

}  // namespace droplin
