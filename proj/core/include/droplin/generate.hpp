#pragma once

#include <cstdint>

#include "droplin/matrix.hpp"

namespace droplin {

// Synthetic target with singular values exp(-i / tau), i = 1..min(d1, d2),
// rotated by random orthonormal bases drawn from the seeded stream.
// tau <= 0 selects the default min(d1, d2) / 6.
DenseMatrix generated_instance(std::size_t d1, std::size_t d2, double tau,
                               std::uint64_t seed);

// Orthonormal columns spanning a random k-dimensional subspace of R^d,
// built by two-pass Gram-Schmidt on seeded Gaussian draws.
DenseMatrix random_orthonormal(std::size_t d, std::size_t k,
                               std::uint64_t seed);

}  // namespace droplin
