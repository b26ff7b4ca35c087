#pragma once

#include <cstddef>
#include <vector>

#include "droplin/matrix.hpp"
#include "droplin/objective.hpp"

namespace droplin {

// How far shrinkage reaches into a spectrum: the top rho values
// survive thresholding at alpha, where kappa is their running mean.
struct ShrinkLevel {
  std::size_t rho;
  double kappa;
  double alpha;
};

struct GlobalOptimum {
  FactorPair factors;    // equalized; tied solutions set u == v
  ShrinkLevel level;
  DenseMatrix product;   // factors.product(), cached
  double value;          // objective at the factors
};

// rho = max { j in [r] : spectrum_j > lambda * j * kappa_j / (r + lambda j) },
// with kappa_j the mean of the top j values and
// alpha = lambda * rho * kappa_rho / (r + lambda rho).  The spectrum
// must be nonnegative and sorted descending; entries past its length
// count as zero.  rho = 0 (alpha = 0) for an all-zero spectrum.
ShrinkLevel shrink_level(const std::vector<double>& spectrum, std::size_t r,
                         double lambda);

// Value of the shrinkage objective at a fixed level j:
//   lambda * h_j^2 / (r + lambda j) + t_j
// with h_j the sum of the top j spectrum values and t_j the sum of
// squares of the rest.  Non-increasing in j; optimal_value evaluates
// it at shrink_level's rho.
double shrink_value_at(const std::vector<double>& spectrum, std::size_t j,
                       std::size_t r, double lambda);

// Minimum of the regularized objective given the spectrum of the
// target (eigenvalues for the tied problem, singular values untied).
double optimal_value(const std::vector<double>& spectrum, std::size_t r,
                     double lambda);

// Global minimizer of ||m - u u^T||_F^2 + lambda sum_i |u_i|^4 over
// u with r columns; m must be symmetric PSD (eigenvalues down to
// -1e-9 * max|eig| are clipped to zero, lower ones throw NotPsd).
// The returned u is equalized and satisfies u u^T = svt(m, alpha).
GlobalOptimum solve_tied(const DenseMatrix& m, std::size_t r, double lambda);

// Global minimizer of the untied objective for arbitrary m: shrink the
// spectrum, split the shrunk matrix's SVD evenly, then jointly
// equalize.  product == svt(m, alpha) and value == optimal_value of
// m's singular values.
GlobalOptimum solve_general(const DenseMatrix& m, std::size_t r,
                            double lambda);

// Largest regularization strength below which every local minimum of
// the tied objective is global: r * s_r / (sum_{i<=r} s_i - r * s_r)
// for spectrum s.  +infinity when the top-r spectrum is flat
// (denominator <= 0); 0 when s_r = 0.
double strict_saddle_bound(const std::vector<double>& spectrum, std::size_t r);

}  // namespace droplin
