#pragma once

#include <cstdint>
#include <vector>

#include "droplin/matrix.hpp"

namespace droplin {

// Dropout rate and the regularization strength it induces, kept
// together because lambda = (1 - theta) / theta is the only pairing
// the objective ever uses.
struct DropoutConfig {
  double theta;
  double lambda;

  static DropoutConfig from_theta(double theta);
  static DropoutConfig from_lambda(double lambda);
};

// Factorization U V^T with U: d1 x r, V: d2 x r.
struct FactorPair {
  DenseMatrix u;
  DenseMatrix v;

  std::size_t rank() const { return u.cols(); }
  DenseMatrix product() const { return multiply_a_bt(u, v); }
};

struct McEstimate {
  double mean;
  double std_err;
};

struct ImportanceStats {
  std::vector<double> scores;  // |u_i| * |v_i| per column
  double variance;             // population variance of scores
};

// Reconstruction error ||m - u v^T||_F^2.
double loss(const DenseMatrix& m, const FactorPair& f);

// lambda * sum_i |u_i|^2 |v_i|^2.
double regularizer(const FactorPair& f, double lambda);

// loss + regularizer; the closed form every trainer and solver targets.
double objective_value(const DenseMatrix& m, const FactorPair& f,
                       double lambda);

// Weight-tied variant: ||m - u u^T||_F^2 + lambda * sum_i |u_i|^4.
double tied_value(const DenseMatrix& m, const DenseMatrix& u, double lambda);

// Monte-Carlo estimate of E ||y - (1/theta) u diag(b) v^T x||^2 with
// x standard Gaussian, y = m x, and b a Bernoulli(theta) mask.  Each
// sample draws from its own sub-stream of seed, so the estimate is
// independent of evaluation order or chunking.
McEstimate mc_objective(const DenseMatrix& m, const FactorPair& f,
                        const DropoutConfig& cfg, std::size_t n_samples,
                        std::uint64_t seed);

// sqrt(sum_i |u_i|^2 |v_i|^2); lambda * path_reg^2 == regularizer.
double path_reg(const FactorPair& f);

ImportanceStats importance_stats(const FactorPair& f);

// Gradient of the tied objective: 4 (u u^T - m) u + 4 lambda u diag(u^T u).
// m must be symmetric.
DenseMatrix grad_tied(const DenseMatrix& m, const DenseMatrix& u,
                      double lambda);

// Gradients of the untied objective with respect to u and v:
//   d/du = 2 (u v^T - m) v   + 2 lambda u diag(v^T v)
//   d/dv = 2 (u v^T - m)^T u + 2 lambda v diag(u^T u)
FactorPair grad_pair(const DenseMatrix& m, const FactorPair& f, double lambda);

}  // namespace droplin
