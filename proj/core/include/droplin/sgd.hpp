#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "droplin/matrix.hpp"
#include "droplin/objective.hpp"

namespace droplin {

struct SgdConfig {
  double eta = 1e-2;
  long steps = 0;
  std::uint64_t seed = 0;
  double init_scale = 0.5;  // entries start uniform on [-init_scale, init_scale]
  double theta = 0.5;
  // eta_t = eta / (1 + t / decay_t0); 0 keeps the step size constant.
  double decay_t0 = 0.0;
  // 0 picks max(1, steps / 2000).
  long record_stride = 0;
};

// Objective and importance-score variance at recorded iterates.
// Entry k belongs to iterate steps[k]; iterate 0 and the final iterate
// are always present.
struct TrainTrace {
  std::vector<long> steps;
  std::vector<double> objective;
  std::vector<double> importance_variance;
  long record_stride = 1;
};

// Header "step,objective,importance_variance", one row per record,
// full precision.
void write_trace_csv(std::ostream& out, const TrainTrace& trace);

struct Sample {
  std::vector<double> x;
  std::vector<double> y;  // m * x
};

// Training pair for step t: x standard Gaussian from the sub-stream
// (seed, t), y = m x.  Pure function of its arguments, so step t's
// data never depends on how earlier steps were scheduled.
Sample data_oracle(const DenseMatrix& m, std::uint64_t seed, long t);

struct SgdResult {
  FactorPair factors;
  TrainTrace trace;
};

struct TiedSgdResult {
  DenseMatrix u;
  TrainTrace trace;
};

// Stochastic training of the factorization under per-step dropout
// masks: each step draws (x_t, y_t) and a Bernoulli(theta) mask b_t,
// then descends the sampled squared error of the masked predictor
// (1/theta) u diag(b_t) v^T x_t in u and v simultaneously.  Recorded
// objective values use the closed form at the iterate.  Throws
// Diverged when a recorded objective goes non-finite or exceeds 1e6
// times its initial value.
SgdResult dropout_sgd(const DenseMatrix& m, std::size_t r,
                      const SgdConfig& cfg);

// Weight-tied variant for symmetric PSD m: u plays both roles and the
// two chain-rule contributions of the sampled gradient sum into one
// update.
TiedSgdResult dropout_sgd_tied(const DenseMatrix& m, std::size_t r,
                               const SgdConfig& cfg);

}  // namespace droplin
