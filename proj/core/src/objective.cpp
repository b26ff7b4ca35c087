#include "droplin/objective.hpp"

#include <cmath>
#include <thread>

#include "droplin/errors.hpp"
#include "droplin/rng.hpp"

namespace droplin {

namespace {

constexpr double kSymmetryTol = 1e-10;

void check_factor_shapes(const DenseMatrix& m, const FactorPair& f) {
  if (f.u.cols() != f.v.cols())
    throw DimensionMismatch("factor column counts differ");
  if (f.u.rows() != m.rows() || f.v.rows() != m.cols())
    throw DimensionMismatch("factors incompatible with target matrix");
}

}  // namespace

DropoutConfig DropoutConfig::from_theta(double theta) {
  if (!(theta > 0.0) || theta > 1.0)
    throw Error("dropout rate must lie in (0, 1]");
  return {theta, (1.0 - theta) / theta};
}

DropoutConfig DropoutConfig::from_lambda(double lambda) {
  if (!(lambda >= 0.0)) throw Error("regularization strength must be >= 0");
  return {1.0 / (1.0 + lambda), lambda};
}

double loss(const DenseMatrix& m, const FactorPair& f) {
  check_factor_shapes(m, f);
  const DenseMatrix r = m - f.product();
  const double n = r.frobenius_norm();
  return n * n;
}

double regularizer(const FactorPair& f, double lambda) {
  if (f.u.cols() != f.v.cols())
    throw DimensionMismatch("factor column counts differ");
  double s = 0.0;
  for (std::size_t i = 0; i < f.rank(); ++i)
    s += f.u.column_sqnorm(i) * f.v.column_sqnorm(i);
  return lambda * s;
}

double objective_value(const DenseMatrix& m, const FactorPair& f,
                       double lambda) {
  return loss(m, f) + regularizer(f, lambda);
}

double tied_value(const DenseMatrix& m, const DenseMatrix& u, double lambda) {
  return objective_value(m, {u, u}, lambda);
}

namespace {

// One dropout sample: x and the mask come from the sample's own
// sub-stream, x first.
double sample_value(const DenseMatrix& m, const FactorPair& f, double theta,
                    std::uint64_t seed, std::uint64_t index) {
  SplitMix64 g = SplitMix64::substream(seed, stream_purpose::kMonteCarlo, index);
  const std::vector<double> x = g.gaussian_vector(m.cols());
  const std::size_t r = f.rank();
  std::vector<double> p = matvec_transposed(f.v, x);
  for (std::size_t i = 0; i < r; ++i)
    if (!g.next_bernoulli(theta)) p[i] = 0.0;
  const std::vector<double> y = matvec(m, x);
  const std::vector<double> yhat = matvec(f.u, p);
  double s = 0.0;
  const double inv_theta = 1.0 / theta;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = y[i] - inv_theta * yhat[i];
    s += d * d;
  }
  return s;
}

}  // namespace

McEstimate mc_objective(const DenseMatrix& m, const FactorPair& f,
                        const DropoutConfig& cfg, std::size_t n_samples,
                        std::uint64_t seed) {
  check_factor_shapes(m, f);
  if (n_samples < 2) throw Error("mc_objective needs at least 2 samples");

  constexpr std::size_t kChunk = 1 << 16;
  const std::size_t n_chunks = (n_samples + kChunk - 1) / kChunk;
  std::vector<double> part_sum(n_chunks, 0.0), part_sq(n_chunks, 0.0);

  auto run_chunk = [&](std::size_t ci) {
    const std::size_t lo = ci * kChunk;
    const std::size_t hi = std::min(lo + kChunk, n_samples);
    double s = 0.0, s2 = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const double v = sample_value(m, f, cfg.theta, seed, i);
      s += v;
      s2 += v * v;
    }
    part_sum[ci] = s;
    part_sq[ci] = s2;
  };

  const unsigned hw = std::thread::hardware_concurrency();
  const std::size_t n_threads =
      std::min<std::size_t>(n_chunks, hw ? hw : 1);
  if (n_threads < 2) {
    for (std::size_t ci = 0; ci < n_chunks; ++ci) run_chunk(ci);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t ci = t; ci < n_chunks; ci += n_threads) run_chunk(ci);
      });
    for (auto& th : pool) th.join();
  }

  // Partials combine in chunk order; the result does not depend on
  // how many threads ran.
  double sum = 0.0, sumsq = 0.0;
  for (std::size_t ci = 0; ci < n_chunks; ++ci) {
    sum += part_sum[ci];
    sumsq += part_sq[ci];
  }
  const double n = static_cast<double>(n_samples);
  const double mean = sum / n;
  double var = (sumsq - n * mean * mean) / (n - 1.0);
  if (var < 0.0) var = 0.0;
  return {mean, std::sqrt(var / n)};
}

double path_reg(const FactorPair& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.rank(); ++i)
    s += f.u.column_sqnorm(i) * f.v.column_sqnorm(i);
  return std::sqrt(s);
}

ImportanceStats importance_stats(const FactorPair& f) {
  if (f.u.cols() != f.v.cols())
    throw DimensionMismatch("factor column counts differ");
  const std::size_t r = f.rank();
  ImportanceStats out;
  out.scores.resize(r);
  for (std::size_t i = 0; i < r; ++i)
    out.scores[i] =
        std::sqrt(f.u.column_sqnorm(i)) * std::sqrt(f.v.column_sqnorm(i));
  double mean = 0.0;
  for (double a : out.scores) mean += a;
  mean /= static_cast<double>(r);
  double var = 0.0;
  for (double a : out.scores) var += (a - mean) * (a - mean);
  out.variance = var / static_cast<double>(r);
  return out;
}

DenseMatrix grad_tied(const DenseMatrix& m, const DenseMatrix& u,
                      double lambda) {
  if (m.rows() != m.cols()) throw DimensionMismatch("grad_tied needs square m");
  if (m.asymmetry() > kSymmetryTol * (1.0 + m.frobenius_norm()))
    throw NonSymmetric("grad_tied: m not symmetric");
  if (u.rows() != m.rows()) throw DimensionMismatch("grad_tied shapes");

  const DenseMatrix res = multiply_a_bt(u, u) - m;
  DenseMatrix g = res * u;
  for (std::size_t j = 0; j < u.cols(); ++j) {
    const double colsq = u.column_sqnorm(j);
    for (std::size_t i = 0; i < u.rows(); ++i)
      g(i, j) = 4.0 * (g(i, j) + lambda * colsq * u(i, j));
  }
  return g;
}

FactorPair grad_pair(const DenseMatrix& m, const FactorPair& f, double lambda) {
  check_factor_shapes(m, f);
  const DenseMatrix res = f.product() - m;
  DenseMatrix gu = res * f.v;
  DenseMatrix gv = multiply_at_b(res, f.u);
  for (std::size_t j = 0; j < f.rank(); ++j) {
    const double vsq = f.v.column_sqnorm(j);
    const double usq = f.u.column_sqnorm(j);
    for (std::size_t i = 0; i < gu.rows(); ++i)
      gu(i, j) = 2.0 * (gu(i, j) + lambda * vsq * f.u(i, j));
    for (std::size_t i = 0; i < gv.rows(); ++i)
      gv(i, j) = 2.0 * (gv(i, j) + lambda * usq * f.v(i, j));
  }
  return {std::move(gu), std::move(gv)};
}

}  // namespace droplin
